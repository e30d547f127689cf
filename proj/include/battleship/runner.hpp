#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "battleship/candidates.hpp"
#include "battleship/prompts.hpp"
#include "battleship/provider.hpp"
#include "battleship/stats.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Experiment runner: proposes n candidate questions per board (grammar
// samples or provider questions plus translations), scores them, and writes
// a self-describing run directory:
//
//   <out>/manifest.json             run options, seeds, input hashes
//   <out>/records/<board>.jsonl     one scored candidate per line
//   <out>/buckets.jsonl             per-k bucket outcomes, shared shuffle
//
// Every random draw derives from the one root seed, so a fixed seed plus the
// replay provider reproduces a run byte for byte (pass `timestamp` to pin
// the one non-derived field). File schemas are documented in
// docs/file-formats.md.
// ---------------------------------------------------------------------------

struct RunOptions {
  ProposalKind proposal = ProposalKind::Grammar;
  std::vector<std::string> board_files;
  std::size_t n = 100;                // candidates per board
  std::vector<std::size_t> ks = {1};  // bucket sizes to evaluate
  std::uint64_t seed = 0;             // root seed
  std::string out_dir;
  std::string label;  // report row label; empty = proposal kind name

  // llm proposal only.
  PromptMode mode = PromptMode::FewShot;
  BoardFormat format = BoardFormat::Textual;
  std::string dataset_path;     // example questions (JSONL), for prompts
  std::string shot_boards_dir;  // boards referenced by the dataset; empty
                                // = directory of the first target board
  std::string provider = "replay";  // "replay" | "http"
  std::string fixtures_path;    // replay completions
  std::string cache_dir;        // optional response cache around http
  int translation_attempts = 1;
  ProviderSpec provider_spec;

  // Manifest bookkeeping.
  std::string command_line;  // informational echo of the invocation
  std::string timestamp;     // ISO-8601 UTC; empty = now

  void validate() const;  // throws InputError on contradictions
};

struct BoardRunSummary {
  std::string board_id;
  std::size_t n_records = 0;
  std::size_t n_valid = 0;
  std::optional<std::size_t> best_index;  // select_best winner, if any valid
};

struct RunResult {
  std::filesystem::path dir;
  std::vector<BoardRunSummary> boards;
  // A provider failure stops the run but keeps every completed board's
  // records on disk and writes the manifest with the abort reason.
  bool aborted = false;
  std::string abort_reason;
};

// Executes the run. `provider_override` substitutes the provider regardless
// of options (tests inject counters/mocks); otherwise one is built from the
// options. Throws InputError for unusable options; provider failures are
// reported via RunResult::aborted instead so partial output survives.
RunResult run_experiment(const RunOptions& opts,
                         std::shared_ptr<ChatProvider> provider_override = {});

// One scored-candidate line of records/<board>.jsonl, read back. The
// answer type is serialized at write time so reports do not need to
// re-parse programs (records alone do not carry the game config).
struct RecordRow {
  CandidateRecord record;             // program pointer left null
  std::optional<AnswerType> answer_type;  // present for valid records
};

// One line of buckets.jsonl: the outcome of one bucket at one k.
struct BucketRow {
  std::string board_id;
  std::size_t k = 0;
  std::size_t bucket = 0;  // index within this (board, k)
  std::size_t winner = 0;  // record index of the bucket argmax
  bool any_valid = false;
  double eig_bits = 0.0;
};

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<CandidateRecord>& records);
std::vector<RecordRow> load_records_jsonl(const std::filesystem::path& path);
std::vector<BucketRow> load_buckets_jsonl(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report generation: aggregates one or more run directories into CSV/TSV
// tables (summary rows, EIG-vs-k curves with bootstrap CIs, answer-type
// proportions, pairwise Welch tests, and Q-Q points against a human
// dataset when one is supplied).
// ---------------------------------------------------------------------------

struct ReportOptions {
  std::vector<std::string> run_dirs;
  std::string out_dir;
  std::string human_dataset;  // optional JSONL {board_id, question, program}
  std::string boards_dir;     // boards for scoring the human rows
  std::uint64_t seed = 0;     // bootstrap seed
  std::size_t n_boot = 1000;
  double level = 0.95;

  void validate() const;
};

void write_report(const ReportOptions& opts);

// "2026-08-18T07:00:00Z"-style UTC stamp used in manifests.
std::string utc_timestamp_now();

// Streams a file and returns its SHA-256 hex digest (manifest input hashes).
std::string sha256_file(const std::string& path);

}  // namespace battleship
