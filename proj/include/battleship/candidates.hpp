#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "battleship/eig.hpp"
#include "battleship/rng.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Candidate questions: scoring a batch of proposals against a hypothesis
// space, picking the best of k samples, and the post-hoc bucketing estimator
// that sweeps k over one large batch.
// ---------------------------------------------------------------------------

enum class ProposalKind : std::uint8_t { Grammar, Llm };
ProposalKind parse_proposal_kind(const std::string& text);
const char* proposal_kind_name(ProposalKind kind);

// One run of the selection loop: draw k candidates for a board, keep the
// EIG argmax. The seed drives both sampling and tie-breaking.
struct RunConfig {
  int k = 1;
  ProposalKind proposal = ProposalKind::Grammar;
  std::string board_id;
  std::uint64_t seed = 0;

  void validate() const;  // k >= 1
};

// A proposal before scoring. Grammar draws have no question text (question
// is nullopt, not empty); a failed translation has a null program and the
// failure message in `error`.
struct RawCandidate {
  std::optional<std::string> question;
  ExprPtr program;
  std::string program_text;  // source text; pretty-printed when left empty
  std::string error;
};

// A scored proposal. Validity means the program parsed, typechecks to a
// ground answer type, and evaluates on every hypothesis; eig_bits is present
// exactly for valid records. depth/size are present whenever a program tree
// exists, even if it later failed scoring; word_count counts whitespace
// tokens and is present exactly when the candidate has question text.
struct CandidateRecord {
  std::optional<std::string> question;
  std::string program_text;
  ExprPtr program;
  bool valid = false;
  bool informative = false;  // valid and eig_bits > 0
  std::optional<double> eig_bits;
  std::optional<int> depth;
  std::optional<int> size;
  std::optional<int> word_count;
  std::string error;       // why the record is invalid
  std::string provenance;  // proposal batch id
  std::size_t index = 0;   // position within that batch
};

int count_words(const std::string& text);

// Scores every raw candidate against the space. Failures of any kind become
// invalid records; the functions themselves only throw on an empty space.
// The OpenMP variant parallelizes across records and returns exactly what
// the serial pass returns.
std::vector<CandidateRecord> score_candidates(
    const std::vector<RawCandidate>& raw, const HypothesisSpace& space,
    const std::string& provenance);
std::vector<CandidateRecord> score_candidates_serial(
    const std::vector<RawCandidate>& raw, const HypothesisSpace& space,
    const std::string& provenance);

// Argmax of eig_bits over the valid records. `any_valid` false is the
// distinguished outcome for a batch with no valid record (index then stays
// 0 and means nothing). Exact EIG ties are broken uniformly at random.
struct Selection {
  bool any_valid = false;
  std::size_t index = 0;
};
Selection select_best(const std::vector<CandidateRecord>& records, Rng& rng);

// One bucket of the post-hoc estimator: its member records (as indices into
// the scored batch, in shuffled order) and the within-bucket winner. A
// bucket with no valid member contributes 0 bits and is flagged so other
// aggregations stay recomputable.
struct BucketOutcome {
  std::vector<std::size_t> members;
  std::size_t winner = 0;  // meaningful iff any_valid
  bool any_valid = false;
  double eig_bits = 0.0;
};

struct BucketEstimate {
  std::size_t k = 1;
  std::vector<BucketOutcome> buckets;  // floor(n / k) of them
  double mean_eig = 0.0;
  std::size_t invalid_buckets = 0;
};

// Shuffles the batch with the given rng, partitions the first
// floor(n/k) * k records into disjoint buckets of size k (the remainder is
// dropped), and reports each bucket's winner plus the mean winning EIG.
// The shuffle consumes the rng before any tie-breaking, so two calls with
// equal seeds and different k walk the same shuffled order. Throws
// InputError when k is 0 or exceeds the batch.
BucketEstimate bucketize_estimate(const std::vector<CandidateRecord>& records,
                                  std::size_t k, Rng& rng);

}  // namespace battleship
