// Command-line entry point: board tools, single-program EIG reports,
// experiment runs, and report generation. Exit codes: 0 success, 1 usage
// error, 2 invalid input (bad files, programs, options), 3 provider failure.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "battleship/candidates.hpp"
#include "battleship/eig.hpp"
#include "battleship/errors.hpp"
#include "battleship/hypotheses.hpp"
#include "battleship/runner.hpp"

namespace {

using namespace battleship;

namespace fs = std::filesystem;

constexpr int kExitInput = 2;
constexpr int kExitProvider = 3;

int cmd_board_render(const std::string& board_file, const std::string& format) {
  const PartialBoard board = load_board_file(board_file);
  if (format == "grid") {
    std::cout << render_grid(board);
  } else if (format == "textual") {
    std::cout << render_textual(board);
  } else {
    throw InputError("format must be 'grid' or 'textual'; got '" + format +
                     "'");
  }
  return 0;
}

int cmd_board_validate(const std::string& board_file) {
  const PartialBoard board = load_board_file(board_file);
  if (!has_consistent_completion(board)) {
    std::cerr << board_file << ": no ship placement is consistent with the "
              << "revealed tiles\n";
    return kExitInput;
  }
  std::cout << board_file << ": ok\n";
  return 0;
}

int cmd_board_hypotheses(const std::string& board_file) {
  const PartialBoard board = load_board_file(board_file);
  std::cout << enumerate_hypotheses(board).size() << "\n";
  return 0;
}

int cmd_eig(const std::string& board_file, const std::string& program_text,
            bool as_json) {
  const PartialBoard board = load_board_file(board_file);
  const HypothesisSpace space = enumerate_hypotheses(board);
  const ExprPtr program = parse_program(program_text, board.config);
  (void)top_level_type(*program);  // reject set-valued questions up front
  const AnswerDistribution dist = answer_distribution(*program, space);
  const double bits = eig(*program, space);

  if (as_json) {
    nlohmann::json j;
    j["board"] = board_file;
    j["hypotheses"] = space.size();
    j["program"] = pretty_print(*program);
    j["eig_bits"] = bits;
    nlohmann::json answers = nlohmann::json::array();
    for (const AnswerEntry& entry : dist.entries) {
      answers.push_back({{"value", value_to_string(entry.value, *board.config)},
                         {"probability", entry.probability}});
    }
    j["answers"] = std::move(answers);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "board: " << board_file << "\n"
              << "hypotheses: " << space.size() << "\n"
              << "program: " << pretty_print(*program) << "\n"
              << "eig_bits: " << bits << "\n"
              << "answers:\n";
    for (const AnswerEntry& entry : dist.entries) {
      std::cout << "  " << value_to_string(entry.value, *board.config)
                << "  p=" << entry.probability << "\n";
    }
  }
  return 0;
}

// Sorted .json files of a directory, appended to any explicitly named boards.
std::vector<std::string> collect_boards(std::vector<std::string> files,
                                        const std::string& boards_dir) {
  if (!boards_dir.empty()) {
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(boards_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        found.push_back(entry.path().string());
    std::sort(found.begin(), found.end());
    files.insert(files.end(), found.begin(), found.end());
  }
  return files;
}

std::string join_args(int argc, char** argv) {
  std::string joined;
  for (int i = 0; i < argc; ++i) {
    if (i) joined += ' ';
    joined += argv[i];
  }
  return joined;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Battleship question-asking toolkit"};
  app.require_subcommand(1);

  // ---- board ----
  auto* board = app.add_subcommand("board", "Board file tools");
  board->require_subcommand(1);
  std::string board_file;
  std::string render_format = "grid";
  auto* render = board->add_subcommand("render", "Print a board rendering");
  render->add_option("board", board_file, "board JSON file")->required();
  render->add_option("--format", render_format, "grid or textual")
      ->capture_default_str();
  auto* validate =
      board->add_subcommand("validate", "Check a board for consistency");
  validate->add_option("board", board_file, "board JSON file")->required();
  auto* hypotheses = board->add_subcommand(
      "hypotheses", "Count complete boards consistent with the revealed tiles");
  hypotheses->add_option("board", board_file, "board JSON file")->required();

  // ---- eig ----
  auto* eig_cmd = app.add_subcommand(
      "eig", "Score one question program against a board");
  std::string program_text;
  bool eig_json = false;
  eig_cmd->add_option("board", board_file, "board JSON file")->required();
  eig_cmd->add_option("program", program_text, "question program text")
      ->required();
  eig_cmd->add_flag("--json", eig_json, "machine-readable output");

  // ---- run ----
  auto* run_cmd = app.add_subcommand(
      "run", "Propose, translate, and score candidate questions");
  RunOptions run_opts;
  std::string proposal = "grammar";
  std::string run_mode = "few_shot";
  std::string run_format = "textual";
  std::string role_encoding = "metadata";
  std::string run_boards_dir;
  double top_p = -1.0;
  int max_tokens = -1;
  run_cmd->add_option("--proposal", proposal, "grammar or llm")
      ->capture_default_str();
  run_cmd->add_option("--board", run_opts.board_files,
                      "target board JSON file (repeatable)");
  run_cmd->add_option("--boards", run_boards_dir,
                      "directory of target boards (*.json)");
  run_cmd->add_option("--n", run_opts.n, "candidates per board")
      ->capture_default_str();
  run_cmd->add_option("--k", run_opts.ks, "bucket sizes (repeatable)")
      ->delimiter(',')
      ->capture_default_str();
  run_cmd->add_option("--seed", run_opts.seed, "root seed")
      ->capture_default_str();
  run_cmd->add_option("--out", run_opts.out_dir, "run output directory")
      ->required();
  run_cmd->add_option("--label", run_opts.label,
                      "report row label (default: proposal kind)");
  run_cmd->add_option("--timestamp", run_opts.timestamp,
                      "manifest timestamp override (for byte-identical runs)");
  run_cmd->add_option("--mode", run_mode, "zero_shot or few_shot")
      ->capture_default_str();
  run_cmd->add_option("--format", run_format, "textual, grid, or no_board")
      ->capture_default_str();
  run_cmd->add_option("--dataset", run_opts.dataset_path,
                      "example questions JSONL (llm proposals)");
  run_cmd->add_option("--shot-boards", run_opts.shot_boards_dir,
                      "boards referenced by the dataset (default: directory "
                      "of the first target board)");
  run_cmd->add_option("--provider", run_opts.provider, "replay or http")
      ->capture_default_str();
  run_cmd->add_option("--fixtures", run_opts.fixtures_path,
                      "replay fixtures JSONL");
  run_cmd->add_option("--cache", run_opts.cache_dir,
                      "response cache directory (http provider)");
  run_cmd->add_option("--attempts", run_opts.translation_attempts,
                      "translation attempts per question")
      ->capture_default_str();
  run_cmd->add_option("--endpoint", run_opts.provider_spec.endpoint,
                      "chat completion base URL");
  run_cmd->add_option("--api-path", run_opts.provider_spec.api_path,
                      "endpoint path")
      ->capture_default_str();
  run_cmd->add_option("--model", run_opts.provider_spec.model, "model name");
  run_cmd->add_option("--temperature", run_opts.provider_spec.temperature,
                      "sampling temperature")
      ->capture_default_str();
  run_cmd->add_option("--top-p", top_p, "nucleus sampling cutoff");
  run_cmd->add_option("--max-tokens", max_tokens, "completion length cap");
  run_cmd->add_option("--role-encoding", role_encoding,
                      "metadata or prepended")
      ->capture_default_str();
  run_cmd->add_option("--api-key-env", run_opts.provider_spec.api_key_env,
                      "environment variable holding the bearer token")
      ->capture_default_str();
  run_cmd->add_option("--max-retries", run_opts.provider_spec.max_retries,
                      "transient-failure retries")
      ->capture_default_str();
  run_cmd->add_option("--backoff", run_opts.provider_spec.backoff_seconds,
                      "base retry backoff in seconds")
      ->capture_default_str();

  // ---- report ----
  auto* report_cmd = app.add_subcommand(
      "report", "Aggregate run directories into CSV/TSV tables");
  ReportOptions report_opts;
  report_cmd->add_option("runs", report_opts.run_dirs, "run directories")
      ->required();
  report_cmd->add_option("--out", report_opts.out_dir, "report directory")
      ->required();
  report_cmd->add_option("--human", report_opts.human_dataset,
                         "human dataset JSONL to score and compare");
  report_cmd->add_option("--boards", report_opts.boards_dir,
                         "boards referenced by the human dataset");
  report_cmd->add_option("--seed", report_opts.seed, "bootstrap seed")
      ->capture_default_str();
  report_cmd->add_option("--n-boot", report_opts.n_boot,
                         "bootstrap replicates")
      ->capture_default_str();
  report_cmd->add_option("--level", report_opts.level, "confidence level")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (render->parsed()) return cmd_board_render(board_file, render_format);
    if (validate->parsed()) return cmd_board_validate(board_file);
    if (hypotheses->parsed()) return cmd_board_hypotheses(board_file);
    if (eig_cmd->parsed()) return cmd_eig(board_file, program_text, eig_json);

    if (run_cmd->parsed()) {
      run_opts.proposal = parse_proposal_kind(proposal);
      run_opts.mode = parse_prompt_mode(run_mode);
      run_opts.format = parse_board_format(run_format);
      run_opts.provider_spec.role_encoding = parse_role_encoding(role_encoding);
      if (top_p >= 0.0) run_opts.provider_spec.top_p = top_p;
      if (max_tokens >= 0) run_opts.provider_spec.max_tokens = max_tokens;
      run_opts.board_files =
          collect_boards(std::move(run_opts.board_files), run_boards_dir);
      run_opts.command_line = join_args(argc, argv);

      const RunResult result = run_experiment(run_opts);
      for (const BoardRunSummary& s : result.boards) {
        std::cout << s.board_id << ": " << s.n_valid << "/" << s.n_records
                  << " valid";
        if (s.best_index) std::cout << ", best record " << *s.best_index;
        std::cout << "\n";
      }
      if (result.aborted) {
        std::cerr << "run aborted (partial results in " << result.dir.string()
                  << "): " << result.abort_reason << "\n";
        return kExitProvider;
      }
      std::cout << "run written to " << result.dir.string() << "\n";
      return 0;
    }

    if (report_cmd->parsed()) {
      write_report(report_opts);
      std::cout << "report written to " << report_opts.out_dir << "\n";
      return 0;
    }
  } catch (const ProviderError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return 0;
}
