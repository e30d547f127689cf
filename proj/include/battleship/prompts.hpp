#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "battleship/board.hpp"
#include "battleship/dsl.hpp"
#include "battleship/rng.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Chat prompt construction for the two language-model roles: generating
// candidate questions for a board, and translating a question into a
// program. Templates are assembled from the game config so the default
// config reproduces the documented prompts byte for byte (goldens under
// tests/golden/prompts/).
// ---------------------------------------------------------------------------

enum class Role : std::uint8_t { System, User, Assistant };
const char* role_name(Role r);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

enum class PromptMode : std::uint8_t { ZeroShot, FewShot };
enum class BoardFormat : std::uint8_t { Textual, Grid, NoBoard };

// CLI spellings: "zero_shot"/"few_shot", "textual"/"grid"/"no_board".
// "visual" is recognized and rejected with a message (images are out of
// scope); anything else is an InputError.
PromptMode parse_prompt_mode(const std::string& text);
BoardFormat parse_board_format(const std::string& text);
const char* prompt_mode_name(PromptMode mode);
const char* board_format_name(BoardFormat format);

// One example board and the human questions collected for it.
struct ShotBoard {
  std::string board_id;
  PartialBoard board;
  std::vector<std::string> questions;
};

// One (question, program) translation example.
struct QAExample {
  std::string question;
  std::string program;
};

// A row of the human dataset: a question about one board, with its program
// annotation (may be empty for rows only used as generation shots).
struct HumanExample {
  std::string board_id;
  std::string question;
  std::string program;
};

constexpr int kShotBoards = 3;
constexpr int kShotQuestionsPerBoard = 10;
constexpr int kTranslationExamples = 12;

struct PromptBundle {
  std::vector<ChatMessage> messages;
  std::string purpose;  // "generation" or "translation"
  PromptMode mode = PromptMode::ZeroShot;
  BoardFormat board_format = BoardFormat::Textual;
  std::string target_board_id;
  std::optional<PartialBoard> target_board;  // absent in no_board prompts
  std::vector<ShotBoard> shots;              // as sampled, in prompt order
};

// Template pieces. The board-describing text is derived from the config
// (ship names, lengths, grid size), so custom configs stay consistent.
std::string generation_system_message();
std::string battleship_instructions(const GameConfig& config);
std::string generation_instructions(const GameConfig& config);
std::string board_format_message(BoardFormat format, const GameConfig& config);
std::string examples_header_message();
std::string transition_message();
std::string translation_system_message(const GameConfig& config);
std::string render_board_for_prompt(const PartialBoard& board,
                                    BoardFormat format);

// Question-generation prompt. Few-shot prompts sample 3 example boards and
// 10 questions per board from the pool, all without replacement and never
// from the target board; the rng drives that selection, so a fixed seed
// yields a byte-identical bundle. Boards with fewer than 10 questions are
// not eligible. Throws InputError when the pool cannot supply 3 boards.
PromptBundle build_generation_prompt(const PartialBoard& target,
                                     const std::string& target_board_id,
                                     PromptMode mode, BoardFormat format,
                                     const std::vector<ShotBoard>& shot_pool,
                                     Rng& rng);

// Translation prompt: system instructions, then the 12 example pairs as
// alternating user/assistant turns, then the question to translate. Throws
// InputError unless exactly 12 examples are given, each with a program that
// parses under the config.
PromptBundle build_translation_prompt(
    const std::string& question, const std::vector<QAExample>& examples,
    const ConfigPtr& config = default_config());

// Draws the 12 translation examples from the pool, excluding rows from the
// target board.
std::vector<QAExample> sample_translation_examples(
    const std::vector<HumanExample>& pool, const std::string& target_board_id,
    Rng& rng, const ConfigPtr& config = default_config());

// Role labels folded into plain text, for providers without role metadata:
// "System: ..."/"User: ..."/"Assistant: ..." blocks separated by blank
// lines, ending with a bare "Assistant:" cue for the completion.
std::string render_prepended(const std::vector<ChatMessage>& messages);

// Human dataset rows as JSONL: {"board_id", "question", "program"?}.
std::vector<HumanExample> load_human_dataset(const std::string& path);

// Groups dataset rows by board (in first-appearance order) and loads each
// board from <boards_dir>/<board_id>.json.
std::vector<ShotBoard> load_shot_pool(const std::string& dataset_path,
                                      const std::string& boards_dir);

}  // namespace battleship
