#include "battleship/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "battleship/errors.hpp"
#include "battleship/hypotheses.hpp"

namespace battleship {

namespace {

// Small counts are written out ("three ships"); anything larger falls back
// to digits.
std::string number_word(int n) {
  static const char* words[] = {"zero", "one", "two",   "three", "four",
                                "five", "six", "seven", "eight", "nine",
                                "ten",  "eleven", "twelve"};
  if (n >= 0 && n <= 12) return words[n];
  return std::to_string(n);
}

std::string oxford_join(const std::vector<std::string>& items,
                        const std::string& conj) {
  if (items.empty()) return "";
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " " + conj + " " + items[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  out += conj + " " + items.back();
  return out;
}

std::string column_letters(int cols) {
  std::vector<std::string> letters;
  for (int c = 0; c < cols; ++c)
    letters.push_back(std::string(1, static_cast<char>('A' + c)));
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ", ";
    out += letters[i];
  }
  return out;
}

std::string strip_trailing_newline(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

const char* role_name(Role r) {
  switch (r) {
    case Role::System:
      return "System";
    case Role::User:
      return "User";
    case Role::Assistant:
      return "Assistant";
  }
  return "User";
}

PromptMode parse_prompt_mode(const std::string& text) {
  if (text == "zero_shot") return PromptMode::ZeroShot;
  if (text == "few_shot") return PromptMode::FewShot;
  throw InputError("unknown prompt mode: " + text +
                   " (expected zero_shot or few_shot)");
}

BoardFormat parse_board_format(const std::string& text) {
  if (text == "textual") return BoardFormat::Textual;
  if (text == "grid") return BoardFormat::Grid;
  if (text == "no_board") return BoardFormat::NoBoard;
  if (text == "visual")
    throw InputError(
        "the visual board format (image prompts) is not supported; choose "
        "textual, grid, or no_board");
  throw InputError("unknown board format: " + text +
                   " (expected textual, grid, or no_board)");
}

const char* prompt_mode_name(PromptMode mode) {
  return mode == PromptMode::ZeroShot ? "zero_shot" : "few_shot";
}

const char* board_format_name(BoardFormat format) {
  switch (format) {
    case BoardFormat::Textual:
      return "textual";
    case BoardFormat::Grid:
      return "grid";
    case BoardFormat::NoBoard:
      return "no_board";
  }
  return "textual";
}

std::string generation_system_message() {
  return "You are a game-playing agent. Read the game instructions and "
         "examples carefully. Respond with a single question that can be "
         "answered with one word. Do not include any other explanation or "
         "prose.";
}

std::string battleship_instructions(const GameConfig& config) {
  std::vector<std::string> names;
  for (const auto& ship : config.ships) names.push_back(ship.id);

  std::vector<int> lengths;
  for (const auto& ship : config.ships)
    for (int len : ship.lengths)
      if (std::find(lengths.begin(), lengths.end(), len) == lengths.end())
        lengths.push_back(len);
  std::sort(lengths.begin(), lengths.end());
  std::vector<std::string> length_words;
  for (int len : lengths) length_words.push_back(std::to_string(len));

  std::string rows;
  for (int r = 1; r <= config.rows; ++r) {
    if (r > 1) rows += ", ";
    rows += std::to_string(r);
  }

  const int example_row = config.rows >= 2 ? 2 : 1;
  const int example_col = config.cols >= 3 ? 3 : 1;
  const char example_letter = static_cast<char>('A' + example_col - 1);

  std::ostringstream s;
  s << "You are playing the board game Battleship. ";
  if (names.size() == 1)
    s << "There is one ship on the board: " << names[0] << ".";
  else
    s << "There are " << number_word(static_cast<int>(names.size()))
      << " ships on the board: " << oxford_join(names, "and") << ".";
  s << " Ships are oriented either horizontally or vertically and can be "
    << oxford_join(length_words, "or") << " tiles in length.";
  s << " The board is a " << config.rows << "x" << config.cols
    << " grid, with numbered rows " << rows << " and lettered columns "
    << column_letters(config.cols) << ".";
  s << " Coordinates are specified as a row, column pair. For example, "
    << example_row << "-" << example_letter << " is the tile in row "
    << example_row << ", column " << example_letter << ".";
  return s.str();
}

std::string generation_instructions(const GameConfig& config) {
  return battleship_instructions(config) +
         "\n\n"
         "You will be given a partially-revealed game board. Your task is to "
         "ask a single question that will help you gain information about "
         "the position of the remaining hidden ships on the board. You can "
         "ask any question, but it must be answerable with a single word "
         "answer.";
}

std::string board_format_message(BoardFormat format,
                                 const GameConfig& config) {
  switch (format) {
    case BoardFormat::Textual:
      return "The board is represented as a textual description.";
    case BoardFormat::Grid: {
      std::string msg =
          "The board is represented as a grid with the following symbols:"
          "\n\nH: Hidden\nW: Water";
      for (const auto& ship : config.ships) {
        msg += '\n';
        msg += ship.symbol();
        msg += ": " + ship.id + " ship";
      }
      return msg;
    }
    case BoardFormat::NoBoard:
      throw InputError("the no_board format has no board message");
  }
  throw InputError("bad board format");
}

std::string examples_header_message() {
  return "Here are some examples of questions from other agents about "
         "different boards.";
}

std::string transition_message() {
  return "Now, it's your turn. Here is your board:";
}

std::string translation_system_message(const GameConfig& config) {
  return battleship_instructions(config) +
         "\n\n"
         "Your task is to translate each of the user's questions into a "
         "query program.";
}

std::string render_board_for_prompt(const PartialBoard& board,
                                    BoardFormat format) {
  switch (format) {
    case BoardFormat::Textual:
      return strip_trailing_newline(render_textual(board));
    case BoardFormat::Grid:
      return strip_trailing_newline(render_grid(board));
    case BoardFormat::NoBoard:
      throw InputError("the no_board format does not render boards");
  }
  throw InputError("bad board format");
}

PromptBundle build_generation_prompt(const PartialBoard& target,
                                     const std::string& target_board_id,
                                     PromptMode mode, BoardFormat format,
                                     const std::vector<ShotBoard>& shot_pool,
                                     Rng& rng) {
  if (!target.config) throw InputError("target board has no config");
  const GameConfig& config = *target.config;

  PromptBundle bundle;
  bundle.purpose = "generation";
  bundle.mode = mode;
  bundle.board_format = format;
  bundle.target_board_id = target_board_id;

  auto& msgs = bundle.messages;
  msgs.push_back({Role::System, generation_system_message()});
  msgs.push_back({Role::User, generation_instructions(config)});
  if (format != BoardFormat::NoBoard)
    msgs.push_back({Role::User, board_format_message(format, config)});

  if (mode == PromptMode::FewShot) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < shot_pool.size(); ++i) {
      const ShotBoard& shot = shot_pool[i];
      if (shot.board_id == target_board_id) continue;  // leave-one-out
      if (static_cast<int>(shot.questions.size()) < kShotQuestionsPerBoard)
        continue;
      eligible.push_back(i);
    }
    if (static_cast<int>(eligible.size()) < kShotBoards)
      throw InputError(
          "shot pool too small: need " + std::to_string(kShotBoards) +
          " example boards with " + std::to_string(kShotQuestionsPerBoard) +
          " questions each after excluding " + target_board_id + ", have " +
          std::to_string(eligible.size()));
    shuffle(eligible, rng);
    eligible.resize(kShotBoards);

    msgs.push_back({Role::User, examples_header_message()});
    for (std::size_t idx : eligible) {
      const ShotBoard& shot = shot_pool[idx];
      ShotBoard chosen;
      chosen.board_id = shot.board_id;
      chosen.board = shot.board;
      if (format != BoardFormat::NoBoard)
        msgs.push_back(
            {Role::User, render_board_for_prompt(shot.board, format)});
      std::vector<std::size_t> qs(shot.questions.size());
      for (std::size_t q = 0; q < qs.size(); ++q) qs[q] = q;
      shuffle(qs, rng);
      qs.resize(kShotQuestionsPerBoard);
      for (std::size_t q : qs) {
        msgs.push_back({Role::Assistant, shot.questions[q]});
        chosen.questions.push_back(shot.questions[q]);
      }
      bundle.shots.push_back(std::move(chosen));
    }
  }

  if (format != BoardFormat::NoBoard) {
    msgs.push_back({Role::User, transition_message()});
    msgs.push_back({Role::User, render_board_for_prompt(target, format)});
    bundle.target_board = target;
  }
  return bundle;
}

PromptBundle build_translation_prompt(const std::string& question,
                                      const std::vector<QAExample>& examples,
                                      const ConfigPtr& config) {
  if (static_cast<int>(examples.size()) != kTranslationExamples)
    throw InputError("translation prompt needs exactly " +
                     std::to_string(kTranslationExamples) + " examples, got " +
                     std::to_string(examples.size()));
  if (trimmed(question).empty())
    throw InputError("cannot translate an empty question");

  PromptBundle bundle;
  bundle.purpose = "translation";
  bundle.messages.push_back({Role::System,
                             translation_system_message(*config)});
  for (const auto& ex : examples) {
    if (trimmed(ex.question).empty())
      throw InputError("translation example with empty question");
    try {
      (void)parse_program(ex.program, config);
    } catch (const ParseError& e) {
      throw InputError("translation example program does not parse: " +
                       ex.program + " (" + e.what() + ")");
    }
    bundle.messages.push_back({Role::User, ex.question});
    bundle.messages.push_back({Role::Assistant, ex.program});
  }
  bundle.messages.push_back({Role::User, question});
  return bundle;
}

std::vector<QAExample> sample_translation_examples(
    const std::vector<HumanExample>& pool, const std::string& target_board_id,
    Rng& rng, const ConfigPtr& config) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].board_id == target_board_id) continue;
    if (pool[i].program.empty()) continue;
    eligible.push_back(i);
  }
  if (static_cast<int>(eligible.size()) < kTranslationExamples)
    throw InputError("human dataset has only " +
                     std::to_string(eligible.size()) +
                     " usable rows outside board " + target_board_id +
                     "; need " + std::to_string(kTranslationExamples));
  shuffle(eligible, rng);
  eligible.resize(kTranslationExamples);
  std::vector<QAExample> out;
  for (std::size_t i : eligible) {
    try {
      (void)parse_program(pool[i].program, config);
    } catch (const ParseError& e) {
      throw InputError("dataset program for board " + pool[i].board_id +
                       " does not parse: " + pool[i].program + " (" +
                       e.what() + ")");
    }
    out.push_back({pool[i].question, pool[i].program});
  }
  return out;
}

std::string render_prepended(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n\n";
    out += role_name(m.role);
    out += ": ";
    out += m.content;
  }
  out += "\n\nAssistant:";
  return out;
}

std::vector<HumanExample> load_human_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset: " + path);
  std::vector<HumanExample> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    HumanExample row;
    if (!j.contains("board_id") || !j.contains("question"))
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": rows need board_id and question fields");
    row.board_id = j.at("board_id").get<std::string>();
    row.question = j.at("question").get<std::string>();
    if (j.contains("program")) row.program = j.at("program").get<std::string>();
    if (row.board_id.empty() || trimmed(row.question).empty())
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": empty board_id or question");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ShotBoard> load_shot_pool(const std::string& dataset_path,
                                      const std::string& boards_dir) {
  const auto rows = load_human_dataset(dataset_path);
  std::vector<ShotBoard> pool;
  std::map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    auto it = index.find(row.board_id);
    if (it == index.end()) {
      ShotBoard shot;
      shot.board_id = row.board_id;
      shot.board = load_board_file(boards_dir + "/" + row.board_id + ".json");
      index.emplace(row.board_id, pool.size());
      pool.push_back(std::move(shot));
      it = index.find(row.board_id);
    }
    pool[it->second].questions.push_back(row.question);
  }
  return pool;
}

}  // namespace battleship
