// Renders every generation prompt cell (mode x board format) plus the
// translation prompt to text files, using the prepended-text role encoding.
// Useful for eyeballing template changes; the test suite pins these bytes.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "battleship/errors.hpp"
#include "battleship/hypotheses.hpp"
#include "battleship/prompts.hpp"

using namespace battleship;

namespace {

// The fixed translation examples used for the golden rendering.
const std::vector<QAExample> kTranslationGoldenExamples = {
    {"How many tiles is the red ship?", "(size Red)"},
    {"Do the red ship and the purple ship touch?", "(touch Red Purple)"},
    {"Is there a ship at 1F?", "(not (== (color 1F) Water))"},
    {"Is the blue ship horizontal?", "(== (orient Blue) H)"},
    {"How many ships are horizontal?",
     "(++ (map (lambda x0 (== (orient x0) H)) (set AllColors)))"},
    {"Do the blue ship and the purple ship touch?", "(touch Blue Purple)"},
    {"What color is the ship at 2-D?", "(color 2D)"},
    {"How many tiles is the purple ship?", "(size Purple)"},
    {"Is the red ship vertical?", "(== (orient Red) V)"},
    {"Is there a ship at 2-B?", "(not (== (color 2B) Water))"},
    {"What is the orientation of the blue ship?", "(orient Blue)"},
    {"Is the blue ship longer than the red ship?",
     "(> (size Blue) (size Red))"},
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << content << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Render the chat prompt templates to text files"};
  std::string boards_dir = "data/boards";
  std::string dataset = "data/human/synthetic_questions.jsonl";
  std::string target = "b04";
  std::string out_dir = ".";
  std::uint64_t seed = 17;
  app.add_option("--boards", boards_dir, "Directory of <board_id>.json files");
  app.add_option("--dataset", dataset, "Human question dataset (JSONL)");
  app.add_option("--target", target, "Target board id");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed for example selection");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto pool = load_shot_pool(dataset, boards_dir);
    const PartialBoard board =
        load_board_file(boards_dir + "/" + target + ".json");

    for (PromptMode mode : {PromptMode::ZeroShot, PromptMode::FewShot}) {
      for (BoardFormat format :
           {BoardFormat::Textual, BoardFormat::Grid, BoardFormat::NoBoard}) {
        const std::string cell = std::string(prompt_mode_name(mode)) + "_" +
                                 board_format_name(format);
        Rng rng(derive_seed(seed, cell));
        PromptBundle bundle =
            build_generation_prompt(board, target, mode, format, pool, rng);
        write_file(out_dir + "/" + cell + ".txt",
                   render_prepended(bundle.messages));
      }
    }

    PromptBundle translation = build_translation_prompt(
        "Are there more horizontal ships than vertical ships?",
        kTranslationGoldenExamples);
    write_file(out_dir + "/translation.txt",
               render_prepended(translation.messages));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
