#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "battleship/errors.hpp"

namespace battleship {

// Tile codes stored in board cells. 0 is water, 1..n_ships are ship tiles in
// GameConfig declaration order, kHiddenCell marks an unrevealed cell of a
// partial board. Full boards never contain kHiddenCell.
using cell_t = std::int8_t;
inline constexpr cell_t kWaterCell = 0;
inline constexpr cell_t kHiddenCell = -1;

enum class Orientation : std::uint8_t { H = 0, V = 1 };

inline char orientation_letter(Orientation o) {
  return o == Orientation::H ? 'H' : 'V';
}

// 1-based board coordinate; row 1 is the top row, column 1 is 'A'.
struct Coord {
  int row = 0;
  int col = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  // Row-major order; this is the canonical ordering used everywhere a set of
  // locations needs a deterministic layout.
  friend auto operator<=>(const Coord&, const Coord&) = default;

  std::string label() const {
    return std::to_string(row) + static_cast<char>('A' + col - 1);
  }
};

struct ShipSpec {
  std::string id;            // e.g. "Red"; first letter doubles as grid symbol
  std::vector<int> lengths;  // admissible lengths, ascending
  char symbol() const { return id.at(0); }
};

struct GameConfig {
  int rows = 6;
  int cols = 6;
  std::vector<ShipSpec> ships;
  // When set, every hypothesis must give the ships pairwise distinct lengths.
  bool distinct_lengths = false;

  int cell_count() const { return rows * cols; }
  int index(Coord c) const { return (c.row - 1) * cols + (c.col - 1); }
  Coord coord(int idx) const { return {idx / cols + 1, idx % cols + 1}; }
  bool in_bounds(Coord c) const {
    return c.row >= 1 && c.row <= rows && c.col >= 1 && c.col <= cols;
  }

  // Ship id -> cell code (1-based); "Water" -> kWaterCell; nullopt otherwise.
  std::optional<cell_t> color_code(const std::string& name) const;
  // Inverse of color_code for display. code must be a valid non-hidden cell.
  const std::string& color_name(cell_t code) const;

  // Throws BoardError on structural problems: empty ship list, duplicate ids
  // or symbols, symbols colliding with 'H'/'W', lengths out of range.
  void validate() const;
};

using ConfigPtr = std::shared_ptr<const GameConfig>;

// The standard setup: 6x6, ships Red/Blue/Purple, each of length 2..4.
ConfigPtr default_config();
ConfigPtr make_config(GameConfig cfg);  // validates, then freezes

struct ShipPlacement {
  std::uint8_t row = 0;  // topmost/leftmost tile, 1-based
  std::uint8_t col = 0;
  Orientation orient = Orientation::H;
  std::uint8_t length = 0;

  Coord origin() const { return {row, col}; }
  Coord tile(int k) const {
    return orient == Orientation::H ? Coord{row, col + k} : Coord{row + k, col};
  }
  friend bool operator==(const ShipPlacement&, const ShipPlacement&) = default;
};

// Partially revealed board: what the question asker can see.
struct PartialBoard {
  ConfigPtr config;
  std::vector<cell_t> cells;  // row-major; kHiddenCell or a tile code

  cell_t at(Coord c) const { return cells[config->index(c)]; }
  int revealed_count() const;
};

// One complete hypothesis: every cell resolved, one placement per ship.
struct FullBoard {
  ConfigPtr config;
  std::vector<cell_t> cells;
  std::vector<ShipPlacement> placements;  // index-aligned with config->ships

  cell_t at(Coord c) const { return cells[config->index(c)]; }
};

// Builds the cell grid implied by a placement tuple. Placements must be in
// bounds and non-overlapping (checked).
FullBoard materialize(const ConfigPtr& config,
                      const std::vector<ShipPlacement>& placements);

// True iff `full` agrees with every revealed cell of `partial`.
bool is_consistent(const FullBoard& full, const PartialBoard& partial);

// Fixed-width ASCII grid:
//   two spaces, then column letters separated by single spaces;
//   one line per row: row digit, space, cell symbols separated by spaces.
// Every line newline-terminated, no trailing spaces. Throws BoardError for
// configs with more than 9 rows or 26 columns. Works for both partial and
// full boards (templated on the cell source via overloads).
std::string render_grid(const PartialBoard& board);
std::string render_grid(const FullBoard& board);

// One sentence per revealed tile in row-major order, e.g.
//   "2-C is a water tile."
//   "3-C is a purple ship tile."
// Hidden tiles are omitted. Returns "" for a fully hidden board.
std::string render_textual(const PartialBoard& board);

// Board file format: JSON object with rows, cols, ships, grid (array of
// strings over symbols H/W plus one letter per ship). parse_board validates
// shape; it does NOT check that a consistent completion exists (that is the
// loader's job, see load_board in hypotheses.hpp).
PartialBoard parse_board(const std::string& json_text);
std::string board_to_json(const PartialBoard& board);

}  // namespace battleship
