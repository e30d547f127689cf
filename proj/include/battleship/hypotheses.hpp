#pragma once

#include <cstddef>
#include <vector>

#include "battleship/board.hpp"

namespace battleship {

// The space of complete boards consistent with a partial observation, with a
// probability weight per board. Boards are stored compactly as placement
// tuples (one ShipPlacement per configured ship); cell grids are materialized
// on demand. An empty weight vector means the uniform distribution, which is
// also what enumeration and posterior updates of uniform spaces produce; this
// keeps the common path exact (integer counts) and cheap.
class HypothesisSpace {
 public:
  HypothesisSpace() = default;
  HypothesisSpace(ConfigPtr config, std::vector<ShipPlacement> flat_placements,
                  std::vector<double> weights = {});

  std::size_t size() const { return n_boards_; }
  bool empty() const { return n_boards_ == 0; }
  const ConfigPtr& config() const { return config_; }
  std::size_t ships_per_board() const { return n_ships_; }

  bool uniform() const { return weights_.empty(); }
  double weight(std::size_t i) const {
    return weights_.empty() ? 1.0 / static_cast<double>(n_boards_) : weights_[i];
  }
  const std::vector<double>& explicit_weights() const { return weights_; }

  // Placement tuple of board i, length ships_per_board().
  const ShipPlacement* placements(std::size_t i) const {
    return flat_.data() + i * n_ships_;
  }
  // Materializes the full cell grid; intended for small-scale use. Hot loops
  // should go through BoardScratch below instead.
  FullBoard board(std::size_t i) const;

  // Keeps boards at the given (sorted, unique) indices with the given weights.
  HypothesisSpace subset(const std::vector<std::size_t>& keep,
                         std::vector<double> new_weights) const;

 private:
  ConfigPtr config_;
  std::vector<ShipPlacement> flat_;
  std::vector<double> weights_;
  std::size_t n_ships_ = 0;
  std::size_t n_boards_ = 0;
};

// Reusable cell buffer for iterating a space without per-board allocation.
// fill() rebuilds the grid of board i in place.
class BoardScratch {
 public:
  explicit BoardScratch(const HypothesisSpace& space);
  void fill(std::size_t board_index);

  const GameConfig& config() const { return *config_; }
  cell_t at_index(int cell_index) const { return cells_[cell_index]; }
  const std::vector<cell_t>& cells() const { return cells_; }
  const ShipPlacement& placement(std::size_t ship) const {
    return current_[ship];
  }

 private:
  const HypothesisSpace* space_;
  const GameConfig* config_;
  std::vector<cell_t> cells_;
  const ShipPlacement* current_ = nullptr;
};

// All complete boards consistent with the partial observation, in a fixed
// deterministic order: lexicographic by per-ship placement sequence, where
// each ship's placements advance by (length ascending, H before V, origin
// row-major). The OpenMP variant splits work over the first ship's
// placements and concatenates per-chunk results in order, so its output is
// bit-identical to the serial one.
HypothesisSpace enumerate_hypotheses(const PartialBoard& board);
HypothesisSpace enumerate_hypotheses_serial(const PartialBoard& board);

// True iff at least one consistent completion exists (early-exit search).
bool has_consistent_completion(const PartialBoard& board);

// parse_board + the "space must be non-empty" invariant, i.e. the checked
// load path used by the CLI and runners. Throws BoardError when no
// consistent completion exists.
PartialBoard load_board(const std::string& json_text);
PartialBoard load_board_file(const std::string& path);

}  // namespace battleship
