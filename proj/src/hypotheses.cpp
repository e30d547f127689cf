#include "battleship/hypotheses.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace battleship {

HypothesisSpace::HypothesisSpace(ConfigPtr config,
                                 std::vector<ShipPlacement> flat_placements,
                                 std::vector<double> weights)
    : config_(std::move(config)),
      flat_(std::move(flat_placements)),
      weights_(std::move(weights)) {
  n_ships_ = config_->ships.size();
  if (flat_.size() % n_ships_ != 0)
    throw InputError("placement buffer is not a whole number of boards");
  n_boards_ = flat_.size() / n_ships_;
  if (!weights_.empty()) {
    if (weights_.size() != n_boards_)
      throw InputError("weight count does not match board count");
    double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (!(std::fabs(sum - 1.0) < 1e-9))
      throw InputError("weights must sum to 1");
    for (double w : weights_)
      if (!(w >= 0.0)) throw InputError("weights must be nonnegative");
  }
}

FullBoard HypothesisSpace::board(std::size_t i) const {
  std::vector<ShipPlacement> tuple(placements(i), placements(i) + n_ships_);
  return materialize(config_, tuple);
}

HypothesisSpace HypothesisSpace::subset(const std::vector<std::size_t>& keep,
                                        std::vector<double> new_weights) const {
  std::vector<ShipPlacement> flat;
  flat.reserve(keep.size() * n_ships_);
  for (std::size_t i : keep) {
    const ShipPlacement* p = placements(i);
    flat.insert(flat.end(), p, p + n_ships_);
  }
  return HypothesisSpace(config_, std::move(flat), std::move(new_weights));
}

BoardScratch::BoardScratch(const HypothesisSpace& space)
    : space_(&space),
      config_(space.config().get()),
      cells_(static_cast<std::size_t>(config_->cell_count()), kWaterCell) {}

void BoardScratch::fill(std::size_t board_index) {
  std::fill(cells_.begin(), cells_.end(), kWaterCell);
  current_ = space_->placements(board_index);
  const int cols = config_->cols;
  for (std::size_t s = 0; s < space_->ships_per_board(); ++s) {
    const ShipPlacement& p = current_[s];
    int idx = (p.row - 1) * cols + (p.col - 1);
    const int stride = p.orient == Orientation::H ? 1 : cols;
    for (int k = 0; k < p.length; ++k, idx += stride)
      cells_[static_cast<std::size_t>(idx)] = static_cast<cell_t>(s + 1);
  }
}

namespace {

// Occupancy bitmask over board cells. Four 64-bit words cover every board we
// can enumerate at desk scale; larger configs are rejected up front.
constexpr int kMaskWords = 4;
using Mask = std::array<std::uint64_t, kMaskWords>;

bool overlaps(const Mask& a, const Mask& b) {
  for (int w = 0; w < kMaskWords; ++w)
    if (a[w] & b[w]) return true;
  return false;
}

void set_union(Mask& a, const Mask& b) {
  for (int w = 0; w < kMaskWords; ++w) a[w] |= b[w];
}

struct PlacementOption {
  ShipPlacement placement;
  Mask mask;
};

// Per-ship placement options, already filtered against the partial board:
//   - stays in bounds;
//   - covers no cell revealed as water or as a different ship;
//   - covers every cell revealed as this ship.
// Order is (length ascending, H before V, origin row-major); board
// enumeration order is lexicographic in these per-ship sequences.
std::vector<PlacementOption> ship_options(const PartialBoard& board,
                                          std::size_t ship_index) {
  const GameConfig& cfg = *board.config;
  const cell_t own = static_cast<cell_t>(ship_index + 1);

  Mask required{};  // cells revealed as this ship; placements must cover all
  int required_count = 0;
  for (int i = 0; i < cfg.cell_count(); ++i) {
    if (board.cells[static_cast<std::size_t>(i)] == own) {
      required[i >> 6] |= std::uint64_t{1} << (i & 63);
      ++required_count;
    }
  }

  std::vector<PlacementOption> options;
  const ShipSpec& spec = cfg.ships[ship_index];
  for (int length : spec.lengths) {
    for (Orientation orient : {Orientation::H, Orientation::V}) {
      const int max_row = orient == Orientation::H ? cfg.rows : cfg.rows - length + 1;
      const int max_col = orient == Orientation::H ? cfg.cols - length + 1 : cfg.cols;
      for (int row = 1; row <= max_row; ++row) {
        for (int col = 1; col <= max_col; ++col) {
          ShipPlacement p{static_cast<std::uint8_t>(row),
                          static_cast<std::uint8_t>(col), orient,
                          static_cast<std::uint8_t>(length)};
          Mask mask{};
          bool ok = true;
          int covered_required = 0;
          for (int k = 0; k < length && ok; ++k) {
            int idx = cfg.index(p.tile(k));
            cell_t seen = board.cells[static_cast<std::size_t>(idx)];
            if (seen != kHiddenCell && seen != own) {
              ok = false;
              break;
            }
            if (seen == own) ++covered_required;
            mask[idx >> 6] |= std::uint64_t{1} << (idx & 63);
          }
          if (ok && covered_required == required_count)
            options.push_back({p, mask});
        }
      }
    }
  }
  return options;
}

struct EnumerationPlan {
  ConfigPtr config;
  std::vector<std::vector<PlacementOption>> options;  // per ship
  bool distinct_lengths = false;
};

EnumerationPlan make_plan(const PartialBoard& board) {
  const GameConfig& cfg = *board.config;
  if (cfg.cell_count() > kMaskWords * 64)
    throw BoardError("board too large to enumerate");
  EnumerationPlan plan;
  plan.config = board.config;
  plan.distinct_lengths = cfg.distinct_lengths;
  for (std::size_t s = 0; s < cfg.ships.size(); ++s)
    plan.options.push_back(ship_options(board, s));
  return plan;
}

// Depth-first walk over ships `ship..n-1`. Appends every completed placement
// tuple to `out` (or stops at the first one when `find_one`).
bool extend(const EnumerationPlan& plan, std::size_t ship, Mask occupied,
            std::vector<ShipPlacement>& tuple, std::vector<ShipPlacement>* out,
            bool find_one) {
  const std::size_t n_ships = plan.options.size();
  if (ship == n_ships) {
    if (out) out->insert(out->end(), tuple.begin(), tuple.end());
    return true;
  }
  bool found = false;
  for (const PlacementOption& opt : plan.options[ship]) {
    if (overlaps(occupied, opt.mask)) continue;
    if (plan.distinct_lengths) {
      bool clash = false;
      for (std::size_t j = 0; j < ship; ++j)
        if (tuple[j].length == opt.placement.length) clash = true;
      if (clash) continue;
    }
    Mask next = occupied;
    set_union(next, opt.mask);
    tuple[ship] = opt.placement;
    if (extend(plan, ship + 1, next, tuple, out, find_one)) {
      found = true;
      if (find_one) return true;
    }
  }
  return found;
}

}  // namespace

HypothesisSpace enumerate_hypotheses_serial(const PartialBoard& board) {
  EnumerationPlan plan = make_plan(board);
  std::vector<ShipPlacement> flat;
  std::vector<ShipPlacement> tuple(plan.options.size());
  extend(plan, 0, Mask{}, tuple, &flat, false);
  return HypothesisSpace(plan.config, std::move(flat));
}

HypothesisSpace enumerate_hypotheses(const PartialBoard& board) {
  EnumerationPlan plan = make_plan(board);
  const std::size_t n_ships = plan.options.size();
  const auto& first = plan.options[0];
  std::vector<std::vector<ShipPlacement>> chunks(first.size());

  // Each first-ship placement yields an independent sub-enumeration; chunk
  // results are concatenated in placement order, so the output matches the
  // serial routine exactly regardless of thread count.
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::vector<ShipPlacement> tuple(n_ships);
    tuple[0] = first[i].placement;
    extend(plan, 1, first[i].mask, tuple, &chunks[i], false);
  }

  std::size_t total = 0;
  for (const auto& chunk : chunks) total += chunk.size();
  std::vector<ShipPlacement> flat;
  flat.reserve(total);
  for (const auto& chunk : chunks)
    flat.insert(flat.end(), chunk.begin(), chunk.end());
  return HypothesisSpace(plan.config, std::move(flat));
}

bool has_consistent_completion(const PartialBoard& board) {
  EnumerationPlan plan = make_plan(board);
  std::vector<ShipPlacement> tuple(plan.options.size());
  return extend(plan, 0, Mask{}, tuple, nullptr, true);
}

PartialBoard load_board(const std::string& json_text) {
  PartialBoard board = parse_board(json_text);
  if (!has_consistent_completion(board))
    throw BoardError("board has no consistent completion");
  return board;
}

PartialBoard load_board_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BoardError("cannot open board file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_board(buf.str());
  } catch (const BoardError& e) {
    throw BoardError(path + ": " + e.what());
  }
}

}  // namespace battleship
