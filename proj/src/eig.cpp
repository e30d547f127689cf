#include "battleship/eig.hpp"

#include <algorithm>
#include <cmath>

namespace battleship {

namespace {

// Per-answer aggregation state. Ground answers are encoded into a compact
// key so grouping is a cheap linear probe over a small vector (question
// answer supports are tiny compared to the spaces they are computed from).
struct AnswerKey {
  std::uint8_t tag = 0;
  std::int64_t payload = 0;
  bool operator==(const AnswerKey&) const = default;
};

AnswerKey encode(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Boolean: return {0, v.bval ? 1 : 0};
    case Value::Kind::Number: return {1, v.num};
    case Value::Kind::Color: return {2, v.color};
    case Value::Kind::Orientation: return {3, static_cast<std::int64_t>(v.orient)};
    case Value::Kind::Location:
      return {4, static_cast<std::int64_t>(v.loc.row) * 256 + v.loc.col};
    default:
      throw EvalError("question produced a non-ground answer");
  }
}

struct Group {
  AnswerKey key;
  Value representative;
  std::uint64_t count = 0;   // uniform path
  double weight = 0.0;       // explicit-weight path: sum of w_i
  double weight_log = 0.0;   //                       sum of w_i * log2(w_i)
};

class GroupTable {
 public:
  Group& find_or_add(const Value& v) {
    AnswerKey key = encode(v);
    for (Group& g : groups_)
      if (g.key == key) return g;
    groups_.push_back({key, v, 0, 0.0, 0.0});
    return groups_.back();
  }

  std::vector<Group>& groups() { return groups_; }
  const std::vector<Group>& groups() const { return groups_; }

  void sort_canonical() {
    std::sort(groups_.begin(), groups_.end(), [](const Group& a, const Group& b) {
      return value_less(a.representative, b.representative);
    });
  }

 private:
  std::vector<Group> groups_;
};

GroupTable group_answers(const Expr& program, const HypothesisSpace& space) {
  if (space.empty()) throw InputError("hypothesis space is empty");
  Evaluator ev(*space.config());
  BoardScratch scratch(space);
  GroupTable table;
  for (std::size_t i = 0; i < space.size(); ++i) {
    scratch.fill(i);
    BoardView view;
    view.config = space.config().get();
    view.cells = scratch.cells().data();
    view.placements = &scratch.placement(0);
    view.n_ships = space.ships_per_board();
    Value answer = ev.eval(program, view);
    Group& g = table.find_or_add(answer);
    if (space.uniform()) {
      ++g.count;
    } else {
      double w = space.weight(i);
      g.weight += w;
      if (w > 0.0) g.weight_log += w * std::log2(w);
    }
  }
  table.sort_canonical();
  return table;
}

}  // namespace

AnswerDistribution answer_distribution(const Expr& program,
                                       const HypothesisSpace& space) {
  GroupTable table = group_answers(program, space);
  AnswerDistribution dist;
  const double n = static_cast<double>(space.size());
  for (const Group& g : table.groups()) {
    double p = space.uniform() ? static_cast<double>(g.count) / n : g.weight;
    dist.entries.push_back({g.representative, p});
  }
  return dist;
}

double entropy(const AnswerDistribution& dist) {
  double h = 0.0;
  for (const AnswerEntry& e : dist.entries)
    if (e.probability > 0.0) h -= e.probability * std::log2(e.probability);
  return h;
}

double entropy(const HypothesisSpace& space) {
  if (space.empty()) throw InputError("hypothesis space is empty");
  if (space.uniform()) return std::log2(static_cast<double>(space.size()));
  double h = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    double w = space.weight(i);
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

HypothesisSpace posterior_update(const HypothesisSpace& space,
                                 const Expr& program, const Value& answer) {
  Evaluator ev(*space.config());
  BoardScratch scratch(space);
  std::vector<std::size_t> keep;
  double kept_weight = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    scratch.fill(i);
    BoardView view;
    view.config = space.config().get();
    view.cells = scratch.cells().data();
    view.placements = &scratch.placement(0);
    view.n_ships = space.ships_per_board();
    if (value_equal(ev.eval(program, view), answer)) {
      keep.push_back(i);
      kept_weight += space.weight(i);
    }
  }
  if (keep.empty()) throw InputError("answer has probability zero");
  if (space.uniform())
    return space.subset(keep, {});  // uniform prior stays uniform
  std::vector<double> weights;
  weights.reserve(keep.size());
  for (std::size_t i : keep) weights.push_back(space.weight(i) / kept_weight);
  return space.subset(keep, std::move(weights));
}

double eig(const Expr& program, const HypothesisSpace& space) {
  GroupTable table = group_answers(program, space);

  // H(space) minus the expected posterior entropy. With a uniform prior the
  // posterior given answer y is uniform over its n_y boards, so the
  // conditional term is sum_y (n_y/n) log2(n_y), all in exact integer
  // counts. The general path aggregates sum w and sum w log2 w per answer.
  double bits;
  if (space.uniform()) {
    const double n = static_cast<double>(space.size());
    double conditional = 0.0;
    for (const Group& g : table.groups())
      conditional +=
          (static_cast<double>(g.count) / n) * std::log2(static_cast<double>(g.count));
    bits = std::log2(n) - conditional;
  } else {
    double prior_entropy = entropy(space);
    double conditional = 0.0;
    for (const Group& g : table.groups()) {
      if (g.weight <= 0.0) continue;
      // entropy of the renormalized group: log2 W - (sum w log2 w) / W
      double posterior_entropy = std::log2(g.weight) - g.weight_log / g.weight;
      conditional += g.weight * posterior_entropy;
    }
    bits = prior_entropy - conditional;
  }
  if (table.groups().size() <= 1) return 0.0;  // constant over the space
  return std::max(bits, 0.0);
}

std::vector<std::optional<double>> score_programs_serial(
    const std::vector<ExprPtr>& programs, const HypothesisSpace& space) {
  std::vector<std::optional<double>> out(programs.size());
  for (std::size_t i = 0; i < programs.size(); ++i) {
    try {
      out[i] = eig(*programs[i], space);
    } catch (const EvalError&) {
      out[i] = std::nullopt;
    }
  }
  return out;
}

std::vector<std::optional<double>> score_programs(
    const std::vector<ExprPtr>& programs, const HypothesisSpace& space) {
  if (space.empty()) throw InputError("hypothesis space is empty");
  std::vector<std::optional<double>> out(programs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < programs.size(); ++i) {
    try {
      out[i] = eig(*programs[i], space);
    } catch (const EvalError&) {
      out[i] = std::nullopt;
    }
  }
  return out;
}

}  // namespace battleship
