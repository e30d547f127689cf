#include <algorithm>
#include <cstdlib>

#include "battleship/dsl.hpp"

namespace battleship {

Value Value::boolean(bool b) {
  Value v;
  v.kind = Kind::Boolean;
  v.bval = b;
  return v;
}
Value Value::number(std::int64_t n) {
  Value v;
  v.kind = Kind::Number;
  v.num = n;
  return v;
}
Value Value::color_value(cell_t code) {
  Value v;
  v.kind = Kind::Color;
  v.color = code;
  return v;
}
Value Value::orientation(Orientation o) {
  Value v;
  v.kind = Kind::Orientation;
  v.orient = o;
  return v;
}
Value Value::location(Coord c) {
  Value v;
  v.kind = Kind::Location;
  v.loc = c;
  return v;
}
Value Value::set_value(std::vector<Value> elems) {
  Value v;
  v.kind = Kind::Set;
  v.set = std::make_shared<const std::vector<Value>>(std::move(elems));
  return v;
}

namespace {

// three-way compare; sets order lexicographically. Values of distinct kinds
// never meet in well-typed programs, but the order is total anyway so that
// canonicalization can never fail.
int value_cmp(const Value& a, const Value& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  auto num_cmp = [](auto x, auto y) { return x < y ? -1 : (x > y ? 1 : 0); };
  switch (a.kind) {
    case Value::Kind::Boolean: return num_cmp(a.bval, b.bval);
    case Value::Kind::Number: return num_cmp(a.num, b.num);
    case Value::Kind::Color: return num_cmp(a.color, b.color);
    case Value::Kind::Orientation:
      return num_cmp(static_cast<int>(a.orient), static_cast<int>(b.orient));
    case Value::Kind::Location:
      if (int c = num_cmp(a.loc.row, b.loc.row)) return c;
      return num_cmp(a.loc.col, b.loc.col);
    case Value::Kind::Set: {
      const auto& xs = *a.set;
      const auto& ys = *b.set;
      for (std::size_t i = 0; i < std::min(xs.size(), ys.size()); ++i)
        if (int c = value_cmp(xs[i], ys[i])) return c;
      return num_cmp(xs.size(), ys.size());
    }
    case Value::Kind::Closure:
      return 0;  // closures are never compared in well-typed programs
  }
  return 0;
}

}  // namespace

bool value_less(const Value& a, const Value& b) { return value_cmp(a, b) < 0; }
bool value_equal(const Value& a, const Value& b) { return value_cmp(a, b) == 0; }

std::string value_to_string(const Value& v, const GameConfig& config) {
  switch (v.kind) {
    case Value::Kind::Boolean: return v.bval ? "TRUE" : "FALSE";
    case Value::Kind::Number: return std::to_string(v.num);
    case Value::Kind::Color: return config.color_name(v.color);
    case Value::Kind::Orientation:
      return std::string(1, orientation_letter(v.orient));
    case Value::Kind::Location: return v.loc.label();
    case Value::Kind::Set: {
      std::string out = "{";
      for (std::size_t i = 0; i < v.set->size(); ++i) {
        if (i) out += ", ";
        out += value_to_string((*v.set)[i], config);
      }
      return out + "}";
    }
    case Value::Kind::Closure: return "<lambda>";
  }
  return "?";
}

namespace {

using Env = std::vector<std::pair<std::string, Value>>;

std::vector<Value> sorted_unique(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end(), value_less);
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Value& a, const Value& b) {
                            return value_equal(a, b);
                          }),
              elems.end());
  return elems;
}

class EvalVisitor {
 public:
  EvalVisitor(const GameConfig& config, const BoardView& board,
              const Value* all_tiles, const Value* all_colors)
      : cfg_(config), board_(board), all_tiles_(all_tiles),
        all_colors_(all_colors) {}

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::BoolLit:
        return Value::boolean(e.bval);
      case Expr::Kind::NumberLit:
        return Value::number(e.num);
      case Expr::Kind::ColorLit: {
        auto code = cfg_.color_code(e.name);
        if (!code)
          throw EvalError("color " + e.name + " is not part of this game");
        return Value::color_value(*code);
      }
      case Expr::Kind::OrientLit:
        return Value::orientation(e.orient);
      case Expr::Kind::LocationLit:
        if (!cfg_.in_bounds(e.loc))
          throw EvalError("location " + e.loc.label() + " is off the board");
        return Value::location(e.loc);
      case Expr::Kind::AllTilesLit:
        return *all_tiles_;
      case Expr::Kind::AllColorsLit:
        return *all_colors_;
      case Expr::Kind::Var:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->first == e.name) return it->second;
        throw EvalError("unbound variable " + e.name);
      case Expr::Kind::Lambda: {
        Value v;
        v.kind = Value::Kind::Closure;
        auto cl = std::make_shared<Closure>();
        cl->lambda = &e;
        cl->captured = env_;  // small: at most the enclosing lambda params
        v.closure = std::move(cl);
        return v;
      }
      case Expr::Kind::App:
        return apply(e);
    }
    throw EvalError("unhandled expression kind");
  }

 private:
  // Ship index (0-based) for a color value; Water has no placement.
  std::size_t ship_of(const Value& color, PrimOp op) {
    if (color.color == kWaterCell)
      throw EvalError(std::string(prim_name(op)) +
                      " applies to ships, not water");
    return static_cast<std::size_t>(color.color) - 1;
  }

  std::int64_t as_number(const Value& v) {
    // boolean coercion: TRUE counts as 1, FALSE as 0
    return v.kind == Value::Kind::Boolean ? (v.bval ? 1 : 0) : v.num;
  }

  Value apply(const Expr& e) {
    switch (e.op) {
      case PrimOp::And:
        return Value::boolean(eval(*e.args[0]).bval && eval(*e.args[1]).bval);
      case PrimOp::Or:
        return Value::boolean(eval(*e.args[0]).bval || eval(*e.args[1]).bval);
      case PrimOp::Not:
        return Value::boolean(!eval(*e.args[0]).bval);
      case PrimOp::Eq:
        return Value::boolean(value_equal(eval(*e.args[0]), eval(*e.args[1])));
      case PrimOp::Gt:
        return Value::boolean(eval(*e.args[0]).num > eval(*e.args[1]).num);
      case PrimOp::Lt:
        return Value::boolean(eval(*e.args[0]).num < eval(*e.args[1]).num);
      case PrimOp::Any: {
        Value s = eval(*e.args[0]);
        for (const Value& v : *s.set)
          if (v.bval) return Value::boolean(true);
        return Value::boolean(false);
      }
      case PrimOp::All: {
        Value s = eval(*e.args[0]);
        for (const Value& v : *s.set)
          if (!v.bval) return Value::boolean(false);
        return Value::boolean(true);
      }
      case PrimOp::Touch: {
        std::size_t s1 = ship_of(eval(*e.args[0]), e.op);
        std::size_t s2 = ship_of(eval(*e.args[1]), e.op);
        const ShipPlacement& a = board_.placements[s1];
        const ShipPlacement& b = board_.placements[s2];
        for (int i = 0; i < a.length; ++i) {
          Coord ca = a.tile(i);
          for (int j = 0; j < b.length; ++j) {
            Coord cb = b.tile(j);
            if (std::abs(ca.row - cb.row) + std::abs(ca.col - cb.col) == 1)
              return Value::boolean(true);
          }
        }
        return Value::boolean(false);
      }
      case PrimOp::Plus:
        return Value::number(as_number(eval(*e.args[0])) +
                             as_number(eval(*e.args[1])));
      case PrimOp::Minus:
        return Value::number(as_number(eval(*e.args[0])) -
                             as_number(eval(*e.args[1])));
      case PrimOp::SumAll: {
        Value s = eval(*e.args[0]);
        std::int64_t total = 0;
        for (const Value& v : *s.set) total += as_number(v);
        return Value::number(total);
      }
      case PrimOp::Size: {
        std::size_t ship = ship_of(eval(*e.args[0]), e.op);
        return Value::number(board_.placements[ship].length);
      }
      case PrimOp::RowL:
        return Value::number(eval(*e.args[0]).loc.row);
      case PrimOp::ColL:
        return Value::number(eval(*e.args[0]).loc.col);
      case PrimOp::SetSize: {
        // Counts stored elements. Set-algebra results are duplicate-free;
        // map results keep multiplicity on purpose (see docs/primitives.md).
        Value s = eval(*e.args[0]);
        return Value::number(static_cast<std::int64_t>(s.set->size()));
      }
      case PrimOp::ColorFn: {
        Value loc = eval(*e.args[0]);
        return Value::color_value(
            board_.cells[cfg_.index(loc.loc)]);
      }
      case PrimOp::OrientFn: {
        std::size_t ship = ship_of(eval(*e.args[0]), e.op);
        return Value::orientation(board_.placements[ship].orient);
      }
      case PrimOp::TopLeft:
      case PrimOp::BottomRight: {
        Value s = eval(*e.args[0]);
        if (s.set->empty())
          throw EvalError(std::string(prim_name(e.op)) + " of an empty set");
        const Value* best = &(*s.set)[0];
        for (const Value& v : *s.set) {
          bool better = e.op == PrimOp::TopLeft ? value_less(v, *best)
                                                : value_less(*best, v);
          if (better) best = &v;
        }
        return *best;
      }
      case PrimOp::ColoredTiles: {
        Value color = eval(*e.args[0]);
        std::vector<Value> tiles;
        if (color.color == kWaterCell) {
          for (int i = 0; i < cfg_.cell_count(); ++i)
            if (board_.cells[i] == kWaterCell)
              tiles.push_back(Value::location(cfg_.coord(i)));
        } else {
          const ShipPlacement& p =
              board_.placements[static_cast<std::size_t>(color.color) - 1];
          for (int k = 0; k < p.length; ++k)
            tiles.push_back(Value::location(p.tile(k)));
        }
        // ship tiles advance row-major along the placement, water tiles scan
        // row-major, so the result is canonical without sorting
        return Value::set_value(std::move(tiles));
      }
      case PrimOp::SetWrap:
        return eval(*e.args[0]);
      case PrimOp::Union: {
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        std::vector<Value> merged = *a.set;
        merged.insert(merged.end(), b.set->begin(), b.set->end());
        return Value::set_value(sorted_unique(std::move(merged)));
      }
      case PrimOp::Intersection:
      case PrimOp::SetDifference: {
        std::vector<Value> a = sorted_unique(*eval(*e.args[0]).set);
        std::vector<Value> b = sorted_unique(*eval(*e.args[1]).set);
        std::vector<Value> out;
        if (e.op == PrimOp::Intersection)
          std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(out), value_less);
        else
          std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(out), value_less);
        return Value::set_value(std::move(out));
      }
      case PrimOp::Unique:
        return Value::set_value(sorted_unique(*eval(*e.args[0]).set));
      case PrimOp::Map: {
        Value fn = eval(*e.args[0]);
        Value src = eval(*e.args[1]);
        const Closure& cl = *fn.closure;
        std::vector<Value> out;
        out.reserve(src.set->size());
        // Result keeps source order and multiplicity: counting questions
        // like (++ (map (lambda y (== (rowL y) 2)) ...)) rely on it.
        Env saved = std::move(env_);
        env_ = cl.captured;
        env_.emplace_back(cl.lambda->name, Value{});
        for (const Value& elem : *src.set) {
          env_.back().second = elem;
          out.push_back(eval(*cl.lambda->body));
        }
        env_ = std::move(saved);
        return Value::set_value(std::move(out));
      }
    }
    throw EvalError("unhandled primitive");
  }

  const GameConfig& cfg_;
  const BoardView& board_;
  const Value* all_tiles_;
  const Value* all_colors_;
  Env env_;
};

Value make_all_tiles(const GameConfig& cfg) {
  std::vector<Value> tiles;
  tiles.reserve(static_cast<std::size_t>(cfg.cell_count()));
  for (int i = 0; i < cfg.cell_count(); ++i)
    tiles.push_back(Value::location(cfg.coord(i)));
  return Value::set_value(std::move(tiles));
}

Value make_all_colors(const GameConfig& cfg) {
  std::vector<Value> colors;
  for (std::size_t s = 0; s < cfg.ships.size(); ++s)
    colors.push_back(Value::color_value(static_cast<cell_t>(s + 1)));
  return Value::set_value(std::move(colors));
}

}  // namespace

Evaluator::Evaluator(const GameConfig& config)
    : config_(&config),
      all_tiles_(make_all_tiles(config)),
      all_colors_(make_all_colors(config)) {}

Value Evaluator::eval(const Expr& e, const BoardView& board) const {
  EvalVisitor visitor(*config_, board, &all_tiles_, &all_colors_);
  return visitor.eval(e);
}

Value evaluate(const Expr& e, const BoardView& board) {
  Evaluator ev(*board.config);
  return ev.eval(e, board);
}

}  // namespace battleship
