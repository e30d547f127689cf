#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "battleship/board.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Question programs are S-expressions over a closed primitive set. The same
// AST is shared by the parser, the typechecker, the evaluator, and the
// grammar sampler. docs/primitives.md is the normative description of each
// primitive's signature and semantics; the evaluator follows it.
// ---------------------------------------------------------------------------

enum class PrimOp : std::uint8_t {
  // clang-format off
  And, Or, Not, Eq, Gt, Lt, Any, All, Touch,
  Plus, Minus, SumAll, Size, RowL, ColL, SetSize,
  ColorFn, OrientFn, TopLeft, BottomRight,
  ColoredTiles, SetWrap, Union, Intersection, SetDifference, Unique,
  Map,
  // clang-format on
};

// Surface spelling of a primitive, e.g. Eq -> "==", SumAll -> "++".
const char* prim_name(PrimOp op);

// Reverse lookup by surface spelling, and the fixed argument count. The
// grammar module uses these to read production templates.
struct PrimSignature {
  PrimOp op;
  int arity;
};
const PrimSignature* prim_by_name(const std::string& name);
int prim_arity(PrimOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind : std::uint8_t {
    BoolLit,
    NumberLit,
    ColorLit,     // by name: "Red", "Water", ...
    OrientLit,    // H / V
    LocationLit,  // 1-based coordinate, e.g. 2C
    AllTilesLit,  // every board location
    AllColorsLit, // every ship color (water excluded)
    Var,
    Lambda,
    App,
  };

  Kind kind = Kind::BoolLit;

  bool bval = false;
  std::int64_t num = 0;
  std::string name;  // ColorLit name, Var name, or Lambda parameter
  Orientation orient = Orientation::H;
  Coord loc;

  PrimOp op = PrimOp::And;
  std::vector<ExprPtr> args;  // App arguments
  ExprPtr body;               // Lambda body
};

// Node count / longest root-to-leaf node path. An application is one node
// plus its arguments; a lambda is one node plus its body (the parameter is
// part of the lambda node). A bare literal is depth 1, size 1.
int ast_size(const Expr& e);
int ast_depth(const Expr& e);

// Canonical single-space rendering; parse_program(pretty_print(e)) rebuilds
// an identical tree.
std::string pretty_print(const Expr& e);

// Parses one complete S-expression. Color names are classified against the
// given config's ship list (plus "Water"); every other unknown symbol is an
// error. Variables are only recognized under a binding lambda. Throws
// ParseError with a byte offset on any failure.
ExprPtr parse_program(const std::string& text,
                      const ConfigPtr& config = default_config());

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind : std::uint8_t {
  Boolean,
  Number,
  Color,
  Orientation,
  Location,
  Set,
};

struct Type {
  TypeKind kind = TypeKind::Boolean;
  std::shared_ptr<const Type> elem;  // set element type, null otherwise

  bool is_ground() const { return kind != TypeKind::Set; }
  bool operator==(const Type& other) const;
  std::string to_string() const;
};

Type boolean_type();
Type number_type();
Type color_type();
Type orientation_type();
Type location_type();
Type set_of(Type elem);

// Infers the type of a closed program. Lambdas are only admitted as the
// first argument of map (their parameter type comes from the mapped set), so
// a lambda anywhere else is a TypeError, as is a type-incorrect application.
Type typecheck(const Expr& e);

// The five admissible answer types for a question. A program whose result is
// a set (or that does not typecheck) cannot serve as a question.
enum class AnswerType : std::uint8_t {
  Boolean,
  Number,
  Color,
  Orientation,
  Location,
};
const char* answer_type_name(AnswerType t);
AnswerType top_level_type(const Expr& e);

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

struct Value;

struct Closure {
  const Expr* lambda = nullptr;
  // Captured bindings of enclosing lambdas (name -> value), innermost last.
  std::vector<std::pair<std::string, Value>> captured;
};

struct Value {
  enum class Kind : std::uint8_t {
    Boolean,
    Number,
    Color,
    Orientation,
    Location,
    Set,
    Closure,
  };

  Kind kind = Kind::Boolean;
  bool bval = false;
  std::int64_t num = 0;
  cell_t color = kWaterCell;  // board-config color code
  Orientation orient = Orientation::H;
  Coord loc;
  std::shared_ptr<const std::vector<Value>> set;
  std::shared_ptr<const Closure> closure;

  static Value boolean(bool b);
  static Value number(std::int64_t n);
  static Value color_value(cell_t code);
  static Value orientation(Orientation o);
  static Value location(Coord c);
  static Value set_value(std::vector<Value> elems);
};

// Total order over values of one type; sets compare lexicographically. Used
// for canonicalizing sets and for deterministic answer ordering.
bool value_less(const Value& a, const Value& b);
bool value_equal(const Value& a, const Value& b);

// Renders a ground value for output ("TRUE", "3", "Red", "H", "2C").
// Colors need the config for their names.
std::string value_to_string(const Value& v, const GameConfig& config);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// A board the evaluator can read: cells plus the placement tuple. FullBoard
// converts implicitly; hot loops construct views from scratch buffers.
struct BoardView {
  const GameConfig* config = nullptr;
  const cell_t* cells = nullptr;
  const ShipPlacement* placements = nullptr;
  std::size_t n_ships = 0;

  BoardView() = default;
  BoardView(const FullBoard& b)
      : config(b.config.get()),
        cells(b.cells.data()),
        placements(b.placements.data()),
        n_ships(b.placements.size()) {}
};

// Evaluates a typechecked program against one complete board. Throws
// EvalError on runtime domain errors (topleft/bottomright of an empty set,
// size/orient/touch applied to Water, out-of-bounds location literal, color
// name unknown to this board's config); scoring code treats such a program
// as invalid for the whole space.
Value evaluate(const Expr& e, const BoardView& board);

// Evaluator with per-config caches (AllTiles etc.); use when evaluating the
// same program across many boards.
class Evaluator {
 public:
  explicit Evaluator(const GameConfig& config);
  Value eval(const Expr& e, const BoardView& board) const;

 private:
  const GameConfig* config_;
  Value all_tiles_;
  Value all_colors_;
};

}  // namespace battleship
