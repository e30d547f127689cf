#include "battleship/dsl.hpp"

namespace battleship {

bool Type::operator==(const Type& other) const {
  if (kind != other.kind) return false;
  if (kind != TypeKind::Set) return true;
  return *elem == *other.elem;
}

std::string Type::to_string() const {
  switch (kind) {
    case TypeKind::Boolean: return "Boolean";
    case TypeKind::Number: return "Number";
    case TypeKind::Color: return "Color";
    case TypeKind::Orientation: return "Orientation";
    case TypeKind::Location: return "Location";
    case TypeKind::Set: return "Set(" + elem->to_string() + ")";
  }
  return "?";
}

Type boolean_type() { return {TypeKind::Boolean, nullptr}; }
Type number_type() { return {TypeKind::Number, nullptr}; }
Type color_type() { return {TypeKind::Color, nullptr}; }
Type orientation_type() { return {TypeKind::Orientation, nullptr}; }
Type location_type() { return {TypeKind::Location, nullptr}; }
Type set_of(Type elem) {
  return {TypeKind::Set, std::make_shared<const Type>(std::move(elem))};
}

const char* answer_type_name(AnswerType t) {
  switch (t) {
    case AnswerType::Boolean: return "Boolean";
    case AnswerType::Number: return "Number";
    case AnswerType::Color: return "Color";
    case AnswerType::Orientation: return "Orientation";
    case AnswerType::Location: return "Location";
  }
  return "?";
}

namespace {

using TypeEnv = std::vector<std::pair<const std::string*, Type>>;

[[noreturn]] void fail(PrimOp op, const std::string& detail) {
  throw TypeError(std::string("'") + prim_name(op) + "': " + detail);
}

Type check(const Expr& e, TypeEnv& env);

// `+`, `-` and `++` accept booleans wherever numbers are expected, coercing
// TRUE to 1 and FALSE to 0 at evaluation time.
bool numeric_like(const Type& t) {
  return t.kind == TypeKind::Number || t.kind == TypeKind::Boolean;
}

Type check_app(const Expr& e, TypeEnv& env) {
  // map is the one construct with non-uniform argument handling: its first
  // argument must be a literal lambda whose parameter takes the element type
  // of the mapped set, so the set argument is checked first.
  if (e.op == PrimOp::Map) {
    const Expr& fn = *e.args[0];
    if (fn.kind != Expr::Kind::Lambda)
      fail(e.op, "first argument must be a lambda");
    Type src = check(*e.args[1], env);
    if (src.kind != TypeKind::Set)
      fail(e.op, "second argument must be a set, got " + src.to_string());
    env.emplace_back(&fn.name, *src.elem);
    Type out = check(*fn.body, env);
    env.pop_back();
    return set_of(std::move(out));
  }

  std::vector<Type> arg_types;
  arg_types.reserve(e.args.size());
  for (const auto& a : e.args) arg_types.push_back(check(*a, env));

  auto want = [&](std::size_t i, const Type& t) {
    if (!(arg_types[i] == t))
      fail(e.op, "argument " + std::to_string(i + 1) + " must be " +
                     t.to_string() + ", got " + arg_types[i].to_string());
  };
  auto want_set = [&](std::size_t i) -> const Type& {
    if (arg_types[i].kind != TypeKind::Set)
      fail(e.op, "argument " + std::to_string(i + 1) + " must be a set, got " +
                     arg_types[i].to_string());
    return arg_types[i];
  };

  switch (e.op) {
    case PrimOp::And:
    case PrimOp::Or:
      want(0, boolean_type());
      want(1, boolean_type());
      return boolean_type();
    case PrimOp::Not:
      want(0, boolean_type());
      return boolean_type();
    case PrimOp::Eq:
      if (!arg_types[0].is_ground() || !arg_types[1].is_ground())
        fail(e.op, "cannot compare sets");
      if (!(arg_types[0] == arg_types[1]))
        fail(e.op, "cannot compare " + arg_types[0].to_string() + " with " +
                       arg_types[1].to_string());
      return boolean_type();
    case PrimOp::Gt:
    case PrimOp::Lt:
      want(0, number_type());
      want(1, number_type());
      return boolean_type();
    case PrimOp::Any:
    case PrimOp::All: {
      const Type& s = want_set(0);
      if (s.elem->kind != TypeKind::Boolean)
        fail(e.op, "needs a set of booleans, got " + s.to_string());
      return boolean_type();
    }
    case PrimOp::Touch:
      want(0, color_type());
      want(1, color_type());
      return boolean_type();
    case PrimOp::Plus:
    case PrimOp::Minus:
      for (std::size_t i = 0; i < 2; ++i)
        if (!numeric_like(arg_types[i]))
          fail(e.op, "argument " + std::to_string(i + 1) +
                         " must be a number or boolean, got " +
                         arg_types[i].to_string());
      return number_type();
    case PrimOp::SumAll: {
      const Type& s = want_set(0);
      if (!numeric_like(*s.elem))
        fail(e.op, "needs a set of numbers or booleans, got " + s.to_string());
      return number_type();
    }
    case PrimOp::Size:
      want(0, color_type());
      return number_type();
    case PrimOp::RowL:
    case PrimOp::ColL:
      want(0, location_type());
      return number_type();
    case PrimOp::SetSize:
      want_set(0);
      return number_type();
    case PrimOp::ColorFn:
      want(0, location_type());
      return color_type();
    case PrimOp::OrientFn:
      want(0, color_type());
      return orientation_type();
    case PrimOp::TopLeft:
    case PrimOp::BottomRight: {
      const Type& s = want_set(0);
      if (s.elem->kind != TypeKind::Location)
        fail(e.op, "needs a set of locations, got " + s.to_string());
      return location_type();
    }
    case PrimOp::ColoredTiles:
      want(0, color_type());
      return set_of(location_type());
    case PrimOp::SetWrap:
    case PrimOp::Unique:
      return want_set(0);
    case PrimOp::Union:
    case PrimOp::Intersection:
    case PrimOp::SetDifference: {
      const Type& a = want_set(0);
      const Type& b = want_set(1);
      if (!(a == b))
        fail(e.op, "element types differ: " + a.to_string() + " vs " +
                       b.to_string());
      return a;
    }
    case PrimOp::Map:
      break;  // handled above
  }
  throw TypeError("unhandled primitive");
}

Type check(const Expr& e, TypeEnv& env) {
  switch (e.kind) {
    case Expr::Kind::BoolLit: return boolean_type();
    case Expr::Kind::NumberLit: return number_type();
    case Expr::Kind::ColorLit: return color_type();
    case Expr::Kind::OrientLit: return orientation_type();
    case Expr::Kind::LocationLit: return location_type();
    case Expr::Kind::AllTilesLit: return set_of(location_type());
    case Expr::Kind::AllColorsLit: return set_of(color_type());
    case Expr::Kind::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (*it->first == e.name) return it->second;
      throw TypeError("unbound variable " + e.name);
    case Expr::Kind::Lambda:
      throw TypeError("lambda only allowed as the function argument of map");
    case Expr::Kind::App:
      return check_app(e, env);
  }
  throw TypeError("unhandled expression kind");
}

}  // namespace

Type typecheck(const Expr& e) {
  TypeEnv env;
  return check(e, env);
}

AnswerType top_level_type(const Expr& e) {
  Type t = typecheck(e);
  switch (t.kind) {
    case TypeKind::Boolean: return AnswerType::Boolean;
    case TypeKind::Number: return AnswerType::Number;
    case TypeKind::Color: return AnswerType::Color;
    case TypeKind::Orientation: return AnswerType::Orientation;
    case TypeKind::Location: return AnswerType::Location;
    case TypeKind::Set:
      throw TypeError("a question must produce a single value, not a set");
  }
  throw TypeError("unhandled type");
}

}  // namespace battleship
