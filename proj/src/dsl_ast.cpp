#include <algorithm>

#include "battleship/dsl.hpp"

namespace battleship {

const char* prim_name(PrimOp op) {
  switch (op) {
    case PrimOp::And: return "and";
    case PrimOp::Or: return "or";
    case PrimOp::Not: return "not";
    case PrimOp::Eq: return "==";
    case PrimOp::Gt: return ">";
    case PrimOp::Lt: return "<";
    case PrimOp::Any: return "any";
    case PrimOp::All: return "all";
    case PrimOp::Touch: return "touch";
    case PrimOp::Plus: return "+";
    case PrimOp::Minus: return "-";
    case PrimOp::SumAll: return "++";
    case PrimOp::Size: return "size";
    case PrimOp::RowL: return "rowL";
    case PrimOp::ColL: return "colL";
    case PrimOp::SetSize: return "setSize";
    case PrimOp::ColorFn: return "color";
    case PrimOp::OrientFn: return "orient";
    case PrimOp::TopLeft: return "topleft";
    case PrimOp::BottomRight: return "bottomright";
    case PrimOp::ColoredTiles: return "coloredTiles";
    case PrimOp::SetWrap: return "set";
    case PrimOp::Union: return "union";
    case PrimOp::Intersection: return "intersection";
    case PrimOp::SetDifference: return "setDifference";
    case PrimOp::Unique: return "unique";
    case PrimOp::Map: return "map";
  }
  return "?";
}

int ast_size(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::App: {
      int n = 1;
      for (const auto& a : e.args) n += ast_size(*a);
      return n;
    }
    case Expr::Kind::Lambda:
      return 1 + ast_size(*e.body);
    default:
      return 1;
  }
}

int ast_depth(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::App: {
      int deepest = 0;
      for (const auto& a : e.args) deepest = std::max(deepest, ast_depth(*a));
      return 1 + deepest;
    }
    case Expr::Kind::Lambda:
      return 1 + ast_depth(*e.body);
    default:
      return 1;
  }
}

namespace {

void print_to(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::BoolLit:
      out += e.bval ? "TRUE" : "FALSE";
      return;
    case Expr::Kind::NumberLit:
      out += std::to_string(e.num);
      return;
    case Expr::Kind::ColorLit:
    case Expr::Kind::Var:
      out += e.name;
      return;
    case Expr::Kind::OrientLit:
      out += orientation_letter(e.orient);
      return;
    case Expr::Kind::LocationLit:
      out += e.loc.label();
      return;
    case Expr::Kind::AllTilesLit:
      out += "AllTiles";
      return;
    case Expr::Kind::AllColorsLit:
      out += "AllColors";
      return;
    case Expr::Kind::Lambda:
      out += "(lambda ";
      out += e.name;
      out += ' ';
      print_to(*e.body, out);
      out += ')';
      return;
    case Expr::Kind::App:
      out += '(';
      out += prim_name(e.op);
      for (const auto& a : e.args) {
        out += ' ';
        print_to(*a, out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

}  // namespace battleship
