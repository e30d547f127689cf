#include <cctype>
#include <optional>
#include <unordered_map>

#include "battleship/dsl.hpp"

namespace battleship {

namespace {

using PrimInfo = PrimSignature;

const std::unordered_map<std::string, PrimInfo>& prim_table() {
  static const std::unordered_map<std::string, PrimInfo> table = {
      {"and", {PrimOp::And, 2}},
      {"or", {PrimOp::Or, 2}},
      {"not", {PrimOp::Not, 1}},
      {"==", {PrimOp::Eq, 2}},
      {">", {PrimOp::Gt, 2}},
      {"<", {PrimOp::Lt, 2}},
      {"any", {PrimOp::Any, 1}},
      {"all", {PrimOp::All, 1}},
      {"touch", {PrimOp::Touch, 2}},
      {"+", {PrimOp::Plus, 2}},
      {"-", {PrimOp::Minus, 2}},
      {"++", {PrimOp::SumAll, 1}},
      {"size", {PrimOp::Size, 1}},
      {"rowL", {PrimOp::RowL, 1}},
      {"colL", {PrimOp::ColL, 1}},
      {"setSize", {PrimOp::SetSize, 1}},
      {"color", {PrimOp::ColorFn, 1}},
      {"orient", {PrimOp::OrientFn, 1}},
      {"topleft", {PrimOp::TopLeft, 1}},
      {"bottomright", {PrimOp::BottomRight, 1}},
      {"coloredTiles", {PrimOp::ColoredTiles, 1}},
      {"set", {PrimOp::SetWrap, 1}},
      {"union", {PrimOp::Union, 2}},
      {"intersection", {PrimOp::Intersection, 2}},
      {"setDifference", {PrimOp::SetDifference, 2}},
      {"unique", {PrimOp::Unique, 1}},
      {"map", {PrimOp::Map, 2}},
  };
  return table;
}

struct Token {
  enum class Kind { LParen, RParen, Atom } kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      tokens.push_back({Token::Kind::LParen, "(", i++});
      continue;
    }
    if (c == ')') {
      tokens.push_back({Token::Kind::RParen, ")", i++});
      continue;
    }
    std::size_t start = i;
    while (i < src.size() && src[i] != '(' && src[i] != ')' &&
           !std::isspace(static_cast<unsigned char>(src[i])))
      ++i;
    tokens.push_back({Token::Kind::Atom, src.substr(start, i - start), start});
  }
  return tokens;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const GameConfig& config)
      : tokens_(std::move(tokens)), config_(config) {}

  ExprPtr parse_all() {
    if (tokens_.empty()) throw ParseError("empty program", 0);
    ExprPtr e = parse_expr();
    if (pos_ != tokens_.size())
      throw ParseError("trailing input after program", tokens_[pos_].pos);
    return e;
  }

 private:
  const Token& peek() const {
    if (pos_ >= tokens_.size())
      throw ParseError("unexpected end of input",
                       tokens_.empty() ? 0 : tokens_.back().pos + 1);
    return tokens_[pos_];
  }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }

  bool is_bound(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (*it == name) return true;
    return false;
  }

  ExprPtr parse_expr() {
    Token t = next();
    if (t.kind == Token::Kind::RParen)
      throw ParseError("unexpected ')'", t.pos);
    if (t.kind == Token::Kind::Atom) return parse_atom(t);

    // '(' head args... ')'
    Token head = next();
    if (head.kind != Token::Kind::Atom)
      throw ParseError("expected an operator after '('", head.pos);

    if (head.text == "lambda") return parse_lambda(head);

    auto it = prim_table().find(head.text);
    if (it == prim_table().end())
      throw ParseError("unknown primitive '" + head.text + "'", head.pos);

    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::App;
    node->op = it->second.op;
    while (peek().kind != Token::Kind::RParen)
      node->args.push_back(parse_expr());
    Token close = next();  // consume ')'
    if (static_cast<int>(node->args.size()) != it->second.arity)
      throw ParseError("'" + head.text + "' takes " +
                           std::to_string(it->second.arity) + " argument" +
                           (it->second.arity == 1 ? "" : "s") + ", got " +
                           std::to_string(node->args.size()),
                       close.pos);
    return node;
  }

  ExprPtr parse_lambda(const Token& head) {
    Token param = next();
    if (param.kind != Token::Kind::Atom)
      throw ParseError("lambda needs a parameter name", param.pos);
    if (prim_table().count(param.text) || param.text == "lambda" ||
        classify_literal(param.text))
      throw ParseError("lambda parameter '" + param.text +
                           "' shadows a known name",
                       param.pos);
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Lambda;
    node->name = param.text;
    scope_.push_back(param.text);
    node->body = parse_expr();
    scope_.pop_back();
    Token close = next();
    if (close.kind != Token::Kind::RParen)
      throw ParseError("lambda takes exactly one body expression", close.pos);
    (void)head;
    return node;
  }

  // Literal classification shared by atoms and the lambda-parameter check.
  // Returns nullopt when the text is not a literal.
  std::optional<Expr> classify_literal(const std::string& text) const {
    Expr e;
    if (text == "TRUE" || text == "FALSE") {
      e.kind = Expr::Kind::BoolLit;
      e.bval = text == "TRUE";
      return e;
    }
    if (text.size() == 1 && std::isdigit(static_cast<unsigned char>(text[0]))) {
      e.kind = Expr::Kind::NumberLit;
      e.num = text[0] - '0';
      return e;
    }
    if (text == "H" || text == "V") {
      e.kind = Expr::Kind::OrientLit;
      e.orient = text == "H" ? Orientation::H : Orientation::V;
      return e;
    }
    if (text.size() == 2 && text[0] >= '1' && text[0] <= '9' &&
        text[1] >= 'A' && text[1] <= 'Z') {
      e.kind = Expr::Kind::LocationLit;
      e.loc = {text[0] - '0', text[1] - 'A' + 1};
      return e;
    }
    if (text == "AllTiles") {
      e.kind = Expr::Kind::AllTilesLit;
      return e;
    }
    if (text == "AllColors") {
      e.kind = Expr::Kind::AllColorsLit;
      return e;
    }
    if (text == "Water" || config_.color_code(text)) {
      e.kind = Expr::Kind::ColorLit;
      e.name = text;
      return e;
    }
    return std::nullopt;
  }

  ExprPtr parse_atom(const Token& t) {
    // A bound variable wins over everything; parameters cannot shadow
    // literals or primitives (rejected at the binding site).
    if (is_bound(t.text)) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Var;
      node->name = t.text;
      return node;
    }
    if (auto lit = classify_literal(t.text))
      return std::make_shared<Expr>(std::move(*lit));
    if (prim_table().count(t.text))
      throw ParseError("primitive '" + t.text +
                           "' must be applied in parentheses",
                       t.pos);
    throw ParseError("unknown symbol '" + t.text + "'", t.pos);
  }

  std::vector<Token> tokens_;
  const GameConfig& config_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace

const PrimSignature* prim_by_name(const std::string& name) {
  const auto& table = prim_table();
  auto it = table.find(name);
  return it == table.end() ? nullptr : &it->second;
}

int prim_arity(PrimOp op) {
  for (const auto& [name, info] : prim_table())
    if (info.op == op) return info.arity;
  throw Error("unknown primitive");
}

ExprPtr parse_program(const std::string& text, const ConfigPtr& config) {
  return Parser(tokenize(text), *config).parse_all();
}

}  // namespace battleship
