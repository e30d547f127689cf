#include "battleship/pcfg.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "battleship/errors.hpp"

namespace battleship {

namespace {

bool contains_lambda(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Lambda:
      return true;
    case Expr::Kind::App:
      if (e.op == PrimOp::Map) return true;
      for (const auto& a : e.args)
        if (contains_lambda(*a)) return true;
      return false;
    default:
      return false;
  }
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

int Grammar::find(const std::string& name) const {
  for (std::size_t i = 0; i < nonterminals.size(); ++i)
    if (nonterminals[i].name == name) return static_cast<int>(i);
  return -1;
}

int Grammar::require(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw InputError("grammar has no nonterminal named " + name);
  return i;
}

void Grammar::validate() {
  if (nonterminals.empty()) throw InputError("grammar has no nonterminals");
  if (root < 0 || root >= static_cast<int>(nonterminals.size()))
    throw InputError("grammar root out of range");
  const int n = static_cast<int>(nonterminals.size());
  for (auto& nt : nonterminals) {
    if (nt.name.empty() || nt.name[0] == '@')
      throw InputError("bad nonterminal name");
    if (nt.productions.empty())
      throw InputError("nonterminal " + nt.name + " has no productions");
    double sum = 0.0;
    for (auto& p : nt.productions) {
      if (!(p.weight > 0.0) || !std::isfinite(p.weight))
        throw InputError("production weight must be positive in " + nt.name);
      sum += p.weight;
      switch (p.kind) {
        case Production::Kind::Literal:
          if (!p.literal)
            throw InputError("literal production without a tree in " +
                             nt.name);
          p.uses_lambda = contains_lambda(*p.literal);
          break;
        case Production::Kind::Forward:
          if (p.target < 0 || p.target >= n)
            throw InputError("forward production out of range in " + nt.name);
          p.uses_lambda = false;
          break;
        case Production::Kind::Apply: {
          if (static_cast<int>(p.children.size()) != prim_arity(p.op))
            throw InputError("wrong arity for " + std::string(prim_name(p.op)) +
                             " in " + nt.name);
          p.uses_lambda = p.op == PrimOp::Map;
          for (const auto& c : p.children) {
            if (c.nt >= n || (c.nt < 0 && !c.fixed))
              throw InputError("bad production child in " + nt.name);
            if (c.nt < 0 && contains_lambda(*c.fixed)) p.uses_lambda = true;
          }
          break;
        }
      }
    }
    const double share = 1.0 / static_cast<double>(nt.productions.size());
    nt.uniform = true;
    for (auto& p : nt.productions) {
      p.weight /= sum;
      if (std::fabs(p.weight - share) > 1e-12) nt.uniform = false;
    }
  }
}

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

std::string Grammar::to_text() const {
  std::ostringstream out;
  auto emit = [&](const Nonterminal& nt) {
    out << nt.name << " ->";
    for (std::size_t i = 0; i < nt.productions.size(); ++i) {
      const Production& p = nt.productions[i];
      out << (i == 0 ? " " : " | ");
      if (!nt.uniform) out << format_weight(p.weight) << " : ";
      switch (p.kind) {
        case Production::Kind::Literal:
          out << pretty_print(*p.literal);
          break;
        case Production::Kind::Forward:
          out << '@' << nonterminals[p.target].name;
          break;
        case Production::Kind::Apply:
          out << '(' << prim_name(p.op);
          for (const auto& c : p.children) {
            out << ' ';
            if (c.nt >= 0)
              out << '@' << nonterminals[c.nt].name;
            else
              out << pretty_print(*c.fixed);
          }
          out << ')';
          break;
      }
    }
    out << '\n';
  };
  emit(nonterminals[root]);
  for (int i = 0; i < static_cast<int>(nonterminals.size()); ++i)
    if (i != root) emit(nonterminals[i]);
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// A flat template like "(union @SetLoc @SetLoc)": opening paren, primitive
// name, then atom or @Nonterminal children. Anything without an '@' is
// instead parsed whole as a fixed tree, so nesting never appears here.
Production parse_template(const std::string& text, const Grammar& g,
                          const ConfigPtr& config) {
  Production p;
  p.kind = Production::Kind::Apply;
  if (text.empty() || text.front() != '(' || text.back() != ')')
    throw ParseError("production template must be parenthesized: " + text, 0);
  std::istringstream in(text.substr(1, text.size() - 2));
  std::string tok;
  if (!(in >> tok)) throw ParseError("empty production template", 0);
  const PrimSignature* sig = prim_by_name(tok);
  if (!sig) throw ParseError("unknown primitive in template: " + tok, 0);
  p.op = sig->op;
  while (in >> tok) {
    GrammarChild c;
    if (tok.front() == '@') {
      c.nt = g.find(tok.substr(1));
      if (c.nt < 0)
        throw ParseError("unknown nonterminal in template: " + tok, 0);
    } else if (tok.front() == '(' || tok.back() == ')') {
      throw ParseError("nested templates are not supported: " + text, 0);
    } else {
      c.fixed = parse_program(tok, config);
    }
    p.children.push_back(std::move(c));
  }
  if (static_cast<int>(p.children.size()) != sig->arity)
    throw ParseError("wrong arity in template: " + text, 0);
  return p;
}

}  // namespace

Grammar Grammar::from_text(const std::string& text, const ConfigPtr& config) {
  // Pass 1: collect nonterminal names so templates can reference forward.
  Grammar g;
  std::vector<std::pair<std::string, std::string>> lines;  // name -> rhs
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    std::size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      throw ParseError("grammar line without '->': " + line, 0);
    std::string name = trim(line.substr(0, arrow));
    if (name.empty() || name[0] == '@' || g.find(name) >= 0)
      throw ParseError("bad or duplicate nonterminal name: " + name, 0);
    g.nonterminals.push_back({name, {}, true});
    lines.emplace_back(name, trim(line.substr(arrow + 2)));
  }
  if (g.nonterminals.empty()) throw ParseError("empty grammar text", 0);
  g.root = 0;

  // Pass 2: parse the alternatives.
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto& nt = g.nonterminals[i];
    std::istringstream alts(lines[i].second);
    std::string alt;
    while (std::getline(alts, alt, '|')) {
      alt = trim(alt);
      if (alt.empty())
        throw ParseError("empty alternative in " + nt.name, 0);
      double weight = 1.0;
      std::size_t colon = alt.find(':');
      if (colon != std::string::npos) {
        std::string head = trim(alt.substr(0, colon));
        std::size_t consumed = 0;
        try {
          weight = std::stod(head, &consumed);
        } catch (const std::exception&) {
          consumed = 0;
        }
        if (consumed != head.size() || head.empty())
          throw ParseError("bad weight in " + nt.name + ": " + head, 0);
        alt = trim(alt.substr(colon + 1));
      }
      Production p;
      if (alt[0] == '@') {
        p.kind = Production::Kind::Forward;
        p.target = g.find(alt.substr(1));
        if (p.target < 0)
          throw ParseError("unknown nonterminal: " + alt, 0);
      } else if (alt.find('@') != std::string::npos) {
        p = parse_template(alt, g, config);
      } else {
        p.kind = Production::Kind::Literal;
        p.literal = parse_program(alt, config);
      }
      p.weight = weight;
      nt.productions.push_back(std::move(p));
    }
  }
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Default grammar
// ---------------------------------------------------------------------------

Grammar default_battleship_grammar(const ConfigPtr& config) {
  if (config->rows > 9 || config->cols > 26)
    throw InputError(
        "grammar location literals need at most 9 rows and 26 columns");

  Grammar g;
  auto add = [&](const char* name) {
    g.nonterminals.push_back({name, {}, true});
    return static_cast<int>(g.nonterminals.size()) - 1;
  };
  const int answer = add("Answer");
  const int boolean = add("Bool");
  const int num = add("Num");
  const int numb = add("NumOrBool");
  const int color = add("Color");
  const int ship = add("Ship");
  const int orient = add("Orient");
  const int loc = add("Loc");
  const int set_loc = add("SetLoc");
  const int set_color = add("SetColor");

  auto lit = [&](const std::string& text) {
    Production p;
    p.kind = Production::Kind::Literal;
    p.literal = parse_program(text, config);
    return p;
  };
  auto fwd = [&](int target) {
    Production p;
    p.kind = Production::Kind::Forward;
    p.target = target;
    return p;
  };
  auto app = [&](PrimOp op, std::initializer_list<int> kids) {
    Production p;
    p.kind = Production::Kind::Apply;
    p.op = op;
    for (int k : kids) p.children.push_back({k, nullptr});
    return p;
  };

  auto& a = g.nonterminals[answer].productions;
  a = {fwd(boolean), fwd(num), fwd(color), fwd(orient), fwd(loc)};

  auto& b = g.nonterminals[boolean].productions;
  b.push_back(lit("TRUE"));
  b.push_back(lit("FALSE"));
  b.push_back(app(PrimOp::And, {boolean, boolean}));
  b.push_back(app(PrimOp::Or, {boolean, boolean}));
  b.push_back(app(PrimOp::Not, {boolean}));
  b.push_back(app(PrimOp::Gt, {num, num}));
  b.push_back(app(PrimOp::Lt, {num, num}));
  b.push_back(app(PrimOp::Touch, {ship, ship}));
  b.push_back(app(PrimOp::Eq, {num, num}));
  b.push_back(app(PrimOp::Eq, {color, color}));
  b.push_back(app(PrimOp::Eq, {orient, orient}));
  b.push_back(app(PrimOp::Eq, {loc, loc}));
  b.push_back(app(PrimOp::Eq, {boolean, boolean}));

  auto& m = g.nonterminals[num].productions;
  for (int d = 0; d <= 9; ++d) m.push_back(lit(std::to_string(d)));
  m.push_back(app(PrimOp::Plus, {numb, numb}));
  m.push_back(app(PrimOp::Minus, {numb, numb}));
  m.push_back(app(PrimOp::Size, {ship}));
  m.push_back(app(PrimOp::RowL, {loc}));
  m.push_back(app(PrimOp::ColL, {loc}));
  m.push_back(app(PrimOp::SetSize, {set_loc}));
  m.push_back(app(PrimOp::SetSize, {set_color}));

  g.nonterminals[numb].productions = {fwd(num), fwd(boolean)};

  auto& c = g.nonterminals[color].productions;
  c = {fwd(ship), lit("Water"), app(PrimOp::ColorFn, {loc})};

  auto& s = g.nonterminals[ship].productions;
  for (const auto& spec : config->ships) s.push_back(lit(spec.id));

  auto& o = g.nonterminals[orient].productions;
  o = {lit("H"), lit("V"), app(PrimOp::OrientFn, {ship})};

  auto& l = g.nonterminals[loc].productions;
  for (int r = 1; r <= config->rows; ++r)
    for (int col = 1; col <= config->cols; ++col)
      l.push_back(lit(Coord{r, col}.label()));
  l.push_back(app(PrimOp::TopLeft, {set_loc}));
  l.push_back(app(PrimOp::BottomRight, {set_loc}));

  auto& sl = g.nonterminals[set_loc].productions;
  sl.push_back(app(PrimOp::ColoredTiles, {color}));
  sl.push_back(lit("(set AllTiles)"));
  sl.push_back(app(PrimOp::Union, {set_loc, set_loc}));
  sl.push_back(app(PrimOp::Intersection, {set_loc, set_loc}));
  sl.push_back(app(PrimOp::SetDifference, {set_loc, set_loc}));
  sl.push_back(app(PrimOp::Unique, {set_loc}));

  g.nonterminals[set_color].productions = {lit("(set AllColors)")};

  g.root = answer;
  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

ProductionStats::ProductionStats(const Grammar& g) {
  counts.reserve(g.nonterminals.size());
  for (const auto& nt : g.nonterminals)
    counts.emplace_back(nt.productions.size(), 0);
}

void ProductionStats::merge(const ProductionStats& other) {
  if (counts.size() != other.counts.size())
    throw InputError("production stats shape mismatch");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != other.counts[i].size())
      throw InputError("production stats shape mismatch");
    for (std::size_t j = 0; j < counts[i].size(); ++j)
      counts[i][j] += other.counts[i][j];
  }
}

std::uint64_t ProductionStats::total(int nt) const {
  std::uint64_t t = 0;
  for (std::uint64_t c : counts[nt]) t += c;
  return t;
}

namespace {

struct DepthReject {};

void check_sample_config(const SampleConfig& cfg) {
  if (cfg.max_depth < 2) throw InputError("max_depth must be at least 2");
  if (cfg.max_attempts < 1) throw InputError("max_attempts must be at least 1");
}

class Sampler {
 public:
  Sampler(const Grammar& g, const SampleConfig& cfg, Rng& rng,
          ProductionStats* stats)
      : g_(g), cfg_(cfg), rng_(rng), stats_(stats) {}

  ExprPtr expand(int nt_index, int depth, int hops) {
    if (depth > cfg_.max_depth) throw DepthReject{};
    // A cycle of forward productions makes no progress; cut it off well past
    // anything a sane grammar produces.
    if (hops > 64 * static_cast<int>(g_.nonterminals.size()) + 64)
      throw SamplingError("forward production cycle in grammar");
    const Nonterminal& nt = g_.nonterminals[nt_index];
    const Production& p = nt.productions[pick(nt, nt_index)];
    switch (p.kind) {
      case Production::Kind::Literal:
        if (depth + ast_depth(*p.literal) - 1 > cfg_.max_depth)
          throw DepthReject{};
        return p.literal;
      case Production::Kind::Forward:
        return expand(p.target, depth, hops + 1);
      case Production::Kind::Apply: {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::App;
        e->op = p.op;
        e->args.reserve(p.children.size());
        for (const auto& c : p.children) {
          if (c.nt >= 0) {
            e->args.push_back(expand(c.nt, depth + 1, 0));
          } else {
            if (depth + ast_depth(*c.fixed) > cfg_.max_depth)
              throw DepthReject{};
            e->args.push_back(c.fixed);
          }
        }
        return e;
      }
    }
    throw Error("unreachable production kind");
  }

 private:
  int pick(const Nonterminal& nt, int nt_index) {
    const auto& prods = nt.productions;
    int chosen = -1;
    bool filtered = false;
    if (cfg_.exclude_lambda) {
      for (const auto& p : prods) filtered |= p.uses_lambda;
    }
    if (!filtered && nt.uniform) {
      chosen = static_cast<int>(random_below(rng_, prods.size()));
    } else {
      double total = 0.0;
      for (const auto& p : prods)
        if (!(filtered && p.uses_lambda)) total += p.weight;
      if (total <= 0.0)
        throw SamplingError("nonterminal " + nt.name +
                            " has no admissible productions");
      double u = random_unit(rng_) * total;
      for (std::size_t i = 0; i < prods.size(); ++i) {
        if (filtered && prods[i].uses_lambda) continue;
        u -= prods[i].weight;
        chosen = static_cast<int>(i);
        if (u <= 0.0) break;
      }
    }
    if (stats_) ++stats_->counts[nt_index][chosen];
    return chosen;
  }

  const Grammar& g_;
  const SampleConfig& cfg_;
  Rng& rng_;
  ProductionStats* stats_;
};

}  // namespace

ExprPtr sample_program(const Grammar& g, const SampleConfig& cfg, Rng& rng,
                       ProductionStats* stats) {
  check_sample_config(cfg);
  if (g.nonterminals.empty()) throw InputError("grammar has no nonterminals");
  if (stats && stats->counts.empty()) *stats = ProductionStats(g);
  Sampler sampler(g, cfg, rng, stats);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    try {
      ExprPtr e = sampler.expand(g.root, 1, 0);
      if (cfg.filter_depth1 && ast_depth(*e) < 2) continue;
      return e;
    } catch (const DepthReject&) {
      continue;
    }
  }
  throw SamplingError("no admissible program after " +
                      std::to_string(cfg.max_attempts) + " attempts");
}

namespace {

template <bool Parallel>
std::vector<ExprPtr> batch_impl(const Grammar& g, const SampleConfig& cfg,
                                std::size_t n, ProductionStats* stats) {
  check_sample_config(cfg);
  if (g.nonterminals.empty()) throw InputError("grammar has no nonterminals");
  if (stats && stats->counts.empty()) *stats = ProductionStats(g);
  std::vector<ExprPtr> out(n);
  std::atomic<bool> failed{false};
  std::string error_text;
  std::mutex error_mu;

  auto run_index = [&](std::size_t i, ProductionStats* local) {
    if (failed.load(std::memory_order_relaxed)) return;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    try {
      out[i] = sample_program(g, cfg, rng, local);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!failed.exchange(true)) error_text = e.what();
    }
  };

  if constexpr (Parallel) {
#pragma omp parallel
    {
      ProductionStats local;
      if (stats) local = ProductionStats(g);
#pragma omp for schedule(dynamic, 64)
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        run_index(static_cast<std::size_t>(i), stats ? &local : nullptr);
      if (stats) {
#pragma omp critical(battleship_pcfg_stats)
        stats->merge(local);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) run_index(i, stats);
  }

  if (failed.load()) throw SamplingError(error_text);
  return out;
}

}  // namespace

std::vector<ExprPtr> sample_batch(const Grammar& g, const SampleConfig& cfg,
                                  std::size_t n, ProductionStats* stats) {
  return batch_impl<true>(g, cfg, n, stats);
}

std::vector<ExprPtr> sample_batch_serial(const Grammar& g,
                                         const SampleConfig& cfg,
                                         std::size_t n,
                                         ProductionStats* stats) {
  return batch_impl<false>(g, cfg, n, stats);
}

}  // namespace battleship
