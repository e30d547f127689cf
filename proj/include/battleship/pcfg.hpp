#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "battleship/dsl.hpp"
#include "battleship/rng.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// A probabilistic context-free grammar over question programs. Productions
// come in three shapes:
//
//   Literal  -> emit a fixed subtree ("TRUE", "3B", "(set AllTiles)")
//   Forward  -> continue from another nonterminal without adding a node
//   Apply    -> emit a primitive application whose children are expanded
//               nonterminals (or fixed subtrees)
//
// Weights within a nonterminal are normalized by validate(); the default
// grammar leaves them uniform.
// ---------------------------------------------------------------------------

struct GrammarChild {
  int nt = -1;    // nonterminal index when >= 0 ...
  ExprPtr fixed;  // ... otherwise a fixed subtree
};

struct Production {
  enum class Kind : std::uint8_t { Literal, Forward, Apply };

  Kind kind = Kind::Literal;
  ExprPtr literal;                    // Literal
  int target = -1;                    // Forward
  PrimOp op = PrimOp::And;            // Apply
  std::vector<GrammarChild> children; // Apply
  double weight = 1.0;
  // Set by validate(): the template mentions a lambda (or map), so the
  // sampler skips it when SampleConfig::exclude_lambda is on.
  bool uses_lambda = false;
};

struct Nonterminal {
  std::string name;
  std::vector<Production> productions;
  bool uniform = true;  // maintained by validate()
};

class Grammar {
 public:
  std::vector<Nonterminal> nonterminals;
  int root = 0;

  int find(const std::string& name) const;  // -1 when absent
  int require(const std::string& name) const;

  // Checks structure (root in range, every nonterminal nonempty, child
  // references valid, arities correct, weights positive), normalizes each
  // nonterminal's weights to sum to 1, and recomputes the lambda flags.
  // Throws InputError on violations.
  void validate();

  // Text form: one "Name -> alt | alt | ..." line per nonterminal, the first
  // line being the root. Alternatives are literal atoms, @Nonterminal
  // forwards, or flat templates like "(and @Bool @Bool)"; a non-uniform
  // nonterminal carries "weight : " prefixes. Literal atoms are classified
  // against the config, so ship names follow it.
  static Grammar from_text(const std::string& text,
                           const ConfigPtr& config = default_config());
  std::string to_text() const;
};

// The sampling grammar for a board configuration: uniform weights, rooted at
// Answer, expanding to the five ground answer types. Lambda-free; see
// docs/primitives.md for the covered primitive inventory.
Grammar default_battleship_grammar(const ConfigPtr& config = default_config());

struct SampleConfig {
  std::uint64_t seed = 0;
  int max_depth = 12;      // rejection-resample any deeper derivation
  int max_attempts = 100;  // per sample; SamplingError when exhausted
  bool exclude_lambda = true;
  bool filter_depth1 = true;  // reject bare-literal answers
};

// Raw per-production draw counts, indexed [nonterminal][production]. Counts
// every choice the sampler makes, including draws inside attempts that are
// later rejected, so per-nonterminal frequencies estimate the production
// weights directly.
struct ProductionStats {
  std::vector<std::vector<std::uint64_t>> counts;

  ProductionStats() = default;
  explicit ProductionStats(const Grammar& g);
  void merge(const ProductionStats& other);
  std::uint64_t total(int nt) const;
};

// One program: expands from the root, rejecting derivations that exceed
// max_depth (and depth-1 literals when filter_depth1). Throws SamplingError
// after max_attempts rejections.
ExprPtr sample_program(const Grammar& g, const SampleConfig& cfg, Rng& rng,
                       ProductionStats* stats = nullptr);

// n programs with per-index seeds derived from cfg.seed, so the batch is
// reproducible and independent of thread count; element i always equals
// sample_program with Rng(derive_seed(cfg.seed, i)).
std::vector<ExprPtr> sample_batch(const Grammar& g, const SampleConfig& cfg,
                                  std::size_t n,
                                  ProductionStats* stats = nullptr);
std::vector<ExprPtr> sample_batch_serial(const Grammar& g,
                                         const SampleConfig& cfg,
                                         std::size_t n,
                                         ProductionStats* stats = nullptr);

}  // namespace battleship
