#pragma once

#include <optional>

#include "battleship/dsl.hpp"
#include "battleship/hypotheses.hpp"

namespace battleship {

// Probability of each distinct answer under the hypothesis distribution.
// Entries are sorted by value_less, so output order is deterministic.
struct AnswerEntry {
  Value value;
  double probability = 0.0;
};

struct AnswerDistribution {
  std::vector<AnswerEntry> entries;
};

// Evaluates the program on every board and aggregates weights by answer.
// Throws EvalError if the program hits a runtime domain error on any board
// (the program is then invalid for this space). The program must typecheck
// with a ground top-level type.
AnswerDistribution answer_distribution(const Expr& program,
                                       const HypothesisSpace& space);

// Shannon entropy in bits.
double entropy(const AnswerDistribution& dist);
double entropy(const HypothesisSpace& space);

// Bayes update: keep the boards on which the program yields `answer`,
// renormalize. A uniform prior stays uniform over the surviving boards.
// Throws InputError when the answer has probability zero.
HypothesisSpace posterior_update(const HypothesisSpace& space,
                                 const Expr& program, const Value& answer);

// Expected information gain of asking the question, in bits:
//     H(space) - sum_y p(y) H(space | answer = y)
// computed with one pass of per-answer aggregation. For our deterministic
// program semantics this equals entropy(answer_distribution(...)); tests
// hold both routes to 1e-9 of each other. Returns exactly 0 when every board
// gives the same answer. Throws EvalError like answer_distribution.
double eig(const Expr& program, const HypothesisSpace& space);

// Scores many programs against one space; entry i corresponds to program i.
// nullopt marks a program that is invalid for the space (runtime domain
// error on at least one board). Programs must already typecheck. The OpenMP
// variant parallelizes across programs; each program is scored by the same
// serial per-board pass, so results are identical to score_programs_serial.
std::vector<std::optional<double>> score_programs(
    const std::vector<ExprPtr>& programs, const HypothesisSpace& space);
std::vector<std::optional<double>> score_programs_serial(
    const std::vector<ExprPtr>& programs, const HypothesisSpace& space);

}  // namespace battleship
