#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "battleship/candidates.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Summary statistics over scored candidate batches: per-metric mean and
// standard error, Welch's t-test, percentile-bootstrap confidence intervals,
// Q-Q quantile pairs, and answer-type proportions. Everything here is hand
// computed; tests compare against tables frozen from reference
// implementations (see tools/gen_stats_fixtures.py).
// ---------------------------------------------------------------------------

// Mean and standard error (sample sd / sqrt(n)) of one metric, with the
// number of records it was computed over. A single observation reports
// std_error 0 and sets `degenerate`; n = 0 leaves the zeros meaningless.
struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  bool degenerate = false;
};

MetricSummary summarize_metric(const std::vector<double>& values);

// One row of the summary table. EIG, depth, and size are computed over the
// valid records; % valid and % informative are fractions of all records;
// question words covers every record carrying question text (grammar-only
// batches report words with n = 0).
struct SummaryRow {
  std::string label;
  std::size_t k = 1;
  std::size_t n_records = 0;
  MetricSummary eig;
  MetricSummary valid;
  MetricSummary informative;
  MetricSummary depth;
  MetricSummary size;
  MetricSummary words;
};

SummaryRow summarize(const std::vector<CandidateRecord>& records,
                     const std::string& label, std::size_t k = 1);

// Welch's unequal-variance t-test with the Welch-Satterthwaite degrees of
// freedom and a two-sided p-value. Requires two observations per sample and
// nonzero variance in at least one.
struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;
};

WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b) by continued fraction, and the
// two-sided Student-t tail probability built on it. Exposed because the
// oracle fixtures pin them directly.
double incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double dof);

// Percentile with linear interpolation between order statistics (the numpy
// default): quantile({1,2,3,4}, 25) = 1.75. Sorts its copy of the values.
double quantile(std::vector<double> values, double pct);

// Percentile bootstrap of the mean: n_boot resampled means, each replicate
// seeded by derive_seed(seed, replicate) so the result is independent of
// execution order; the OpenMP variant equals the serial one bitwise.
std::pair<double, double> bootstrap_ci(const std::vector<double>& values,
                                       double level, std::size_t n_boot,
                                       std::uint64_t seed);
std::pair<double, double> bootstrap_ci_serial(const std::vector<double>& values,
                                              double level, std::size_t n_boot,
                                              std::uint64_t seed);

// Paired quantiles of two samples at a shared percentile grid; both value
// sequences are nondecreasing because quantiles are monotone in the
// percentile.
struct QQData {
  std::vector<double> percentiles;
  std::vector<double> a;
  std::vector<double> b;
};

QQData qq_points(const std::vector<double>& a, const std::vector<double>& b,
                 const std::vector<double>& percentiles);

// Proportion of each top-level answer type among the valid records. All
// five types are always present as keys; the values sum to 1. Throws
// InputError when no record is valid.
std::map<AnswerType, double> type_distribution(
    const std::vector<CandidateRecord>& records);

}  // namespace battleship
