#include "battleship/stats.hpp"

#include <algorithm>
#include <cmath>

#include "battleship/errors.hpp"

namespace battleship {

namespace {

double mean_of(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

// Unbiased sample variance (n - 1 divisor).
double variance_of(const std::vector<double>& v, double mean) {
  double total = 0.0;
  for (double x : v) total += (x - mean) * (x - mean);
  return total / static_cast<double>(v.size() - 1);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw InputError("incomplete beta continued fraction did not converge");
}

// Percentile of an already-sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double pct) {
  const double h =
      static_cast<double>(sorted.size() - 1) * pct / 100.0;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// One bootstrap replicate: the mean of n draws with replacement.
double replicate_mean(const std::vector<double>& values, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = values.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += values[random_below(rng, n)];
  return total / static_cast<double>(n);
}

std::pair<double, double> interval_from_means(std::vector<double> means,
                                              double level) {
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  return {sorted_quantile(means, 100.0 * alpha),
          sorted_quantile(means, 100.0 * (1.0 - alpha))};
}

void check_bootstrap_args(const std::vector<double>& values, double level,
                          std::size_t n_boot) {
  if (values.empty()) throw InputError("bootstrap needs at least one value");
  if (n_boot == 0) throw InputError("bootstrap needs at least one replicate");
  if (!(level > 0.0 && level < 1.0))
    throw InputError("confidence level must lie in (0, 1)");
}

}  // namespace

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  s.mean = mean_of(values);
  if (values.size() == 1) {
    s.degenerate = true;  // sample sd undefined; reported as 0
    return s;
  }
  const double sd = std::sqrt(variance_of(values, s.mean));
  s.std_error = sd / std::sqrt(static_cast<double>(values.size()));
  return s;
}

SummaryRow summarize(const std::vector<CandidateRecord>& records,
                     const std::string& label, std::size_t k) {
  if (records.empty()) throw InputError("cannot summarize zero records");
  SummaryRow row;
  row.label = label;
  row.k = k;
  row.n_records = records.size();

  std::vector<double> eig, valid, informative, depth, size, words;
  valid.reserve(records.size());
  for (const auto& rec : records) {
    valid.push_back(rec.valid ? 1.0 : 0.0);
    informative.push_back(rec.informative ? 1.0 : 0.0);
    if (rec.valid) {
      eig.push_back(*rec.eig_bits);
      if (rec.depth) depth.push_back(*rec.depth);
      if (rec.size) size.push_back(*rec.size);
    }
    if (rec.word_count) words.push_back(*rec.word_count);
  }
  row.eig = summarize_metric(eig);
  row.valid = summarize_metric(valid);
  row.informative = summarize_metric(informative);
  row.depth = summarize_metric(depth);
  row.size = summarize_metric(size);
  row.words = summarize_metric(words);
  return row;
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw InputError("incomplete beta needs positive parameters");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log(1.0 - x));
  // The continued fraction converges fast on one side of the mean; use the
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) for the other.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw InputError("degrees of freedom must be positive");
  return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

WelchResult welch_t_test(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw InputError("Welch's t-test needs at least two observations per "
                     "sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = variance_of(a, ma);
  const double vb = variance_of(b, mb);
  if (va == 0.0 && vb == 0.0)
    throw InputError("Welch's t-test is undefined for two constant samples");

  const double sa = va / na;
  const double sb = vb / nb;
  WelchResult res;
  res.t = (ma - mb) / std::sqrt(sa + sb);
  res.dof = (sa + sb) * (sa + sb) /
            (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  res.p = student_t_two_sided_p(res.t, res.dof);
  return res;
}

double quantile(std::vector<double> values, double pct) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(pct >= 0.0 && pct <= 100.0))
    throw InputError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, pct);
}

std::pair<double, double> bootstrap_ci_serial(
    const std::vector<double>& values, double level, std::size_t n_boot,
    std::uint64_t seed) {
  check_bootstrap_args(values, level, n_boot);
  std::vector<double> means(n_boot);
  for (std::size_t rep = 0; rep < n_boot; ++rep)
    means[rep] = replicate_mean(values, derive_seed(seed, rep));
  return interval_from_means(std::move(means), level);
}

std::pair<double, double> bootstrap_ci(const std::vector<double>& values,
                                       double level, std::size_t n_boot,
                                       std::uint64_t seed) {
  check_bootstrap_args(values, level, n_boot);
  std::vector<double> means(n_boot);
#pragma omp parallel for schedule(static)
  for (std::size_t rep = 0; rep < n_boot; ++rep)
    means[rep] = replicate_mean(values, derive_seed(seed, rep));
  return interval_from_means(std::move(means), level);
}

QQData qq_points(const std::vector<double>& a, const std::vector<double>& b,
                 const std::vector<double>& percentiles) {
  if (a.empty() || b.empty())
    throw InputError("Q-Q points need two nonempty samples");
  std::vector<double> sa = a;
  std::vector<double> sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  QQData qq;
  qq.percentiles = percentiles;
  qq.a.reserve(percentiles.size());
  qq.b.reserve(percentiles.size());
  for (double pct : percentiles) {
    if (!(pct >= 0.0 && pct <= 100.0))
      throw InputError("percentile must lie in [0, 100]");
    qq.a.push_back(sorted_quantile(sa, pct));
    qq.b.push_back(sorted_quantile(sb, pct));
  }
  return qq;
}

std::map<AnswerType, double> type_distribution(
    const std::vector<CandidateRecord>& records) {
  std::map<AnswerType, double> out = {{AnswerType::Boolean, 0.0},
                                      {AnswerType::Number, 0.0},
                                      {AnswerType::Color, 0.0},
                                      {AnswerType::Orientation, 0.0},
                                      {AnswerType::Location, 0.0}};
  std::size_t total = 0;
  for (const auto& rec : records) {
    if (!rec.valid || !rec.program) continue;
    out[top_level_type(*rec.program)] += 1.0;
    ++total;
  }
  if (total == 0)
    throw InputError("type distribution needs at least one valid record");
  for (auto& [type, count] : out) count /= static_cast<double>(total);
  return out;
}

}  // namespace battleship
