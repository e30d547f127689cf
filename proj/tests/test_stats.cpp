#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "battleship/candidates.hpp"
#include "battleship/errors.hpp"
#include "battleship/hypotheses.hpp"
#include "battleship/pcfg.hpp"
#include "battleship/stats.hpp"
#include "stats_fixtures.hpp"

using namespace battleship;

namespace {

using namespace stats_fixtures;

// Small two-ship setup so spaces stay cheap to enumerate.
ConfigPtr two_ship_config() {
  GameConfig cfg;
  cfg.rows = 4;
  cfg.cols = 4;
  cfg.ships = {{"Red", {2, 3}}, {"Blue", {2, 3}}};
  return make_config(std::move(cfg));
}

// 4x4 board with the red ship revealed at 1-A and 1-B and everything else
// hidden.
HypothesisSpace revealed_red_space() {
  PartialBoard board;
  board.config = two_ship_config();
  board.cells.assign(16, kHiddenCell);
  const cell_t red = board.config->color_code("Red").value();
  board.cells[board.config->index({1, 1})] = red;
  board.cells[board.config->index({1, 2})] = red;
  return enumerate_hypotheses(board);
}

RawCandidate program_raw(const std::string& text, const ConfigPtr& cfg) {
  RawCandidate raw;
  raw.program = parse_program(text, cfg);
  raw.program_text = text;
  return raw;
}


// Relative comparison (doctest's Approx defaults to a mostly absolute one).
doctest::Approx rel(double expected, double eps = 1e-6) {
  return doctest::Approx(expected).epsilon(eps).scale(0.0);
}

}  // namespace

TEST_CASE("welch t statistic, dof, and p match the reference table") {
  for (const WelchFixture& f : kWelchFixtures) {
    CAPTURE(f.t);
    const WelchResult res = welch_t_test(f.a, f.b);
    CHECK(res.t == rel(f.t));
    CHECK(res.dof == rel(f.dof));
    CHECK(res.p == rel(f.p));
  }
}

TEST_CASE("welch t-test properties") {
  SUBCASE("swapping the samples flips t and keeps dof and p") {
    for (std::size_t i = 0; i < 5; ++i) {
      const WelchFixture& f = kWelchFixtures[i];
      const WelchResult ab = welch_t_test(f.a, f.b);
      const WelchResult ba = welch_t_test(f.b, f.a);
      CHECK(ba.t == -ab.t);
      CHECK(ba.dof == ab.dof);
      CHECK(ba.p == ab.p);
    }
  }

  SUBCASE("a sample against itself is a null result") {
    const std::vector<double> v = {1.0, 2.0, 3.5, -0.25};
    const WelchResult res = welch_t_test(v, v);
    CHECK(res.t == 0.0);
    CHECK(res.p == 1.0);
  }

  SUBCASE("widely separated samples are overwhelmingly significant") {
    const std::vector<double> low = {0.1, 0.2, 0.15, 0.05};
    const std::vector<double> high = {50.0, 50.2, 49.9, 50.1};
    const WelchResult res = welch_t_test(low, high);
    CHECK(res.t < 0.0);
    CHECK(res.p < 1e-3);
  }

  SUBCASE("undersized or doubly constant samples are rejected") {
    CHECK_THROWS_WITH_AS(welch_t_test({1.0}, {1.0, 2.0, 3.0}),
                         doctest::Contains("two observations"), InputError);
    CHECK_THROWS_WITH_AS(welch_t_test({1.0, 2.0}, {3.0}),
                         doctest::Contains("two observations"), InputError);
    CHECK_THROWS_WITH_AS(welch_t_test({2.0, 2.0, 2.0}, {5.0, 5.0}),
                         doctest::Contains("constant samples"), InputError);
    // One constant sample is fine as long as the other varies.
    CHECK_NOTHROW(welch_t_test({2.0, 2.0, 2.0}, {5.0, 6.0}));
  }
}

TEST_CASE("incomplete beta and the student t tail") {
  SUBCASE("boundary and symmetry") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK(incomplete_beta(0.5, 0.5, 0.5) == rel(0.5, 1e-12));
    for (double x : {0.05, 0.2, 0.37, 0.5, 0.66, 0.91}) {
      for (auto [a, b] : std::vector<std::pair<double, double>>{
               {0.5, 0.5}, {1.0, 3.0}, {2.5, 7.0}, {10.0, 0.5}}) {
        const double direct = incomplete_beta(a, b, x);
        const double mirrored = incomplete_beta(b, a, 1.0 - x);
        CHECK(direct + mirrored == rel(1.0, 1e-12));
      }
    }
  }

  SUBCASE("monotone in x") {
    double prev = 0.0;
    for (double x = 0.1; x < 1.0; x += 0.1) {
      const double cur = incomplete_beta(3.0, 2.0, x);
      CHECK(cur > prev);
      prev = cur;
    }
  }

  SUBCASE("two-sided tail") {
    CHECK(student_t_two_sided_p(0.0, 7.0) == 1.0);
    const double p1 = student_t_two_sided_p(1.0, 7.0);
    const double p2 = student_t_two_sided_p(2.0, 7.0);
    CHECK(p1 < 1.0);
    CHECK(p2 < p1);
    CHECK(student_t_two_sided_p(-2.0, 7.0) == p2);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), InputError);
    CHECK_THROWS_AS(incomplete_beta(1.0, -2.0, 0.5), InputError);
    CHECK_THROWS_AS(student_t_two_sided_p(1.0, 0.0), InputError);
  }
}

TEST_CASE("quantiles match numpy's linear interpolation") {
  for (const QuantileFixture& f : kQuantileFixtures) {
    CAPTURE(f.pct);
    CHECK(quantile(f.values, f.pct) == doctest::Approx(f.expected).epsilon(1e-12));
  }
}

TEST_CASE("quantile conventions and validation") {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(v, 25.0) == 1.75);
  CHECK(quantile(v, 50.0) == 2.5);
  CHECK(quantile(v, 75.0) == 3.25);

  // Input order is irrelevant: the sample is sorted internally.
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 75.0) == 3.25);
  CHECK(quantile({9.0}, 33.3) == 9.0);

  CHECK_THROWS_WITH_AS(quantile({}, 50.0), doctest::Contains("empty"),
                       InputError);
  CHECK_THROWS_WITH_AS(quantile(v, -0.5), doctest::Contains("[0, 100]"),
                       InputError);
  CHECK_THROWS_WITH_AS(quantile(v, 100.5), doctest::Contains("[0, 100]"),
                       InputError);
}

TEST_CASE("bootstrap intervals reproduce the frozen pipeline") {
  for (const BootstrapFixture& f : kBootstrapFixtures) {
    CAPTURE(f.seed);
    const auto serial = bootstrap_ci_serial(f.values, f.level, f.n_boot, f.seed);
    CHECK(serial.first == f.lo);
    CHECK(serial.second == f.hi);
    // The parallel variant must agree with the serial one to the last bit.
    CHECK(bootstrap_ci(f.values, f.level, f.n_boot, f.seed) == serial);
  }
}

TEST_CASE("bootstrap interval properties") {
  const std::vector<double> values = {1.308, 0.56,  0.852, 1.263, 3.867,
                                      0.524, 1.77,  0.286, 2.783, 1.225,
                                      2.852, 2.825, 1.803};

  SUBCASE("deterministic in the seed") {
    const auto a = bootstrap_ci(values, 0.95, 64, 7);
    CHECK(a == bootstrap_ci(values, 0.95, 64, 7));
    CHECK(a != bootstrap_ci(values, 0.95, 64, 8));
  }

  SUBCASE("constant samples give degenerate intervals") {
    const auto ci = bootstrap_ci({2.5, 2.5, 2.5, 2.5}, 0.95, 100, 3);
    CHECK(ci.first == 2.5);
    CHECK(ci.second == 2.5);
  }

  SUBCASE("endpoints are ordered and stay inside the sample range") {
    for (const BootstrapFixture& f : kBootstrapFixtures) {
      const auto [lo, hi] = bootstrap_ci(f.values, f.level, f.n_boot, f.seed);
      const auto [mn, mx] =
          std::minmax_element(f.values.begin(), f.values.end());
      CHECK(lo <= hi);
      CHECK(lo >= *mn);
      CHECK(hi <= *mx);
    }
  }

  SUBCASE("higher confidence widens the interval") {
    const auto narrow = bootstrap_ci(values, 0.90, 500, 11);
    const auto wide = bootstrap_ci(values, 0.99, 500, 11);
    CHECK(wide.first <= narrow.first);
    CHECK(wide.second >= narrow.second);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(bootstrap_ci({}, 0.95, 100, 1), InputError);
    CHECK_THROWS_AS(bootstrap_ci(values, 0.95, 0, 1), InputError);
    CHECK_THROWS_AS(bootstrap_ci(values, 0.0, 100, 1), InputError);
    CHECK_THROWS_AS(bootstrap_ci(values, 1.0, 100, 1), InputError);
    CHECK_THROWS_AS(bootstrap_ci_serial(values, 1.5, 100, 1), InputError);
  }
}

TEST_CASE("bootstrap coverage on synthetic normal data") {
  // 95% intervals for the mean of standard normal samples should cover the
  // true mean about 95% of the time. Box-Muller keeps the data source inside
  // our own deterministic generator.
  constexpr int kReps = 300;
  constexpr std::size_t kSampleSize = 400;
  int covered = 0;
  for (int rep = 0; rep < kReps; ++rep) {
    Rng data_rng(derive_seed(8800, rep));
    std::vector<double> sample(kSampleSize);
    for (double& x : sample) {
      const double u1 = 1.0 - random_unit(data_rng);  // (0, 1], log-safe
      const double u2 = random_unit(data_rng);
      x = std::sqrt(-2.0 * std::log(u1)) *
          std::cos(2.0 * std::numbers::pi * u2);
    }
    const auto [lo, hi] = bootstrap_ci(sample, 0.95, 200, derive_seed(8801, rep));
    if (lo <= 0.0 && 0.0 <= hi) ++covered;
  }
  CHECK(covered >= static_cast<int>(0.91 * kReps));
  CHECK(covered < kReps);  // some misses expected; all-cover means a bug
}

TEST_CASE("summarize_metric hand cases") {
  SUBCASE("two points") {
    const MetricSummary s = summarize_metric({0.0, 2.0});
    CHECK(s.mean == 1.0);
    CHECK(s.std_error == 1.0);  // sd = sqrt(2), n = 2
    CHECK(s.n == 2);
    CHECK_FALSE(s.degenerate);
  }

  SUBCASE("singleton is degenerate") {
    const MetricSummary s = summarize_metric({5.0});
    CHECK(s.mean == 5.0);
    CHECK(s.std_error == 0.0);
    CHECK(s.n == 1);
    CHECK(s.degenerate);
  }

  SUBCASE("empty is all zeros") {
    const MetricSummary s = summarize_metric({});
    CHECK(s.n == 0);
    CHECK(s.mean == 0.0);
    CHECK_FALSE(s.degenerate);
  }

  SUBCASE("four points") {
    const MetricSummary s = summarize_metric({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    // sd = sqrt(5/3), divided by sqrt(4)
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0)
                             .epsilon(1e-15));
  }
}

TEST_CASE("summarize draws each metric from the right records") {
  CandidateRecord r1;
  r1.question = "How many tiles?";
  r1.word_count = 3;
  r1.valid = true;
  r1.informative = true;
  r1.eig_bits = 1.0;
  r1.depth = 3;
  r1.size = 3;

  CandidateRecord r2;  // grammar draw: no question, zero information
  r2.valid = true;
  r2.informative = false;
  r2.eig_bits = 0.0;
  r2.depth = 2;
  r2.size = 2;

  CandidateRecord r3;  // failed parse, but the question text still counts
  r3.question = "Is it red?";
  r3.word_count = 3;
  r3.error = "did not parse";

  const SummaryRow row = summarize({r1, r2, r3}, "demo", 4);
  CHECK(row.label == "demo");
  CHECK(row.k == 4);
  CHECK(row.n_records == 3);

  CHECK(row.valid.n == 3);
  CHECK(row.valid.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(row.informative.n == 3);
  CHECK(row.informative.mean == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(row.eig.n == 2);  // valid records only
  CHECK(row.eig.mean == 0.5);
  CHECK(row.depth.n == 2);
  CHECK(row.depth.mean == 2.5);
  CHECK(row.size.n == 2);
  CHECK(row.size.mean == 2.5);

  CHECK(row.words.n == 2);  // question-bearing records only
  CHECK(row.words.mean == 3.0);

  SUBCASE("single record flags its metrics degenerate") {
    const SummaryRow one = summarize({r1}, "one");
    CHECK(one.k == 1);
    CHECK(one.eig.n == 1);
    CHECK(one.eig.degenerate);
    CHECK(one.valid.degenerate);
    CHECK(one.eig.std_error == 0.0);
  }

  SUBCASE("no records is an error") {
    CHECK_THROWS_WITH_AS(summarize({}, "nothing"), doctest::Contains("zero"),
                         InputError);
  }
}

TEST_CASE("summarize over a scored grammar batch") {
  const auto cfg = two_ship_config();
  const auto space = revealed_red_space();
  const Grammar grammar = default_battleship_grammar(cfg);

  SampleConfig sample_cfg;
  sample_cfg.seed = 29;
  std::vector<RawCandidate> raw;
  for (const ExprPtr& program : sample_batch(grammar, sample_cfg, 200)) {
    RawCandidate r;
    r.program = program;
    raw.push_back(std::move(r));
  }
  const auto records = score_candidates(raw, space, "grammar");
  const SummaryRow row = summarize(records, "grammar");

  std::size_t n_valid = 0;
  for (const auto& rec : records) n_valid += rec.valid ? 1 : 0;

  CHECK(row.n_records == 200);
  CHECK(row.valid.n == 200);
  CHECK(row.informative.n == 200);
  CHECK(row.words.n == 0);  // grammar draws carry no question text
  CHECK(row.eig.n == n_valid);
  CHECK(row.depth.n == n_valid);
  CHECK(row.size.n == n_valid);
  CHECK(row.eig.mean >= 0.0);
  CHECK(row.informative.mean <= row.valid.mean);
  CHECK(row.valid.mean * 200 == doctest::Approx(n_valid));

  SUBCASE("record order does not matter") {
    std::vector<CandidateRecord> reversed(records.rbegin(), records.rend());
    const SummaryRow back = summarize(reversed, "grammar");
    for (auto pick : {&SummaryRow::eig, &SummaryRow::valid,
                      &SummaryRow::informative, &SummaryRow::depth,
                      &SummaryRow::size, &SummaryRow::words}) {
      const MetricSummary& fwd = row.*pick;
      const MetricSummary& rev = back.*pick;
      CHECK(rev.n == fwd.n);
      CHECK(rev.mean == doctest::Approx(fwd.mean).epsilon(1e-12));
      CHECK(rev.std_error == doctest::Approx(fwd.std_error).epsilon(1e-12));
    }
  }
}

TEST_CASE("qq points pair quantiles on a shared grid") {
  const std::vector<double> pcts = {0, 10, 25, 50, 75, 90, 100};
  const std::vector<double> a = {3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.6};

  SUBCASE("a sample against itself lies on the diagonal") {
    const QQData qq = qq_points(a, a, pcts);
    CHECK(qq.percentiles == pcts);
    REQUIRE(qq.a.size() == pcts.size());
    CHECK(qq.a == qq.b);
  }

  SUBCASE("a constant shift moves one axis by the shift") {
    std::vector<double> b = a;
    for (double& x : b) x += 1.0;
    const QQData qq = qq_points(a, b, pcts);
    for (std::size_t i = 0; i < pcts.size(); ++i)
      CHECK(qq.b[i] == doctest::Approx(qq.a[i] + 1.0).epsilon(1e-12));
  }

  SUBCASE("quantile sequences are nondecreasing") {
    const std::vector<double> b = {-2.0, 7.5, 0.1, 0.2, 11.0};
    const QQData qq = qq_points(a, b, pcts);
    CHECK(std::is_sorted(qq.a.begin(), qq.a.end()));
    CHECK(std::is_sorted(qq.b.begin(), qq.b.end()));
    CHECK(qq.a.front() == 1.0);   // min of a
    CHECK(qq.a.back() == 9.0);    // max of a
    CHECK(qq.b.front() == -2.0);
    CHECK(qq.b.back() == 11.0);
  }

  SUBCASE("samples of different sizes are fine") {
    const QQData qq = qq_points(a, {0.0, 1.0}, pcts);
    CHECK(qq.b.front() == 0.0);
    CHECK(qq.b.back() == 1.0);
    CHECK(qq.b[3] == 0.5);  // median of two points
  }

  SUBCASE("validation") {
    CHECK_THROWS_WITH_AS(qq_points({}, a, pcts), doctest::Contains("nonempty"),
                         InputError);
    CHECK_THROWS_WITH_AS(qq_points(a, {}, pcts), doctest::Contains("nonempty"),
                         InputError);
    CHECK_THROWS_WITH_AS(qq_points(a, a, {50.0, 101.0}),
                         doctest::Contains("[0, 100]"), InputError);
  }
}

TEST_CASE("type distribution over valid records") {
  const auto cfg = two_ship_config();
  const auto space = revealed_red_space();

  SUBCASE("a lone numeric question concentrates the mass") {
    const auto records =
        score_candidates({program_raw("(size Red)", cfg)}, space, "unit");
    const auto dist = type_distribution(records);
    REQUIRE(dist.size() == 5);  // every answer type is always a key
    CHECK(dist.at(AnswerType::Number) == 1.0);
    CHECK(dist.at(AnswerType::Boolean) == 0.0);
    CHECK(dist.at(AnswerType::Color) == 0.0);
    CHECK(dist.at(AnswerType::Orientation) == 0.0);
    CHECK(dist.at(AnswerType::Location) == 0.0);
  }

  SUBCASE("one of each type splits the mass evenly") {
    const std::vector<RawCandidate> raw = {
        program_raw("(size Red)", cfg),
        program_raw("(touch Red Blue)", cfg),
        program_raw("(color 2A)", cfg),
        program_raw("(orient Red)", cfg),
        program_raw("(topleft (coloredTiles Red))", cfg),
    };
    const auto dist = type_distribution(score_candidates(raw, space, "unit"));
    double total = 0.0;
    for (const auto& [type, share] : dist) {
      CHECK(share == doctest::Approx(0.2).epsilon(1e-12));
      total += share;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("invalid records are excluded from the denominator") {
    std::vector<RawCandidate> raw = {
        program_raw("(size Red)", cfg),
        program_raw("(size Blue)", cfg),
        program_raw("(touch Red Blue)", cfg),
    };
    raw.push_back(RawCandidate{});  // never parsed
    raw.push_back(RawCandidate{});
    const auto dist = type_distribution(score_candidates(raw, space, "unit"));
    CHECK(dist.at(AnswerType::Number) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(dist.at(AnswerType::Boolean) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    double total = 0.0;
    for (const auto& [type, share] : dist) total += share;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("no valid records is an error") {
    const auto records =
        score_candidates({RawCandidate{}, RawCandidate{}}, space, "unit");
    CHECK_THROWS_WITH_AS(type_distribution(records),
                         doctest::Contains("valid"), InputError);
    CHECK_THROWS_AS(type_distribution({}), InputError);
  }
}
