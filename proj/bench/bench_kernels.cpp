// Timing comparison of the parallel kernels against their serial reference
// implementations: hypothesis enumeration, batch program scoring, grammar
// batch sampling, and the bootstrap. Each section first checks that both
// variants produce identical output, then reports wall times and speedup.
//
//   bench_kernels [scale]
//
// scale (default 1) multiplies the workload sizes; use 4 or more for stable
// numbers on fast machines.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "battleship/eig.hpp"
#include "battleship/hypotheses.hpp"
#include "battleship/pcfg.hpp"
#include "battleship/stats.hpp"

using namespace battleship;

namespace {

double seconds(const std::function<void()>& work) {
  const auto start = std::chrono::steady_clock::now();
  work();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

int failures = 0;

void report(const char* kernel, bool identical, double serial_s,
            double parallel_s) {
  if (!identical) ++failures;
  std::printf("%-22s %9.1f ms %9.1f ms %7.2fx  %s\n", kernel, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s,
              identical ? "outputs identical" : "OUTPUT MISMATCH");
}

PartialBoard board_with_reveals(const std::vector<std::pair<Coord, cell_t>>&
                                    reveals) {
  PartialBoard board;
  board.config = default_config();
  board.cells.assign(board.config->cell_count(), kHiddenCell);
  for (const auto& [coord, cell] : reveals)
    board.cells[board.config->index(coord)] = cell;
  return board;
}

bool same_space(const HypothesisSpace& a, const HypothesisSpace& b) {
  if (a.size() != b.size() || a.ships_per_board() != b.ships_per_board())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t s = 0; s < a.ships_per_board(); ++s)
      if (!(a.placements(i)[s] == b.placements(i)[s])) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
  if (scale < 1) {
    std::fprintf(stderr, "usage: %s [scale >= 1]\n", argv[0]);
    return 2;
  }
  std::printf("threads: %d, scale: %d\n", omp_get_max_threads(), scale);
  std::printf("%-22s %12s %12s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  // A lightly constrained board: one known red tile keeps the space large
  // (hundreds of thousands of completions) but bounded.
  const cell_t red = default_config()->color_code("Red").value();
  const PartialBoard open_board =
      board_with_reveals({{{1, 1}, red}, {{6, 6}, kWaterCell}});
  {
    HypothesisSpace serial, parallel;
    const double t_serial =
        seconds([&] { serial = enumerate_hypotheses_serial(open_board); });
    const double t_parallel =
        seconds([&] { parallel = enumerate_hypotheses(open_board); });
    report("enumerate_hypotheses", same_space(serial, parallel), t_serial,
           t_parallel);
    std::printf("  (%zu hypotheses)\n", parallel.size());
  }

  // Scoring: a tighter space so the per-program cost stays moderate, with
  // enough programs to spread across threads.
  const cell_t blue = default_config()->color_code("Blue").value();
  const cell_t purple = default_config()->color_code("Purple").value();
  const PartialBoard scoring_board = board_with_reveals(
      {{{1, 1}, red}, {{3, 4}, blue}, {{6, 2}, purple}, {{2, 2}, kWaterCell}});
  const HypothesisSpace scoring_space = enumerate_hypotheses(scoring_board);
  const Grammar grammar = default_battleship_grammar();
  {
    SampleConfig cfg;
    cfg.seed = 97;
    const std::vector<ExprPtr> programs =
        sample_batch(grammar, cfg, static_cast<std::size_t>(1000) * scale);
    std::vector<std::optional<double>> serial, parallel;
    const double t_serial = seconds(
        [&] { serial = score_programs_serial(programs, scoring_space); });
    const double t_parallel =
        seconds([&] { parallel = score_programs(programs, scoring_space); });
    report("score_programs", serial == parallel, t_serial, t_parallel);
    std::printf("  (%zu programs x %zu hypotheses)\n", programs.size(),
                scoring_space.size());
  }

  {
    SampleConfig cfg;
    cfg.seed = 98;
    const std::size_t n = static_cast<std::size_t>(50000) * scale;
    std::vector<ExprPtr> serial, parallel;
    const double t_serial =
        seconds([&] { serial = sample_batch_serial(grammar, cfg, n); });
    const double t_parallel =
        seconds([&] { parallel = sample_batch(grammar, cfg, n); });
    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
      identical = pretty_print(*serial[i]) == pretty_print(*parallel[i]);
    report("sample_batch", identical, t_serial, t_parallel);
    std::printf("  (%zu samples)\n", n);
  }

  {
    Rng rng(4711);
    std::vector<double> values(5000);
    for (double& v : values) v = random_unit(rng) * 4.0;
    const std::size_t n_boot = static_cast<std::size_t>(20000) * scale;
    std::pair<double, double> serial, parallel;
    const double t_serial = seconds(
        [&] { serial = bootstrap_ci_serial(values, 0.95, n_boot, 12345); });
    const double t_parallel =
        seconds([&] { parallel = bootstrap_ci(values, 0.95, n_boot, 12345); });
    report("bootstrap_ci", serial == parallel, t_serial, t_parallel);
    std::printf("  (%zu values x %zu replicates)\n", values.size(), n_boot);
  }

  return failures;
}
