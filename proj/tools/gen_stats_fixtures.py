#!/usr/bin/env python3
"""Regenerates the frozen oracle tables embedded in tests/test_stats.cpp.

Run offline and paste the printed C++ arrays into the test. The Welch rows
come from scipy.stats.ttest_ind(equal_var=False); the bootstrap rows come
from a pure-Python reimplementation of the library's documented resampling
scheme (mt19937_64 + rejection-sampled random_below + per-replicate derived
seeds + linear-interpolation percentiles), so they pin the whole pipeline,
not just the percentile step. Quantile rows come from numpy.percentile's
default linear interpolation.
"""

import random

import numpy as np
from scipy import stats

MASK = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK
    return x ^ (x >> 31)


def derive_seed(root, stream):
    return splitmix64(root ^ splitmix64(stream ^ 0x632BE59BD9B4E019))


class MT19937_64:
    """The standard 64-bit Mersenne Twister (matches std::mt19937_64)."""

    N, M = 312, 156
    MATRIX_A = 0xB5026F5AA96619E9
    UPPER = 0xFFFFFFFF80000000
    LOWER = 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.N
        self.mt[0] = seed & MASK
        for i in range(1, self.N):
            self.mt[i] = (
                6364136223846793005 * (self.mt[i - 1] ^ (self.mt[i - 1] >> 62))
                + i
            ) & MASK
        self.index = self.N

    def _twist(self):
        for i in range(self.N):
            x = (self.mt[i] & self.UPPER) | (self.mt[(i + 1) % self.N] & self.LOWER)
            xa = x >> 1
            if x & 1:
                xa ^= self.MATRIX_A
            self.mt[i] = self.mt[(i + self.M) % self.N] ^ xa
        self.index = 0

    def next(self):
        if self.index >= self.N:
            self._twist()
        x = self.mt[self.index]
        self.index += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x &= MASK
        x ^= (x << 37) & 0xFFF7EEE000000000
        x &= MASK
        x ^= x >> 43
        return x


def random_below(rng, n):
    limit = MASK - (MASK % n)
    while True:
        v = rng.next()
        if v < limit:
            return v % n


def percentile_linear(sorted_values, pct):
    h = (len(sorted_values) - 1) * pct / 100.0
    lo = int(h)
    if lo >= len(sorted_values) - 1:
        return sorted_values[-1]
    frac = h - lo
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo])


def bootstrap_ci(values, level, n_boot, seed):
    n = len(values)
    means = []
    for rep in range(n_boot):
        rng = MT19937_64(derive_seed(seed, rep))
        total = 0.0
        for _ in range(n):
            total += values[random_below(rng, n)]
        means.append(total / n)
    means.sort()
    alpha = (1.0 - level) / 2.0
    return (
        percentile_linear(means, 100.0 * alpha),
        percentile_linear(means, 100.0 * (1.0 - alpha)),
    )


def fmt(x):
    return "%.17g" % x


def cpp_list(values):
    return "{" + ", ".join(fmt(v) for v in values) + "}"


def main():
    print("// mt19937_64 spot check (first three outputs for seed 42):")
    probe = MT19937_64(42)
    print("// ", [probe.next() for _ in range(3)])
    print()

    gen = random.Random(20240817)

    print("// Welch fixtures: {a, b, t, dof, p}")
    print("const std::vector<WelchFixture> kWelchFixtures = {")
    pairs = []
    for i in range(18):
        na = gen.randint(2, 25)
        nb = gen.randint(2, 25)
        shift = gen.uniform(-2.0, 2.0)
        scale_b = gen.uniform(0.3, 3.0)
        a = [round(gen.gauss(0.0, 1.0), 3) for _ in range(na)]
        b = [round(gen.gauss(shift, scale_b), 3) for _ in range(nb)]
        pairs.append((a, b))
    # One pair with a constant sample on one side, one widely separated.
    pairs.append(([1.0, 1.0, 1.0, 1.0], [0.9, 1.4, 1.1, 0.8, 1.3]))
    pairs.append(([0.1, 0.2, 0.15, 0.05, 0.12], [50.1, 49.8, 50.3, 50.0]))
    for a, b in pairs:
        res = stats.ttest_ind(a, b, equal_var=False)
        print(
            "    {%s,\n     %s,\n     %s, %s, %s},"
            % (cpp_list(a), cpp_list(b), fmt(res.statistic), fmt(res.df), fmt(res.pvalue))
        )
    print("};")
    print()

    print("// Bootstrap fixtures: {values, level, n_boot, seed, lo, hi}")
    print("const std::vector<BootstrapFixture> kBootstrapFixtures = {")
    for i in range(20):
        n = gen.randint(3, 15)
        values = [round(gen.uniform(0.0, 4.0), 3) for _ in range(n)]
        level = gen.choice([0.90, 0.95, 0.99])
        n_boot = gen.choice([100, 200, 333])
        seed = gen.randint(0, 10**6)
        lo, hi = bootstrap_ci(values, level, n_boot, seed)
        print(
            "    {%s,\n     %s, %d, %dULL, %s, %s},"
            % (cpp_list(values), fmt(level), n_boot, seed, fmt(lo), fmt(hi))
        )
    print("};")
    print()

    print("// Quantile fixtures: {values, pct, expected} (numpy.percentile, linear)")
    print("const std::vector<QuantileFixture> kQuantileFixtures = {")
    arrays = [
        [1.0, 2.0, 3.0, 4.0],
        [5.0],
        [2.0, 2.0, 2.0],
        [round(gen.uniform(-5, 5), 3) for _ in range(11)],
        [round(gen.uniform(-5, 5), 3) for _ in range(17)],
    ]
    for arr in arrays:
        for pct in [0.0, 2.5, 25.0, 50.0, 75.0, 97.5, 100.0]:
            expected = float(np.percentile(arr, pct))
            print("    {%s, %s, %s}," % (cpp_list(arr), fmt(pct), fmt(expected)))
    print("};")


if __name__ == "__main__":
    main()
