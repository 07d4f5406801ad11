#pragma once

// Slow brute-force counterparts of the fast routines. Each one follows the
// defining formula directly and shares no code path with the routine it checks.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sumfree/core.hpp"
#include "sumfree/structure.hpp"

namespace sumfree::reference {

/// Largest sum-free subset size by enumerating all 2^n subsets, n <= 24.
inline std::size_t exhaustive_optimum(const IntegerSet& a, SumFreeConvention conv) {
  const std::size_t n = a.size();
  require(n <= 24, "exhaustive_optimum limited to 24 elements");
  std::size_t best = 0;
  std::vector<std::int64_t> sub;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto pc = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (pc <= best) continue;
    sub.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) sub.push_back(a[i]);
    std::set<std::int64_t> s(sub.begin(), sub.end());
    bool ok = true;
    for (std::size_t i = 0; i < sub.size() && ok; ++i)
      for (std::size_t j = i; j < sub.size() && ok; ++j) {
        if (i == j && conv == SumFreeConvention::kDistinctOnly) continue;
        if (s.count(sub[i] + sub[j])) ok = false;
      }
    if (ok) best = pc;
  }
  return best;
}

/// Largest |A_theta| by evaluating A_theta at the midpoint of every cell of
/// the arrangement {j/(3x)} on [0, 1].
inline std::size_t dilation_bruteforce(const IntegerSet& a) {
  std::vector<Rational> pts{Rational(0), Rational(1)};
  for (auto x : a)
    for (std::int64_t j = 0; j <= 3 * x; ++j) pts.emplace_back(j, 3 * x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational mid = (pts[i] + pts[i + 1]) * Rational(1, 2);
    std::size_t c = 0;
    for (auto x : a) {
      Rational f = (mid * Rational(x)).frac();
      if (f > Rational(1, 3) && f < Rational(2, 3)) ++c;
    }
    best = std::max(best, c);
  }
  return best;
}

/// N^-2 sum_{n, n'} f(n) f(n') f(n + n') over n + n' <= N.
inline double t_count_direct(const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  long double acc = 0.0L;
  for (std::size_t x = 1; x <= n; ++x)
    for (std::size_t y = 1; x + y <= n; ++y) acc += static_cast<long double>(f[x - 1]) * f[y - 1] * f[x + y - 1];
  return static_cast<double>(acc / (static_cast<long double>(n) * n));
}

/// |A ∩ (A + d)|.
inline std::int64_t shift_count(const IntegerSet& a, std::int64_t d) {
  std::int64_t c = 0;
  for (auto x : a)
    if (a.contains(x - d)) ++c;
  return c;
}

/// Densest progression by scanning every (start, step, length) triple.
inline std::optional<structure::DenseProgression> naive_dense_progression(const IntegerSet& a, std::int64_t n,
                                                                          std::int64_t min_length) {
  std::optional<structure::DenseProgression> best;
  const std::int64_t dmax = std::max<std::int64_t>(1, n - 1);
  for (std::int64_t d = 1; d <= dmax; ++d)
    for (std::int64_t s = 1; s <= n; ++s) {
      std::int64_t cnt = 0;
      for (std::int64_t len = 1; s + (len - 1) * d <= n; ++len) {
        if (a.contains(s + (len - 1) * d)) ++cnt;
        if (len < min_length) continue;
        structure::DenseProgression c{{s, d, len}, cnt, Rational(cnt, len)};
        if (!best || structure::better(c, *best)) best = c;
      }
    }
  return best;
}

/// 5X - 4X as an explicit set of integers.
inline std::set<std::int64_t> five_minus_four(const IntegerSet& x) {
  std::set<std::int64_t> cur{0};
  auto add = [&](int sign) {
    std::set<std::int64_t> next;
    for (auto s : cur)
      for (auto v : x) next.insert(s + sign * v);
    cur = std::move(next);
  };
  for (int i = 0; i < 5; ++i) add(1);
  for (int i = 0; i < 4; ++i) add(-1);
  return cur;
}

/// alpha-tilde sum from the definition, one (x, y) at a time.
inline double alpha_tilde_sum_direct(const structure::AlphaGrid<double>& g, double eta) {
  double total = 0.0;
  for (int x = 0; x < g.q; ++x)
    for (int y = -g.m; y <= g.m; ++y) {
      double best = 0.0;
      for (int a = 0; a < g.q; ++a)
        for (int i = 1; i <= g.m; ++i) {
          const int b = ((a - x) % g.q + g.q) % g.q;
          for (int j : {i - y, i - y + 1}) {
            if (j < 1 || j > g.m) continue;
            if (g.at(a, i) > eta && g.at(b, j) > eta) best = std::max(best, g.at(a, i) + g.at(b, j));
          }
        }
      total += best;
    }
  return total;
}

}  // namespace sumfree::reference
