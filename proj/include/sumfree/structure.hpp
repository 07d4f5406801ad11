#pragma once

// Difference-set and doubling structure: dense arithmetic progressions,
// the alpha-tilde grid inequality, the avoid-zero diagnostic on grid sets,
// and the 5X - 4X covering check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumfree/core.hpp"
#include "sumfree/spectral.hpp"

namespace sumfree::structure {

struct Progression {
  std::int64_t start = 1;
  std::int64_t step = 1;
  std::int64_t length = 1;

  std::int64_t last() const noexcept { return start + (length - 1) * step; }
  std::int64_t at(std::int64_t k) const noexcept { return start + k * step; }
  bool contains(std::int64_t x) const noexcept {
    return x >= start && x <= last() && (x - start) % step == 0;
  }
  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> v;
    for (std::int64_t k = 0; k < length; ++k) v.push_back(at(k));
    return v;
  }
  void validate(std::int64_t n) const {
    require(step > 0 && length >= 1, "progression needs step > 0 and length >= 1");
    require(start >= 1 && last() <= n, "progression must lie in {1,...,N}");
  }
  friend bool operator==(const Progression&, const Progression&) = default;
};

/// A - A including 0 and negatives, sorted.
inline std::vector<std::int64_t> difference_set(const IntegerSet& a) {
  if (a.empty()) return {};
  const std::int64_t span = a.max() - a.min();
  std::vector<std::int64_t> out;
  if (span <= 50'000'000) {
    std::vector<char> seen(static_cast<std::size_t>(2 * span + 1), 0);
    for (auto x : a)
      for (auto y : a) seen[static_cast<std::size_t>(x - y + span)] = 1;
    for (std::int64_t d = -span; d <= span; ++d)
      if (seen[static_cast<std::size_t>(d + span)]) out.push_back(d);
  } else {
    for (auto x : a)
      for (auto y : a) out.push_back(x - y);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense progressions

struct DenseProgression {
  Progression progression;
  std::int64_t count = 0;  // |A ∩ P|
  Rational density;
};

/// Canonical order: higher density, then longer, then smaller start, then smaller step.
inline bool better(const DenseProgression& a, const DenseProgression& b) {
  if (a.density != b.density) return a.density > b.density;
  if (a.progression.length != b.progression.length) return a.progression.length > b.progression.length;
  if (a.progression.start != b.progression.start) return a.progression.start < b.progression.start;
  return a.progression.step < b.progression.step;
}

/// Largest step for which a progression of `min_length` terms fits in {1,...,N}.
inline std::int64_t max_step(std::int64_t n, std::int64_t min_length) {
  if (min_length <= 1) return std::max<std::int64_t>(1, n - 1);
  return (n - 1) / (min_length - 1);
}

struct DenseSearchResult {
  std::optional<DenseProgression> best;
  bool meets_target = false;
};

/// Exhaustive search for the densest progression P ⊆ {1..N} with |P| >= min_length.
/// Along each residue class mod d, the densest window ending at j is the
/// tangent from (j, S_j) to the lower convex hull of earlier prefix points.
inline DenseSearchResult find_dense_progression(const IntegerSet& a, std::int64_t n, std::int64_t min_length,
                                                const Rational& target) {
  require(n >= 1, "find_dense_progression needs N >= 1");
  require(min_length >= 1, "min_length must be >= 1");
  require(a.subset_of_interval(n), "A must lie in {1,...,N}");
  DenseSearchResult res;
  if (min_length > n) return res;
  std::vector<char> in(static_cast<std::size_t>(n + 1), 0);
  for (auto x : a) in[static_cast<std::size_t>(x)] = 1;

  std::vector<std::int64_t> pre;
  std::vector<std::int64_t> hull;
  const std::int64_t dmax = max_step(n, min_length);
  for (std::int64_t d = 1; d <= dmax; ++d) {
    for (std::int64_t r = 1; r <= std::min(d, n); ++r) {
      const std::int64_t len = (n - r) / d + 1;
      if (len < min_length) continue;
      pre.assign(static_cast<std::size_t>(len + 1), 0);
      for (std::int64_t k = 0; k < len; ++k)
        pre[static_cast<std::size_t>(k + 1)] = pre[static_cast<std::size_t>(k)] + in[static_cast<std::size_t>(r + k * d)];
      auto y = [&](std::int64_t i) { return pre[static_cast<std::size_t>(i)]; };
      hull.clear();
      for (std::int64_t j = min_length; j <= len; ++j) {
        const std::int64_t p = j - min_length;
        while (hull.size() >= 2) {
          std::int64_t o = hull[hull.size() - 2], q = hull.back();
          __int128 cr = static_cast<__int128>(q - o) * (y(p) - y(o)) - static_cast<__int128>(y(q) - y(o)) * (p - o);
          if (cr > 0) break;
          hull.pop_back();
        }
        hull.push_back(p);
        // slope(i) = (y(j) - y(i)) / (j - i); find the first hull index where it stops increasing.
        auto rises = [&](std::size_t k) {
          std::int64_t i0 = hull[k], i1 = hull[k + 1];
          return static_cast<__int128>(y(j) - y(i1)) * (j - i0) > static_cast<__int128>(y(j) - y(i0)) * (j - i1);
        };
        std::size_t lo = 0, hi = hull.size() - 1;
        while (lo < hi) {
          std::size_t mid = (lo + hi) / 2;
          if (rises(mid))
            lo = mid + 1;
          else
            hi = mid;
        }
        const std::int64_t i = hull[lo];
        DenseProgression cand{{r + i * d, d, j - i}, y(j) - y(i), Rational(y(j) - y(i), j - i)};
        if (!res.best || better(cand, *res.best)) res.best = cand;
      }
    }
  }
  res.meets_target = res.best && res.best->density >= target;
  return res;
}

struct DoublingReport {
  std::size_t set_size = 0;
  std::size_t popular_count = 0;     // |D_delta(A)|
  Rational bound;                    // 4|A| - eps N
  bool hypothesis_holds = false;     // |D_delta(A)| <= 4|A| - eps N
  Rational target;                   // 1/2 + eps/5
  std::optional<DenseSearchResult> search;  // only run when the hypothesis holds
};

/// If |D_delta(A)| <= 4|A| - eps N, a long progression with density at least
/// 1/2 + eps/5 should exist; this evaluates both sides on a concrete set.
inline DoublingReport check_doubling_hypothesis(const IntegerSet& a, std::int64_t n, const Rational& eps, double delta,
                                                std::int64_t min_length) {
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  require(a.subset_of_interval(n), "A must lie in {1,...,N}");
  DoublingReport rep;
  rep.set_size = a.size();
  rep.popular_count = spectral::popular_differences(a, static_cast<std::size_t>(n), delta).size();
  rep.bound = Rational(4 * static_cast<std::int64_t>(a.size())) - eps * Rational(n);
  rep.hypothesis_holds = Rational(static_cast<std::int64_t>(rep.popular_count)) <= rep.bound;
  rep.target = Rational(1, 2) + eps * Rational(1, 5);
  if (rep.hypothesis_holds) rep.search = find_dense_progression(a, n, min_length, rep.target);
  return rep;
}

// ---------------------------------------------------------------------------
// Alpha-tilde

/// alpha : Z/qZ x {1..M} -> [0,1], row-major by residue.
template <class T>
struct AlphaGrid {
  int q = 1;
  int m = 1;
  std::vector<T> values;

  T at(int a, int i) const { return values[static_cast<std::size_t>(a * m + (i - 1))]; }
  void validate(T one) const {
    require(q >= 1 && m >= 1, "alpha grid needs q, M >= 1");
    require(values.size() == static_cast<std::size_t>(q) * static_cast<std::size_t>(m), "alpha grid has wrong size");
    for (const auto& v : values) require(v >= T{} && v <= one, "alpha values must lie in [0,1]");
  }
};

template <class T>
struct AlphaTilde {
  int q = 1;
  int m = 1;
  std::vector<T> values;  // (x, y) at x * (2M+1) + (y + M), y in [-M, M]
  T sum_tilde{};
  T sum_alpha{};
  T rhs{};  // 4 sum alpha - 4 eta q M
  bool holds = false;

  T at(int x, int y) const { return values[static_cast<std::size_t>(x * (2 * m + 1) + (y + m))]; }
};

/// alpha~(x,y) = max alpha(a,i) + alpha(a',i') over entries above eta with
/// a - a' = x and i - i' in {y, y - 1} (zero when no pair qualifies).
/// T may be double or an exact scaled integer type; eta uses the same units.
template <class T>
AlphaTilde<T> alpha_tilde(const AlphaGrid<T>& grid, T eta) {
  require(grid.q >= 1 && grid.m >= 1, "alpha grid needs q, M >= 1");
  require(!(eta < T{}), "eta must be nonnegative");
  AlphaTilde<T> out;
  out.q = grid.q;
  out.m = grid.m;
  const int w = 2 * grid.m + 1;
  out.values.assign(static_cast<std::size_t>(grid.q * w), T{});
  std::vector<std::pair<int, int>> live;
  for (int a = 0; a < grid.q; ++a)
    for (int i = 1; i <= grid.m; ++i)
      if (grid.at(a, i) > eta) live.emplace_back(a, i);
  for (auto [a, i] : live) {
    for (auto [b, j] : live) {
      const T s = grid.at(a, i) + grid.at(b, j);
      const int x = ((a - b) % grid.q + grid.q) % grid.q;
      for (int y : {i - j, i - j + 1}) {
        auto& cell = out.values[static_cast<std::size_t>(x * w + (y + grid.m))];
        if (cell < s) cell = s;
      }
    }
  }
  for (const auto& v : out.values) out.sum_tilde += v;
  for (const auto& v : grid.values) out.sum_alpha += v;
  out.rhs = T(4) * out.sum_alpha - T(4) * eta * T(grid.q) * T(grid.m);
  out.holds = !(out.sum_tilde < out.rhs);
  return out;
}

// ---------------------------------------------------------------------------
// Grid sets and the avoid-zero diagnostic

/// Subset of Z/qZ x {1..K}; cell (a, i) stands for {a} x ((i-1)/K, i/K].
struct GridSet {
  int q = 1;
  int k = 1;
  std::vector<char> membership;  // row-major by residue

  bool at(int a, int i) const { return membership[static_cast<std::size_t>(a * k + (i - 1))] != 0; }
  void set(int a, int i, bool v) { membership[static_cast<std::size_t>(a * k + (i - 1))] = v ? 1 : 0; }

  static GridSet empty(int q, int k) {
    require(q >= 1 && k >= 1, "grid set needs q, K >= 1");
    return GridSet{q, k, std::vector<char>(static_cast<std::size_t>(q * k), 0)};
  }
  void validate() const {
    require(q >= 1 && k >= 1, "grid set needs q, K >= 1");
    require(membership.size() == static_cast<std::size_t>(q) * static_cast<std::size_t>(k), "grid set has wrong size");
  }
};

struct AvoidZeroResult {
  int subgroup_index = 1;      // H = index * Z/qZ, [Z/qZ : H] = index
  int interval_cells = 1;      // I = [0, cells / K]
  Rational interval_length;
  Rational mass;               // mu(A ∩ (H x I))
  bool index_bound_clamped = false;
};

/// Minimizes mu(A ∩ (H x I)) over subgroups H of index <= index_bound and
/// grid intervals I = [0, l] with l >= min_interval. Mass only grows with H and
/// I, so ties go to the larger subgroup and then the longer interval.
inline AvoidZeroResult avoid_zero_diagnostic(const GridSet& g, int index_bound, const Rational& min_interval) {
  g.validate();
  require(index_bound >= 1, "index bound must be >= 1");
  require(min_interval > Rational(0), "min_interval must be positive");
  AvoidZeroResult out;
  if (index_bound > g.q) {
    index_bound = g.q;
    out.index_bound_clamped = true;
  }
  const std::int64_t jmin = std::max<std::int64_t>(1, (min_interval * Rational(g.k)).ceil());
  require(jmin <= g.k, "min_interval exceeds 1");
  bool have = false;
  for (int idx = 1; idx <= index_bound; ++idx) {
    if (g.q % idx != 0) continue;
    std::vector<std::int64_t> col(static_cast<std::size_t>(g.k + 1), 0);
    for (int a = 0; a < g.q; a += idx)
      for (int i = 1; i <= g.k; ++i) col[static_cast<std::size_t>(i)] += g.at(a, i) ? 1 : 0;
    std::int64_t run = 0;
    for (int j = 1; j <= g.k; ++j) {
      run += col[static_cast<std::size_t>(j)];
      if (j < jmin) continue;
      Rational mass(run, static_cast<std::int64_t>(g.q) * g.k);
      bool take = !have || mass < out.mass || (mass == out.mass && idx < out.subgroup_index) ||
                  (mass == out.mass && idx == out.subgroup_index && j > out.interval_cells);
      if (take) {
        have = true;
        out.subgroup_index = idx;
        out.interval_cells = j;
        out.interval_length = Rational(j, g.k);
        out.mass = mass;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5X - 4X covering

struct LevResult {
  bool covers = false;
  std::vector<std::int64_t> missing;  // elements of P not in 5X - 4X
};

/// Checks P ⊆ 5X - 4X for X ⊆ P with |X| > |P|/2 and |P| > 12.
inline LevResult lev_check(const Progression& p, const IntegerSet& x) {
  require(p.step > 0 && p.length >= 1, "progression needs step > 0 and length >= 1");
  require(p.length > 12, "lev_check needs |P| > 12");
  require(2 * static_cast<std::int64_t>(x.size()) > p.length, "lev_check needs |X| > |P|/2");
  std::vector<std::int64_t> u;
  for (auto v : x) {
    require(p.contains(v), "X must be a subset of P (" + std::to_string(v) + " is not)");
    u.push_back((v - p.start) / p.step);
  }
  const std::int64_t len = p.length;
  auto sumset = [&](const std::vector<char>& s) {
    std::vector<char> out(s.size() + static_cast<std::size_t>(len), 0);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i])
        for (auto v : u) out[i + static_cast<std::size_t>(v)] = 1;
    return out;
  };
  std::vector<char> one(static_cast<std::size_t>(len), 0);
  for (auto v : u) one[static_cast<std::size_t>(v)] = 1;
  std::vector<char> four = one;
  for (int k = 1; k < 4; ++k) four = sumset(four);
  std::vector<char> five = sumset(four);
  std::vector<char> hit(static_cast<std::size_t>(len), 0);
  for (std::size_t a = 0; a < five.size(); ++a) {
    if (!five[a]) continue;
    for (std::size_t b = 0; b < four.size(); ++b) {
      if (!four[b]) continue;
      auto t = static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
      if (t >= 0 && t < len) hit[static_cast<std::size_t>(t)] = 1;
    }
  }
  LevResult out;
  for (std::int64_t t = 0; t < len; ++t)
    if (!hit[static_cast<std::size_t>(t)]) out.missing.push_back(p.at(t));
  out.covers = out.missing.empty();
  return out;
}

}  // namespace sumfree::structure
