#pragma once

// Quantitative irrationality of theta in R^d and empirical equidistribution
// errors of (n mod q, n/N, theta n) against trigonometric test functions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "sumfree/core.hpp"
#include "sumfree/structure.hpp"
#include "sumfree/weights.hpp"

namespace sumfree::equidist {

struct Theta {
  std::vector<double> components;

  std::size_t dim() const noexcept { return components.size(); }
  void validate() const {
    require(!components.empty(), "theta needs at least one component");
    for (double c : components) require(std::isfinite(c), "theta components must be finite");
  }
};

/// Distance to the nearest integer.
inline long double circle_norm(long double x) {
  long double f = x - std::floor(x);
  return std::min(f, 1.0L - f);
}

struct IrrationalityReport {
  bool holds = false;
  std::vector<std::int64_t> worst_q;
  double worst_distance = 0.0;
  double threshold = 0.0;  // A / N
  std::uint64_t vectors_checked = 0;
};

inline constexpr double kMaxExhaustiveA = 1000.0;
inline constexpr std::uint64_t kMaxEnumeration = 200'000'000ULL;

/// Number of nonzero q in Z^d with sum |q_i| <= a and first nonzero entry positive.
inline long double enumeration_size(std::int64_t a, std::size_t d) {
  // Lattice points of the l1 ball: sum_k 2^k C(d,k) C(a,k).
  long double total = 0.0L;
  for (std::size_t k = 0; k <= d && static_cast<std::int64_t>(k) <= a; ++k) {
    long double c = std::pow(2.0L, static_cast<long double>(k));
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = static_cast<long double>(i + 1);
      c *= static_cast<long double>(d - i) / j * static_cast<long double>(a - static_cast<std::int64_t>(i)) / j;
    }
    total += c;
  }
  return (total - 1.0L) / 2.0L;
}

/// Exhaustive over nonzero q with sum |q_i| <= A; q and -q are identified by
/// requiring the first nonzero entry to be positive. Ties in distance go to
/// the lexicographically smallest vector.
inline IrrationalityReport irrationality_check(const Theta& theta, double a, std::int64_t n) {
  theta.validate();
  require(a > 0.0 && std::isfinite(a), "A must be positive");
  require(n >= 1, "N must be >= 1");
  if (a > kMaxExhaustiveA) fail(Error::Kind::kDomain, "A too large for exhaustive enumeration (use A <= 1000)");
  const auto budget = static_cast<std::int64_t>(std::floor(a));
  const std::size_t d = theta.dim();
  if (enumeration_size(budget, d) > static_cast<long double>(kMaxEnumeration))
    fail(Error::Kind::kDomain, "too many q-vectors to enumerate; reduce A or the dimension");

  IrrationalityReport rep;
  rep.threshold = a / static_cast<double>(n);
  long double best = 1.0L;
  bool found = false;
  std::vector<std::int64_t> q(d, 0);
  // partial: sum_{j < i} q_j theta_j mod 1; leading: whether a nonzero entry has appeared.
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left, long double partial, bool leading) -> void {
    if (i == d) {
      if (!leading) return;
      ++rep.vectors_checked;
      long double dist = circle_norm(partial);
      if (!found || dist < best || (dist == best && q < rep.worst_q)) {
        found = true;
        best = dist;
        rep.worst_q = q;
      }
      return;
    }
    const long double th = static_cast<long double>(theta.components[i]);
    for (std::int64_t v = leading ? -left : 0; v <= left; ++v) {
      q[i] = v;
      long double t = static_cast<long double>(v) * th;
      self(self, i + 1, left - (v < 0 ? -v : v), partial + (t - std::floor(t)), leading || v != 0);
    }
    q[i] = 0;
  };
  rec(rec, 0, budget, 0.0L, false);
  if (!found) {
    // A < 1: no nonzero vector, the condition is vacuous.
    rep.holds = true;
    rep.worst_distance = 0.5;
    return rep;
  }
  rep.worst_distance = static_cast<double>(best);
  rep.holds = best >= static_cast<long double>(rep.threshold);
  return rep;
}

// ---------------------------------------------------------------------------
// Test functions

/// c * e(a x / q + (m/2) y + k . z) on Z/qZ x [0,1] x (R/Z)^d.
/// Half-integer y-frequencies cover the reflected cosine basis of [0,1].
struct Term {
  std::complex<double> coef;
  std::int64_t a = 0;
  std::int64_t m = 0;
  std::vector<std::int64_t> k;
};

struct TestFunction {
  std::int64_t q = 1;
  std::vector<Term> terms;
  double lipschitz = 0.0;  // declared bound

  /// sum |c| 2 pi (|m|/2 + sum |k_i|).
  double computed_lipschitz() const {
    double s = 0.0;
    for (const auto& t : terms) {
      double f = std::abs(static_cast<double>(t.m)) / 2.0;
      for (auto ki : t.k) f += std::abs(static_cast<double>(ki));
      s += std::abs(t.coef) * 2.0 * std::numbers::pi * f;
    }
    return s;
  }

  void validate(std::size_t d) const {
    require(q >= 1, "test function needs q >= 1");
    for (const auto& t : terms) require(t.k.size() == d, "frequency vector length must match theta");
    require(lipschitz >= computed_lipschitz() * (1.0 - 1e-12), "declared Lipschitz bound below the computed bound");
  }

  /// Exact integral over the product measure.
  std::complex<double> integral() const {
    std::complex<double> s = 0.0;
    for (const auto& t : terms) {
      if (((t.a % q) + q) % q != 0) continue;
      bool zero_k = true;
      for (auto ki : t.k) zero_k = zero_k && ki == 0;
      if (!zero_k) continue;
      if (t.m == 0)
        s += t.coef;
      else if (t.m % 2 != 0)
        s += t.coef * std::complex<double>(0.0, 2.0 / (std::numbers::pi * static_cast<double>(t.m)));
    }
    return s;
  }

  std::complex<double> operator()(std::int64_t x, double y, const std::vector<long double>& z) const {
    std::complex<double> s = 0.0;
    for (const auto& t : terms) {
      long double ph = static_cast<long double>(((t.a * x) % q + q) % q) / static_cast<long double>(q) +
                       static_cast<long double>(t.m) / 2.0L * static_cast<long double>(y);
      for (std::size_t i = 0; i < z.size(); ++i) ph += static_cast<long double>(t.k[i]) * z[i];
      ph -= std::floor(ph);
      double ang = 2.0 * std::numbers::pi * static_cast<double>(ph);
      s += t.coef * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
  }

  /// Fills the declared bound with the computed one.
  static TestFunction with_bound(std::int64_t q, std::vector<Term> terms) {
    TestFunction f{q, std::move(terms), 0.0};
    f.lipschitz = f.computed_lipschitz();
    return f;
  }
};

/// cos(2 pi k . z) as two terms.
inline TestFunction cosine(std::vector<std::int64_t> k) {
  std::vector<std::int64_t> neg(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) neg[i] = -k[i];
  return TestFunction::with_bound(1, {{0.5, 0, 0, std::move(k)}, {0.5, 0, 0, std::move(neg)}});
}

struct EquidistError {
  std::complex<double> empirical;
  std::complex<double> integral;
  double error = 0.0;
  std::int64_t count = 0;
};

/// Average of F(n mod q, n/N, theta n) over n in P (default {1..N}).
inline EquidistError equidist_error(const Theta& theta, const TestFunction& f, std::int64_t n,
                                    const std::optional<structure::Progression>& p = std::nullopt) {
  theta.validate();
  f.validate(theta.dim());
  require(n >= 1, "N must be >= 1");
  structure::Progression prog = p.value_or(structure::Progression{1, 1, n});
  prog.validate(n);
  EquidistError out;
  std::complex<long double> acc = 0.0L;
  std::vector<long double> z(theta.dim());
  for (std::int64_t j = 0; j < prog.length; ++j) {
    const std::int64_t x = prog.at(j);
    for (std::size_t i = 0; i < z.size(); ++i) {
      long double t = static_cast<long double>(x) * static_cast<long double>(theta.components[i]);
      z[i] = t - std::floor(t);
    }
    auto v = f(x, static_cast<double>(x) / static_cast<double>(n), z);
    acc += std::complex<long double>(v.real(), v.imag());
  }
  out.count = prog.length;
  acc /= static_cast<long double>(prog.length);
  out.empirical = std::complex<double>(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  out.integral = f.integral();
  out.error = std::abs(out.empirical - out.integral);
  return out;
}

// ---------------------------------------------------------------------------
// Riemann sums of grid weights

struct RiemannError {
  double average = 0.0;  // E_{n <= N} w(n mod Q, n/N)
  double mean = 0.0;     // cell mean of w
  double error = 0.0;
};

inline RiemannError riemann_error(const weights::GridWeight& w, std::int64_t n) {
  w.validate();
  require(n >= w.k, "riemann_error needs N >= K");
  long double acc = 0.0L;
  for (std::int64_t x = 1; x <= n; ++x)
    acc += w.value_at(static_cast<std::uint64_t>(x), weights::cell_of(x, n, w.k));
  RiemannError r;
  r.average = static_cast<double>(acc / static_cast<long double>(n));
  r.mean = weights::weight_stats(w).mean;
  r.error = std::abs(r.average - r.mean);
  return r;
}

}  // namespace sumfree::equidist
