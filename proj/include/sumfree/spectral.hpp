#pragma once

// Fourier-side numerics on Z/N'Z: Gowers U^2 norms, summing-triple counts,
// autocorrelation and popular differences, a threshold decomposition, and
// the Pollard / Macbeath inequality checks.
//
// Fourier convention: f^(r) = E_{x in G} f(x) e(-rx/N'), so that
// ||f||_{U^2(G)}^4 = sum_r |f^(r)|^4 and sum_r |f^(r)|^2 = E_x |f(x)|^2.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "sumfree/core.hpp"
#include "sumfree/fft.hpp"

namespace sumfree::spectral {

struct Spectrum {
  std::vector<Complex> coefficients;
};

inline Spectrum spectrum(const CyclicSignal& f) {
  std::vector<Complex> c = f.values();
  fft::forward(c);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& v : c) v *= inv;
  return {std::move(c)};
}

inline CyclicSignal interval_indicator(std::size_t n, std::size_t nprime) {
  std::vector<Complex> v(nprime, Complex{});
  for (std::size_t i = 1; i <= n; ++i) v[i] = 1.0;
  return CyclicSignal(std::move(v), n);
}

/// ||f||_{U^2(G)} through the fourth moment of the spectrum.
inline double u2_norm_group(const CyclicSignal& f) {
  const auto s = spectrum(f);
  double m4 = 0.0;
  for (const auto& c : s.coefficients) {
    double a = std::norm(c);
    m4 += a * a;
  }
  return std::pow(m4, 0.25);
}

/// ||f||_{U^2(N)} = ||f||_{U^2(G)} / ||1_{[N]}||_{U^2(G)}.
inline double u2_norm(const CyclicSignal& f) {
  return u2_norm_group(f) / u2_norm_group(interval_indicator(f.ref_n(), f.nprime()));
}

inline constexpr std::size_t kDirectU2Limit = 512;

/// ||f||_{U^2(G)} from the defining average over (x, h1, h2). Cubic cost;
/// this is the reference the Fourier path is checked against.
inline double u2_norm_group_direct(const CyclicSignal& f) {
  const std::size_t n = f.nprime();
  if (n > kDirectU2Limit) fail(Error::Kind::kDomain, "direct U2 limited to N' <= 512");
  std::vector<Complex> ext(3 * n);
  for (std::size_t i = 0; i < 3 * n; ++i) ext[i] = f.values()[i % n];
  Complex acc{};
  for (std::size_t x = 0; x < n; ++x) {
    const Complex fx = ext[x];
    if (fx == Complex{}) continue;
    for (std::size_t h1 = 0; h1 < n; ++h1) {
      const Complex a = fx * std::conj(ext[x + h1]);
      if (a == Complex{}) continue;
      Complex inner{};
      for (std::size_t h2 = 0; h2 < n; ++h2) inner += std::conj(ext[x + h2]) * ext[x + h1 + h2];
      acc += a * inner;
    }
  }
  const double nn = static_cast<double>(n);
  const double mean = acc.real() / (nn * nn * nn);
  return std::pow(std::max(mean, 0.0), 0.25);
}

inline double u2_norm_direct(const CyclicSignal& f) {
  return u2_norm_group_direct(f) / u2_norm_group_direct(interval_indicator(f.ref_n(), f.nprime()));
}

/// T(f) = N^-2 sum_{n,n' <= N} f(n) f(n') f(n+n'); f[0] holds f(1).
inline double t_count(std::span<const double> f) {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  const auto conv = fft::convolve(f, f);  // conv[k] = sum_{n+n'=k+2} f(n) f(n')
  double acc = 0.0;
  for (std::size_t m = 2; m <= n; ++m) acc += conv[m - 2] * f[m - 1];
  return acc / (static_cast<double>(n) * static_cast<double>(n));
}

/// g(d) = |A ∩ (A+d)| / N for |d| < N, kept as exact integer counts.
class Autocorrelation {
 public:
  Autocorrelation(std::size_t n, std::vector<std::int64_t> counts) : n_(n), counts_(std::move(counts)) {}

  std::size_t n() const noexcept { return n_; }
  /// |A ∩ (A+d)|, zero when |d| >= N.
  std::int64_t count(std::int64_t d) const noexcept {
    const auto nn = static_cast<std::int64_t>(n_);
    if (d <= -nn || d >= nn) return 0;
    return counts_[static_cast<std::size_t>(d + nn - 1)];
  }
  double value(std::int64_t d) const noexcept { return static_cast<double>(count(d)) / static_cast<double>(n_); }
  /// Counts for d = -(N-1), ..., N-1.
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

 private:
  std::size_t n_;
  std::vector<std::int64_t> counts_;
};

inline Autocorrelation autocorrelation(const IntegerSet& a, std::size_t n) {
  require(n >= 1, "autocorrelation needs N >= 1");
  const auto f = indicator(a, n);
  std::vector<double> rev(f.rbegin(), f.rend());
  // conv[k] = sum_y 1_A(y) 1_A(y + (N-1) - k): lag d = (N-1) - k.
  const auto conv = fft::convolve(f, rev);
  std::vector<std::int64_t> counts(2 * n - 1);
  for (std::size_t k = 0; k < conv.size(); ++k) {
    auto d = static_cast<std::int64_t>(n) - 1 - static_cast<std::int64_t>(k);
    counts[static_cast<std::size_t>(d + static_cast<std::int64_t>(n) - 1)] = std::llround(conv[k]);
  }
  return Autocorrelation(n, std::move(counts));
}

/// D_t(A) = {d : 1_A * 1_{-A}(d) >= t}, sorted.
inline std::vector<std::int64_t> popular_differences(const Autocorrelation& g, double t) {
  require(t > 0.0 && t <= 1.0, "popular differences need 0 < t <= 1");
  std::vector<std::int64_t> out;
  const auto nn = static_cast<std::int64_t>(g.n());
  const double need = t * static_cast<double>(g.n());
  for (std::int64_t d = -(nn - 1); d <= nn - 1; ++d)
    if (static_cast<double>(g.count(d)) >= need) out.push_back(d);
  return out;
}

inline std::vector<std::int64_t> popular_differences(const IntegerSet& a, std::size_t n, double t) {
  return popular_differences(autocorrelation(a, n), t);
}

// ---------------------------------------------------------------------------
// Threshold decomposition

struct DecompositionPair {
  CyclicSignal f_tor;
  CyclicSignal f_unf;
  double tau = 0.0;
  std::size_t frequency_count = 0;
};

/// Splits f into the part spanned by frequencies with |f^(r)| >= tau and the
/// remainder. Then ||f_unf||_{U^2(G)}^4 <= tau^2 E|f|^2 and at most
/// E|f|^2 / tau^2 frequencies are retained.
inline DecompositionPair fourier_decompose(const CyclicSignal& f, double tau) {
  require(tau > 0.0, "threshold must be positive");
  auto coeffs = spectrum(f).coefficients;
  std::size_t kept = 0;
  for (auto& c : coeffs) {
    if (std::abs(c) >= tau)
      ++kept;
    else
      c = Complex{};
  }
  const double np = static_cast<double>(coeffs.size());
  for (auto& c : coeffs) c *= np;
  fft::inverse(coeffs);
  std::vector<Complex> rest(f.nprime());
  for (std::size_t i = 0; i < rest.size(); ++i) rest[i] = f.values()[i] - coeffs[i];
  return {CyclicSignal(std::move(coeffs), f.ref_n()), CyclicSignal(std::move(rest), f.ref_n()), tau, kept};
}

// ---------------------------------------------------------------------------
// Pollard and Macbeath

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct InequalityCheck {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

/// On Z/pZ with uniform probability measure:
///   lhs = E_x min(1_{S1} * 1_{S2}(x), t),  rhs = t min(mu(S1) + mu(S2) - t, 1),
/// where 1_{S1} * 1_{S2}(x) = #{(a,b) in S1 x S2 : a + b = x} / p. The
/// inequality is Pollard's theorem when t is a multiple of 1/p, so t is
/// required to lie on that lattice.
inline InequalityCheck pollard_check(const std::vector<std::int64_t>& s1, const std::vector<std::int64_t>& s2,
                                     std::int64_t p, const Rational& t) {
  require(is_prime(p), "pollard_check needs p prime (got " + std::to_string(p) + ")");
  auto normalize = [&](const std::vector<std::int64_t>& s) {
    std::vector<char> m(static_cast<std::size_t>(p), 0);
    for (auto x : s) m[static_cast<std::size_t>(((x % p) + p) % p)] = 1;
    return m;
  };
  const auto m1 = normalize(s1), m2 = normalize(s2);
  std::int64_t n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < m1.size(); ++i) {
    n1 += m1[i];
    n2 += m2[i];
  }
  const Rational tp = t * Rational(p);
  require(tp.den() == 1, "t must be a multiple of 1/p");
  require(tp.num() >= 0 && tp.num() <= std::min(n1, n2), "t out of range [0, min(|S1|,|S2|)/p]");
  const std::int64_t k = tp.num();
  std::int64_t acc = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    std::int64_t r = 0;
    for (std::int64_t a = 0; a < p; ++a)
      if (m1[static_cast<std::size_t>(a)] && m2[static_cast<std::size_t>(((x - a) % p + p) % p)]) ++r;
    acc += std::min(r, k);
  }
  InequalityCheck out;
  out.lhs = Rational(acc, p * p);
  const Rational total = Rational(n1 + n2, p) - t;
  out.rhs = t * std::min(total, Rational(1));
  out.holds = out.lhs >= out.rhs;
  return out;
}

/// The torus inequality for S1, S2 unions of cells [j/K, (j+1)/K) of R/Z.
/// The convolution of two such sets is piecewise linear with nodes at c/K,
/// so both sides are evaluated exactly; any 0 <= t <= min(mu(S1), mu(S2)).
/// Sets that are not cell unions must be rounded to the grid by the caller,
/// which costs O(1/K) in measure.
inline InequalityCheck macbeath_cells(const std::vector<std::int64_t>& cells1, const std::vector<std::int64_t>& cells2,
                                      std::int64_t k, const Rational& t) {
  require(k >= 1, "macbeath_cells needs K >= 1");
  auto normalize = [&](const std::vector<std::int64_t>& s) {
    std::vector<char> m(static_cast<std::size_t>(k), 0);
    for (auto x : s) m[static_cast<std::size_t>(((x % k) + k) % k)] = 1;
    return m;
  };
  const auto m1 = normalize(cells1), m2 = normalize(cells2);
  std::int64_t n1 = 0, n2 = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    n1 += m1[static_cast<std::size_t>(i)];
    n2 += m2[static_cast<std::size_t>(i)];
  }
  const Rational mu1(n1, k), mu2(n2, k);
  require(t >= Rational(0) && t <= std::min(mu1, mu2), "t out of range [0, min(mu(S1), mu(S2))]");
  // r[m] = #{(a,b) : a + b = m mod K}; conv(c/K) = r[c-1] / K.
  std::vector<std::int64_t> r(static_cast<std::size_t>(k), 0);
  for (std::int64_t a = 0; a < k; ++a)
    if (m1[static_cast<std::size_t>(a)])
      for (std::int64_t b = 0; b < k; ++b)
        if (m2[static_cast<std::size_t>(b)]) ++r[static_cast<std::size_t>((a + b) % k)];
  auto node = [&](std::int64_t c) { return Rational(r[static_cast<std::size_t>(((c - 1) % k + k) % k)], k); };
  const Rational h(1, k);
  Rational lhs(0);
  for (std::int64_t c = 0; c < k; ++c) {
    Rational u = node(c), v = node(c + 1);
    if (u <= t && v <= t) {
      lhs += h * (u + v) * Rational(1, 2);
    } else if (u >= t && v >= t) {
      lhs += h * t;
    } else {
      // Crosses t once; integrate the part below t and cap the rest.
      Rational lo = std::min(u, v), hi = std::max(u, v);
      Rational s = (t - lo) / (hi - lo);
      lhs += h * (s * (lo + t) * Rational(1, 2) + (Rational(1) - s) * t);
    }
  }
  InequalityCheck out;
  out.lhs = lhs;
  out.rhs = t * std::min(mu1 + mu2 - t, Rational(1));
  out.holds = out.lhs >= out.rhs;
  return out;
}

// ---------------------------------------------------------------------------

struct StabilityGap {
  double t_gap = 0.0;
  double l1_gap = 0.0;  // E_{n <= N} |f - g|
  double u2_gap = 0.0;  // ||f - g||_{U^2(N)}
};

/// The three quantities compared by the T-stability bound |T(f)-T(g)| <= 7 ||f-g||_1.
inline StabilityGap t_stability_gap(std::span<const double> f, std::span<const double> g) {
  require(f.size() == g.size() && !f.empty(), "t_stability_gap needs equal nonempty lengths");
  std::vector<double> diff(f.size());
  double l1 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    require(std::abs(f[i]) <= 1.0 && std::abs(g[i]) <= 1.0, "t_stability_gap needs values in [-1, 1]");
    diff[i] = f[i] - g[i];
    l1 += std::abs(diff[i]);
  }
  StabilityGap out;
  out.t_gap = std::abs(t_count(f) - t_count(g));
  out.l1_gap = l1 / static_cast<double>(f.size());
  out.u2_gap = u2_norm(CyclicSignal::from_real(diff));
  return out;
}

}  // namespace sumfree::spectral
