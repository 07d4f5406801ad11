#pragma once

// Randomized property suites. A master seed fans out as
//   suite seed    = master.split(suite index)
//   property seed = suite seed.split(property index)
//   trial seed    = property seed.split(trial)
// so any failure is reproduced from (master, suite, property, trial) alone.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sumfree/core.hpp"
#include "sumfree/equidist.hpp"
#include "sumfree/io.hpp"
#include "sumfree/reference.hpp"
#include "sumfree/solver.hpp"
#include "sumfree/spectral.hpp"
#include "sumfree/structure.hpp"
#include "sumfree/weights.hpp"

namespace sumfree::check {

// ---------------------------------------------------------------------------
// Generators

namespace gen {

/// `size` distinct integers from [1, max_value].
inline IntegerSet positive_set(Rng& rng, std::size_t size, std::int64_t max_value) {
  require(static_cast<std::int64_t>(size) <= max_value, "set size exceeds range");
  std::set<std::int64_t> s;
  while (s.size() < size) s.insert(rng.between(1, max_value));
  return IntegerSet(std::vector<std::int64_t>(s.begin(), s.end()));
}

/// Each n in [1, n_max] kept with probability p (at least one element).
inline IntegerSet bernoulli_set(Rng& rng, std::int64_t n_max, double p) {
  std::vector<std::int64_t> v;
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (rng.coin(p)) v.push_back(n);
  if (v.empty()) v.push_back(rng.between(1, n_max));
  return IntegerSet(std::move(v));
}

inline std::vector<double> real_signal(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::vector<double> f(n);
  for (auto& v : f) v = lo + (hi - lo) * rng.uniform();
  return f;
}

inline std::vector<Complex> complex_signal(Rng& rng, std::size_t n) {
  std::vector<Complex> f(n);
  for (auto& v : f) v = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  return f;
}

/// Nonempty subset of Z/pZ.
inline std::vector<std::int64_t> residue_subset(Rng& rng, std::int64_t p) {
  std::vector<std::int64_t> s;
  const double dens = rng.uniform();
  for (std::int64_t x = 0; x < p; ++x)
    if (rng.coin(dens)) s.push_back(x);
  if (s.empty()) s.push_back(rng.between(0, p - 1));
  return s;
}

/// Alpha grid with values k/scale, k in [0, scale].
inline structure::AlphaGrid<std::int64_t> alpha_grid(Rng& rng, int q, int m, std::int64_t scale) {
  structure::AlphaGrid<std::int64_t> g{q, m, {}};
  const double zero_rate = rng.uniform() * 0.7;
  for (int i = 0; i < q * m; ++i) g.values.push_back(rng.coin(zero_rate) ? 0 : rng.between(0, scale));
  return g;
}

struct LevInstance {
  structure::Progression p;
  IntegerSet x;
};

/// |P| in [13, max_len], X ⊆ P with |X| > |P|/2.
inline LevInstance lev_instance(Rng& rng, std::int64_t max_len) {
  LevInstance in;
  in.p.length = rng.between(13, max_len);
  in.p.start = rng.between(-50, 50);
  in.p.step = rng.between(1, 7);
  const std::int64_t need = in.p.length / 2 + 1;
  const std::int64_t size = rng.between(need, in.p.length);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(in.p.length));
  for (std::int64_t i = 0; i < in.p.length; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(idx);
  std::vector<std::int64_t> v;
  for (std::int64_t i = 0; i < size; ++i) v.push_back(in.p.at(idx[static_cast<std::size_t>(i)]));
  // IntegerSet rejects 0; shift the progression if needed.
  if (std::find(v.begin(), v.end(), 0) != v.end()) {
    in.p.start += 1000 * in.p.step;
    for (auto& e : v) e += 1000 * in.p.step;
  }
  in.x = IntegerSet(std::move(v));
  return in;
}

}  // namespace gen

// ---------------------------------------------------------------------------
// Runner

struct PropertyResult {
  std::string suite;
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::optional<std::uint64_t> first_failed_trial;
  std::string first_failure;
  double seconds = 0.0;

  bool passed() const noexcept { return failures == 0; }
};

/// A trial returns an empty string on success, a description otherwise.
using Trial = std::function<std::string(Rng&)>;

struct Property {
  std::string name;
  std::uint64_t trials;
  Trial trial;
};

inline PropertyResult run_property(const std::string& suite, const Property& prop, Seed seed) {
  PropertyResult r;
  r.suite = suite;
  r.name = prop.name;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < prop.trials; ++i) {
    Rng rng(seed.split(i));
    std::string msg;
    try {
      msg = prop.trial(rng);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    ++r.trials;
    if (!msg.empty()) {
      ++r.failures;
      if (!r.first_failed_trial) {
        r.first_failed_trial = i;
        r.first_failure = msg;
      }
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string expect(bool ok, const std::string& what) { return ok ? std::string{} : what; }

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace detail

inline std::vector<Property> solver_properties() {
  using detail::expect;
  return {
      {"exact_matches_exhaustive", 60,
       [](Rng& rng) {
         auto a = gen::positive_set(rng, static_cast<std::size_t>(rng.between(1, 14)), 40);
         for (auto conv : {SumFreeConvention::kAllowEqual, SumFreeConvention::kDistinctOnly}) {
           auto got = max_sum_free_subset(a, conv).optimum;
           auto want = reference::exhaustive_optimum(a, conv);
           if (got != want)
             return "optimum " + std::to_string(got) + " != exhaustive " + std::to_string(want) + " (" +
                    std::string(to_string(conv)) + ")";
         }
         return std::string{};
       }},
      {"dilation_floor", 200,
       [](Rng& rng) {
         auto a = gen::positive_set(rng, static_cast<std::size_t>(rng.between(1, 20)), rng.between(20, 60));
         auto c = dilation_sweep(a);
         if (!is_sum_free(c.selected, SumFreeConvention::kAllowEqual)) return std::string("selection not sum-free");
         if (c.size * 3 < a.size() + 1) return "size " + std::to_string(c.size) + " below floor";
         return expect(c.size == reference::dilation_bruteforce(a), "sweep disagrees with cell enumeration");
       }},
      {"compose_additive", 40,
       [](Rng& rng) {
         const auto na = rng.between(1, 7), nb = rng.between(1, 7);
         auto a = gen::positive_set(rng, static_cast<std::size_t>(na), 25);
         auto b = gen::positive_set(rng, static_cast<std::size_t>(nb), 25);
         auto c = compose(a, b);
         auto conv = SumFreeConvention::kAllowEqual;
         auto lhs = reference::exhaustive_optimum(c, conv);
         auto rhs = reference::exhaustive_optimum(a, conv) + reference::exhaustive_optimum(b, conv);
         return expect(lhs == rhs, "optimum(compose) " + std::to_string(lhs) + " != " + std::to_string(rhs));
       }},
      {"heuristic_bounded_by_exact", 30,
       [](Rng& rng) {
         auto a = gen::positive_set(rng, static_cast<std::size_t>(rng.between(5, 24)), 80);
         auto conv = SumFreeConvention::kAllowEqual;
         auto h = heuristic_sum_free(a, conv, 1, Seed{rng()});
         auto e = max_sum_free_subset(a, conv);
         if (h.optimum > e.optimum) return std::string("heuristic exceeds exact optimum");
         return expect(h.optimum * 3 >= a.size() + 1, "heuristic below the dilation floor");
       }},
  };
}

inline std::vector<Property> spectral_properties() {
  using detail::close;
  using detail::expect;
  using detail::fmt;
  return {
      {"parseval", 50,
       [](Rng& rng) {
         auto f = gen::complex_signal(rng, static_cast<std::size_t>(rng.between(1, 60)));
         auto s = CyclicSignal::from_interval(f, static_cast<std::size_t>(rng.between(4 * static_cast<std::int64_t>(f.size()) + 1, 400)));
         double lhs = 0.0, rhs = 0.0;
         for (auto c : spectral::spectrum(s).coefficients) lhs += std::norm(c);
         for (auto v : s.values()) rhs += std::norm(v);
         rhs /= static_cast<double>(s.nprime());
         return expect(close(lhs, rhs, 1e-10), "sum |f^|^2 = " + fmt(lhs) + " vs E|f|^2 = " + fmt(rhs));
       }},
      {"u2_matches_direct", 30,
       [](Rng& rng) {
         const auto n = static_cast<std::size_t>(rng.between(1, 30));
         const auto np = static_cast<std::size_t>(rng.between(4 * static_cast<std::int64_t>(n) + 1, 128));
         auto s = CyclicSignal::from_interval(gen::complex_signal(rng, n), np);
         double a = spectral::u2_norm(s), b = spectral::u2_norm_direct(s);
         return expect(std::abs(a - b) <= 1e-9, "fft " + fmt(a) + " direct " + fmt(b));
       }},
      {"u2_nprime_independent", 30,
       [](Rng& rng) {
         const auto n = static_cast<std::size_t>(rng.between(1, 50));
         auto f = gen::complex_signal(rng, n);
         double a = spectral::u2_norm(CyclicSignal::from_interval(f));
         double b = spectral::u2_norm(CyclicSignal::from_interval(f, 4 * n + 1 + static_cast<std::size_t>(rng.below(300))));
         return expect(std::abs(a - b) <= 1e-6, "U2 differs across N': " + fmt(a) + " vs " + fmt(b));
       }},
      {"tcount_matches_direct", 50,
       [](Rng& rng) {
         auto f = gen::real_signal(rng, static_cast<std::size_t>(rng.between(1, 200)));
         double a = spectral::t_count(f), b = reference::t_count_direct(f);
         return expect(std::abs(a - b) <= 1e-9, "fft " + fmt(a) + " direct " + fmt(b));
       }},
      {"t_stability", 100,
       [](Rng& rng) {
         const auto n = static_cast<std::size_t>(rng.between(1, 150));
         auto f = gen::real_signal(rng, n, 0.0, 1.0);
         auto g = f;
         const double frac = rng.uniform();
         for (auto& v : g)
           if (rng.coin(frac)) v = rng.uniform();
         auto gap = spectral::t_stability_gap(f, g);
         return expect(gap.t_gap <= 7.0 * gap.l1_gap + 1e-12, "|T(f)-T(g)| " + fmt(gap.t_gap) + " > 7*" + fmt(gap.l1_gap));
       }},
      {"autocorrelation_counts", 40,
       [](Rng& rng) {
         const auto n = rng.between(1, 120);
         auto a = gen::bernoulli_set(rng, n, rng.uniform());
         auto g = spectral::autocorrelation(a, static_cast<std::size_t>(n));
         for (std::int64_t d = -(n - 1); d <= n - 1; ++d)
           if (g.count(d) != reference::shift_count(a, d)) return "count mismatch at d=" + std::to_string(d);
         return std::string{};
       }},
      {"pollard", 300,
       [](Rng& rng) {
         const std::int64_t ps[] = {5, 7, 11, 13};
         const auto p = ps[rng.below(4)];
         auto s1 = gen::residue_subset(rng, p), s2 = gen::residue_subset(rng, p);
         const auto kmax = static_cast<std::int64_t>(std::min(s1.size(), s2.size()));
         auto r = spectral::pollard_check(s1, s2, p, Rational(rng.between(0, kmax), p));
         return expect(r.holds, "lhs " + r.lhs.str() + " < rhs " + r.rhs.str());
       }},
      {"macbeath_cells", 200,
       [](Rng& rng) {
         const auto k = rng.between(1, 24);
         auto s1 = gen::residue_subset(rng, k), s2 = gen::residue_subset(rng, k);
         const auto m = static_cast<std::int64_t>(std::min(s1.size(), s2.size()));
         const auto den = rng.between(1, 12);
         auto t = Rational(rng.between(0, m * den), k * den);
         auto r = spectral::macbeath_cells(s1, s2, k, t);
         return expect(r.holds, "lhs " + r.lhs.str() + " < rhs " + r.rhs.str());
       }},
      {"young", 50,
       [](Rng& rng) {
         // ||f * g||_inf <= ||f||_2 ||g||_2 on Z/nZ with averaged convolution.
         const auto n = static_cast<std::size_t>(rng.between(1, 64));
         auto f = gen::real_signal(rng, n), g = gen::real_signal(rng, n);
         double f2 = 0.0, g2 = 0.0, worst = 0.0;
         for (std::size_t i = 0; i < n; ++i) {
           f2 += f[i] * f[i];
           g2 += g[i] * g[i];
         }
         const double bound = std::sqrt(f2 / static_cast<double>(n)) * std::sqrt(g2 / static_cast<double>(n));
         for (std::size_t x = 0; x < n; ++x) {
           double c = 0.0;
           for (std::size_t y = 0; y < n; ++y) c += f[y] * g[(x + n - y) % n];
           worst = std::max(worst, std::abs(c) / static_cast<double>(n));
         }
         return expect(worst <= bound * (1.0 + 1e-12), "||f*g||_inf " + fmt(worst) + " > " + fmt(bound));
       }},
      {"decomposition", 30,
       [](Rng& rng) {
         const auto n = static_cast<std::size_t>(rng.between(1, 60));
         auto s = CyclicSignal::from_real(gen::real_signal(rng, n));
         const double tau = 0.01 + 0.3 * rng.uniform();
         auto d = spectral::fourier_decompose(s, tau);
         double e2 = 0.0, worst = 0.0;
         for (std::size_t i = 0; i < s.nprime(); ++i) {
           e2 += std::norm(s.values()[i]);
           worst = std::max(worst, std::abs(d.f_tor.values()[i] + d.f_unf.values()[i] - s.values()[i]));
         }
         e2 /= static_cast<double>(s.nprime());
         if (worst > 1e-9) return "f_tor + f_unf differs from f by " + fmt(worst);
         const double u = spectral::u2_norm_group(d.f_unf);
         if (std::pow(u, 4) > tau * tau * e2 * (1.0 + 1e-9)) return std::string("unstructured part has large U2");
         return expect(static_cast<double>(d.frequency_count) <= e2 / (tau * tau) + 1e-9, "too many frequencies kept");
       }},
  };
}

inline std::vector<Property> structure_properties() {
  using detail::expect;
  return {
      {"alpha_tilde_inequality", 300,
       [](Rng& rng) {
         const int q = static_cast<int>(rng.between(1, 6)), m = static_cast<int>(rng.between(1, 6));
         constexpr std::int64_t kScale = 20;
         auto g = gen::alpha_grid(rng, q, m, kScale);
         const std::int64_t etas[] = {0, 2, 6};  // 0, 0.1, 0.3
         const auto eta = etas[rng.below(3)];
         auto r = structure::alpha_tilde(g, eta);
         if (!r.holds) return "sum " + std::to_string(r.sum_tilde) + " < rhs " + std::to_string(r.rhs);
         structure::AlphaGrid<double> gd{q, m, {}};
         for (auto v : g.values) gd.values.push_back(static_cast<double>(v));
         const double direct = reference::alpha_tilde_sum_direct(gd, static_cast<double>(eta));
         return expect(std::abs(direct - static_cast<double>(r.sum_tilde)) < 1e-9, "alpha-tilde sum disagrees with definition");
       }},
      {"lev_covering", 200,
       [](Rng& rng) {
         auto in = gen::lev_instance(rng, 24);
         auto r = structure::lev_check(in.p, in.x);
         auto direct = reference::five_minus_four(in.x);
         for (std::int64_t i = 0; i < in.p.length; ++i)
           if ((direct.count(in.p.at(i)) != 0) == (std::find(r.missing.begin(), r.missing.end(), in.p.at(i)) != r.missing.end()))
             return "covering disagrees with explicit 5X-4X at " + std::to_string(in.p.at(i));
         return expect(r.covers, std::to_string(r.missing.size()) + " elements of P not covered");
       }},
      {"dense_progression_matches_naive", 20,
       [](Rng& rng) {
         const auto n = rng.between(1, 80);
         auto a = gen::bernoulli_set(rng, n, rng.uniform());
         const auto min_len = rng.between(1, std::max<std::int64_t>(1, n / 3));
         auto got = structure::find_dense_progression(a, n, min_len, Rational(1, 2));
         auto want = reference::naive_dense_progression(a, n, min_len);
         if (got.best.has_value() != want.has_value()) return std::string("existence differs");
         if (!want) return std::string{};
         return expect(got.best->progression == want->progression && got.best->density == want->density,
                       "scanner and naive oracle pick different progressions");
       }},
      {"avoid_zero_minimal", 100,
       [](Rng& rng) {
         const int q = static_cast<int>(rng.between(1, 12)), k = static_cast<int>(rng.between(1, 12));
         auto g = structure::GridSet::empty(q, k);
         const double dens = rng.uniform();
         for (int a = 0; a < q; ++a)
           for (int i = 1; i <= k; ++i) g.set(a, i, rng.coin(dens));
         const int bound = static_cast<int>(rng.between(1, q));
         const auto jmin = rng.between(1, k);
         auto r = structure::avoid_zero_diagnostic(g, bound, Rational(jmin, k));
         for (int idx = 1; idx <= bound; ++idx) {
           if (q % idx) continue;
           for (int j = static_cast<int>(jmin); j <= k; ++j) {
             std::int64_t c = 0;
             for (int a = 0; a < q; a += idx)
               for (int i = 1; i <= j; ++i) c += g.at(a, i);
             if (Rational(c, q * k) < r.mass) return "smaller mass at index " + std::to_string(idx);
           }
         }
         return std::string{};
       }},
  };
}

inline std::vector<Property> weights_properties() {
  using detail::expect;
  using detail::fmt;
  return {
      {"mean_floor_recurrence", 25,
       [](Rng& rng) {
         weights::IterationParams p;
         p.m = static_cast<int>(rng.between(2, 5));
         p.eps_prime = Rational(rng.between(1, 8), 8);
         p.t_samples = static_cast<int>(rng.between(2, 10));
         const Rational eps(rng.between(1, 15), 16);
         auto w = weights::uniform_weight(static_cast<int>(rng.between(1, 32)));
         const weights::ExactRational fixed = weights::ExactRational(1, 3) + weights::to_exact(eps) / 8;
         const int steps = static_cast<int>(rng.between(1, 6));
         for (int s = 0; s < steps; ++s) {
           auto next = weights::pushforward_step(w, p, eps);
           auto st = weights::weight_stats(next);
           if (std::abs(st.mean - 1.0) > 1e-12) return "mean " + fmt(st.mean) + " after step " + std::to_string(s + 1);
           if (st.min < 0.25) return "min " + fmt(st.min) + " below 1/4";
           if (next.alpha - fixed != weights::ExactRational(3, 4) * (w.alpha - fixed)) return std::string("alpha recurrence broken");
           w = std::move(next);
         }
         return std::string{};
       }},
      {"uniform_samples_everything", 20,
       [](Rng& rng) {
         const auto n = rng.between(1, 3000);
         auto a = weights::sample_set(weights::uniform_weight(static_cast<int>(rng.between(1, std::min<std::int64_t>(n, 16)))), n, Seed{rng()});
         return expect(static_cast<std::int64_t>(a.size()) == n, "uniform weight dropped elements");
       }},
      {"sampler_deterministic", 10,
       [](Rng& rng) {
         weights::IterationParams p;
         p.steps = 2;
         auto b = weights::build_weight(Rational(1, 4), p, 16);
         const Seed s{rng()};
         auto a1 = weights::sample_set(b.weight, 2000, s), a2 = weights::sample_set(b.weight, 2000, s);
         return expect(a1.elements() == a2.elements(), "same seed produced different sets");
       }},
  };
}

inline std::vector<Property> equidist_properties() {
  using detail::expect;
  using detail::fmt;
  return {
      {"worst_distance_monotone", 30,
       [](Rng& rng) {
         const auto d = static_cast<std::size_t>(rng.between(1, 2));
         equidist::Theta th;
         for (std::size_t i = 0; i < d; ++i) th.components.push_back(rng.uniform());
         double prev = 1.0;
         for (int a = 1; a <= 12; ++a) {
           auto r = equidist::irrationality_check(th, a, 1000);
           if (r.worst_distance > prev) return "worst distance increased at A=" + std::to_string(a);
           prev = r.worst_distance;
         }
         return std::string{};
       }},
      {"geometric_envelope", 40,
       [](Rng& rng) {
         equidist::Theta th{{rng.uniform()}};
         const auto q = rng.between(1, 10);
         const auto n = rng.between(10, 3000);
         auto f = equidist::TestFunction::with_bound(1, {{1.0, 0, 0, {q}}});
         auto e = equidist::equidist_error(th, f, n);
         const double dist = static_cast<double>(equidist::circle_norm(static_cast<long double>(q) * th.components[0]));
         if (dist == 0.0) return std::string{};
         const double env = 2.0 / (static_cast<double>(n) * dist);
         return expect(e.error <= env * (1.0 + 1e-9), "error " + fmt(e.error) + " above envelope " + fmt(env));
       }},
      {"riemann_boundary_bound", 20,
       [](Rng& rng) {
         const auto q = rng.between(1, 4);
         const int k = static_cast<int>(rng.between(1, 8));
         std::vector<double> v;
         for (std::int64_t i = 0; i < q * k; ++i) v.push_back(0.1 + rng.uniform());
         auto w = weights::GridWeight::from_dense(q, k, v);
         const auto n = rng.between(k, 5000);
         auto r = equidist::riemann_error(w, n);
         const double bound = 2.0 * static_cast<double>(k * q) * weights::weight_stats(w).max / static_cast<double>(n);
         return expect(r.error <= bound, "riemann error " + fmt(r.error) + " above " + fmt(bound));
       }},
  };
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"solver", "spectral", "structure", "weights", "equidist"};
  return names;
}

inline std::vector<Property> suite_properties(const std::string& suite) {
  if (suite == "solver") return solver_properties();
  if (suite == "spectral") return spectral_properties();
  if (suite == "structure") return structure_properties();
  if (suite == "weights") return weights_properties();
  if (suite == "equidist") return equidist_properties();
  fail(Error::Kind::kDomain, "unknown suite '" + suite + "'");
}

/// Runs one suite, or every suite for "all"; properties run in parallel.
inline std::vector<PropertyResult> run_suites(const std::string& which, Seed master) {
  std::vector<std::pair<std::string, std::size_t>> suites;
  for (std::size_t i = 0; i < suite_names().size(); ++i)
    if (which == "all" || which == suite_names()[i]) suites.emplace_back(suite_names()[i], i);
  if (suites.empty()) fail(Error::Kind::kDomain, "unknown suite '" + which + "'");
  struct Job {
    std::string suite;
    Property prop;
    Seed seed;
  };
  std::vector<Job> jobs;
  for (const auto& [name, idx] : suites) {
    auto props = suite_properties(name);
    const Seed suite_seed = master.split(idx);
    for (std::size_t j = 0; j < props.size(); ++j) jobs.push_back({name, props[j], suite_seed.split(j)});
  }
  std::vector<PropertyResult> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { out[i] = run_property(jobs[i].suite, jobs[i].prop, jobs[i].seed); });
  return out;
}

}  // namespace sumfree::check
