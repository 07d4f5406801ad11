#pragma once

// Weight functions on Z/QZ x [0,1] discretized to K right-closed cells per
// residue, the pushforward/smoothing iteration, and the Bernoulli sampler.
//
// Storage. One iteration step with multiplier M sends row x of the old weight
// to row Mx of the new one and sets every row not divisible by M to the
// constant 1/4. After L steps from a weight of modulus Q0 the row at residue x
// (mod Q = M^L Q0) therefore depends only on v = min(v_M(x), L):
//   v < L   -> class row v (shared by all residues of that valuation),
//   v == L  -> base row (x / M^L) mod Q0.
// Q itself overflows 64 bits after a few dozen steps, so rows are stored per
// class and Q is carried as an exact decimal string.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sumfree/core.hpp"
#include "sumfree/io.hpp"
#include "sumfree/solver.hpp"
#include "sumfree/spectral.hpp"

namespace sumfree::weights {

using ExactRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline ExactRational to_exact(const Rational& r) { return ExactRational(BigInt(r.num()), BigInt(r.den())); }

inline std::string exact_str(const ExactRational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline ExactRational parse_exact(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return ExactRational(BigInt(s));
    return ExactRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(Error::Kind::kParse, "bad exact rational '" + s + "'");
  }
}

/// Cells above this count are refused (class rows plus base rows, times K).
inline constexpr std::size_t kMaxCells = std::size_t{1} << 26;
/// Dense row-major values are emitted in JSON only up to this many cells.
inline constexpr std::size_t kDenseJsonLimit = std::size_t{1} << 20;

struct GridWeight {
  int k = 1;
  int m = 0;                 // multiplier of the levels; 0 when levels == 0
  std::int64_t base_q = 1;   // Q0
  std::vector<std::vector<double>> class_rows;  // levels() rows
  std::vector<std::vector<double>> base_rows;   // base_q rows
  int generation = 0;
  ExactRational alpha = 1;

  int levels() const noexcept { return static_cast<int>(class_rows.size()); }
  double alpha_bound() const { return static_cast<double>(alpha); }

  /// Q = M^L Q0, exact.
  BigInt modulus() const {
    BigInt q = base_q;
    for (int i = 0; i < levels(); ++i) q *= m;
    return q;
  }
  std::optional<std::uint64_t> modulus_u64() const {
    BigInt q = modulus();
    if (q > BigInt(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
    return static_cast<std::uint64_t>(q);
  }

  /// Row used by residue n (any integer representative, n >= 0).
  const std::vector<double>& row_of(std::uint64_t n) const {
    for (int c = 0; c < levels(); ++c) {
      if (n % static_cast<std::uint64_t>(m) != 0) return class_rows[static_cast<std::size_t>(c)];
      n /= static_cast<std::uint64_t>(m);
    }
    return base_rows[static_cast<std::size_t>(n % static_cast<std::uint64_t>(base_q))];
  }
  /// w(n mod Q, cell), cell in 1..K.
  double value_at(std::uint64_t n, int cell) const { return row_of(n)[static_cast<std::size_t>(cell - 1)]; }

  /// Fraction of residues mod Q that use class row c (c == levels() is the base block, per base row).
  double class_density(int c) const {
    if (c < levels()) return (static_cast<double>(m) - 1.0) / std::pow(static_cast<double>(m), c + 1);
    return 1.0 / (std::pow(static_cast<double>(m), levels()) * static_cast<double>(base_q));
  }

  template <class F>
  void for_each_row(F&& f) const {
    for (int c = 0; c < levels(); ++c) f(class_rows[static_cast<std::size_t>(c)], class_density(c));
    for (const auto& r : base_rows) f(r, class_density(levels()));
  }

  void validate() const {
    require(k >= 1, "weight needs K >= 1");
    require(base_q >= 1 && static_cast<std::int64_t>(base_rows.size()) == base_q, "weight base block has wrong size");
    require(levels() == 0 || m >= 2, "weight levels need M >= 2");
    auto check = [&](const std::vector<double>& r, double) {
      require(r.size() == static_cast<std::size_t>(k), "weight row has wrong length");
      for (double v : r) require(std::isfinite(v) && v > 0.0, "weight values must be positive and finite");
    };
    for_each_row(check);
  }

  /// Materialized values, row-major by residue; only for small Q*K.
  std::vector<double> dense() const {
    auto q = modulus_u64();
    require(q && *q <= kDenseJsonLimit && *q * static_cast<std::uint64_t>(k) <= kDenseJsonLimit,
            "weight too large to materialize densely");
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(*q) * static_cast<std::size_t>(k));
    for (std::uint64_t x = 0; x < *q; ++x) {
      const auto& r = row_of(x);
      v.insert(v.end(), r.begin(), r.end());
    }
    return v;
  }

  static GridWeight from_dense(std::int64_t q, int k, const std::vector<double>& values) {
    require(q >= 1 && k >= 1, "weight needs Q, K >= 1");
    require(values.size() == static_cast<std::size_t>(q) * static_cast<std::size_t>(k), "weight values have wrong size");
    GridWeight w;
    w.k = k;
    w.base_q = q;
    for (std::int64_t a = 0; a < q; ++a)
      w.base_rows.emplace_back(values.begin() + a * k, values.begin() + (a + 1) * k);
    w.validate();
    return w;
  }
};

struct IterationParams {
  int m = 2;
  Rational eps_prime{1, 2};
  int t_samples = 8;
  std::optional<int> steps;  // default ceil(100 ln(1/eps))

  void validate() const {
    require(m >= 2, "M must be >= 2");
    require(eps_prime > Rational(0) && eps_prime <= Rational(1), "eps' must lie in (0, 1]");
    require(t_samples >= 2, "t_samples must be >= 2");
    require(!steps || *steps >= 0, "steps must be >= 0");
  }
};

inline int default_steps(const Rational& eps) {
  return static_cast<int>(std::ceil(100.0 * std::log(1.0 / eps.to_double()) - 1e-9));
}

inline GridWeight uniform_weight(int k) {
  require(k >= 1, "uniform_weight needs K >= 1");
  GridWeight w;
  w.k = k;
  w.base_rows.assign(1, std::vector<double>(static_cast<std::size_t>(k), 1.0));
  return w;
}

namespace detail {

/// Average over t of 1/4 + (3/4) (M / (t eps')) * density of row r pushed
/// through y -> t eps' y, as cell averages. Mass is split by exact overlap.
inline std::vector<double> transform_row(const std::vector<double>& r, int m, double eps_prime,
                                         const std::vector<double>& ts) {
  const int k = static_cast<int>(r.size());
  const double kd = static_cast<double>(k);
  std::vector<double> acc(r.size(), 0.0);
  for (double t : ts) {
    const double s = t * eps_prime;
    const double scale = 0.75 * static_cast<double>(m) / s * kd;
    for (int i = 1; i <= k; ++i) {
      const double lo = s * (i - 1) / kd, hi = s * i / kd;
      int j0 = std::max(1, static_cast<int>(std::floor(lo * kd)) + 1);
      int j1 = std::min(k, static_cast<int>(std::ceil(hi * kd)));
      for (int j = j0; j <= j1; ++j) {
        double ov = std::min(hi, j / kd) - std::max(lo, (j - 1) / kd);
        if (ov > 0.0) acc[static_cast<std::size_t>(j - 1)] += scale * r[static_cast<std::size_t>(i - 1)] * ov;
      }
    }
  }
  for (auto& v : acc) v = 0.25 + v / static_cast<double>(ts.size());
  return acc;
}

inline GridWeight apply(const GridWeight& w, int m, const Rational& eps_prime, const std::vector<double>& ts) {
  w.validate();
  require(m >= 2, "M must be >= 2");
  require(eps_prime > Rational(0) && eps_prime <= Rational(1), "eps' must lie in (0, 1]");
  if (w.levels() > 0 && w.m != m) fail(Error::Kind::kDomain, "multiplier must match the weight's M");
  const std::size_t rows = static_cast<std::size_t>(w.levels() + 1) + w.base_rows.size();
  if (rows * static_cast<std::size_t>(w.k) > kMaxCells) fail(Error::Kind::kOverflow, "grid too large");
  const double ep = eps_prime.to_double();
  GridWeight out;
  out.k = w.k;
  out.m = m;
  out.base_q = w.base_q;
  out.generation = w.generation + 1;
  out.alpha = w.alpha;
  out.class_rows.reserve(static_cast<std::size_t>(w.levels() + 1));
  out.class_rows.emplace_back(static_cast<std::size_t>(w.k), 0.25);
  for (const auto& r : w.class_rows) out.class_rows.push_back(transform_row(r, m, ep, ts));
  for (const auto& r : w.base_rows) out.base_rows.push_back(transform_row(r, m, ep, ts));
  return out;
}

}  // namespace detail

/// Midpoint nodes of [1/2, 1].
inline std::vector<double> quadrature_nodes(int t_samples) {
  std::vector<double> ts;
  for (int i = 0; i < t_samples; ++i) ts.push_back(0.5 + (i + 0.5) / (2.0 * t_samples));
  return ts;
}

/// alpha' = 3/4 alpha + 1/4 (1/3 + eps/8).
inline ExactRational next_alpha(const ExactRational& alpha, const Rational& eps) {
  return ExactRational(3, 4) * alpha + ExactRational(1, 4) * (ExactRational(1, 3) + to_exact(eps) / 8);
}

/// w'_t for a single t in (0, 1]; alpha is left unchanged.
inline GridWeight pushforward_at(const GridWeight& w, int m, const Rational& eps_prime, double t) {
  require(t > 0.0 && t <= 1.0, "t must lie in (0, 1]");
  return detail::apply(w, m, eps_prime, {t});
}

inline GridWeight pushforward_step(const GridWeight& w, const IterationParams& p, const Rational& eps) {
  p.validate();
  require(eps > Rational(0) && eps < Rational(1), "eps must lie in (0, 1)");
  GridWeight out = detail::apply(w, p.m, p.eps_prime, quadrature_nodes(p.t_samples));
  out.alpha = next_alpha(w.alpha, eps);
  return out;
}

struct WeightBuild {
  GridWeight weight;
  IterationParams params;
  Rational eps;
  int steps = 0;
  std::vector<ExactRational> alpha_history;  // alpha after 0..steps iterations
};

inline WeightBuild build_weight(const Rational& eps, const IterationParams& p, int k) {
  p.validate();
  require(eps > Rational(0) && eps < Rational(1), "eps must lie in (0, 1)");
  WeightBuild b;
  b.params = p;
  b.eps = eps;
  b.steps = p.steps.value_or(default_steps(eps));
  b.params.steps = b.steps;
  b.weight = uniform_weight(k);
  b.alpha_history.push_back(b.weight.alpha);
  for (int s = 0; s < b.steps; ++s) {
    b.weight = pushforward_step(b.weight, p, eps);
    b.alpha_history.push_back(b.weight.alpha);
  }
  return b;
}

struct WeightStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double lipschitz = 0.0;  // max |w(a,i+1) - w(a,i)| * K
};

inline WeightStats weight_stats(const GridWeight& w) {
  WeightStats st;
  st.min = std::numeric_limits<double>::infinity();
  st.max = -st.min;
  long double mean = 0.0L;
  w.for_each_row([&](const std::vector<double>& r, double density) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += r[i];
      st.min = std::min(st.min, r[i]);
      st.max = std::max(st.max, r[i]);
      if (i + 1 < r.size()) st.lipschitz = std::max(st.lipschitz, std::abs(r[i + 1] - r[i]) * w.k);
    }
    mean += s / static_cast<long double>(r.size()) * density;
  });
  st.mean = static_cast<double>(mean);
  return st;
}

/// Cell of n in {1..N} on a K-cell grid: ceil(nK/N).
inline int cell_of(std::int64_t n, std::int64_t big_n, int k) {
  return static_cast<int>((static_cast<__int128>(n) * k + big_n - 1) / big_n);
}

inline double sample_probability(const GridWeight& w, double wmax, std::int64_t n, std::int64_t big_n) {
  return w.value_at(static_cast<std::uint64_t>(n), cell_of(n, big_n, w.k)) / wmax;
}

/// p(n) for n = 1..N (index 0 is n = 1).
inline std::vector<double> sample_probabilities(const GridWeight& w, std::int64_t big_n) {
  w.validate();
  require(big_n >= w.k, "sample_set needs N >= K");
  const double wmax = weight_stats(w).max;
  std::vector<double> p(static_cast<std::size_t>(big_n));
  for (std::int64_t n = 1; n <= big_n; ++n) p[static_cast<std::size_t>(n - 1)] = sample_probability(w, wmax, n, big_n);
  return p;
}

/// Includes n independently when the n-th draw of the seed's stream is below p(n).
inline IntegerSet sample_set(const GridWeight& w, std::int64_t big_n, Seed seed) {
  const auto p = sample_probabilities(w, big_n);
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= big_n; ++n)
    if (to_unit(counter_draw(seed, static_cast<std::uint64_t>(n))) < p[static_cast<std::size_t>(n - 1)]) out.push_back(n);
  return IntegerSet(std::move(out));
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const GridWeight& w) {
  Json j;
  auto q = w.modulus_u64();
  if (q)
    j["Q"] = *q;
  else
    j["Q"] = w.modulus().str();
  j["K"] = w.k;
  j["generation"] = w.generation;
  j["alpha_bound"] = w.alpha_bound();
  j["alpha"] = exact_str(w.alpha);
  j["M"] = w.m;
  j["base_modulus"] = w.base_q;
  j["class_rows"] = w.class_rows;
  j["base_rows"] = w.base_rows;
  if (q && *q <= kDenseJsonLimit && *q * static_cast<std::uint64_t>(w.k) <= kDenseJsonLimit) j["values"] = w.dense();
  return j;
}

inline GridWeight weight_from_json(const Json& j) {
  try {
    GridWeight w;
    if (j.contains("class_rows")) {
      w.k = j.at("K").get<int>();
      w.m = j.value("M", 0);
      w.base_q = j.at("base_modulus").get<std::int64_t>();
      w.class_rows = j.at("class_rows").get<std::vector<std::vector<double>>>();
      w.base_rows = j.at("base_rows").get<std::vector<std::vector<double>>>();
    } else {
      w = GridWeight::from_dense(j.at("Q").get<std::int64_t>(), j.at("K").get<int>(),
                                 j.at("values").get<std::vector<double>>());
    }
    w.generation = j.value("generation", 0);
    if (j.contains("alpha"))
      w.alpha = parse_exact(j.at("alpha").get<std::string>());
    else if (j.contains("alpha_bound"))
      w.alpha = ExactRational(j.at("alpha_bound").get<double>());
    w.validate();
    return w;
  } catch (const Json::exception& e) {
    fail(Error::Kind::kParse, std::string("bad weight JSON: ") + e.what());
  }
}

inline GridWeight load_weight(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    fail(Error::Kind::kParse, "JSON parse error at byte " + std::to_string(e.byte));
  }
  return weight_from_json(j.contains("weight") ? j["weight"] : j);
}

// ---------------------------------------------------------------------------
// End-to-end experiment

struct ExperimentRow {
  Seed seed;
  std::size_t set_size = 0;
  std::size_t heuristic_size = 0;
  std::size_t floor_size = 0;                 // ceil((|A|+1)/3)
  std::optional<std::size_t> sweep_size;      // exact dilation sweep when affordable
  std::optional<std::size_t> exact_optimum;   // exhaustive when |A| <= 64
  double t_count = 0.0;                       // T(1_A) on {1..N}

  std::optional<double> heuristic_density() const {
    if (set_size == 0) return std::nullopt;
    return static_cast<double>(heuristic_size) / static_cast<double>(set_size);
  }
};

struct ExperimentReport {
  Rational eps;
  IterationParams params;
  int k = 1;
  std::int64_t n = 1;
  WeightStats stats;
  double alpha_bound = 1.0;
  std::vector<ExperimentRow> rows;
};

inline constexpr int kExperimentRestarts = 2;

inline ExperimentRow experiment_row(const GridWeight& w, std::int64_t n, Seed seed) {
  ExperimentRow row;
  row.seed = seed;
  IntegerSet a = sample_set(w, n, seed);
  row.set_size = a.size();
  row.floor_size = (a.size() + 1 + 2) / 3;
  row.t_count = spectral::t_count(indicator(a, static_cast<std::size_t>(n)));
  if (a.empty()) return row;
  row.heuristic_size =
      heuristic_sum_free(a, SumFreeConvention::kAllowEqual, kExperimentRestarts, seed.split(1)).optimum;
  if (sweep_event_count(a) <= kExactSweepLimit) row.sweep_size = dilation_sweep(a).size;
  if (a.size() <= 64) row.exact_optimum = max_sum_free_subset(a, SumFreeConvention::kAllowEqual).optimum;
  return row;
}

inline ExperimentReport density_experiment(const Rational& eps, const IterationParams& p, int k, std::int64_t n,
                                           const std::vector<Seed>& seeds) {
  ExperimentReport rep;
  rep.eps = eps;
  rep.k = k;
  rep.n = n;
  WeightBuild b = build_weight(eps, p, k);
  rep.params = b.params;
  rep.stats = weight_stats(b.weight);
  rep.alpha_bound = b.weight.alpha_bound();
  rep.rows.resize(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { rep.rows[i] = experiment_row(b.weight, n, seeds[i]); });
  return rep;
}

}  // namespace sumfree::weights
