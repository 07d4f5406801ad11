#include <gtest/gtest.h>

#include <cmath>

#include "sumfree/check.hpp"
#include "sumfree/spectral.hpp"
#include "sumfree/weights.hpp"

using namespace sumfree;
using namespace sumfree::weights;

namespace {

// Dense w'_t computed by fine subdivision of each destination cell:
// w'(x', y') = 1/4 + 3/4 [M | x'] (M / s) w(x'/M, y'/s) 1{y' <= s}, s = t eps'.
std::vector<double> pushforward_oracle(const std::vector<double>& dense, std::int64_t q, int k, int m, double eps_prime,
                                       const std::vector<double>& ts) {
  const std::int64_t q2 = q * m;
  std::vector<double> out(static_cast<std::size_t>(q2 * k), 0.0);
  const int fine = 2000;
  for (std::int64_t x = 0; x < q2; ++x)
    for (int j = 1; j <= k; ++j) {
      double acc = 0.0;
      if (x % m == 0) {
        const std::int64_t src = (x / m) % q;
        for (double t : ts) {
          const double s = t * eps_prime;
          double cell = 0.0;
          for (int u = 0; u < fine; ++u) {
            const double y = (j - 1 + (u + 0.5) / fine) / k;
            if (y > s) continue;
            const int i = std::min(k, static_cast<int>(std::ceil(y / s * k)));
            cell += dense[static_cast<std::size_t>(src * k + i - 1)] * m / s;
          }
          acc += cell / fine;
        }
        acc /= static_cast<double>(ts.size());
      }
      out[static_cast<std::size_t>(x * k + j - 1)] = 0.25 + 0.75 * acc;
    }
  return out;
}

double dense_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST(Weight, Uniform) {
  auto w = uniform_weight(8);
  auto st = weight_stats(w);
  EXPECT_EQ(w.modulus(), 1);
  EXPECT_EQ(w.generation, 0);
  EXPECT_EQ(w.alpha, 1);
  EXPECT_DOUBLE_EQ(st.mean, 1.0);
  EXPECT_DOUBLE_EQ(st.min, 1.0);
  EXPECT_DOUBLE_EQ(st.max, 1.0);
  EXPECT_DOUBLE_EQ(st.lipschitz, 0.0);
  EXPECT_EQ(w.dense().size(), 8u);
  EXPECT_THROW(uniform_weight(0), Error);
}

TEST(Weight, SinglePushforwardByHand) {
  // t = 1, eps' = 1/2: residue 0 receives (3/4) * 2 / (1/2) = 3 on [0, 1/2].
  auto w = pushforward_at(uniform_weight(8), 2, Rational(1, 2), 1.0);
  EXPECT_EQ(w.modulus(), 2);
  auto v = w.dense();
  for (int i = 0; i < 8; ++i) {
    EXPECT_NEAR(v[static_cast<std::size_t>(i)], i < 4 ? 3.25 : 0.25, 1e-12) << i;
    EXPECT_NEAR(v[static_cast<std::size_t>(8 + i)], 0.25, 1e-12);
  }
  EXPECT_NEAR(dense_mean(v), 1.0, 1e-12);
}

TEST(Weight, PushforwardMatchesSubdivisionOracle) {
  IterationParams p;
  p.t_samples = 3;
  const auto ts = quadrature_nodes(p.t_samples);
  for (int k : {5, 8, 13}) {
    auto w = uniform_weight(k);
    for (int step = 0; step < 3; ++step) {
      auto dense = w.dense();
      const auto q = static_cast<std::int64_t>(*w.modulus_u64());
      auto want = pushforward_oracle(dense, q, k, p.m, p.eps_prime.to_double(), ts);
      w = pushforward_step(w, p, Rational(1, 4));
      auto got = w.dense();
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], want[i], 2e-2 * want[i]) << k << " " << step << " " << i;
    }
  }
}

TEST(Weight, MeanFloorAndRecurrence) {
  IterationParams p;
  p.m = 3;
  p.eps_prime = Rational(3, 4);
  auto w = uniform_weight(16);
  const Rational eps(1, 3);
  const ExactRational fixed = ExactRational(1, 3) + to_exact(eps) / 8;
  for (int s = 0; s < 12; ++s) {
    auto next = pushforward_step(w, p, eps);
    auto st = weight_stats(next);
    ASSERT_NEAR(st.mean, 1.0, 1e-12);
    ASSERT_GE(st.min, 0.25 - 1e-15);
    ASSERT_EQ(next.alpha - fixed, ExactRational(3, 4) * (w.alpha - fixed));
    ASSERT_LT(next.alpha, w.alpha);
    ASSERT_EQ(next.generation, w.generation + 1);
    w = next;
  }
  EXPECT_EQ(w.modulus(), BigInt(531441));  // 3^12
  if (w.modulus_u64() && *w.modulus_u64() * 16 <= kDenseJsonLimit) EXPECT_NEAR(dense_mean(w.dense()), 1.0, 1e-12);
}

TEST(Weight, AlphaAfterOneStep) {
  auto w = pushforward_step(uniform_weight(4), IterationParams{}, Rational(1, 10));
  // 3/4 + (1/3 + 1/80)/4, which rounds to 0.8365.
  EXPECT_EQ(w.alpha, ExactRational(803, 960));
  EXPECT_NEAR(w.alpha_bound(), 0.8365, 5e-5);
}

TEST(Weight, DefaultStepsAndFinalBound) {
  EXPECT_EQ(default_steps(Rational(1, 2)), 70);
  EXPECT_EQ(default_steps(Rational(1, 4)), 139);
  EXPECT_EQ(default_steps(Rational(1, 8)), 208);
  for (auto eps : {Rational(1, 2), Rational(1, 4), Rational(1, 8)}) {
    auto b = build_weight(eps, IterationParams{}, 8);
    ASSERT_EQ(b.steps, default_steps(eps));
    ASSERT_EQ(b.alpha_history.size(), static_cast<std::size_t>(b.steps + 1));
    for (std::size_t i = 1; i < b.alpha_history.size(); ++i) ASSERT_LT(b.alpha_history[i], b.alpha_history[i - 1]);
    EXPECT_LT(b.weight.alpha, ExactRational(1, 3) + to_exact(eps) / 4);
    EXPECT_GT(b.weight.alpha, ExactRational(1, 3) + to_exact(eps) / 8);
    EXPECT_NEAR(weight_stats(b.weight).mean, 1.0, 1e-12);
  }
  IterationParams zero;
  zero.steps = 0;
  auto b = build_weight(Rational(1, 2), zero, 8);
  EXPECT_EQ(b.weight.generation, 0);
  EXPECT_EQ(b.weight.alpha, 1);
}

TEST(Weight, RejectsBadParameters) {
  IterationParams p;
  p.m = 1;
  EXPECT_THROW(pushforward_step(uniform_weight(4), p, Rational(1, 2)), Error);
  p = {};
  p.t_samples = 1;
  EXPECT_THROW(pushforward_step(uniform_weight(4), p, Rational(1, 2)), Error);
  EXPECT_THROW(pushforward_step(uniform_weight(4), IterationParams{}, Rational(1)), Error);
  auto w = pushforward_step(uniform_weight(4), IterationParams{}, Rational(1, 2));
  p = {};
  p.m = 3;
  EXPECT_THROW(pushforward_step(w, p, Rational(1, 2)), Error);
}

TEST(Weight, JsonRoundTrip) {
  IterationParams p;
  p.steps = 5;
  auto w = build_weight(Rational(1, 4), p, 6).weight;
  auto j = to_json(w);
  EXPECT_EQ(j["Q"].get<std::uint64_t>(), 32u);
  ASSERT_TRUE(j.contains("values"));
  auto back = weight_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.alpha, w.alpha);
  EXPECT_EQ(back.generation, 5);
  EXPECT_EQ(back.dense(), w.dense());

  auto dense = weight_from_json(Json{{"Q", 2}, {"K", 2}, {"values", {1.0, 2.0, 0.5, 0.5}}});
  EXPECT_EQ(dense.value_at(3, 2), 0.5);
  EXPECT_EQ(dense.value_at(0, 2), 2.0);
  EXPECT_THROW(weight_from_json(Json{{"Q", 2}, {"K", 2}, {"values", {1.0, 2.0}}}), Error);
  EXPECT_THROW(weight_from_json(Json{{"Q", 1}, {"K", 2}, {"values", {1.0, 0.0}}}), Error);
}

TEST(Weight, HugeModulusSerializesAsString) {
  IterationParams p;
  p.steps = 70;
  auto w = build_weight(Rational(1, 2), p, 4).weight;
  EXPECT_FALSE(w.modulus_u64());
  auto j = to_json(w);
  EXPECT_TRUE(j["Q"].is_string());
  EXPECT_FALSE(j.contains("values"));
  auto back = weight_from_json(j);
  EXPECT_EQ(back.modulus(), w.modulus());
  EXPECT_EQ(back.value_at(12345, 3), w.value_at(12345, 3));
}

TEST(Sampler, UniformGivesEverything) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_EQ(sample_set(uniform_weight(4), 100, Seed{s}).size(), 100u);
  EXPECT_THROW(sample_set(uniform_weight(8), 7, Seed{0}), Error);
}

TEST(Sampler, CellIndexIsRightClosed) {
  EXPECT_EQ(cell_of(1, 100, 4), 1);
  EXPECT_EQ(cell_of(25, 100, 4), 1);
  EXPECT_EQ(cell_of(26, 100, 4), 2);
  EXPECT_EQ(cell_of(100, 100, 4), 4);
}

TEST(Sampler, SizeConcentratesAndIsDeterministic) {
  IterationParams p;
  p.steps = 2;
  auto w = build_weight(Rational(1, 2), p, 16).weight;
  const std::int64_t n = 10000;
  auto probs = sample_probabilities(w, n);
  double expected = 0.0;
  for (double v : probs) {
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    expected += v;
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto a = sample_set(w, n, Seed{s});
    ASSERT_LE(std::abs(static_cast<double>(a.size()) - expected), 4.0 * std::sqrt(static_cast<double>(n)));
    ASSERT_EQ(a.elements(), sample_set(w, n, Seed{s}).elements());
  }
}

TEST(Sampler, UniformityOfResidual) {
  IterationParams p;
  p.steps = 2;
  auto w = build_weight(Rational(1, 2), p, 16).weight;
  const std::int64_t n = 4096;
  auto probs = sample_probabilities(w, n);
  int ok = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto a = sample_set(w, n, Seed{s});
    auto ind = indicator(a, static_cast<std::size_t>(n));
    std::vector<double> diff(ind.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = ind[i] - probs[i];
    if (spectral::u2_norm(CyclicSignal::from_real(diff)) <= 5.0 * std::pow(static_cast<double>(n), -0.25)) ++ok;
  }
  EXPECT_GE(ok, 19);
}

TEST(Experiment, UniformPipelineReachesHalf) {
  IterationParams p;
  p.steps = 0;
  auto rep = density_experiment(Rational(1, 2), p, 8, 1000, {Seed{1}, Seed{2}});
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.set_size, 1000u);
    EXPECT_GE(*r.heuristic_density(), 0.5);
  }
}

TEST(Experiment, RowsRespectFloorAndReproduce) {
  IterationParams p;
  p.steps = 2;
  std::vector<Seed> seeds{Seed{3}, Seed{4}, Seed{5}};
  auto a = density_experiment(Rational(1, 2), p, 16, 3000, seeds);
  auto b = density_experiment(Rational(1, 2), p, 16, 3000, seeds);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EXPECT_GE(a.rows[i].heuristic_size, a.rows[i].floor_size);
    EXPECT_EQ(a.rows[i].set_size, b.rows[i].set_size);
    EXPECT_EQ(a.rows[i].heuristic_size, b.rows[i].heuristic_size);
    EXPECT_EQ(a.rows[i].t_count, b.rows[i].t_count);
  }
}
