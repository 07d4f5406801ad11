#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "sumfree/core.hpp"
#include "sumfree/fft.hpp"
#include "sumfree/io.hpp"

using namespace sumfree;

TEST(Rational, ReducesAndNormalizesSign) {
  Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(Rational(0, 5), Rational(0));
  EXPECT_EQ(Rational(0, 5).den(), 1);
}

TEST(Rational, Arithmetic) {
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(1, 3) - Rational(1, 2), Rational(-1, 6));
  EXPECT_EQ(Rational(2, 3) * Rational(9, 4), Rational(3, 2));
  EXPECT_EQ(Rational(2, 3) / Rational(4, 9), Rational(3, 2));
  EXPECT_LT(Rational(1, 3), Rational(34, 100));
  EXPECT_GT(Rational(-1, 3), Rational(-34, 100));
}

TEST(Rational, FloorCeilFrac) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(-7, 2).ceil(), -3);
  EXPECT_EQ(Rational(6, 2).ceil(), 3);
  EXPECT_EQ(Rational(-7, 2).frac(), Rational(1, 2));
}

TEST(Rational, Parse) {
  EXPECT_EQ(Rational::parse("3/6"), Rational(1, 2));
  EXPECT_EQ(Rational::parse("0.125"), Rational(1, 8));
  EXPECT_EQ(Rational::parse("-1.5"), Rational(-3, 2));
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  for (const char* bad : {"", "x", "1/0", "1/", "/2", "1.2.3", "--1", "0.1234567890123456789"})
    EXPECT_THROW(Rational::parse(bad), Error) << bad;
}

TEST(Rational, OverflowThrows) {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2 + 1);
  try {
    (void)(big * big);
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Error::Kind::kOverflow);
  }
  EXPECT_THROW(Rational(1, 0), Error);
  EXPECT_THROW(Rational(1) / Rational(0), Error);
}

TEST(IntegerSet, SortedAndValidated) {
  IntegerSet a({5, -2, 9});
  EXPECT_EQ(a.elements(), (std::vector<std::int64_t>{-2, 5, 9}));
  EXPECT_TRUE(a.contains(5));
  EXPECT_FALSE(a.contains(4));
  EXPECT_EQ(a.index_of(9), 2);
  EXPECT_EQ(a.index_of(4), -1);
  EXPECT_FALSE(a.all_positive());
  EXPECT_THROW(IntegerSet({1, 0}), Error);
  EXPECT_THROW(IntegerSet({3, 1, 3}), Error);
  EXPECT_EQ(IntegerSet::interval(3, 6).elements(), (std::vector<std::int64_t>{3, 4, 5, 6}));
  EXPECT_TRUE(IntegerSet::interval(1, 10).subset_of_interval(10));
  EXPECT_FALSE(IntegerSet::interval(1, 11).subset_of_interval(10));
}

TEST(Convention, RoundTrip) {
  for (auto c : {SumFreeConvention::kAllowEqual, SumFreeConvention::kDistinctOnly})
    EXPECT_EQ(parse_convention(to_string(c)), c);
  EXPECT_THROW(parse_convention("sometimes"), Error);
}

// Reference SplitMix64 outputs (state 0 and 42), computed independently.
TEST(Random, CounterStreamMatchesSplitMix64) {
  EXPECT_EQ(counter_draw(Seed{0}, 0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(counter_draw(Seed{0}, 1), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(counter_draw(Seed{0}, 2), 0x06c45d188009454fULL);
  EXPECT_EQ(counter_draw(Seed{42}, 0), 0xbdd732262feb6e95ULL);
  EXPECT_EQ(Seed{42}.split(3).value, 0x602b665033f3b406ULL);
  Rng rng(Seed{42});
  EXPECT_EQ(rng(), 0xbdd732262feb6e95ULL);
  EXPECT_EQ(rng(), 0x28efe333b266f103ULL);
}

TEST(Random, BoundedDrawsStayInRange) {
  Rng rng(Seed{5});
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
    double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    auto b = rng.between(-3, 3);
    ASSERT_GE(b, -3);
    ASSERT_LE(b, 3);
  }
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Random, SameSeedSameStream) {
  Rng a(Seed{9}), b(Seed{9}), c(Seed{10});
  std::vector<int> va{1, 2, 3, 4, 5, 6}, vb = va;
  a.shuffle(va);
  b.shuffle(vb);
  EXPECT_EQ(va, vb);
  EXPECT_NE(Rng(Seed{9})(), c());
}

TEST(Parallel, ResultIndependentOfThreadCount) {
  auto run = [] {
    std::vector<std::uint64_t> out(50);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = counter_draw(Seed{i}, i); });
    return out;
  };
  setenv("SUMFREE_THREADS", "1", 1);
  auto serial = run();
  setenv("SUMFREE_THREADS", "4", 1);
  EXPECT_EQ(thread_count(), 4u);
  auto threaded = run();
  unsetenv("SUMFREE_THREADS");
  EXPECT_EQ(serial, threaded);
  setenv("SUMFREE_THREADS", "4", 1);
  EXPECT_THROW(parallel_for(8, [](std::size_t i) {
                 if (i == 5) fail(Error::Kind::kDomain, "boom");
               }),
               Error);
  unsetenv("SUMFREE_THREADS");
}

TEST(Signal, EmbeddingPlacesValuesAtOneThroughN) {
  auto s = embed_signal(IntegerSet({1, 3}), 3);
  EXPECT_EQ(s.nprime(), 16u);  // least power of two above 12
  EXPECT_EQ(s.values()[0], Complex(0.0));
  EXPECT_EQ(s.values()[1], Complex(1.0));
  EXPECT_EQ(s.values()[2], Complex(0.0));
  EXPECT_EQ(s.values()[3], Complex(1.0));
  EXPECT_THROW(embed_signal(IntegerSet({4}), 3), Error);
  EXPECT_THROW(CyclicSignal::from_real({1.0, 1.0}, 8), Error);
}

namespace {

std::vector<Complex> naive_dft(const std::vector<Complex>& a) {
  const std::size_t n = a.size();
  std::vector<Complex> out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t x = 0; x < n; ++x) {
      long double ang = -2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>((r * x) % n) / n;
      out[r] += a[x] * Complex(static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang)));
    }
  return out;
}

}  // namespace

TEST(Fft, MatchesNaiveDftForAllSmallSizes) {
  Rng rng(Seed{3});
  for (std::size_t n = 1; n <= 70; ++n) {
    std::vector<Complex> a(n);
    for (auto& v : a) v = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
    auto want = naive_dft(a);
    auto got = a;
    fft::forward(got);
    for (std::size_t i = 0; i < n; ++i) ASSERT_LT(std::abs(got[i] - want[i]), 1e-10) << "n=" << n << " i=" << i;
    fft::inverse(got);
    for (std::size_t i = 0; i < n; ++i) ASSERT_LT(std::abs(got[i] - a[i]), 1e-12) << "n=" << n;
  }
}

TEST(Fft, ConvolveMatchesDirect) {
  Rng rng(Seed{4});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(1 + rng.below(40)), g(1 + rng.below(40));
    for (auto& v : f) v = rng.uniform();
    for (auto& v : g) v = rng.uniform();
    auto c = fft::convolve(f, g);
    ASSERT_EQ(c.size(), f.size() + g.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      double want = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (k >= i && k - i < g.size()) want += f[i] * g[k - i];
      ASSERT_NEAR(c[k], want, 1e-11);
    }
  }
}

TEST(Io, TextFormatWithComments) {
  auto a = parse_set_text("# header\n3\n\n  1  # one\n-7\n", "t");
  EXPECT_EQ(a.elements(), (std::vector<std::int64_t>{-7, 1, 3}));
  EXPECT_EQ(a.name(), "t");
}

TEST(Io, ErrorsNameTheLine) {
  try {
    parse_set_text("1\n2\nabc\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), Error::Kind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  try {
    parse_set_text("1\n2\n1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
  EXPECT_THROW(parse_set_text("0\n"), Error);
  EXPECT_THROW(parse_set_text("# nothing\n"), Error);
}

TEST(Io, JsonFormat) {
  auto a = parse_set(R"({"name": "k", "elements": [10, 2, 3]})");
  EXPECT_EQ(a.name(), "k");
  EXPECT_EQ(a.elements(), (std::vector<std::int64_t>{2, 3, 10}));
  try {
    parse_set(R"({"elements": [1, 2.5]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("elements[1]"), std::string::npos);
  }
  try {
    parse_set(R"({"elements": [1, 2)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  EXPECT_THROW(parse_set(R"({"elements": []})"), Error);
  EXPECT_THROW(parse_set(R"({"items": [1]})"), Error);
}

TEST(Io, SaveLoadRoundTrip) {
  auto path = std::filesystem::temp_directory_path() / "sumfree_io_roundtrip.json";
  IntegerSet a({4, 8, 15, 16, 23, 42}, "lost");
  save_set(a, path.string());
  auto b = load_set(path.string());
  EXPECT_EQ(a.elements(), b.elements());
  EXPECT_EQ(b.name(), "lost");
  std::filesystem::remove(path);
  EXPECT_THROW(load_set("/nonexistent/dir/file.json"), Error);
}
