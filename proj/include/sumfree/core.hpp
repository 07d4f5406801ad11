#pragma once

// Shared domain types: exact rationals, integer sets, the sum-free
// convention tag, the counter-based random generator and cyclic signals.

#include <algorithm>
#include <compare>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace sumfree {

inline constexpr int kSchemaVersion = 1;

/// Every failure raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { kParse, kDomain, kOverflow, kIo };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

[[noreturn]] inline void fail(Error::Kind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(Error::Kind::kDomain, what);
}

// ---------------------------------------------------------------------------
// Rational

/// Exact reduced fraction over 64-bit integers. Intermediate products are
/// formed in 128 bits; a result that does not fit raises Error::kOverflow.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design of arithmetic
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Largest integer <= value.
  std::int64_t floor() const noexcept {
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return q;
  }
  std::int64_t ceil() const noexcept { return -Rational(-num_, den_).floor(); }

  Rational frac() const { return *this - Rational(floor()); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p", "p/q" or a finite decimal such as "0.125".
  static Rational parse(std::string_view s) {
    auto bad = [&] { fail(Error::Kind::kParse, "not a rational number: '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    auto to_int = [&](std::string_view t) -> std::int64_t {
      if (t.empty()) bad();
      std::size_t i = 0;
      bool neg = false;
      if (t[0] == '-' || t[0] == '+') {
        neg = t[0] == '-';
        i = 1;
      }
      if (i == t.size()) bad();
      __int128 v = 0;
      for (; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') bad();
        v = v * 10 + (t[i] - '0');
        if (v > std::numeric_limits<std::int64_t>::max()) fail(Error::Kind::kOverflow, "rational literal too large");
      }
      return static_cast<std::int64_t>(neg ? -v : v);
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      std::int64_t d = to_int(s.substr(slash + 1));
      if (d == 0) bad();
      return Rational(to_int(s.substr(0, slash)), d);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string digits(s.substr(0, dot));
      std::string_view fracpart = s.substr(dot + 1);
      if (fracpart.size() > 17) bad();
      std::int64_t den = 1;
      for (std::size_t i = 0; i < fracpart.size(); ++i) den *= 10;
      digits += std::string(fracpart);
      if (digits.empty() || digits == "-" || digits == "+") bad();
      return Rational(to_int(digits), den);
    }
    return Rational(to_int(s));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) fail(Error::Kind::kDomain, "rational division by zero");
    return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  void assign(__int128 n, __int128 d) {
    if (d == 0) fail(Error::Kind::kDomain, "rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lo = std::numeric_limits<std::int64_t>::min() + 1;
    constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) fail(Error::Kind::kOverflow, "rational overflow");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  static Rational from128(__int128 n, __int128 d) {
    Rational r;
    r.assign(n, d);
    return r;
  }
};

// ---------------------------------------------------------------------------
// IntegerSet

enum class SumFreeConvention {
  kAllowEqual,    // x + y = z forbidden, x = y included (x and 2x never coexist)
  kDistinctOnly,  // only x + y = z with x != y is forbidden
};

inline std::string_view to_string(SumFreeConvention c) {
  return c == SumFreeConvention::kAllowEqual ? "allow-equal" : "distinct";
}

inline SumFreeConvention parse_convention(std::string_view s) {
  if (s == "allow-equal" || s == "ALLOW_EQUAL") return SumFreeConvention::kAllowEqual;
  if (s == "distinct" || s == "distinct-only" || s == "DISTINCT_ONLY") return SumFreeConvention::kDistinctOnly;
  fail(Error::Kind::kParse, "unknown convention '" + std::string(s) + "'");
}

/// Finite, strictly increasing set of nonzero integers.
class IntegerSet {
 public:
  IntegerSet() = default;

  /// Sorts the input; rejects duplicates and zero.
  explicit IntegerSet(std::vector<std::int64_t> elements, std::string name = {}) : name_(std::move(name)) {
    std::sort(elements.begin(), elements.end());
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (elements[i] == 0) fail(Error::Kind::kDomain, "integer set contains 0");
      if (i > 0 && elements[i] == elements[i - 1])
        fail(Error::Kind::kDomain, "duplicate element " + std::to_string(elements[i]));
    }
    elements_ = std::move(elements);
  }

  static IntegerSet interval(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (std::int64_t x = lo; x <= hi; ++x) v.push_back(x);
    return IntegerSet(std::move(v));
  }

  const std::vector<std::int64_t>& elements() const noexcept { return elements_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  std::int64_t min() const { return elements_.front(); }
  std::int64_t max() const { return elements_.back(); }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }
  std::int64_t operator[](std::size_t i) const { return elements_[i]; }

  bool contains(std::int64_t x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

  /// Index of x, or -1.
  std::ptrdiff_t index_of(std::int64_t x) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), x);
    if (it == elements_.end() || *it != x) return -1;
    return it - elements_.begin();
  }

  bool all_positive() const noexcept { return elements_.empty() || elements_.front() > 0; }

  bool subset_of_interval(std::int64_t n) const noexcept {
    return elements_.empty() || (elements_.front() >= 1 && elements_.back() <= n);
  }

  friend bool operator==(const IntegerSet& a, const IntegerSet& b) noexcept { return a.elements_ == b.elements_; }

 private:
  std::vector<std::int64_t> elements_;
  std::string name_;
};

inline void require_positive(const IntegerSet& a, std::string_view op) {
  if (!a.all_positive()) fail(Error::Kind::kDomain, std::string(op) + " requires positive elements");
}

// ---------------------------------------------------------------------------
// Randomness
//
// SplitMix64 in counter mode: output k of stream `seed` is mix(seed + (k+1)*G)
// with G the 64-bit golden-ratio increment. Child streams are derived by
// split(seed, i) = mix(seed ^ mix(i + G)). Only integer operations are used so
// every platform produces identical streams.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Seed {
  std::uint64_t value = 0;

  /// Deterministic child seed for task `index`.
  constexpr Seed split(std::uint64_t index) const noexcept { return Seed{mix64(value ^ mix64(index + kGolden))}; }

  friend constexpr bool operator==(Seed, Seed) = default;
};

/// Stateless access to stream element k.
constexpr std::uint64_t counter_draw(Seed seed, std::uint64_t k) noexcept { return mix64(seed.value + (k + 1) * kGolden); }

/// Uniform double in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Sequential view over a counter stream.
class Rng {
 public:
  explicit constexpr Rng(Seed seed) noexcept : seed_(seed) {}

  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return counter_draw(seed_, counter_++); }

  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform integer in [0, n), n > 0, by rejection so no modulo bias.
  std::uint64_t below(std::uint64_t n) noexcept {
    std::uint64_t limit = max() - max() % n;
    for (;;) {
      std::uint64_t v = (*this)();
      if (v < limit) return v % n;
    }
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin(double p) noexcept { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  Seed seed_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Cyclic signals

/// Least power of two strictly greater than x.
constexpr std::size_t pow2_above(std::size_t x) noexcept {
  std::size_t p = 1;
  while (p <= x) p <<= 1;
  return p;
}

constexpr std::size_t pow2_at_least(std::size_t x) noexcept {
  std::size_t p = 1;
  while (p < x) p <<= 1;
  return p;
}

using Complex = std::complex<double>;

/// A function on {1,...,refN} viewed as a function on Z/N'Z, N' > 4*refN.
class CyclicSignal {
 public:
  CyclicSignal(std::vector<Complex> values, std::size_t ref_n) : values_(std::move(values)), ref_n_(ref_n) {
    require(ref_n_ >= 1, "cyclic signal needs refN >= 1");
    require(values_.size() > 4 * ref_n_, "cyclic signal length must exceed 4*refN");
  }

  /// Embeds f(1..N) (f[0] is f(1)) into Z/N'Z; default N' = least power of two > 4N.
  static CyclicSignal from_interval(const std::vector<Complex>& f, std::optional<std::size_t> nprime = std::nullopt) {
    const std::size_t n = f.size();
    const std::size_t np = nprime.value_or(pow2_above(4 * n));
    require(np > 4 * n, "N' must exceed 4N");
    std::vector<Complex> v(np, Complex{});
    for (std::size_t i = 0; i < n; ++i) v[i + 1] = f[i];
    return CyclicSignal(std::move(v), n);
  }

  static CyclicSignal from_real(const std::vector<double>& f, std::optional<std::size_t> nprime = std::nullopt) {
    return from_interval(std::vector<Complex>(f.begin(), f.end()), nprime);
  }

  const std::vector<Complex>& values() const noexcept { return values_; }
  std::size_t nprime() const noexcept { return values_.size(); }
  std::size_t ref_n() const noexcept { return ref_n_; }

 private:
  std::vector<Complex> values_;
  std::size_t ref_n_;
};

/// 1_A on {1,...,N} embedded in Z/N'Z with N' the least power of two above 4N.
inline CyclicSignal embed_signal(const IntegerSet& a, std::size_t n, std::optional<std::size_t> nprime = std::nullopt) {
  require(n >= 1, "embed_signal needs N >= 1");
  for (auto x : a)
    if (x < 1 || static_cast<std::size_t>(x) > n)
      fail(Error::Kind::kDomain, "element " + std::to_string(x) + " outside {1,...," + std::to_string(n) + "}");
  std::vector<Complex> f(n, Complex{});
  for (auto x : a) f[static_cast<std::size_t>(x) - 1] = 1.0;
  return CyclicSignal::from_interval(f, nprime);
}

/// Indicator of A on {1,...,N} as a real vector (index 0 is n = 1).
inline std::vector<double> indicator(const IntegerSet& a, std::size_t n) {
  std::vector<double> f(n, 0.0);
  for (auto x : a) {
    require(x >= 1 && static_cast<std::size_t>(x) <= n, "element outside {1,...,N}");
    f[static_cast<std::size_t>(x) - 1] = 1.0;
  }
  return f;
}

// ---------------------------------------------------------------------------
// Parallelism

/// Worker count from SUMFREE_THREADS (default 1, so runs are serial unless asked).
inline unsigned thread_count() {
  const char* env = std::getenv("SUMFREE_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

/// Runs body(i) for i in [0, n); task i always writes its own slot, so results
/// do not depend on the thread count. The first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sumfree
