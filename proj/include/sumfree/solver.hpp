#pragma once

// Sum-free subset computation.
//
// The exact solver is a branch-and-bound over inclusion/exclusion on a
// 64-bit mask. Elements are decided in increasing order with "include" tried
// first, and only strictly larger solutions replace the incumbent, so the
// first optimum reached is the lexicographically smallest one.
//
// The dilation sweep maximizes |A_theta|, A_theta = {x : 1/3 < {theta x} < 2/3},
// exactly: the count is piecewise constant with breakpoints (3k+1)/(3x) and
// (3k+2)/(3x), and one interior rational per cell is evaluated.

#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sumfree/core.hpp"

namespace sumfree {

/// True iff A has no x + y = z under the convention. O(n^2 log n).
inline bool is_sum_free(const IntegerSet& a, SumFreeConvention conv) {
  require_positive(a, "is_sum_free");
  const auto& e = a.elements();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = (conv == SumFreeConvention::kAllowEqual ? i : i + 1); j < e.size(); ++j) {
      std::int64_t s = e[i] + e[j];
      if (s > e.back()) break;
      if (a.contains(s)) return false;
    }
  }
  return true;
}

struct SolveReport {
  std::size_t input_size = 0;
  SumFreeConvention convention = SumFreeConvention::kAllowEqual;
  std::size_t optimum = 0;
  IntegerSet witness;
  std::uint64_t nodes_explored = 0;
  bool exact = false;
};

namespace detail {

inline SolveReport make_report(const IntegerSet& input, SumFreeConvention conv, IntegerSet witness,
                               std::uint64_t nodes, bool exact) {
  for (auto x : witness)
    if (!input.contains(x)) throw std::logic_error("solver witness is not a subset of the input");
  if (!is_sum_free(witness, conv)) throw std::logic_error("solver witness is not sum-free");
  SolveReport r;
  r.input_size = input.size();
  r.convention = conv;
  r.optimum = witness.size();
  r.witness = std::move(witness);
  r.nodes_explored = nodes;
  r.exact = exact;
  return r;
}

inline IntegerSet subset_from_mask(const IntegerSet& a, std::uint64_t mask) {
  std::vector<std::int64_t> v;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (mask >> i & 1) v.push_back(a[i]);
  return IntegerSet(std::move(v));
}

class BranchAndBound {
 public:
  BranchAndBound(const IntegerSet& a, SumFreeConvention conv, std::uint64_t budget)
      : n_(a.size()), budget_(budget), self_(n_, 0), pair_(n_ * n_, 0) {
    auto bit_of = [&](std::int64_t v) -> std::uint64_t {
      auto i = a.index_of(v);
      return i < 0 ? 0 : (std::uint64_t{1} << i);
    };
    for (std::size_t k = 0; k < n_; ++k) {
      if (conv == SumFreeConvention::kAllowEqual) {
        self_[k] |= bit_of(2 * a[k]);
        if (a[k] % 2 == 0) self_[k] |= bit_of(a[k] / 2);
      }
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == k) continue;
        std::uint64_t m = bit_of(a[k] + a[j]) | bit_of(a[k] > a[j] ? a[k] - a[j] : a[j] - a[k]);
        m &= ~((std::uint64_t{1} << k) | (std::uint64_t{1} << j));
        pair_[k * n_ + j] = m;
      }
    }
    all_ = n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
  }

  void run() { search(0, 0, 0, 0); }

  bool found() const noexcept { return found_; }
  std::uint64_t best_mask() const noexcept { return best_mask_; }
  std::uint64_t nodes() const noexcept { return nodes_; }
  bool exhausted() const noexcept { return exhausted_; }

 private:
  std::size_t n_;
  std::uint64_t budget_;
  std::vector<std::uint64_t> self_;
  std::vector<std::uint64_t> pair_;
  std::uint64_t all_ = 0;
  std::size_t best_size_ = 0;
  std::uint64_t best_mask_ = 0;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;

  // `from` is the first undecided index; chosen/forbidden are masks.
  void search(std::size_t from, std::uint64_t chosen, std::uint64_t forbidden, std::size_t size) {
    if (exhausted_) return;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return;
    }
    std::uint64_t open = from >= 64 ? 0 : (all_ & ~((std::uint64_t{1} << from) - 1));
    std::uint64_t cand = open & ~forbidden & ~chosen;
    if (cand == 0) {
      if (!found_ || size > best_size_) {
        best_size_ = size;
        best_mask_ = chosen;
        found_ = true;
      }
      return;
    }
    if (found_ && size + static_cast<std::size_t>(std::popcount(cand)) <= best_size_) return;
    const std::size_t k = static_cast<std::size_t>(std::countr_zero(cand));
    // include
    std::uint64_t nf = forbidden | self_[k];
    for (std::uint64_t c = chosen; c; c &= c - 1) nf |= pair_[k * n_ + static_cast<std::size_t>(std::countr_zero(c))];
    search(k + 1, chosen | (std::uint64_t{1} << k), nf, size + 1);
    // exclude
    search(k + 1, chosen, forbidden, size);
  }
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultNodeBudget = 2'000'000'000ULL;

/// Exact maximum sum-free subset for |A| <= 64. If the node budget runs out
/// the report carries the best subset found and exact = false.
inline SolveReport max_sum_free_subset(const IntegerSet& a, SumFreeConvention conv,
                                       std::uint64_t budget = kDefaultNodeBudget) {
  require_positive(a, "max_sum_free_subset");
  require(a.size() <= 64, "exact solver supports at most 64 elements (got " + std::to_string(a.size()) + ")");
  if (a.empty()) return detail::make_report(a, conv, IntegerSet{}, 0, true);
  detail::BranchAndBound bb(a, conv, budget);
  bb.run();
  IntegerSet w = bb.found() ? detail::subset_from_mask(a, bb.best_mask()) : IntegerSet{};
  return detail::make_report(a, conv, std::move(w), bb.nodes(), !bb.exhausted());
}

// ---------------------------------------------------------------------------
// Dilation sweep

/// 1/3 < {theta * x} < 2/3, evaluated exactly.
inline bool in_middle_third(const Rational& theta, std::int64_t x) {
  __int128 p = static_cast<__int128>(theta.num()) * x;
  __int128 q = theta.den();
  __int128 r = p % q;
  if (r < 0) r += q;
  return 3 * r > q && 3 * r < 2 * q;
}

inline IntegerSet dilation_select(const IntegerSet& a, const Rational& theta) {
  std::vector<std::int64_t> v;
  for (auto x : a)
    if (in_middle_third(theta, x)) v.push_back(x);
  return IntegerSet(std::move(v));
}

struct DilationCertificate {
  Rational theta;
  IntegerSet selected;
  std::size_t size = 0;
};

namespace detail {

struct SweepEvent {
  std::int64_t j;  // breakpoint j / (3x); j % 3 == 1 enters, j % 3 == 2 leaves
  std::int64_t x;
};

inline bool event_less(const SweepEvent& a, const SweepEvent& b) {
  return static_cast<__int128>(a.j) * b.x < static_cast<__int128>(b.j) * a.x;
}
inline bool event_equal(const SweepEvent& a, const SweepEvent& b) {
  return static_cast<__int128>(a.j) * b.x == static_cast<__int128>(b.j) * a.x;
}

inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) * Rational(1, 2); }

}  // namespace detail

/// Number of breakpoints the sweep visits on (0, 1/2): about sum of elements.
inline std::uint64_t sweep_event_count(const IntegerSet& a) {
  std::uint64_t s = 0;
  for (auto x : a) s += static_cast<std::uint64_t>(x);
  return s;
}

/// Exact maximization of |A_theta| over theta in R/Z. Only (0, 1/2] is swept
/// since A_theta = A_{1-theta}; the range is cut into chunks of bounded event
/// count, each sorted and swept independently. Ties go to the smallest theta.
inline DilationCertificate dilation_sweep(const IntegerSet& a) {
  require_positive(a, "dilation_sweep");
  require(!a.empty(), "dilation_sweep needs a nonempty set");
  constexpr std::uint64_t kChunkEvents = std::uint64_t{1} << 21;
  const std::uint64_t total = sweep_event_count(a);
  const std::int64_t chunks = static_cast<std::int64_t>(std::max<std::uint64_t>(1, (total + kChunkEvents - 1) / kChunkEvents));
  const std::int64_t den = 2 * chunks;  // chunk c covers [c/den, (c+1)/den)

  std::size_t best = 0;
  std::optional<Rational> best_theta;
  std::vector<detail::SweepEvent> ev;
  for (std::int64_t c = 0; c < chunks; ++c) {
    const Rational lo(c, den), hi(c + 1, den);
    // Count just to the right of lo: 1/3 <= {lo x} < 2/3.
    std::size_t count = 0;
    for (auto x : a) {
      __int128 r = (static_cast<__int128>(c) * x) % den;
      if (3 * r >= den && 3 * r < 2 * den) ++count;
    }
    ev.clear();
    for (auto x : a) {
      // lo < j / (3x) < hi  <=>  3x c / den < j < 3x (c+1) / den
      __int128 jlo = (static_cast<__int128>(3) * x * c) / den + 1;
      __int128 jhi_num = static_cast<__int128>(3) * x * (c + 1);
      __int128 jhi = jhi_num / den;
      if (jhi * den == jhi_num) --jhi;
      for (__int128 j = jlo; j <= jhi; ++j)
        if (j % 3 != 0) ev.push_back({static_cast<std::int64_t>(j), x});
    }
    std::sort(ev.begin(), ev.end(), detail::event_less);
    Rational left = lo;
    std::size_t i = 0;
    auto consider = [&](const Rational& right) {
      if (count > best || !best_theta) {
        best = count;
        best_theta = detail::midpoint(left, right);
      }
    };
    while (i < ev.size()) {
      Rational at(ev[i].j, 3 * ev[i].x);
      consider(at);
      std::size_t k = i;
      while (k < ev.size() && detail::event_equal(ev[k], ev[i])) {
        if (ev[k].j % 3 == 1)
          ++count;
        else
          --count;
        ++k;
      }
      left = at;
      i = k;
    }
    consider(hi);
  }
  DilationCertificate cert;
  cert.theta = *best_theta;
  cert.selected = dilation_select(a, cert.theta);
  cert.size = cert.selected.size();
  if (cert.size != best) throw std::logic_error("dilation sweep recount mismatch");
  if (!is_sum_free(cert.selected, SumFreeConvention::kAllowEqual))
    throw std::logic_error("dilation selection is not sum-free");
  return cert;
}

// ---------------------------------------------------------------------------
// Heuristic lower-bound engine

namespace detail {

/// Would adding a[x] to the member set create a forbidden triple?
inline bool conflicts(const IntegerSet& a, const std::vector<char>& in, const std::vector<std::size_t>& members,
                      std::size_t xi, SumFreeConvention conv) {
  const std::int64_t x = a[xi];
  auto member = [&](std::int64_t v) {
    auto i = a.index_of(v);
    return i >= 0 && in[static_cast<std::size_t>(i)];
  };
  if (conv == SumFreeConvention::kAllowEqual && member(2 * x)) return true;
  for (auto yi : members) {
    const std::int64_t y = a[yi];
    if (member(x + y)) return true;
    if (y > x && member(y - x)) return true;  // x + (y - x) = y; y - x != x since x is not a member
    if (x > y) {
      std::int64_t d = x - y;
      if (member(d) && (conv == SumFreeConvention::kAllowEqual || d != y)) return true;
    }
  }
  return false;
}

struct LocalState {
  std::vector<char> in;
  std::vector<std::size_t> members;

  void rebuild() {
    members.clear();
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i]) members.push_back(i);
  }
};

inline LocalState state_of(const IntegerSet& a, const IntegerSet& s) {
  LocalState st;
  st.in.assign(a.size(), 0);
  for (auto x : s) st.in[static_cast<std::size_t>(a.index_of(x))] = 1;
  st.rebuild();
  return st;
}

inline void greedy_complete(const IntegerSet& a, LocalState& st, SumFreeConvention conv) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (st.in[i]) continue;
    if (!conflicts(a, st.in, st.members, i, conv)) {
      st.in[i] = 1;
      st.members.push_back(i);
    }
  }
}

inline IntegerSet best_interval_selection(const IntegerSet& a) {
  const auto& e = a.elements();
  std::size_t best = 0, best_i = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto hi = std::lower_bound(e.begin() + static_cast<std::ptrdiff_t>(i), e.end(), 2 * e[i]);
    std::size_t c = static_cast<std::size_t>(hi - e.begin()) - i;
    if (c > best) {
      best = c;
      best_i = i;
    }
  }
  std::vector<std::int64_t> v;
  for (std::size_t i = best_i; i < e.size() && e[i] < 2 * e[best_i]; ++i) v.push_back(e[i]);
  return IntegerSet(std::move(v));
}

/// Best A ∩ {x : x mod q in R} over q <= max_q and R sum-free in Z/qZ (R+R disjoint from R).
inline IntegerSet best_residue_selection(const IntegerSet& a, int max_q = 12) {
  std::vector<std::int64_t> best;
  for (int q = 2; q <= max_q; ++q) {
    std::vector<std::size_t> cnt(static_cast<std::size_t>(q), 0);
    for (auto x : a) ++cnt[static_cast<std::size_t>(((x % q) + q) % q)];
    std::size_t best_count = 0;
    std::uint32_t best_r = 0;
    for (std::uint32_t r = 0; r < (1u << q); ++r) {
      if (r & 1u) continue;  // residue 0 is never sum-free
      std::uint32_t sums = 0;
      for (int i = 0; i < q; ++i) {
        if (!(r >> i & 1u)) continue;
        for (int j = i; j < q; ++j)
          if (r >> j & 1u) sums |= 1u << ((i + j) % q);
      }
      if (sums & r) continue;
      std::size_t c = 0;
      for (int i = 0; i < q; ++i)
        if (r >> i & 1u) c += cnt[static_cast<std::size_t>(i)];
      if (c > best_count) {
        best_count = c;
        best_r = r;
      }
    }
    if (best_count > best.size()) {
      best.clear();
      for (auto x : a)
        if (best_r >> (((x % q) + q) % q) & 1u) best.push_back(x);
    }
  }
  return IntegerSet(std::move(best));
}

/// Best A_theta over theta = (2j+1)/(2D), j < D/2. Used when the exact sweep
/// would visit too many breakpoints.
inline DilationCertificate sampled_dilation(const IntegerSet& a, std::int64_t samples) {
  DilationCertificate best{Rational(1, 2), dilation_select(a, Rational(1, 2)), 0};
  best.size = best.selected.size();
  const std::int64_t d = 2 * samples;
  for (std::int64_t j = 0; j < samples; ++j) {
    Rational th(2 * j + 1, 2 * d);
    std::size_t c = 0;
    for (auto x : a)
      if (in_middle_third(th, x)) ++c;
    if (c > best.size) {
      best.theta = th;
      best.size = c;
    }
  }
  best.selected = dilation_select(a, best.theta);
  return best;
}

}  // namespace detail

/// Sweeps above this many breakpoints fall back to sampled theta in the heuristic.
inline constexpr std::uint64_t kExactSweepLimit = 40'000'000ULL;

/// Lower bound on the maximum sum-free subset: best of the dilation sweep,
/// the interval selections A ∩ [x, 2x) and sum-free residue selections, each
/// completed greedily and improved by randomized remove-one/re-add moves.
inline SolveReport heuristic_sum_free(const IntegerSet& a, SumFreeConvention conv, int restarts, Seed seed) {
  require_positive(a, "heuristic_sum_free");
  require(restarts >= 0, "restarts must be nonnegative");
  if (a.empty()) return detail::make_report(a, conv, IntegerSet{}, 0, false);

  std::vector<IntegerSet> starts;
  if (sweep_event_count(a) <= kExactSweepLimit) {
    starts.push_back(dilation_sweep(a).selected);
  } else {
    std::int64_t samples = std::max<std::int64_t>(64, 20'000'000 / static_cast<std::int64_t>(a.size()));
    starts.push_back(detail::sampled_dilation(a, samples).selected);
  }
  starts.push_back(detail::best_interval_selection(a));
  starts.push_back(detail::best_residue_selection(a));

  // Each move costs about 32 conflict checks of |S| lookups each plus an O(n)
  // rebuild; the move count is capped so one call stays near 1e8 operations.
  std::uint64_t work = 0;
  const std::uint64_t n = a.size();
  const std::uint64_t log_n = static_cast<std::uint64_t>(std::bit_width(n)) + 1;
  const std::uint64_t move_cost = 32 * (n / 2 + 1) * log_n + n;
  const std::uint64_t runs = starts.size() * static_cast<std::uint64_t>(std::max(restarts, 1));
  const std::uint64_t moves = std::clamp<std::uint64_t>(100'000'000 / (move_cost * runs), 8, 4 * n + 32);

  detail::LocalState best_state = detail::state_of(a, IntegerSet{});
  for (std::size_t s = 0; s < starts.size(); ++s) {
    detail::LocalState st = detail::state_of(a, starts[s]);
    detail::greedy_complete(a, st, conv);
    if (st.members.size() > best_state.members.size()) best_state = st;
    for (int r = 0; r < restarts; ++r) {
      Rng rng(seed.split(s * 1'000'003ULL + static_cast<std::uint64_t>(r)));
      detail::LocalState cur = st;
      for (std::uint64_t m = 0; m < moves && !cur.members.empty(); ++m) {
        ++work;
        detail::LocalState next = cur;
        std::size_t victim = next.members[rng.below(next.members.size())];
        next.in[victim] = 0;
        next.rebuild();
        std::size_t before = next.members.size();
        for (int t = 0; t < 32; ++t) {
          std::size_t i = rng.below(a.size());
          if (next.in[i] || i == victim) continue;
          if (!detail::conflicts(a, next.in, next.members, i, conv)) {
            next.in[i] = 1;
            next.members.push_back(i);
          }
        }
        if (next.members.size() >= before + 1) cur = std::move(next);
        if (cur.members.size() > best_state.members.size()) best_state = cur;
      }
    }
  }
  std::vector<std::int64_t> w;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (best_state.in[i]) w.push_back(a[i]);
  return detail::make_report(a, conv, IntegerSet(std::move(w)), work, false);
}

// ---------------------------------------------------------------------------
// Composition and the catalog

/// A ∪ M·B. With M > 2 max(A) no summing triple mixes the two parts.
inline IntegerSet compose(const IntegerSet& a, const IntegerSet& b, std::optional<std::int64_t> m = std::nullopt) {
  require_positive(a, "compose");
  require_positive(b, "compose");
  require(!a.empty(), "compose needs a nonempty first set");
  const std::int64_t amax = a.max();
  std::int64_t mult = 0;
  if (__builtin_mul_overflow(amax, std::int64_t{2}, &mult)) fail(Error::Kind::kOverflow, "2*max(A) overflows");
  const std::int64_t lower = mult;
  mult = m.value_or(lower + 1);
  require(mult > lower, "multiplier M=" + std::to_string(mult) + " must exceed 2*max(A)=" + std::to_string(lower));
  std::vector<std::int64_t> v(a.begin(), a.end());
  for (auto x : b) {
    std::int64_t y = 0;
    if (__builtin_mul_overflow(x, mult, &y)) fail(Error::Kind::kOverflow, "M*max(B) overflows 64 bits");
    v.push_back(y);
  }
  return IntegerSet(std::move(v));
}

struct CatalogEntry {
  std::string name;
  IntegerSet set;
  Rational sigma_bound;
};

/// Explicit small sets with no large sum-free subset.
inline std::vector<CatalogEntry> catalog() {
  return {
      {"klarner", IntegerSet({2, 3, 4, 5, 6, 8, 10}, "klarner"), Rational(3, 7)},
      {"malouf", IntegerSet({1, 2, 3, 4, 5, 6, 8, 9, 10, 18}, "malouf"), Rational(2, 5)},
  };
}

}  // namespace sumfree
