#include "filterlab/natset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {

namespace {

using Interval = std::pair<Index, Index>;
using Intervals = std::vector<Interval>;

constexpr Index kMaxPeriod = Index{1} << 20;
constexpr Index kMaxExpand = 4'000'000;
constexpr Index kEnumerationBudget = 20'000'000;
constexpr Index kSaturation = Index{1} << 63;

// ---------------------------------------------------------------------------
// Interval lists: sorted, disjoint, closed, non-adjacent.

void push_interval(Intervals& out, Index a, Index b) {
  if (a > b) return;
  if (!out.empty() && out.back().second + 1 >= a) {
    out.back().second = std::max(out.back().second, b);
  } else {
    out.emplace_back(a, b);
  }
}

Intervals unite(const Intervals& x, const Intervals& y) {
  Intervals all;
  all.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(all));
  Intervals out;
  for (const auto& [a, b] : all) push_interval(out, a, b);
  return out;
}

Intervals intersect(const Intervals& x, const Intervals& y) {
  Intervals out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    const Index a = std::max(x[i].first, y[j].first);
    const Index b = std::min(x[i].second, y[j].second);
    if (a <= b) push_interval(out, a, b);
    if (x[i].second < y[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

Intervals complement_within(const Intervals& x, Index lo, Index hi) {
  Intervals out;
  Index cursor = lo;
  for (const auto& [a, b] : x) {
    if (b < lo || a > hi) continue;
    if (a > cursor) push_interval(out, cursor, a - 1);
    cursor = std::max(cursor, b + 1);
  }
  if (cursor <= hi) push_interval(out, cursor, hi);
  return out;
}

// ---------------------------------------------------------------------------
// Eventually periodic description: for n >= threshold, n is a member iff
// mask[n % period]; members below the threshold are listed as intervals.

struct Periodic {
  Index threshold = 1;
  Index period = 1;
  std::vector<std::uint8_t> mask;
  std::vector<Index> mask_cum;
  Intervals prefix;
  std::vector<Index> prefix_cum;

  static Periodic make(Index threshold, Index period, std::vector<std::uint8_t> mask,
                       Intervals prefix) {
    Periodic p;
    p.threshold = std::max<Index>(threshold, 1);
    p.period = period;
    p.mask = std::move(mask);
    p.mask_cum.assign(period + 1, 0);
    for (Index r = 0; r < period; ++r) p.mask_cum[r + 1] = p.mask_cum[r] + (p.mask[r] ? 1 : 0);
    p.prefix = std::move(prefix);
    p.prefix_cum.assign(p.prefix.size() + 1, 0);
    for (std::size_t i = 0; i < p.prefix.size(); ++i)
      p.prefix_cum[i + 1] = p.prefix_cum[i] + (p.prefix[i].second - p.prefix[i].first + 1);
    return p;
  }

  bool mask_all(bool value) const {
    return mask_cum[period] == (value ? period : 0);
  }

  double density() const { return static_cast<double>(mask_cum[period]) / static_cast<double>(period); }

  // #{m in [0, n] : mask[m % period]}
  Index upto(Index n) const {
    const Index q = (n + 1) / period, r = (n + 1) % period;
    return q * mask_cum[period] + mask_cum[r];
  }

  bool contains(Index n) const {
    if (n >= threshold) return mask[n % period] != 0;
    auto it = std::upper_bound(prefix.begin(), prefix.end(), n,
                               [](Index v, const Interval& iv) { return v < iv.first; });
    return it != prefix.begin() && std::prev(it)->second >= n;
  }

  Index count(Index n) const {
    if (n < threshold) {
      auto it = std::upper_bound(prefix.begin(), prefix.end(), n,
                                 [](Index v, const Interval& iv) { return v < iv.first; });
      const std::size_t j = static_cast<std::size_t>(it - prefix.begin());
      Index total = prefix_cum[j];
      if (j > 0 && prefix[j - 1].second > n) total -= prefix[j - 1].second - n;
      return total;
    }
    return prefix_cum.back() + upto(n) - upto(threshold - 1);
  }

  bool is_empty() const { return prefix.empty() && mask_all(false); }
};

std::optional<Intervals> intervals_of(const Periodic& p, Index lo, Index hi) {
  Intervals out;
  if (lo > hi) return out;
  for (const auto& [a, b] : p.prefix) {
    const Index x = std::max(a, lo), y = std::min(b, hi);
    if (x <= y) push_interval(out, x, y);
  }
  const Index start = std::max(lo, p.threshold);
  if (start > hi) return out;
  if (p.mask_all(true)) {
    push_interval(out, start, hi);
  } else if (!p.mask_all(false)) {
    if (hi - start > kMaxExpand) return std::nullopt;
    for (Index n = start; n <= hi; ++n) {
      if (p.mask[n % p.period]) push_interval(out, n, n);
    }
  }
  return out;
}

Periodic periodic_complement(const Periodic& p) {
  std::vector<std::uint8_t> mask(p.period);
  for (Index r = 0; r < p.period; ++r) mask[r] = p.mask[r] ? 0 : 1;
  Intervals prefix;
  if (p.threshold > 1) prefix = complement_within(p.prefix, 1, p.threshold - 1);
  return Periodic::make(p.threshold, p.period, std::move(mask), std::move(prefix));
}

std::optional<Periodic> periodic_combine(const Periodic& a, const Periodic& b, bool conjunctive) {
  const Index period = std::lcm(a.period, b.period);
  if (period > kMaxPeriod) return std::nullopt;
  const Index threshold = std::max(a.threshold, b.threshold);
  std::vector<std::uint8_t> mask(period);
  for (Index r = 0; r < period; ++r) {
    const bool x = a.mask[r % a.period] != 0, y = b.mask[r % b.period] != 0;
    mask[r] = conjunctive ? (x && y) : (x || y);
  }
  Intervals prefix;
  if (threshold > 1) {
    const auto ia = intervals_of(a, 1, threshold - 1);
    const auto ib = intervals_of(b, 1, threshold - 1);
    if (!ia || !ib) return std::nullopt;
    prefix = conjunctive ? intersect(*ia, *ib) : unite(*ia, *ib);
  }
  return Periodic::make(threshold, period, std::move(mask), std::move(prefix));
}

Periodic periodic_constant(bool member) {
  return Periodic::make(1, 1, {static_cast<std::uint8_t>(member ? 1 : 0)}, {});
}

// ---------------------------------------------------------------------------
// Arithmetic helpers.

Index saturating_pow(Index base, unsigned exponent) {
  Index result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(result, base, &result) || result >= kSaturation) return kInfinity;
  }
  return result;
}

Index isqrt_ceil(Index n) {
  Index r = static_cast<Index>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? r : r + 1;
}

Index mulmod(Index a, Index b, Index m) {
  return static_cast<Index>(static_cast<unsigned __int128>(a) * b % m);
}

Index powmod(Index a, Index e, Index m) {
  Index result = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return result;
}

bool is_prime(Index n) {
  if (n < 2) return false;
  for (Index p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  Index d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (Index a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Index x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<Index> checked_ascending(const std::vector<Index>& checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw PreconditionError("count checkpoints must be ascending");
  return checkpoints;
}

}  // namespace

// ---------------------------------------------------------------------------
// Node interface.

struct NatSet::Node {
  virtual ~Node() = default;
  virtual Kind kind() const = 0;
  virtual bool contains(Index n) const = 0;
  virtual std::string text() const = 0;

  virtual std::optional<Index> next(Index n, Index limit) const {
    for (Index m = std::max<Index>(n, 1); m <= limit; ++m) {
      if (contains(m)) return m;
      if (m == kInfinity) break;
    }
    return std::nullopt;
  }

  // Closed-form counting (no scan over [1, n]).
  virtual bool closed() const { return periodic.has_value(); }
  virtual Index closed_count(Index n) const { return periodic->count(n); }

  // Counts at ascending checkpoints by scanning membership.
  virtual std::vector<Index> sweep(const std::vector<Index>& cps) const {
    std::vector<Index> out(cps.size());
    Index running = 0, n = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      for (; n < cps[i];) {
        ++n;
        if (contains(n)) ++running;
      }
      out[i] = running;
    }
    return out;
  }

  virtual std::optional<bool> finite() const {
    if (periodic) return periodic->mask_all(false);
    if (lower_density() > 0.0) return false;
    return std::nullopt;
  }
  virtual std::optional<bool> cofinite() const {
    if (periodic) return periodic->mask_all(true);
    if (upper_density() < 1.0) return false;
    return std::nullopt;
  }
  // Bounds on lower and upper natural density.
  virtual double lower_density() const { return periodic ? periodic->density() : 0.0; }
  virtual double upper_density() const { return periodic ? periodic->density() : 1.0; }

  virtual Index known_horizon() const { return kInfinity; }
  virtual bool is_known(Index) const { return true; }
  virtual Index closed_cap() const { return kClosedFormCap; }

  std::optional<Periodic> periodic;
};

namespace {

using Node = NatSet::Node;
using Kind = NatSet::Kind;

struct AllNode final : Node {
  AllNode() { periodic = periodic_constant(true); }
  Kind kind() const override { return Kind::all; }
  bool contains(Index n) const override { return n >= 1; }
  std::optional<Index> next(Index n, Index limit) const override {
    const Index m = std::max<Index>(n, 1);
    return m <= limit ? std::optional<Index>(m) : std::nullopt;
  }
  std::string text() const override { return "nat"; }
};

struct EmptyNode final : Node {
  EmptyNode() { periodic = periodic_constant(false); }
  Kind kind() const override { return Kind::empty; }
  bool contains(Index) const override { return false; }
  std::optional<Index> next(Index, Index) const override { return std::nullopt; }
  std::string text() const override { return "empty"; }
};

struct ArithmeticNode final : Node {
  Index a, d;
  ArithmeticNode(Index a_, Index d_) : a(a_), d(d_) {
    std::vector<std::uint8_t> mask(d, 0);
    mask[a % d] = 1;
    periodic = Periodic::make(a, d, std::move(mask), {});
  }
  Kind kind() const override { return Kind::arithmetic; }
  bool contains(Index n) const override { return n >= a && (n - a) % d == 0; }
  std::optional<Index> next(Index n, Index limit) const override {
    Index m = a;
    if (n > a) m = a + ((n - a + d - 1) / d) * d;
    return m <= limit ? std::optional<Index>(m) : std::nullopt;
  }
  std::string text() const override {
    if (a == 2 && d == 2) return "evens";
    if (a == 1 && d == 2) return "odds";
    return "ap(" + std::to_string(a) + "," + std::to_string(d) + ")";
  }
};

struct PolynomialNode final : Node {
  std::vector<Index> c;  // degree >= 2, leading coefficient > 0
  explicit PolynomialNode(std::vector<Index> coefficients) : c(std::move(coefficients)) {}

  Index eval(Index k) const {
    unsigned __int128 v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      v = v * k + *it;
      if (v >= kSaturation) return kInfinity;
    }
    return static_cast<Index>(v);
  }
  // Smallest k >= 1 with p(k) >= n.
  Index first_at_least(Index n) const {
    Index lo = 1, hi = 1;
    while (eval(hi) < n) hi *= 2;
    while (lo < hi) {
      const Index mid = lo + (hi - lo) / 2;
      if (eval(mid) >= n) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }
  Kind kind() const override { return Kind::polynomial; }
  bool contains(Index n) const override { return n >= 1 && eval(first_at_least(n)) == n; }
  std::optional<Index> next(Index n, Index limit) const override {
    const Index v = eval(first_at_least(std::max<Index>(n, 1)));
    return v <= limit ? std::optional<Index>(v) : std::nullopt;
  }
  bool closed() const override { return true; }
  Index closed_count(Index n) const override {
    const Index k = first_at_least(n);
    return eval(k) == n ? k : k - 1;
  }
  std::optional<bool> finite() const override { return false; }
  std::optional<bool> cofinite() const override { return false; }
  double lower_density() const override { return 0.0; }
  double upper_density() const override { return 0.0; }
  std::string text() const override {
    if (c == std::vector<Index>{0, 0, 1}) return "squares";
    if (c == std::vector<Index>{0, 0, 0, 1}) return "cubes";
    std::vector<std::string> parts;
    for (Index v : c) parts.push_back(std::to_string(v));
    return "poly(" + dsl::join(parts) + ")";
  }
};

struct BlocksNode final : Node {
  Index b;
  explicit BlocksNode(Index base) : b(base) {}
  // floor(log_b n) for n >= 1
  unsigned exponent(Index n) const {
    unsigned e = 0;
    Index p = 1;
    while (true) {
      Index q;
      if (__builtin_mul_overflow(p, b, &q) || q > n) return e;
      p = q;
      ++e;
    }
  }
  Kind kind() const override { return Kind::blocks; }
  bool contains(Index n) const override { return n >= 1 && exponent(n) % 2 == 0; }
  std::optional<Index> next(Index n, Index limit) const override {
    n = std::max<Index>(n, 1);
    if (contains(n)) return n <= limit ? std::optional<Index>(n) : std::nullopt;
    const Index m = saturating_pow(b, exponent(n) + 1);
    return m <= limit ? std::optional<Index>(m) : std::nullopt;
  }
  bool closed() const override { return true; }
  Index closed_count(Index n) const override {
    Index total = 0;
    for (unsigned k = 0;; k += 2) {
      const Index lo = saturating_pow(b, k);
      if (lo == kInfinity || lo > n) break;
      const Index hi_open = saturating_pow(b, k + 1);
      const Index hi = hi_open == kInfinity ? n : std::min(n, hi_open - 1);
      total += hi - lo + 1;
    }
    return total;
  }
  std::optional<bool> finite() const override { return false; }
  std::optional<bool> cofinite() const override { return false; }
  double lower_density() const override { return 1.0 / static_cast<double>(b + 1); }
  double upper_density() const override {
    return static_cast<double>(b) / static_cast<double>(b + 1);
  }
  std::string text() const override { return "blocks(" + std::to_string(b) + ")"; }
};

struct FiniteNode final : Node {
  std::vector<Index> elements;  // sorted, unique, positive
  explicit FiniteNode(std::vector<Index> e) : elements(std::move(e)) {
    Intervals prefix;
    for (Index v : elements) push_interval(prefix, v, v);
    const Index threshold = elements.empty() ? 1 : elements.back() + 1;
    periodic = Periodic::make(threshold, 1, {0}, std::move(prefix));
  }
  Kind kind() const override { return Kind::finite; }
  bool contains(Index n) const override {
    return std::binary_search(elements.begin(), elements.end(), n);
  }
  std::optional<Index> next(Index n, Index limit) const override {
    auto it = std::lower_bound(elements.begin(), elements.end(), n);
    if (it == elements.end() || *it > limit) return std::nullopt;
    return *it;
  }
  std::string text() const override {
    std::vector<std::string> parts;
    for (Index v : elements) parts.push_back(std::to_string(v));
    return "finite(" + dsl::join(parts) + ")";
  }
};

struct RangeNode final : Node {
  Index lo, hi;
  RangeNode(Index l, Index h) : lo(l), hi(h) {
    if (hi == kInfinity) {
      periodic = Periodic::make(lo, 1, {1}, {});
    } else {
      Intervals prefix;
      push_interval(prefix, lo, hi);
      periodic = Periodic::make(hi + 1, 1, {0}, std::move(prefix));
    }
  }
  Kind kind() const override { return Kind::range; }
  bool contains(Index n) const override { return n >= lo && n <= hi; }
  std::optional<Index> next(Index n, Index limit) const override {
    const Index m = std::max(n, lo);
    if (m > hi || m > limit) return std::nullopt;
    return m;
  }
  std::string text() const override {
    if (hi == kInfinity) return "tail(" + std::to_string(lo) + ")";
    return "range(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
  }
};

struct PrimesNode final : Node {
  Kind kind() const override { return Kind::primes; }
  bool contains(Index n) const override { return is_prime(n); }
  std::vector<Index> sweep(const std::vector<Index>& cps) const override {
    std::vector<Index> out(cps.size());
    if (cps.empty()) return out;
    const Index top = cps.back();
    std::vector<std::uint8_t> composite(top + 1, 0);
    for (Index p = 2; p * p <= top; ++p) {
      if (composite[p]) continue;
      for (Index q = p * p; q <= top; q += p) composite[q] = 1;
    }
    Index running = 0, n = 1;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      for (; n < cps[i];) {
        ++n;
        if (!composite[n]) ++running;
      }
      out[i] = running;
    }
    return out;
  }
  std::optional<bool> finite() const override { return false; }
  std::optional<bool> cofinite() const override { return false; }
  double lower_density() const override { return 0.0; }
  double upper_density() const override { return 0.0; }
  std::string text() const override { return "primes"; }
};

struct PowersNode final : Node {
  Index b;
  explicit PowersNode(Index base) : b(base) {}
  Kind kind() const override { return Kind::powers; }
  bool contains(Index n) const override {
    if (n == 0) return false;
    while (n % b == 0) n /= b;
    return n == 1;
  }
  std::optional<Index> next(Index n, Index limit) const override {
    Index p = 1;
    while (p < n) {
      if (__builtin_mul_overflow(p, b, &p)) return std::nullopt;
    }
    return p <= limit ? std::optional<Index>(p) : std::nullopt;
  }
  bool closed() const override { return true; }
  Index closed_count(Index n) const override {
    Index count = 0, p = 1;
    while (p <= n) {
      ++count;
      if (__builtin_mul_overflow(p, b, &p)) break;
    }
    return count;
  }
  std::optional<bool> finite() const override { return false; }
  std::optional<bool> cofinite() const override { return false; }
  double lower_density() const override { return 0.0; }
  double upper_density() const override { return 0.0; }
  std::string text() const override { return "powers(" + std::to_string(b) + ")"; }
};

struct ObservedNode final : Node {
  std::vector<Index> members;  // sorted, unique
  Index horizon = 0;           // interval-known window [1, horizon]
  std::vector<Index> domain;   // explicit known points when non-empty
  Index contiguous = 0;

  Kind kind() const override { return Kind::observed; }
  bool contains(Index n) const override {
    return std::binary_search(members.begin(), members.end(), n);
  }
  std::optional<Index> next(Index n, Index limit) const override {
    auto it = std::lower_bound(members.begin(), members.end(), n);
    if (it == members.end() || *it > limit) return std::nullopt;
    return *it;
  }
  bool closed() const override { return true; }
  Index closed_count(Index n) const override {
    return static_cast<Index>(std::upper_bound(members.begin(), members.end(), n) - members.begin());
  }
  Index closed_cap() const override { return contiguous; }
  std::optional<bool> finite() const override { return std::nullopt; }
  std::optional<bool> cofinite() const override { return std::nullopt; }
  double lower_density() const override { return 0.0; }
  double upper_density() const override { return 1.0; }
  Index known_horizon() const override { return contiguous; }
  bool is_known(Index n) const override {
    if (domain.empty()) return n >= 1 && n <= horizon;
    return std::binary_search(domain.begin(), domain.end(), n);
  }
  std::string text() const override {
    if (domain.empty())
      return "observed(" + std::to_string(members.size()) + " of " + std::to_string(horizon) + ")";
    return "observed(" + std::to_string(members.size()) + " on " + std::to_string(domain.size()) +
           " points)";
  }
};

struct ComplementNode final : Node {
  NatSet child;
  explicit ComplementNode(NatSet c) : child(std::move(c)) {
    if (child.node().periodic) periodic = periodic_complement(*child.node().periodic);
  }
  Kind kind() const override { return Kind::complement; }
  bool contains(Index n) const override { return n >= 1 && !child.contains(n); }
  bool closed() const override { return child.node().closed(); }
  Index closed_count(Index n) const override { return n - child.node().closed_count(n); }
  std::vector<Index> sweep(const std::vector<Index>& cps) const override {
    std::vector<Index> inner = child.node().sweep(cps);
    for (std::size_t i = 0; i < cps.size(); ++i) inner[i] = cps[i] - inner[i];
    return inner;
  }
  std::optional<bool> finite() const override {
    if (periodic) return periodic->mask_all(false);
    return child.node().cofinite();
  }
  std::optional<bool> cofinite() const override {
    if (periodic) return periodic->mask_all(true);
    return child.node().finite();
  }
  double lower_density() const override { return 1.0 - child.node().upper_density(); }
  double upper_density() const override { return 1.0 - child.node().lower_density(); }
  Index known_horizon() const override { return child.known_horizon(); }
  bool is_known(Index n) const override { return child.is_known(n); }
  Index closed_cap() const override { return child.node().closed_cap(); }
  std::string text() const override { return "compl(" + child.to_string() + ")"; }
};

struct CombineNode final : Node {
  std::vector<NatSet> parts;
  bool conjunctive;
  Index known = kInfinity;

  CombineNode(std::vector<NatSet> p, bool conj) : parts(std::move(p)), conjunctive(conj) {
    std::optional<Periodic> acc = parts.front().node().periodic;
    for (std::size_t i = 1; i < parts.size() && acc; ++i) {
      const auto& next = parts[i].node().periodic;
      acc = next ? periodic_combine(*acc, *next, conjunctive) : std::nullopt;
    }
    periodic = std::move(acc);
    for (const NatSet& s : parts) known = std::min(known, s.known_horizon());
  }

  Kind kind() const override { return conjunctive ? Kind::intersection : Kind::union_of; }
  bool contains(Index n) const override {
    if (conjunctive) {
      return std::all_of(parts.begin(), parts.end(), [n](const NatSet& s) { return s.contains(n); });
    }
    return std::any_of(parts.begin(), parts.end(), [n](const NatSet& s) { return s.contains(n); });
  }
  std::optional<Index> next(Index n, Index limit) const override {
    if (!conjunctive) {
      std::optional<Index> best;
      for (const NatSet& s : parts) {
        const auto m = s.next_at_or_after(n, best ? *best : limit);
        if (m && (!best || *m < *best)) best = m;
      }
      return best;
    }
    Index cursor = std::max<Index>(n, 1);
    while (cursor <= limit) {
      Index highest = cursor;
      for (const NatSet& s : parts) {
        const auto m = s.next_at_or_after(cursor, limit);
        if (!m) return std::nullopt;
        highest = std::max(highest, *m);
      }
      if (highest == cursor) return cursor;
      cursor = highest;
    }
    return std::nullopt;
  }

  // Sparse enumeration: members of the union (or of the smallest closed part
  // of an intersection) are listed explicitly.
  bool closed() const override {
    if (periodic) return true;
    if (conjunctive) {
      return std::any_of(parts.begin(), parts.end(),
                         [](const NatSet& s) { return s.node().closed(); });
    }
    return std::all_of(parts.begin(), parts.end(),
                       [](const NatSet& s) { return s.node().closed(); });
  }
  Index closed_count(Index n) const override {
    if (periodic) return periodic->count(n);
    if (conjunctive) {
      const NatSet* best = nullptr;
      Index best_count = kInfinity;
      for (const NatSet& s : parts) {
        if (!s.node().closed()) continue;
        const Index c = s.node().closed_count(n);
        if (c < best_count) {
          best_count = c;
          best = &s;
        }
      }
      if (best_count > kEnumerationBudget)
        throw HorizonExceededError(n, kPredicateCap, text() + " (enumeration budget)");
      Index total = 0;
      for (Index m : best->members_in(1, n)) {
        if (contains(m)) ++total;
      }
      return total;
    }
    // |P0 u rest| = |P0| + |rest \ P0| with P0 the largest part.
    std::vector<Index> counts;
    for (const NatSet& s : parts) counts.push_back(s.node().closed_count(n));
    const std::size_t base =
        static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    Index budget = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i != base) budget += counts[i];
    }
    if (budget > kEnumerationBudget)
      throw HorizonExceededError(n, kPredicateCap, text() + " (enumeration budget)");
    std::vector<Index> rest;
    rest.reserve(budget);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i == base) continue;
      const auto m = parts[i].members_in(1, n);
      rest.insert(rest.end(), m.begin(), m.end());
    }
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    Index total = counts[base];
    for (Index m : rest) {
      if (!parts[base].contains(m)) ++total;
    }
    return total;
  }
  Index closed_cap() const override {
    Index cap = kClosedFormCap;
    for (const NatSet& s : parts) {
      if (s.node().closed()) cap = std::min(cap, s.node().closed_cap());
    }
    return cap;
  }

  std::optional<bool> finite() const override {
    if (periodic) return periodic->mask_all(false);
    if (lower_density() > 0.0) return false;
    if (!conjunctive) {
      bool all_finite = true;
      for (const NatSet& s : parts) {
        const auto f = s.is_finite();
        if (f == false) return false;
        if (f != true) all_finite = false;
      }
      return all_finite ? std::optional<bool>(true) : std::nullopt;
    }
    int not_cofinite = 0;
    bool infinite_rest = true;
    for (const NatSet& s : parts) {
      if (s.is_finite() == true) return true;
      if (s.is_cofinite() != true) {
        ++not_cofinite;
        if (s.is_finite() != false) infinite_rest = false;
      }
    }
    // A cofinite set meets every infinite set in an infinite set.
    if (not_cofinite == 0 || (not_cofinite == 1 && infinite_rest)) return false;
    return std::nullopt;
  }
  std::optional<bool> cofinite() const override {
    if (periodic) return periodic->mask_all(true);
    if (upper_density() < 1.0) return false;
    if (!conjunctive) {
      for (const NatSet& s : parts) {
        if (s.is_cofinite() == true) return true;
      }
      return std::nullopt;
    }
    bool all = true;
    for (const NatSet& s : parts) {
      const auto c = s.is_cofinite();
      if (c == false) return false;
      if (c != true) all = false;
    }
    return all ? std::optional<bool>(true) : std::nullopt;
  }
  double lower_density() const override {
    if (periodic) return periodic->density();
    double acc = conjunctive ? 1.0 : 0.0;
    for (const NatSet& s : parts) {
      if (conjunctive) {
        acc -= 1.0 - s.node().lower_density();
      } else {
        acc = std::max(acc, s.node().lower_density());
      }
    }
    return std::max(acc, 0.0);
  }
  double upper_density() const override {
    if (periodic) return periodic->density();
    double acc = conjunctive ? 1.0 : 0.0;
    for (const NatSet& s : parts) {
      if (conjunctive) {
        acc = std::min(acc, s.node().upper_density());
      } else {
        acc += s.node().upper_density();
      }
    }
    return std::min(acc, 1.0);
  }
  Index known_horizon() const override { return known; }
  bool is_known(Index n) const override {
    return std::all_of(parts.begin(), parts.end(), [n](const NatSet& s) { return s.is_known(n); });
  }
  std::string text() const override {
    std::vector<std::string> texts;
    for (const NatSet& s : parts) texts.push_back(s.to_string());
    return std::string(conjunctive ? "inter(" : "union(") + dsl::join(texts) + ")";
  }
};

std::optional<Periodic> preimage_periodic(const IndexMap& g, const NatSet& a) {
  const auto brute_prefix = [&](Index below) -> std::optional<Intervals> {
    if (below > kMaxExpand) return std::nullopt;
    Intervals prefix;
    for (Index n = 1; n < below; ++n) {
      if (a.contains(g(n))) push_interval(prefix, n, n);
    }
    return prefix;
  };
  if (g.finite_range()) {
    for (Index v : g.range_values()) {
      if (!a.is_known(v)) return std::nullopt;
    }
    if (g.kind() == IndexMap::Kind::affine) return periodic_constant(a.contains(g(1)));
    if (g.kind() == IndexMap::Kind::explicit_cycle) {
      const Index k = g.cycle().size();
      std::vector<std::uint8_t> mask(k);
      for (Index r = 0; r < k; ++r) mask[r] = a.contains(g.cycle()[(r + k - 1) % k]) ? 1 : 0;
      return Periodic::make(1, k, std::move(mask), {});
    }
    return std::nullopt;
  }
  const auto& p = a.node().periodic;
  if (!p) return std::nullopt;
  const Index period = p->period;
  if (g.kind() == IndexMap::Kind::affine) {
    const Index slope = g.affine_slope();
    const std::int64_t offset = g.affine_offset();
    // first n with slope*n + offset >= threshold
    const __int128 need = static_cast<__int128>(p->threshold) - offset;
    Index start = 1;
    if (need > 0) start = std::max<Index>(1, static_cast<Index>((need + slope - 1) / slope));
    const auto prefix = brute_prefix(start);
    if (!prefix) return std::nullopt;
    std::vector<std::uint8_t> mask(period);
    const __int128 off_mod = ((static_cast<__int128>(offset) % period) + period) % period;
    for (Index r = 0; r < period; ++r) {
      const Index v = static_cast<Index>((static_cast<__int128>(slope % period) * r + off_mod) % period);
      mask[r] = p->mask[v];
    }
    return Periodic::make(start, period, std::move(mask), *prefix);
  }
  if (g.kind() == IndexMap::Kind::square) {
    const Index start = std::max<Index>(1, isqrt_ceil(p->threshold));
    const auto prefix = brute_prefix(start);
    if (!prefix) return std::nullopt;
    std::vector<std::uint8_t> mask(period);
    for (Index r = 0; r < period; ++r) mask[r] = p->mask[mulmod(r, r, period)];
    return Periodic::make(start, period, std::move(mask), *prefix);
  }
  return std::nullopt;
}

struct PreimageNode final : Node {
  IndexMap g;
  NatSet target;
  Index known = kInfinity;

  PreimageNode(IndexMap map, NatSet a) : g(std::move(map)), target(std::move(a)) {
    periodic = preimage_periodic(g, target);
    if (target.known_horizon() != kInfinity) {
      if (g.finite_range()) {
        const auto values = g.range_values();
        const bool all_known = std::all_of(values.begin(), values.end(),
                                           [&](Index v) { return target.is_known(v); });
        known = all_known ? kInfinity : 0;
      } else {
        known = g.inverse_horizon(target.known_horizon());
        while (known < kInfinity && target.is_known(g.saturating(known + 1))) ++known;
      }
    }
  }
  Kind kind() const override { return Kind::preimage; }
  bool contains(Index n) const override {
    const Index v = g.saturating(n);
    return v != kInfinity && target.contains(v);
  }
  std::optional<bool> finite() const override {
    if (periodic) return periodic->mask_all(false);
    if (g.strictly_increasing()) {
      if (target.is_finite() == true) return true;
      if (target.is_cofinite() == true) return false;
    }
    return std::nullopt;
  }
  std::optional<bool> cofinite() const override {
    if (periodic) return periodic->mask_all(true);
    if (g.strictly_increasing()) {
      if (target.is_cofinite() == true) return true;
      if (target.is_finite() == true) return false;
    }
    return std::nullopt;
  }
  double lower_density() const override { return periodic ? periodic->density() : 0.0; }
  double upper_density() const override { return periodic ? periodic->density() : 1.0; }
  Index known_horizon() const override { return known; }
  bool is_known(Index n) const override {
    const Index v = g.saturating(n);
    return v != kInfinity && target.is_known(v);
  }
  std::string text() const override {
    return "preimage(" + g.to_string() + "," + target.to_string() + ")";
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Factories.

NatSet NatSet::all() { return NatSet(std::make_shared<const AllNode>()); }
NatSet NatSet::empty() { return NatSet(std::make_shared<const EmptyNode>()); }

NatSet NatSet::arithmetic(Index a, Index d) {
  if (a < 1 || d < 1) throw ParseError("ap(a,d) requires a >= 1 and d >= 1");
  if (d == 1) return range(a, kInfinity);
  return NatSet(std::make_shared<const ArithmeticNode>(a, d));
}

NatSet NatSet::polynomial(std::vector<Index> coefficients) {
  while (!coefficients.empty() && coefficients.back() == 0) coefficients.pop_back();
  if (coefficients.empty()) throw ParseError("poly(...) needs a non-zero coefficient");
  if (coefficients.size() == 1) return finite({coefficients[0]});
  if (coefficients.size() == 2) return arithmetic(coefficients[0] + coefficients[1], coefficients[1]);
  return NatSet(std::make_shared<const PolynomialNode>(std::move(coefficients)));
}

NatSet NatSet::blocks(Index base) {
  if (base < 2) throw ParseError("blocks(b) requires b >= 2");
  return NatSet(std::make_shared<const BlocksNode>(base));
}

NatSet NatSet::finite(std::vector<Index> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && elements.front() == 0)
    throw ParseError("finite(...) elements must be positive");
  return NatSet(std::make_shared<const FiniteNode>(std::move(elements)));
}

NatSet NatSet::range(Index lo, Index hi) {
  lo = std::max<Index>(lo, 1);
  if (lo > hi) return empty();
  if (lo == 1 && hi == kInfinity) return all();
  return NatSet(std::make_shared<const RangeNode>(lo, hi));
}

NatSet NatSet::primes() { return NatSet(std::make_shared<const PrimesNode>()); }

NatSet NatSet::powers(Index base) {
  if (base < 2) throw ParseError("powers(b) requires b >= 2");
  return NatSet(std::make_shared<const PowersNode>(base));
}

NatSet NatSet::observed(std::vector<Index> members, Index horizon) {
  auto node = std::make_shared<ObservedNode>();
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  node->members = std::move(members);
  node->horizon = horizon;
  node->contiguous = horizon;
  return NatSet(std::move(node));
}

NatSet NatSet::observed_on(std::vector<Index> members, std::vector<Index> domain) {
  auto node = std::make_shared<ObservedNode>();
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  if (domain.empty()) domain.push_back(0);  // nothing known
  Index contiguous = 0;
  for (Index v : domain) {
    if (v == contiguous + 1) {
      contiguous = v;
    } else if (v > contiguous + 1) {
      break;
    }
  }
  node->members = std::move(members);
  node->domain = std::move(domain);
  node->contiguous = contiguous;
  return NatSet(std::move(node));
}

NatSet NatSet::complement(const NatSet& a) {
  if (a.kind() == Kind::complement) return static_cast<const ComplementNode&>(a.node()).child;
  if (a.kind() == Kind::all) return empty();
  if (a.kind() == Kind::empty) return all();
  return NatSet(std::make_shared<const ComplementNode>(a));
}

NatSet NatSet::union_of(std::vector<NatSet> parts) {
  if (parts.empty()) return empty();
  if (parts.size() == 1) return parts.front();
  return NatSet(std::make_shared<const CombineNode>(std::move(parts), false));
}

NatSet NatSet::intersection(std::vector<NatSet> parts) {
  if (parts.empty()) return all();
  if (parts.size() == 1) return parts.front();
  return NatSet(std::make_shared<const CombineNode>(std::move(parts), true));
}

NatSet NatSet::preimage(const IndexMap& g, const NatSet& a) {
  if (g.kind() == IndexMap::Kind::composite) return preimage(g.inner(), preimage(g.outer(), a));
  if (g.kind() == IndexMap::Kind::affine && g.affine_slope() == 1 && g.affine_offset() == 0) return a;
  return NatSet(std::make_shared<const PreimageNode>(g, a));
}

// ---------------------------------------------------------------------------
// Queries.

NatSet::Kind NatSet::kind() const noexcept { return node_->kind(); }
bool NatSet::contains(Index n) const { return n >= 1 && node_->contains(n); }

std::optional<Index> NatSet::next_at_or_after(Index n, Index limit) const {
  if (limit < 1) return std::nullopt;
  return node_->next(std::max<Index>(n, 1), limit);
}

std::vector<Index> NatSet::members_in(Index lo, Index hi) const {
  std::vector<Index> out;
  Index cursor = std::max<Index>(lo, 1);
  while (cursor <= hi) {
    const auto m = next_at_or_after(cursor, hi);
    if (!m) break;
    out.push_back(*m);
    if (*m == kInfinity) break;
    cursor = *m + 1;
  }
  return out;
}

bool NatSet::has_closed_count() const noexcept { return node_->closed(); }

Index NatSet::horizon_cap() const noexcept {
  return node_->closed() ? node_->closed_cap() : std::min(kPredicateCap, known_horizon());
}

Index NatSet::count(Index n) const {
  return counts_at({n}).front();
}

std::vector<Index> NatSet::counts_at(const std::vector<Index>& checkpoints) const {
  const std::vector<Index> cps = checked_ascending(checkpoints);
  if (cps.empty()) return {};
  const Index cap = horizon_cap();
  if (cps.back() > cap) throw HorizonExceededError(cps.back(), cap, to_string());
  if (node_->closed()) {
    std::vector<Index> out(cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) out[i] = cps[i] == 0 ? 0 : node_->closed_count(cps[i]);
    return out;
  }
  return node_->sweep(cps);
}

std::optional<bool> NatSet::is_finite() const { return node_->finite(); }
std::optional<bool> NatSet::is_cofinite() const { return node_->cofinite(); }

Index NatSet::known_horizon() const { return node_->known_horizon(); }
bool NatSet::is_known(Index n) const { return node_->is_known(n); }

std::string NatSet::to_string() const { return node_->text(); }

std::optional<bool> NatSet::subset_of(const NatSet& other) const {
  if (to_string() == other.to_string()) return true;
  if (kind() == Kind::empty || other.kind() == Kind::all) return true;
  if (kind() == Kind::finite) {
    for (Index v : static_cast<const FiniteNode&>(*node_).elements) {
      if (!other.is_known(v)) return std::nullopt;
      if (!other.contains(v)) return false;
    }
    return true;
  }
  if (node_->periodic && other.node().periodic) {
    const auto diff =
        periodic_combine(*node_->periodic, periodic_complement(*other.node().periodic), true);
    if (diff) return diff->is_empty();
  }
  if (kind() == Kind::complement && other.kind() == Kind::complement) {
    return static_cast<const ComplementNode&>(other.node())
        .child.subset_of(static_cast<const ComplementNode&>(*node_).child);
  }
  if (kind() == Kind::union_of) {
    bool all = true;
    for (const NatSet& part : static_cast<const CombineNode&>(*node_).parts) {
      const auto r = part.subset_of(other);
      if (r == false) return false;
      if (r != true) all = false;
    }
    if (all) return true;
  }
  if (other.kind() == Kind::intersection) {
    bool all = true;
    for (const NatSet& part : static_cast<const CombineNode&>(other.node()).parts) {
      const auto r = subset_of(part);
      if (r == false) return false;
      if (r != true) all = false;
    }
    if (all) return true;
  }
  if (other.kind() == Kind::union_of) {
    for (const NatSet& part : static_cast<const CombineNode&>(other.node()).parts) {
      if (subset_of(part) == true) return true;
    }
  }
  if (kind() == Kind::intersection) {
    for (const NatSet& part : static_cast<const CombineNode&>(*node_).parts) {
      if (part.subset_of(other) == true) return true;
    }
  }
  if (is_finite() == false && other.is_finite() == true) return false;
  if (node_->lower_density() > other.node().upper_density()) return false;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text form.

NatSet NatSet::parse(std::string_view text) {
  const dsl::Call call = dsl::parse_call(text);
  const auto& h = call.head;
  const auto expect = [&](std::size_t n) {
    if (call.args.size() != n)
      throw ParseError("set '" + h + "' takes " + std::to_string(n) + " argument(s), got " +
                       std::to_string(call.args.size()));
  };
  const auto index_args = [&]() {
    std::vector<Index> out;
    for (const std::string& a : call.args) out.push_back(dsl::parse_index(a));
    return out;
  };
  const auto set_args = [&]() {
    std::vector<NatSet> out;
    for (const std::string& a : call.args) out.push_back(parse(a));
    return out;
  };
  if (!call.has_parens) {
    if (h == "nat" || h == "all") return all();
    if (h == "empty") return empty();
    if (h == "evens") return arithmetic(2, 2);
    if (h == "odds") return arithmetic(1, 2);
    if (h == "squares") return squares();
    if (h == "cubes") return cubes();
    if (h == "primes") return primes();
  }
  if (h == "ap") {
    expect(2);
    return arithmetic(dsl::parse_index(call.args[0]), dsl::parse_index(call.args[1]));
  }
  if (h == "poly") return polynomial(index_args());
  if (h == "blocks") {
    expect(1);
    const std::string& b = call.args[0];
    if (b.rfind("pow", 0) == 0) return blocks(dsl::parse_index(b.substr(3)));
    return blocks(dsl::parse_index(b));
  }
  if (h == "powers") {
    expect(1);
    return powers(dsl::parse_index(call.args[0]));
  }
  if (h == "finite") return finite(index_args());
  if (h == "range") {
    expect(2);
    const Index lo = dsl::parse_index(call.args[0]);
    const Index hi = call.args[1] == "inf" ? kInfinity : dsl::parse_index(call.args[1]);
    return range(lo, hi);
  }
  if (h == "tail") {
    expect(1);
    return tail(dsl::parse_index(call.args[0]));
  }
  if (h == "compl") {
    expect(1);
    return complement(parse(call.args[0]));
  }
  if (h == "union") return union_of(set_args());
  if (h == "inter" || h == "intersection") return intersection(set_args());
  if (h == "preimage") {
    expect(2);
    return preimage(IndexMap::parse(call.args[0]), parse(call.args[1]));
  }
  throw ParseError("unknown set '" + std::string(dsl::trim(text)) +
                   "'; expected nat, empty, evens, odds, squares, cubes, primes, ap, poly, blocks, "
                   "powers, finite, range, tail, compl, union, inter, preimage");
}

std::vector<TestbedEntry> standard_testbed() {
  const std::vector<std::pair<std::string, std::string>> specs = {
      {"nat", "nat"},
      {"cofinite", "compl(finite(1,2,3))"},
      {"tail", "tail(100)"},
      {"non-cubes", "compl(cubes)"},
      {"non-powers-of-2", "compl(powers(2))"},
      {"non-squares", "compl(squares)"},
      {"evens", "evens"},
      {"odds", "odds"},
      {"non-ap", "compl(ap(1,10))"},
      {"non-blocks", "compl(blocks(2))"},
      {"non-sparse-union", "compl(union(cubes,powers(3)))"},
      {"squares", "squares"},
  };
  std::vector<TestbedEntry> out;
  for (const auto& [name, text] : specs) out.push_back({name, NatSet::parse(text)});
  return out;
}

}  // namespace filterlab
