#pragma once
// Symbolic subsets of N = {1, 2, ...} built from a closed constructor tree.
//
// Text forms: nat, empty, evens, odds, squares, cubes, primes, ap(a,d),
// poly(c0,c1,...), blocks(b) or blocks(pow2), powers(b), finite(n1,...),
// range(lo,hi) (hi may be inf), tail(k), compl(A), union(A,B,...),
// inter(A,B,...), preimage(<index map>, A).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/index_map.hpp"

namespace filterlab {

/// Largest horizon for sets with closed-form counts.
inline constexpr Index kClosedFormCap = 1'000'000'000;
/// Largest horizon for sets counted by scanning the membership predicate.
inline constexpr Index kPredicateCap = 10'000'000;

class NatSet {
 public:
  enum class Kind {
    all,
    empty,
    arithmetic,
    polynomial,
    blocks,
    finite,
    range,
    primes,
    powers,
    observed,
    complement,
    union_of,
    intersection,
    preimage
  };

  struct Node;

  static NatSet all();
  static NatSet empty();
  /// {a, a+d, a+2d, ...}; a >= 1, d >= 1.
  static NatSet arithmetic(Index a, Index d);
  /// {p(k) : k >= 1} with non-negative integer coefficients c0 + c1 k + ...
  static NatSet polynomial(std::vector<Index> coefficients);
  static NatSet squares() { return polynomial({0, 0, 1}); }
  static NatSet cubes() { return polynomial({0, 0, 0, 1}); }
  /// Union over k >= 0 of [b^(2k), b^(2k+1)).
  static NatSet blocks(Index base);
  static NatSet finite(std::vector<Index> elements);
  /// [lo, hi]; hi = kInfinity gives a tail.
  static NatSet range(Index lo, Index hi);
  static NatSet tail(Index k) { return range(k, kInfinity); }
  static NatSet primes();
  /// {1, b, b^2, ...}
  static NatSet powers(Index base);
  /// Members known only on [1, horizon]; outside that window membership is
  /// reported as false and the set carries the horizon.
  static NatSet observed(std::vector<Index> members, Index horizon);
  /// Members known only on an explicit (sorted) domain.
  static NatSet observed_on(std::vector<Index> members, std::vector<Index> domain);
  static NatSet complement(const NatSet& a);
  static NatSet union_of(std::vector<NatSet> parts);
  static NatSet intersection(std::vector<NatSet> parts);
  /// {n : g(n) in a}
  static NatSet preimage(const IndexMap& g, const NatSet& a);

  static NatSet parse(std::string_view text);

  Kind kind() const noexcept;
  bool contains(Index n) const;
  /// Smallest member m with n <= m <= limit.
  std::optional<Index> next_at_or_after(Index n, Index limit) const;
  /// Members of [lo, hi] in increasing order.
  std::vector<Index> members_in(Index lo, Index hi) const;

  bool has_closed_count() const noexcept;
  /// |A intersect [1, n]|. Throws HorizonExceededError above the cap.
  Index count(Index n) const;
  /// Counts at ascending checkpoints; predicate-only sets use one sweep.
  std::vector<Index> counts_at(const std::vector<Index>& checkpoints) const;
  Index horizon_cap() const noexcept;

  /// Exact answers when the constructor tree decides them.
  std::optional<bool> is_finite() const;
  std::optional<bool> is_cofinite() const;
  /// Inclusion by constructor reasoning; nullopt when undecided.
  std::optional<bool> subset_of(const NatSet& other) const;

  /// Largest n such that membership is known on all of [1, n].
  Index known_horizon() const;
  /// Whether membership of n is backed by data (always true for symbolic sets).
  bool is_known(Index n) const;

  std::string to_string() const;
  const Node& node() const noexcept { return *node_; }

  friend bool operator==(const NatSet& a, const NatSet& b) { return a.to_string() == b.to_string(); }

 private:
  explicit NatSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// The twelve named sets used for filter inclusion runs.
struct TestbedEntry {
  std::string name;
  NatSet set;
};
std::vector<TestbedEntry> standard_testbed();

}  // namespace filterlab
