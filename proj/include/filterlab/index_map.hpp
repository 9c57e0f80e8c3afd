#pragma once
// Maps g: N -> N used for image filters, subsequence streams and sequence
// composition. Text forms: identity, affine(a,b), const(c), square, pow2,
// explicit(v1,...,vk) (cyclic: g(n) = v_{(n-1) mod k + 1}), compose(outer,inner).

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace filterlab {

using Index = std::uint64_t;
inline constexpr Index kInfinity = std::numeric_limits<Index>::max();

class IndexMap {
 public:
  enum class Kind { affine, square, pow2, explicit_cycle, composite };

  static IndexMap identity() { return affine(1, 0); }
  /// g(n) = a*n + b; a = 0 gives the constant map b. Requires g(1) >= 1.
  static IndexMap affine(Index a, std::int64_t b);
  static IndexMap constant(Index c) { return affine(0, static_cast<std::int64_t>(c)); }
  static IndexMap square();
  static IndexMap pow2();
  static IndexMap explicit_cycle(std::vector<Index> values);
  /// n -> outer(inner(n))
  static IndexMap compose(const IndexMap& outer, const IndexMap& inner);

  static IndexMap parse(std::string_view text);

  /// Throws IndexOverflowError when the value does not fit in 63 bits.
  Index operator()(Index n) const;
  /// Like operator() but returns kInfinity on overflow.
  Index saturating(Index n) const noexcept;

  Kind kind() const noexcept { return kind_; }
  bool strictly_increasing() const noexcept;
  bool finite_range() const noexcept;
  bool injective() const noexcept { return strictly_increasing(); }

  /// Largest n with g(n) <= h for increasing maps (0 if none); h for maps
  /// with finite range.
  Index inverse_horizon(Index h) const;

  /// Distinct values of a finite-range map.
  std::vector<Index> range_values() const;

  Index affine_slope() const noexcept { return a_; }
  std::int64_t affine_offset() const noexcept { return b_; }
  const std::vector<Index>& cycle() const noexcept { return values_; }
  const IndexMap& outer() const { return *outer_; }
  const IndexMap& inner() const { return *inner_; }

  std::string to_string() const;

 private:
  IndexMap() = default;
  Kind kind_ = Kind::affine;
  Index a_ = 1;
  std::int64_t b_ = 0;
  std::vector<Index> values_;
  std::shared_ptr<const IndexMap> outer_;
  std::shared_ptr<const IndexMap> inner_;
};

}  // namespace filterlab
