#pragma once
// Filters on N with horizon-bounded tri-state membership.
//
// Text forms: frechet, stat, fstat(<modulus>), base(<set>, ...),
// image(<index map>, <filter>), subseq(<index map>).

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/density.hpp"
#include "filterlab/index_map.hpp"
#include "filterlab/modulus.hpp"
#include "filterlab/natset.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

struct BaseCheckOptions {
  Index nonempty_horizon = 1'000'000;
  Index intersection_horizon = 100'000;
};

class NatFilter {
 public:
  enum class Kind { frechet, statistical, f_statistical, base, image, subsequence };

  static NatFilter frechet();
  static NatFilter statistical();
  static NatFilter f_statistical(const ModulusFunction& f);
  /// Throws BaseNotFilterError when an element is empty up to
  /// options.nonempty_horizon or a pair has no element of the base inside its
  /// intersection.
  static NatFilter base(std::vector<NatSet> sets, const BaseCheckOptions& options = {});
  static NatFilter image(const IndexMap& g, const NatFilter& inner);
  /// Filter generated by the tails {s(k) : k >= K}. Throws PreconditionError
  /// unless s is strictly increasing on its first 10^5 terms.
  static NatFilter subsequence(const IndexMap& stream);

  static NatFilter parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  /// Density filters: statistical and f_statistical.
  bool is_density() const noexcept {
    return kind_ == Kind::statistical || kind_ == Kind::f_statistical;
  }
  const ModulusFunction& modulus() const;
  const std::vector<NatSet>& base_sets() const noexcept { return base_; }
  /// Image and subsequence filters.
  const IndexMap& map() const;
  /// Inner filter of an image; Frechet for a subsequence.
  const NatFilter& inner() const;
  /// True when some image map in the tree has finite range, which makes the
  /// filter fixed (trivial).
  bool degenerate() const;

  std::string to_string() const;

 private:
  NatFilter() = default;
  Kind kind_ = Kind::frechet;
  std::optional<ModulusFunction> modulus_;
  std::vector<NatSet> base_;
  std::optional<IndexMap> map_;
  std::shared_ptr<const NatFilter> inner_;
};

NatFilter image_filter(const IndexMap& g, const NatFilter& f);

/// Tri-state membership of a in F on [1, horizon].
Verdict member(const NatFilter& f, const NatSet& a, Index horizon,
               const DensityOptions& density = {});

/// Holds iff a meets every element of F, decided as the negation of
/// member(F, N \ a).
Verdict is_stationary(const NatFilter& f, const NatSet& a, Index horizon,
                      const DensityOptions& density = {});

/// Testbed evidence for F1 subset of F2. Each set is examined at
/// min(horizon, its count cap); sets where F1 is inconclusive are recorded
/// and skipped.
Verdict includes(const NatFilter& f1, const NatFilter& f2, const std::vector<TestbedEntry>& testbed,
                 Index horizon, const DensityOptions& density = {});

}  // namespace filterlab
