#pragma once
// F-limits, F-cluster points and F-Cauchy certification for sequences in a
// space model, checked on a finite schedule of (seminorm, epsilon) pairs.
//
// Neighborhoods are open: U = {v : p(v) < eps}.
//
// Image and subsequence filters are resolved into (G, F0) where G is the
// composite index map. Horizons then count indices of F0, so x_{G(j)} is
// inspected for j <= horizon.

#include <map>
#include <string>
#include <vector>

#include "filterlab/density.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/sequence.hpp"
#include "filterlab/spaces.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

struct CheckOptions {
  std::vector<double> eps_grid{1.0, 0.1, 0.01, 0.001};
  Index horizon = 1'000'000;
  DensityOptions density;
  /// Seminorm labels to test; empty means every label of the space.
  std::vector<std::string> labels;
  /// Anchor schedule for density filters: 1..prefix plus geometric indices.
  Index anchor_prefix = 64;
  int anchors_per_octave = 2;
};

/// Anchor indices used by f_cauchy_check for density filters.
std::vector<Index> anchor_schedule(Index horizon, const CheckOptions& options);

/// For every (p, eps): {n : p(x_n - candidate) >= eps} must have its
/// complement in F. Conjunction over the schedule.
Verdict f_limit_check(const SequenceSpec& x, const Vector& candidate, const NatFilter& f,
                      const SpaceModel& space, const CheckOptions& options = {});

/// For every (p, eps): a set of F with p-diameter < eps (tail and base
/// filters) or an anchor m with {n : p(x_n - x_m) >= eps} outside F's ideal
/// (density filters).
Verdict f_cauchy_check(const SequenceSpec& x, const NatFilter& f, const SpaceModel& space,
                       const CheckOptions& options = {});

/// For every (p, eps): {n : p(x_n - candidate) < eps} is F-stationary.
Verdict cluster_point_check(const SequenceSpec& x, const Vector& candidate, const NatFilter& f,
                            const SpaceModel& space, const CheckOptions& options = {});

/// Requires Cauchy and cluster verdicts to hold (AuditSkippedError
/// otherwise), then checks the limit. A failing limit is an audit failure.
Verdict cluster_implies_limit_audit(const SequenceSpec& x, const Vector& candidate,
                                    const NatFilter& f, const SpaceModel& space,
                                    const CheckOptions& options = {});

struct SparseLimit {
  Vector limit;  // keyed
  std::map<std::string, Verdict> per_key;
  std::vector<std::string> flagged;  // keys whose limit verdict is not holds
  std::vector<std::string> inspected_support;
  bool support_closed = true;
  Verdict verdict;
};

/// Per-key F-limits of keyed vectors. Keys default to the union of the
/// inspected supports.
SparseLimit sparse_pointwise_limit(const SequenceSpec& x, const NatFilter& f,
                                   std::vector<std::string> keys, const CheckOptions& options = {});

Json to_json(const SparseLimit& result);

}  // namespace filterlab
