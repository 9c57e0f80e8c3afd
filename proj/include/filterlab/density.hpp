#pragma once
// f-density estimates d_f(A) = lim f(|A n [1,n]|) / f(n) from tail windows of
// geometric checkpoints.

#include <optional>
#include <utility>
#include <vector>

#include "filterlab/modulus.hpp"
#include "filterlab/natset.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

enum class DensityStatus { converged, oscillating, inconclusive };

std::string_view to_string(DensityStatus status) noexcept;

struct DensityOptions {
  double tolerance = 1e-3;  // tail oscillation allowed for "converged"
  double window = 0.2;      // trailing fraction of checkpoints
  double zero_tolerance = 1e-3;
  int per_octave = 32;
  Index first_checkpoint = 10;
  Index min_horizon = 1000;
};

struct DensityEstimate {
  std::optional<double> value;
  DensityStatus status = DensityStatus::inconclusive;
  Index horizon = 0;
  double tail_inf = 0.0;
  double tail_sup = 0.0;
  std::vector<std::pair<Index, double>> samples;
};

/// floor(first * 2^(i/per_octave)) together with 2^j - 1 and 2^j, capped at
/// the horizon (which is always included).
std::vector<Index> density_checkpoints(Index horizon, const DensityOptions& options = {});

/// Throws BoundedModulusError for bounded f, PreconditionError for a horizon
/// below options.min_horizon or a window outside (0, 1), and
/// HorizonExceededError from the set counts.
DensityEstimate f_density(const NatSet& a, const ModulusFunction& f, Index horizon,
                          const DensityOptions& options = {});

/// Holds when the estimate converges with tail_sup <= zero_tolerance (or the
/// set is finite by construction); fails when it converges above
/// 10 * zero_tolerance or oscillates. The horizon is clipped to the set's
/// known horizon and count cap.
Verdict has_f_density_zero(const NatSet& a, const ModulusFunction& f, Index horizon,
                           const DensityOptions& options = {});

Json to_json(const DensityEstimate& estimate);
/// "n,ratio" rows with a header line.
std::string samples_csv(const DensityEstimate& estimate);

}  // namespace filterlab
