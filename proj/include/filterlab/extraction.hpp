#pragma once
// Cauchy-sequence extraction from a nested base in a normed model: pick
// x_n in A_1 ∩ ... ∩ A_n and audit the result.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/sequence.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

enum class Norm { l1, linf };

/// A closed box [lo, hi] or a closed norm ball B(center, radius).
class Region {
 public:
  enum class Kind { box, ball };

  static Region box(std::vector<double> lo, std::vector<double> hi);
  static Region ball(std::vector<double> center, double radius, Norm norm);
  /// box([lo..],[hi..]) or ball([c..], r, l1|linf).
  static Region parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return a_.size(); }
  bool contains(const std::vector<double>& p, double slack = 1e-12) const;
  /// Exact diameter in the given norm.
  double diameter(Norm norm) const;
  /// sup over the region of ||p - q||.
  double farthest(const std::vector<double>& q, Norm norm) const;
  std::string to_string() const;

  const std::vector<double>& lo_or_center() const noexcept { return a_; }
  const std::vector<double>& hi() const noexcept { return b_; }
  double radius() const noexcept { return r_; }
  Norm ball_norm() const noexcept { return norm_; }

 private:
  Kind kind_ = Kind::box;
  std::vector<double> a_, b_;
  double r_ = 0.0;
  Norm norm_ = Norm::linf;
};

struct Selector {
  enum class Kind { center, boundary, random };
  Kind kind = Kind::center;
  std::uint64_t seed = 0;
  /// center, boundary, random(<seed>)
  static Selector parse(std::string_view text);
  std::string to_string() const;
};

struct ExtractionOptions {
  Norm norm = Norm::linf;
  /// Allowed diameter of A_n is radius_scale * 2^(1-n).
  double radius_scale = 1.0;
  /// Neighborhood radii for the limit audit.
  std::vector<double> eps_grid{1.0, 0.1, 0.01, 0.001};
  int attempts = 256;
};

struct ExtractionResult {
  std::vector<std::vector<double>> points;
  Sequence sequence;
  Verdict cauchy_audit;
  Verdict limit_audit;
  std::vector<double> limit;  // last selected point
};

double norm_distance(const std::vector<double>& a, const std::vector<double>& b, Norm norm);

/// Throws NotCauchyFilterError when diam(A_n) exceeds the schedule and
/// BaseNotFilterError when no point of A_1 ∩ ... ∩ A_n is found.
ExtractionResult extract_cauchy_from_base(const std::vector<Region>& base, const Selector& selector,
                                          const ExtractionOptions& options = {});

Json to_json(const ExtractionResult& result);

}  // namespace filterlab
