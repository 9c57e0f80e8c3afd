#pragma once
// Truncated sequence spaces and seminorm families.
//
// Vector text forms (d = truncation dimension): [v1, v2, ...], {key: v, ...},
// basis(k), ones, zero, uniform, harmonic (1/k), alternating ((-1)^k),
// geometric(r) (r^k), cesaro_basis(n), expr(<expression in k>).
//
// Space text forms: scalar, l1, l1(d), linf, linf(d), family(<vector>, ...),
// sparse(key, ...).

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace filterlab {

class Vector {
 public:
  enum class Storage { dense, indexed, keyed };

  Vector() = default;

  static Vector dense(std::vector<double> values);
  /// Coordinates (0-based index, value) with every other coordinate zero.
  static Vector indexed(std::size_t dim, std::vector<std::pair<std::size_t, double>> entries);
  /// Finitely supported function on opaque keys.
  static Vector keyed(std::map<std::string, double> entries);
  static Vector zeros(std::size_t dim);
  /// e_k with 1-based k.
  static Vector basis(std::size_t dim, std::size_t k);
  static Vector ones(std::size_t dim);
  /// (1/n) * (e_1 + ... + e_n)
  static Vector cesaro_basis(std::size_t dim, std::size_t n);

  static Vector parse(std::string_view text, std::size_t dim);

  Storage storage() const noexcept { return storage_; }
  /// Truncation dimension; 0 for keyed vectors.
  std::size_t dim() const noexcept { return dim_; }
  /// 0-based coordinate.
  double coordinate(std::size_t i) const;
  double entry(const std::string& key) const;

  const std::vector<double>& dense_values() const noexcept { return dense_; }
  const std::vector<std::pair<std::size_t, double>>& indexed_entries() const noexcept {
    return indexed_;
  }
  const std::map<std::string, double>& keyed_entries() const noexcept { return keyed_; }

  std::vector<double> to_dense() const;
  /// Keys carrying a non-zero value.
  std::vector<std::string> support() const;

  double norm_l1() const noexcept { return l1_; }
  double norm_linf() const noexcept { return linf_; }

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector scaled(double alpha) const;

  /// Name given by the generator that built the vector, if any.
  const std::string& label() const noexcept { return label_; }
  Vector with_label(std::string label) const;
  std::string to_string() const;

  friend bool operator==(const Vector& a, const Vector& b);

 private:
  void finish();
  Storage storage_ = Storage::indexed;
  std::size_t dim_ = 0;
  std::vector<double> dense_;
  std::vector<std::pair<std::size_t, double>> indexed_;
  std::map<std::string, double> keyed_;
  double l1_ = 0.0;
  double linf_ = 0.0;
  std::string label_;
};

/// sum_n x_n y_n over the common truncation (or common keys). Throws
/// DimensionMismatchError for different dimensions or mixed storage kinds.
double pairing(const Vector& x, const Vector& y);
/// ||x - z||_1 and ||x - z||_inf without forming the difference.
double distance_l1(const Vector& x, const Vector& z);
double distance_linf(const Vector& x, const Vector& z);

class SpaceModel {
 public:
  enum class Variant { l1, linf, seminorm_family, sparse_product };

  static SpaceModel l1(std::size_t dim);
  static SpaceModel linf(std::size_t dim);
  /// The real line as l1(1); its norm is |<x, 1>|.
  static SpaceModel scalar();
  static SpaceModel seminorm_family(std::vector<Vector> functionals, std::vector<std::string> labels);
  /// Point evaluations |v(key)| for each key.
  static SpaceModel sparse_product(std::vector<std::string> keys);

  static SpaceModel parse(std::string_view text, std::size_t dim);

  Variant variant() const noexcept { return variant_; }
  std::size_t dim() const noexcept { return dim_; }
  /// "norm" for normed variants, otherwise functional labels or keys.
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Throws UnknownLabelError or DimensionMismatchError.
  double seminorm(const std::string& label, const Vector& v) const;
  /// p_label(x - z).
  double distance(const std::string& label, const Vector& x, const Vector& z) const;
  /// The functional y when p_label = |<., y>|.
  std::optional<Vector> functional(const std::string& label) const;

  std::string to_string() const;

 private:
  std::size_t index_of(const std::string& label) const;
  void check(const Vector& v) const;
  Variant variant_ = Variant::l1;
  std::size_t dim_ = 0;
  bool scalar_ = false;
  std::vector<std::string> labels_;
  std::vector<Vector> functionals_;
};

}  // namespace filterlab
