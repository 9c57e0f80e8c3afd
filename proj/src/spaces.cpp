#include "filterlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"
#include "filterlab/kernels.hpp"

namespace filterlab {

namespace {

using Entries = std::vector<std::pair<std::size_t, double>>;

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  const bool ka = a.storage() == Vector::Storage::keyed;
  const bool kb = b.storage() == Vector::Storage::keyed;
  if (ka != kb)
    throw DimensionMismatchError(std::string(what) + ": keyed and coordinate vectors do not mix");
  if (!ka && a.dim() != b.dim())
    throw DimensionMismatchError(std::string(what) + ": dimensions " + std::to_string(a.dim()) +
                                 " and " + std::to_string(b.dim()) + " differ");
}

double element_value(std::string_view text) {
  try {
    return dsl::parse_number(text);
  } catch (const ParseError&) {
    return Expression::parse(text, "k")(0.0);
  }
}

}  // namespace

void Vector::finish() {
  l1_ = 0.0;
  linf_ = 0.0;
  switch (storage_) {
    case Storage::dense:
      l1_ = kernels::sum_abs(dense_);
      linf_ = kernels::max_abs(dense_);
      break;
    case Storage::indexed:
      for (const auto& [i, v] : indexed_) {
        (void)i;
        l1_ += std::fabs(v);
        linf_ = std::max(linf_, std::fabs(v));
      }
      break;
    case Storage::keyed:
      for (const auto& [k, v] : keyed_) {
        l1_ += std::fabs(v);
        linf_ = std::max(linf_, std::fabs(v));
      }
      break;
  }
}

Vector Vector::dense(std::vector<double> values) {
  Vector v;
  v.storage_ = Storage::dense;
  v.dim_ = values.size();
  v.dense_ = std::move(values);
  v.finish();
  return v;
}

Vector Vector::indexed(std::size_t dim, Entries entries) {
  std::sort(entries.begin(), entries.end());
  Entries clean;
  for (const auto& [i, value] : entries) {
    if (i >= dim)
      throw DimensionMismatchError("coordinate " + std::to_string(i + 1) + " exceeds dimension " +
                                   std::to_string(dim));
    if (!clean.empty() && clean.back().first == i) {
      clean.back().second += value;
    } else {
      clean.emplace_back(i, value);
    }
  }
  Vector v;
  v.storage_ = Storage::indexed;
  v.dim_ = dim;
  v.indexed_ = std::move(clean);
  v.finish();
  return v;
}

Vector Vector::keyed(std::map<std::string, double> entries) {
  Vector v;
  v.storage_ = Storage::keyed;
  v.keyed_ = std::move(entries);
  v.finish();
  return v;
}

Vector Vector::zeros(std::size_t dim) {
  Vector v(Vector::indexed(dim, {}));
  return v;
}

Vector Vector::basis(std::size_t dim, std::size_t k) {
  if (k < 1 || k > dim)
    throw DimensionMismatchError("basis(" + std::to_string(k) + ") outside dimension " +
                                 std::to_string(dim));
  return indexed(dim, {{k - 1, 1.0}}).with_label("basis(" + std::to_string(k) + ")");
}

Vector Vector::ones(std::size_t dim) {
  return dense(std::vector<double>(dim, 1.0)).with_label("ones");
}

Vector Vector::cesaro_basis(std::size_t dim, std::size_t n) {
  if (n < 1 || n > dim)
    throw DimensionMismatchError("cesaro_basis(" + std::to_string(n) + ") outside dimension " +
                                 std::to_string(dim));
  std::vector<double> values(dim, 0.0);
  std::fill(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n), 1.0 / static_cast<double>(n));
  return dense(std::move(values)).with_label("cesaro_basis(" + std::to_string(n) + ")");
}

Vector Vector::parse(std::string_view text, std::size_t dim) {
  const dsl::Call call = dsl::parse_call(text);
  const auto& h = call.head;
  const auto generated = [&](auto fn, std::string label) {
    std::vector<double> values(dim);
    for (std::size_t k = 1; k <= dim; ++k) values[k - 1] = fn(static_cast<double>(k));
    return dense(std::move(values)).with_label(std::move(label));
  };
  if (h == "[") {
    std::vector<double> values;
    for (const std::string& a : call.args) values.push_back(element_value(a));
    return dense(std::move(values));
  }
  if (h == "{") {
    std::map<std::string, double> entries;
    for (const std::string& a : call.args) {
      const auto colon = a.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'key: value' in '" + a + "'");
      const std::string key = dsl::trim(std::string_view(a).substr(0, colon));
      if (key.empty()) throw ParseError("empty key in '" + a + "'");
      entries[key] = element_value(std::string_view(a).substr(colon + 1));
    }
    return keyed(std::move(entries));
  }
  if (!call.has_parens) {
    if (h == "ones") return ones(dim);
    if (h == "zero" || h == "zeros") return zeros(dim).with_label("zero");
    if (h == "uniform")
      return generated([&](double) { return 1.0 / static_cast<double>(dim); }, "uniform");
    if (h == "harmonic") return generated([](double k) { return 1.0 / k; }, "harmonic");
    if (h == "alternating")
      return generated([](double k) { return std::fmod(k, 2.0) == 0.0 ? 1.0 : -1.0; }, "alternating");
  }
  if (h == "basis" && call.args.size() == 1) return basis(dim, dsl::parse_index(call.args[0]));
  if (h == "cesaro_basis" && call.args.size() == 1)
    return cesaro_basis(dim, dsl::parse_index(call.args[0]));
  if (h == "geometric" && call.args.size() == 1) {
    const double r = dsl::parse_number(call.args[0]);
    return generated([r](double k) { return std::pow(r, k); },
                     "geometric(" + dsl::format_number(r) + ")");
  }
  if (h == "expr" && call.args.size() == 1) {
    const Expression e = Expression::parse(call.args[0], "k");
    return generated(e, "expr(" + dsl::trim(call.args[0]) + ")");
  }
  throw ParseError("unknown vector '" + dsl::trim(text) +
                   "'; expected [..], {..}, basis(k), ones, zero, uniform, harmonic, alternating, "
                   "geometric(r), cesaro_basis(n), expr(...)");
}

double Vector::coordinate(std::size_t i) const {
  switch (storage_) {
    case Storage::dense: return i < dense_.size() ? dense_[i] : 0.0;
    case Storage::indexed: {
      auto it = std::lower_bound(indexed_.begin(), indexed_.end(), i,
                                 [](const auto& e, std::size_t key) { return e.first < key; });
      return it != indexed_.end() && it->first == i ? it->second : 0.0;
    }
    case Storage::keyed:
      throw DimensionMismatchError("keyed vectors have no numeric coordinates");
  }
  return 0.0;
}

double Vector::entry(const std::string& key) const {
  if (storage_ != Storage::keyed) throw DimensionMismatchError("coordinate vectors have no keys");
  auto it = keyed_.find(key);
  return it == keyed_.end() ? 0.0 : it->second;
}

std::vector<double> Vector::to_dense() const {
  if (storage_ == Storage::dense) return dense_;
  if (storage_ == Storage::keyed) throw DimensionMismatchError("keyed vectors have no dense form");
  std::vector<double> out(dim_, 0.0);
  for (const auto& [i, v] : indexed_) out[i] = v;
  return out;
}

std::vector<std::string> Vector::support() const {
  std::vector<std::string> out;
  switch (storage_) {
    case Storage::keyed:
      for (const auto& [k, v] : keyed_) {
        if (v != 0.0) out.push_back(k);
      }
      break;
    case Storage::indexed:
      for (const auto& [i, v] : indexed_) {
        if (v != 0.0) out.push_back(std::to_string(i + 1));
      }
      break;
    case Storage::dense:
      for (std::size_t i = 0; i < dense_.size(); ++i) {
        if (dense_[i] != 0.0) out.push_back(std::to_string(i + 1));
      }
      break;
  }
  return out;
}

namespace {

Vector combine(const Vector& a, const Vector& b, double sign) {
  require_same_dim(a, b, "vector arithmetic");
  using S = Vector::Storage;
  if (a.storage() == S::keyed) {
    std::map<std::string, double> out = a.keyed_entries();
    for (const auto& [k, v] : b.keyed_entries()) out[k] += sign * v;
    return Vector::keyed(std::move(out));
  }
  if (a.storage() == S::indexed && b.storage() == S::indexed) {
    Entries out = a.indexed_entries();
    for (const auto& [i, v] : b.indexed_entries()) out.emplace_back(i, sign * v);
    return Vector::indexed(a.dim(), std::move(out));
  }
  std::vector<double> out = a.to_dense();
  if (b.storage() == S::dense) {
    kernels::axpy(sign, b.dense_values(), out);
  } else {
    for (const auto& [i, v] : b.indexed_entries()) out[i] += sign * v;
  }
  return Vector::dense(std::move(out));
}

}  // namespace

Vector Vector::operator+(const Vector& other) const { return combine(*this, other, 1.0); }
Vector Vector::operator-(const Vector& other) const { return combine(*this, other, -1.0); }

Vector Vector::scaled(double alpha) const {
  switch (storage_) {
    case Storage::dense: {
      std::vector<double> out(dense_.size(), 0.0);
      kernels::axpy(alpha, dense_, out);
      return dense(std::move(out));
    }
    case Storage::indexed: {
      Entries out = indexed_;
      for (auto& [i, v] : out) v *= alpha;
      return indexed(dim_, std::move(out));
    }
    case Storage::keyed: {
      std::map<std::string, double> out = keyed_;
      for (auto& [k, v] : out) v *= alpha;
      return keyed(std::move(out));
    }
  }
  return *this;
}

Vector Vector::with_label(std::string label) const {
  Vector v = *this;
  v.label_ = std::move(label);
  return v;
}

std::string Vector::to_string() const {
  if (!label_.empty()) return label_;
  std::vector<std::string> parts;
  if (storage_ == Storage::keyed) {
    for (const auto& [k, v] : keyed_) parts.push_back(k + ": " + dsl::format_number(v));
    return "{" + dsl::join(parts, ", ") + "}";
  }
  for (double v : to_dense()) parts.push_back(dsl::format_number(v));
  return "[" + dsl::join(parts, ", ") + "]";
}

bool operator==(const Vector& a, const Vector& b) {
  const bool ka = a.storage() == Vector::Storage::keyed;
  const bool kb = b.storage() == Vector::Storage::keyed;
  if (ka || kb) {
    if (ka != kb) return false;
    std::set<std::string> keys;
    for (const auto& [k, v] : a.keyed_entries()) keys.insert(k);
    for (const auto& [k, v] : b.keyed_entries()) keys.insert(k);
    return std::all_of(keys.begin(), keys.end(),
                       [&](const std::string& k) { return a.entry(k) == b.entry(k); });
  }
  return a.dim() == b.dim() && a.to_dense() == b.to_dense();
}

double pairing(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "pairing");
  using S = Vector::Storage;
  if (x.storage() == S::keyed) {
    const auto& small = x.keyed_entries().size() <= y.keyed_entries().size() ? x : y;
    const auto& large = &small == &x ? y : x;
    double total = 0.0;
    for (const auto& [k, v] : small.keyed_entries()) total += v * large.entry(k);
    return total;
  }
  if (x.storage() == S::dense && y.storage() == S::dense)
    return kernels::dot(x.dense_values(), y.dense_values());
  if (x.storage() == S::indexed && y.storage() == S::indexed) {
    double total = 0.0;
    const auto& a = x.indexed_entries();
    const auto& b = y.indexed_entries();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].first == b[j].first) {
        total += a[i++].second * b[j++].second;
      } else if (a[i].first < b[j].first) {
        ++i;
      } else {
        ++j;
      }
    }
    return total;
  }
  const Vector& sparse = x.storage() == S::indexed ? x : y;
  const Vector& full = x.storage() == S::indexed ? y : x;
  double total = 0.0;
  for (const auto& [i, v] : sparse.indexed_entries()) total += v * full.dense_values()[i];
  return total;
}

namespace {

template <typename Acc>
void merge_walk(const Entries& a, const Entries& b, Acc&& acc) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      acc(a[i].second, 0.0);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      acc(0.0, b[j].second);
      ++j;
    } else {
      acc(a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
}

template <typename Acc>
void keyed_walk(const Vector& x, const Vector& z, Acc&& acc) {
  std::set<std::string> keys;
  for (const auto& [k, v] : x.keyed_entries()) keys.insert(k);
  for (const auto& [k, v] : z.keyed_entries()) keys.insert(k);
  for (const std::string& k : keys) acc(x.entry(k), z.entry(k));
}

}  // namespace

double distance_l1(const Vector& x, const Vector& z) {
  require_same_dim(x, z, "distance");
  using S = Vector::Storage;
  double total = 0.0;
  const auto add = [&](double a, double b) { total += std::fabs(a - b); };
  if (x.storage() == S::keyed) {
    keyed_walk(x, z, add);
    return total;
  }
  if (x.storage() == S::dense && z.storage() == S::dense)
    return kernels::sum_abs_diff(x.dense_values(), z.dense_values());
  if (x.storage() == S::indexed && z.storage() == S::indexed) {
    merge_walk(x.indexed_entries(), z.indexed_entries(), add);
    return total;
  }
  const Vector& sparse = x.storage() == S::indexed ? x : z;
  const Vector& full = x.storage() == S::indexed ? z : x;
  total = full.norm_l1();
  for (const auto& [i, v] : sparse.indexed_entries()) {
    const double w = full.dense_values()[i];
    total += std::fabs(v - w) - std::fabs(w);
  }
  return std::max(total, 0.0);
}

double distance_linf(const Vector& x, const Vector& z) {
  require_same_dim(x, z, "distance");
  using S = Vector::Storage;
  double best = 0.0;
  const auto take = [&](double a, double b) { best = std::max(best, std::fabs(a - b)); };
  if (x.storage() == S::keyed) {
    keyed_walk(x, z, take);
    return best;
  }
  if (x.storage() == S::dense && z.storage() == S::dense)
    return kernels::max_abs_diff(x.dense_values(), z.dense_values());
  if (x.storage() == S::indexed && z.storage() == S::indexed) {
    merge_walk(x.indexed_entries(), z.indexed_entries(), take);
    return best;
  }
  const Vector& sparse = x.storage() == S::indexed ? x : z;
  const Vector& full = x.storage() == S::indexed ? z : x;
  const auto& entries = sparse.indexed_entries();
  const auto& values = full.dense_values();
  for (const auto& [i, v] : entries) best = std::max(best, std::fabs(v - values[i]));
  // Largest |full| outside the sparse support.
  bool peak_covered = false;
  for (const auto& [i, v] : entries) {
    if (std::fabs(values[i]) == full.norm_linf()) peak_covered = true;
  }
  if (!peak_covered) return std::max(best, full.norm_linf());
  std::size_t k = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (k < entries.size() && entries[k].first == i) {
      ++k;
      continue;
    }
    best = std::max(best, std::fabs(values[i]));
  }
  return best;
}

// ---------------------------------------------------------------------------

SpaceModel SpaceModel::l1(std::size_t dim) {
  SpaceModel s;
  s.variant_ = Variant::l1;
  s.dim_ = dim;
  s.labels_ = {"norm"};
  return s;
}

SpaceModel SpaceModel::linf(std::size_t dim) {
  SpaceModel s = l1(dim);
  s.variant_ = Variant::linf;
  return s;
}

SpaceModel SpaceModel::scalar() {
  SpaceModel s = l1(1);
  s.scalar_ = true;
  return s;
}

SpaceModel SpaceModel::seminorm_family(std::vector<Vector> functionals,
                                       std::vector<std::string> labels) {
  if (functionals.empty()) throw PreconditionError("a seminorm family needs at least one functional");
  if (labels.size() != functionals.size())
    throw PreconditionError("seminorm family: " + std::to_string(labels.size()) + " labels for " +
                            std::to_string(functionals.size()) + " functionals");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < functionals.size(); ++i) {
    if (!seen.insert(labels[i]).second)
      throw PreconditionError("duplicate seminorm label '" + labels[i] + "'");
    if (!std::isfinite(functionals[i].norm_l1()))
      throw PreconditionError("functional '" + labels[i] + "' has non-finite norm");
    require_same_dim(functionals.front(), functionals[i], "seminorm family");
  }
  SpaceModel s;
  s.variant_ = Variant::seminorm_family;
  s.dim_ = functionals.front().dim();
  s.labels_ = std::move(labels);
  s.functionals_ = std::move(functionals);
  return s;
}

SpaceModel SpaceModel::sparse_product(std::vector<std::string> keys) {
  if (keys.empty()) throw PreconditionError("a sparse product needs at least one key");
  SpaceModel s;
  s.variant_ = Variant::sparse_product;
  std::set<std::string> seen;
  for (const std::string& k : keys) {
    if (!seen.insert(k).second) throw PreconditionError("duplicate key '" + k + "'");
    s.functionals_.push_back(Vector::keyed({{k, 1.0}}));
  }
  s.labels_ = std::move(keys);
  return s;
}

SpaceModel SpaceModel::parse(std::string_view text, std::size_t dim) {
  const dsl::Call call = dsl::parse_call(text);
  const auto& h = call.head;
  if (h == "scalar" && !call.has_parens) return scalar();
  if (h == "l1" || h == "linf") {
    std::size_t d = dim;
    if (call.args.size() == 1) d = dsl::parse_index(call.args[0]);
    if (call.args.size() > 1) throw ParseError(h + " takes at most one argument");
    return h == "l1" ? l1(d) : linf(d);
  }
  if (h == "family") {
    std::vector<Vector> fs;
    std::vector<std::string> labels;
    for (const std::string& a : call.args) {
      fs.push_back(Vector::parse(a, dim));
      std::string label = fs.back().to_string();
      if (std::find(labels.begin(), labels.end(), label) != labels.end())
        label += "#" + std::to_string(labels.size() + 1);
      labels.push_back(std::move(label));
    }
    return seminorm_family(std::move(fs), std::move(labels));
  }
  if (h == "sparse") return sparse_product(call.args);
  throw ParseError("unknown space '" + dsl::trim(text) +
                   "'; expected scalar, l1(d), linf(d), family(...), sparse(...)");
}

std::size_t SpaceModel::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw UnknownLabelError(label);
  return static_cast<std::size_t>(it - labels_.begin());
}

void SpaceModel::check(const Vector& v) const {
  const bool keyed = v.storage() == Vector::Storage::keyed;
  if (variant_ == Variant::sparse_product) {
    if (!keyed) throw DimensionMismatchError("sparse product spaces take keyed vectors");
    return;
  }
  if (variant_ == Variant::seminorm_family) return;  // checked by pairing
  if (keyed || v.dim() != dim_)
    throw DimensionMismatchError("vector of dimension " + std::to_string(v.dim()) +
                                 " in a space of dimension " + std::to_string(dim_));
}

double SpaceModel::seminorm(const std::string& label, const Vector& v) const {
  const std::size_t i = index_of(label);
  check(v);
  switch (variant_) {
    case Variant::l1: return v.norm_l1();
    case Variant::linf: return v.norm_linf();
    default: return std::fabs(pairing(v, functionals_[i]));
  }
}

double SpaceModel::distance(const std::string& label, const Vector& x, const Vector& z) const {
  const std::size_t i = index_of(label);
  check(x);
  check(z);
  switch (variant_) {
    case Variant::l1: return distance_l1(x, z);
    case Variant::linf: return distance_linf(x, z);
    default: return std::fabs(pairing(x, functionals_[i]) - pairing(z, functionals_[i]));
  }
}

std::optional<Vector> SpaceModel::functional(const std::string& label) const {
  const std::size_t i = index_of(label);
  if (variant_ == Variant::seminorm_family || variant_ == Variant::sparse_product)
    return functionals_[i];
  if (dim_ == 1) return Vector::dense({1.0});
  return std::nullopt;
}

std::string SpaceModel::to_string() const {
  switch (variant_) {
    case Variant::l1: return scalar_ ? "scalar" : "l1(" + std::to_string(dim_) + ")";
    case Variant::linf: return "linf(" + std::to_string(dim_) + ")";
    case Variant::seminorm_family: return "family(" + dsl::join(labels_) + ")";
    case Variant::sparse_product: return "sparse(" + dsl::join(labels_) + ")";
  }
  return "?";
}

}  // namespace filterlab
