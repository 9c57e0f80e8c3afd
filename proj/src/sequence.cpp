#include "filterlab/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/expr.hpp"

namespace filterlab {

std::vector<double> SequenceSpec::functional_values(const Vector& y,
                                                    const std::vector<Index>& indices) const {
  std::vector<double> out;
  out.reserve(indices.size());
  for (Index n : indices) out.push_back(pairing(at(n), y));
  return out;
}

namespace {

Index top_index(const std::vector<Index>& indices) {
  return indices.empty() ? 0 : *std::max_element(indices.begin(), indices.end());
}

class BasisSequence final : public SequenceSpec {
 public:
  explicit BasisSequence(std::size_t dim) : dim_(dim) {}
  Vector at(Index n) const override { return Vector::basis(dim_, n); }
  std::string describe() const override { return "basis_seq"; }
  Index max_index() const override { return dim_; }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    if (y.storage() == Vector::Storage::keyed || y.dim() != dim_)
      throw DimensionMismatchError("functional of dimension " + std::to_string(y.dim()) +
                                   " for basis sequence of dimension " + std::to_string(dim_));
    if (top_index(indices) > dim_) throw DimensionMismatchError("basis index beyond dimension");
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(y.coordinate(n - 1));
    return out;
  }
  std::optional<double> bound() const override { return 1.0; }

 private:
  std::size_t dim_;
};

class CesaroBasisSequence final : public SequenceSpec {
 public:
  explicit CesaroBasisSequence(std::size_t dim) : dim_(dim) {}
  Vector at(Index n) const override { return Vector::cesaro_basis(dim_, n); }
  std::string describe() const override { return "cesaro_basis_seq"; }
  Index max_index() const override { return dim_; }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    if (y.storage() == Vector::Storage::keyed || y.dim() != dim_)
      throw DimensionMismatchError("functional dimension does not match cesaro_basis_seq");
    const Index top = top_index(indices);
    if (top > dim_) throw DimensionMismatchError("cesaro_basis index beyond dimension");
    const std::vector<double> coords = y.to_dense();
    std::vector<double> running(top + 1, 0.0);
    for (Index k = 1; k <= top; ++k) running[k] = running[k - 1] + coords[k - 1];
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(running[n] / static_cast<double>(n));
    return out;
  }
  std::optional<double> bound() const override { return 1.0; }

 private:
  std::size_t dim_;
};

// x_n = value(n) * e_1
class EmbeddedScalar final : public SequenceSpec {
 public:
  EmbeddedScalar(std::string text, std::function<double(Index)> value, std::size_t dim)
      : text_(std::move(text)), value_(std::move(value)), dim_(dim) {}
  Vector at(Index n) const override { return Vector::indexed(dim_, {{0, value_(n)}}); }
  std::string describe() const override { return text_; }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    if (y.storage() == Vector::Storage::keyed || y.dim() != dim_)
      throw DimensionMismatchError("functional dimension does not match " + text_);
    const double y1 = y.coordinate(0);
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(value_(n) * y1);
    return out;
  }

 private:
  std::string text_;
  std::function<double(Index)> value_;
  std::size_t dim_;
};

class ConstantSequence final : public SequenceSpec {
 public:
  explicit ConstantSequence(Vector v) : v_(std::move(v)) {}
  Vector at(Index) const override { return v_; }
  std::string describe() const override { return "const(" + v_.to_string() + ")"; }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    return std::vector<double>(indices.size(), pairing(v_, y));
  }

 private:
  Vector v_;
};

class ScaledSequence final : public SequenceSpec {
 public:
  ScaledSequence(Vector v, Expression e) : v_(std::move(v)), e_(std::move(e)) {}
  Vector at(Index n) const override { return v_.scaled(e_(static_cast<double>(n))); }
  std::string describe() const override {
    return "scaled(" + v_.to_string() + "," + e_.text() + ")";
  }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    const double base = pairing(v_, y);
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(base * e_(static_cast<double>(n)));
    return out;
  }

 private:
  Vector v_;
  Expression e_;
};

class SwitchSequence final : public SequenceSpec {
 public:
  SwitchSequence(Vector in, NatSet set, Vector out)
      : in_(std::move(in)), set_(std::move(set)), out_(std::move(out)) {}
  Vector at(Index n) const override { return set_.contains(n) ? in_ : out_; }
  std::string describe() const override {
    return "switch(" + in_.to_string() + "," + set_.to_string() + "," + out_.to_string() + ")";
  }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    const double a = pairing(in_, y), b = pairing(out_, y);
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(set_.contains(n) ? a : b);
    return out;
  }

 private:
  Vector in_;
  NatSet set_;
  Vector out_;
};

class FunctionSequence final : public SequenceSpec {
 public:
  FunctionSequence(std::string name, std::function<Vector(Index)> fn, Index max_index)
      : name_(std::move(name)), fn_(std::move(fn)), max_(max_index) {}
  Vector at(Index n) const override { return fn_(n); }
  std::string describe() const override { return name_; }
  Index max_index() const override { return max_; }

 private:
  std::string name_;
  std::function<Vector(Index)> fn_;
  Index max_;
};

class CesaroSequence final : public SequenceSpec {
 public:
  explicit CesaroSequence(Sequence inner) : inner_(std::move(inner)) {}
  Vector at(Index n) const override {
    Vector sum = inner_->at(1);
    for (Index k = 2; k <= n; ++k) sum = sum + inner_->at(k);
    return sum.scaled(1.0 / static_cast<double>(n));
  }
  std::string describe() const override { return "cesaro(" + inner_->describe() + ")"; }
  Index max_index() const override { return inner_->max_index(); }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    const Index top = top_index(indices);
    std::vector<Index> all(top);
    for (Index k = 0; k < top; ++k) all[k] = k + 1;
    const std::vector<double> values = inner_->functional_values(y, all);
    std::vector<double> running(top + 1, 0.0);
    for (Index k = 1; k <= top; ++k) running[k] = running[k - 1] + values[k - 1];
    std::vector<double> out;
    out.reserve(indices.size());
    for (Index n : indices) out.push_back(running[n] / static_cast<double>(n));
    return out;
  }
  std::optional<double> bound() const override { return inner_->bound(); }

 private:
  Sequence inner_;
};

class ComposedSequence final : public SequenceSpec {
 public:
  ComposedSequence(Sequence inner, IndexMap g) : inner_(std::move(inner)), g_(std::move(g)) {}
  Vector at(Index n) const override { return inner_->at(g_(n)); }
  std::string describe() const override {
    return "compose(" + inner_->describe() + "," + g_.to_string() + ")";
  }
  Index max_index() const override {
    const Index top = inner_->max_index();
    if (top == kInfinity) return kInfinity;
    if (g_.finite_range()) {
      const auto values = g_.range_values();
      return values.back() <= top ? kInfinity : 0;
    }
    return g_.inverse_horizon(top);
  }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    std::vector<Index> mapped;
    mapped.reserve(indices.size());
    for (Index n : indices) mapped.push_back(g_(n));
    return inner_->functional_values(y, mapped);
  }
  std::optional<double> bound() const override { return inner_->bound(); }

 private:
  Sequence inner_;
  IndexMap g_;
};

class BoundedSequence final : public SequenceSpec {
 public:
  BoundedSequence(Sequence inner, double c) : inner_(std::move(inner)), c_(c) {}
  Vector at(Index n) const override { return inner_->at(n); }
  std::string describe() const override { return inner_->describe(); }
  Index max_index() const override { return inner_->max_index(); }
  std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const override {
    return inner_->functional_values(y, indices);
  }
  std::optional<double> bound() const override { return c_; }

 private:
  Sequence inner_;
  double c_;
};

}  // namespace

Sequence basis_sequence(std::size_t dim) { return std::make_shared<const BasisSequence>(dim); }

Sequence cesaro_basis_sequence(std::size_t dim) {
  return std::make_shared<const CesaroBasisSequence>(dim);
}

Sequence scalar_sequence(std::string_view expr, std::size_t dim) {
  const Expression e = Expression::parse(expr, "n");
  return std::make_shared<const EmbeddedScalar>(
      "scalar(" + e.text() + ")", [e](Index n) { return e(static_cast<double>(n)); }, dim);
}

Sequence perturbed_sequence(std::string_view base, const NatSet& exceptional, std::string_view spike,
                            std::size_t dim) {
  const Expression b = Expression::parse(base, "n");
  const Expression s = Expression::parse(spike, "n");
  return std::make_shared<const EmbeddedScalar>(
      "perturbed(" + b.text() + "," + exceptional.to_string() + "," + s.text() + ")",
      [b, s, exceptional](Index n) {
        return exceptional.contains(n) ? s(static_cast<double>(n)) : b(static_cast<double>(n));
      },
      dim);
}

Sequence constant_sequence(const Vector& v) { return std::make_shared<const ConstantSequence>(v); }

Sequence scaled_sequence(const Vector& v, std::string_view expr) {
  return std::make_shared<const ScaledSequence>(v, Expression::parse(expr, "n"));
}

Sequence switch_sequence(const Vector& inside, const NatSet& set, const Vector& outside) {
  return std::make_shared<const SwitchSequence>(inside, set, outside);
}

Sequence function_sequence(std::string name, std::function<Vector(Index)> fn, Index max_index) {
  return std::make_shared<const FunctionSequence>(std::move(name), std::move(fn), max_index);
}

Sequence scalar_function_sequence(std::string name, std::function<double(Index)> value,
                                  std::size_t dim) {
  return std::make_shared<const EmbeddedScalar>(std::move(name), std::move(value), dim);
}

Sequence cesaro(const Sequence& x) { return std::make_shared<const CesaroSequence>(x); }

Sequence compose_with_index_map(const Sequence& x, const IndexMap& g) {
  return std::make_shared<const ComposedSequence>(x, g);
}

Sequence with_bound(const Sequence& x, double bound) {
  return std::make_shared<const BoundedSequence>(x, bound);
}

Sequence parse_sequence(std::string_view text, std::size_t dim) {
  const dsl::Call call = dsl::parse_call(text);
  const auto& h = call.head;
  const auto expect = [&](std::size_t n) {
    if (call.args.size() != n)
      throw ParseError("sequence '" + h + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (h == "basis_seq" && !call.has_parens) return basis_sequence(dim);
  if (h == "cesaro_basis_seq" && !call.has_parens) return cesaro_basis_sequence(dim);
  if (h == "scalar") {
    expect(1);
    return scalar_sequence(call.args[0], dim);
  }
  if (h == "perturbed") {
    expect(3);
    return perturbed_sequence(call.args[0], NatSet::parse(call.args[1]), call.args[2], dim);
  }
  if (h == "const" || h == "constant") {
    expect(1);
    return constant_sequence(Vector::parse(call.args[0], dim));
  }
  if (h == "scaled") {
    expect(2);
    return scaled_sequence(Vector::parse(call.args[0], dim), call.args[1]);
  }
  if (h == "switch") {
    expect(3);
    return switch_sequence(Vector::parse(call.args[0], dim), NatSet::parse(call.args[1]),
                           Vector::parse(call.args[2], dim));
  }
  if (h == "cesaro") {
    expect(1);
    return cesaro(parse_sequence(call.args[0], dim));
  }
  if (h == "compose") {
    expect(2);
    return compose_with_index_map(parse_sequence(call.args[0], dim), IndexMap::parse(call.args[1]));
  }
  throw ParseError("unknown sequence '" + dsl::trim(text) +
                   "'; expected basis_seq, cesaro_basis_seq, scalar, perturbed, const, scaled, "
                   "switch, cesaro, compose");
}

Verdict verify_bound(const SequenceSpec& x, const SpaceModel& space, const std::vector<Index>& indices,
                     double slack) {
  const auto c = x.bound();
  Json diag;
  diag["sequence"] = x.describe();
  if (!c) return Verdict::make(Outcome::inconclusive, "no bound claimed", std::move(diag));
  diag["bound"] = *c;
  double worst = 0.0;
  for (const std::string& label : space.labels()) {
    const auto y = space.functional(label);
    std::vector<double> values;
    if (y) {
      values = x.functional_values(*y, indices);
      for (double& v : values) v = std::fabs(v);
    } else {
      for (Index n : indices) values.push_back(space.seminorm(label, x.at(n)));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      worst = std::max(worst, values[i]);
      if (values[i] > *c + slack) {
        diag["label"] = label;
        diag["index"] = indices[i];
        diag["value"] = values[i];
        return Verdict::make(Outcome::fails, "p(x_n) exceeds the claimed bound", std::move(diag));
      }
    }
  }
  diag["max_sampled"] = worst;
  return Verdict::make(Outcome::holds, "bound holds on sampled indices", std::move(diag));
}

}  // namespace filterlab
