#pragma once
// Deterministic sequence generators n -> x_n in a space model.
//
// Text forms (d = truncation dimension, expressions are in n):
//   basis_seq                     x_n = e_n
//   cesaro_basis_seq              x_n = (1/n)(e_1 + ... + e_n)
//   scalar(expr)                  x_n = expr(n) e_1
//   perturbed(base, set, spike)   x_n = (n in set ? spike(n) : base(n)) e_1
//   const(vector)                 x_n = v
//   scaled(vector, expr)          x_n = expr(n) v
//   switch(vector, set, vector)   x_n = n in set ? v : w
//   cesaro(seq)                   Cesaro means of seq
//   compose(seq, map)             x_n = seq_{g(n)}

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "filterlab/index_map.hpp"
#include "filterlab/natset.hpp"
#include "filterlab/spaces.hpp"
#include "filterlab/verdict.hpp"

namespace filterlab {

class SequenceSpec {
 public:
  virtual ~SequenceSpec() = default;

  virtual Vector at(Index n) const = 0;
  virtual std::string describe() const = 0;

  /// Largest index the generator can produce (truncated models).
  virtual Index max_index() const { return kInfinity; }

  /// <x_n, y> for each index (any order).
  virtual std::vector<double> functional_values(const Vector& y, const std::vector<Index>& indices) const;

  /// Claimed bound C with p(x_n) <= C for every seminorm p.
  virtual std::optional<double> bound() const { return std::nullopt; }
};

using Sequence = std::shared_ptr<const SequenceSpec>;

Sequence basis_sequence(std::size_t dim);
Sequence cesaro_basis_sequence(std::size_t dim);
Sequence scalar_sequence(std::string_view expr, std::size_t dim = 1);
Sequence perturbed_sequence(std::string_view base, const NatSet& exceptional, std::string_view spike,
                            std::size_t dim = 1);
Sequence constant_sequence(const Vector& v);
Sequence scaled_sequence(const Vector& v, std::string_view expr);
Sequence switch_sequence(const Vector& inside, const NatSet& set, const Vector& outside);
Sequence function_sequence(std::string name, std::function<Vector(Index)> fn,
                           Index max_index = kInfinity);
/// x_n = value(n) e_1 in dimension dim.
Sequence scalar_function_sequence(std::string name, std::function<double(Index)> value,
                                  std::size_t dim = 1);

/// y_n = (1/n) sum_{k <= n} x_k, evaluated with running sums.
Sequence cesaro(const Sequence& x);
/// y_n = x_{g(n)}.
Sequence compose_with_index_map(const Sequence& x, const IndexMap& g);
/// Attaches a boundedness claim.
Sequence with_bound(const Sequence& x, double bound);

Sequence parse_sequence(std::string_view text, std::size_t dim);

/// Checks p(x_n) <= C (+ slack) for every label of the space on the indices.
Verdict verify_bound(const SequenceSpec& x, const SpaceModel& space, const std::vector<Index>& indices,
                     double slack = 1e-9);

}  // namespace filterlab
