#include "filterlab/index_map.hpp"

#include <algorithm>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {

namespace {
constexpr Index kMaxValue = Index{1} << 63;
}

IndexMap IndexMap::affine(Index a, std::int64_t b) {
  if (static_cast<std::int64_t>(a) + b < 1)
    throw ParseError("affine(" + std::to_string(a) + "," + std::to_string(b) +
                     ") does not map 1 into N");
  IndexMap g;
  g.kind_ = Kind::affine;
  g.a_ = a;
  g.b_ = b;
  return g;
}

IndexMap IndexMap::square() {
  IndexMap g;
  g.kind_ = Kind::square;
  return g;
}

IndexMap IndexMap::pow2() {
  IndexMap g;
  g.kind_ = Kind::pow2;
  return g;
}

IndexMap IndexMap::explicit_cycle(std::vector<Index> values) {
  if (values.empty()) throw ParseError("explicit(...) needs at least one value");
  if (std::find(values.begin(), values.end(), Index{0}) != values.end())
    throw ParseError("explicit(...) values must be positive");
  IndexMap g;
  g.kind_ = Kind::explicit_cycle;
  g.values_ = std::move(values);
  return g;
}

IndexMap IndexMap::compose(const IndexMap& outer, const IndexMap& inner) {
  IndexMap g;
  g.kind_ = Kind::composite;
  g.outer_ = std::make_shared<const IndexMap>(outer);
  g.inner_ = std::make_shared<const IndexMap>(inner);
  return g;
}

Index IndexMap::saturating(Index n) const noexcept {
  switch (kind_) {
    case Kind::affine: {
      Index prod = 0;
      if (__builtin_mul_overflow(a_, n, &prod)) return kInfinity;
      const __int128 v = static_cast<__int128>(prod) + b_;
      if (v >= static_cast<__int128>(kMaxValue)) return kInfinity;
      return static_cast<Index>(v);
    }
    case Kind::square: {
      Index prod = 0;
      if (__builtin_mul_overflow(n, n, &prod) || prod >= kMaxValue) return kInfinity;
      return prod;
    }
    case Kind::pow2:
      return n >= 63 ? kInfinity : (Index{1} << n);
    case Kind::explicit_cycle:
      return values_[(n - 1) % values_.size()];
    case Kind::composite: {
      const Index mid = inner_->saturating(n);
      return mid == kInfinity ? kInfinity : outer_->saturating(mid);
    }
  }
  return kInfinity;
}

Index IndexMap::operator()(Index n) const {
  const Index v = saturating(n);
  if (v == kInfinity)
    throw IndexOverflowError("index map " + to_string() + " overflows at n = " + std::to_string(n));
  return v;
}

bool IndexMap::strictly_increasing() const noexcept {
  switch (kind_) {
    case Kind::affine: return a_ >= 1;
    case Kind::square:
    case Kind::pow2: return true;
    case Kind::explicit_cycle: return false;
    case Kind::composite: return outer_->strictly_increasing() && inner_->strictly_increasing();
  }
  return false;
}

bool IndexMap::finite_range() const noexcept {
  switch (kind_) {
    case Kind::affine: return a_ == 0;
    case Kind::explicit_cycle: return true;
    case Kind::composite: return inner_->finite_range() || outer_->finite_range();
    default: return false;
  }
}

std::vector<Index> IndexMap::range_values() const {
  std::vector<Index> out;
  switch (kind_) {
    case Kind::affine:
      if (a_ == 0) out.push_back(static_cast<Index>(b_));
      break;
    case Kind::explicit_cycle: out = values_; break;
    case Kind::composite:
      if (inner_->finite_range()) {
        for (Index v : inner_->range_values()) out.push_back((*outer_)(v));
      } else if (outer_->finite_range()) {
        out = outer_->range_values();
      }
      break;
    default: break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Index IndexMap::inverse_horizon(Index h) const {
  if (finite_range()) return h;
  if (!strictly_increasing()) return h;
  // g(n) >= n for every increasing map into N, so the answer is at most h.
  Index lo = 0, hi = h;
  while (lo < hi) {
    const Index mid = lo + (hi - lo + 1) / 2;
    if (saturating(mid) <= h) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

std::string IndexMap::to_string() const {
  switch (kind_) {
    case Kind::affine:
      if (a_ == 1 && b_ == 0) return "identity";
      if (a_ == 0) return "const(" + std::to_string(b_) + ")";
      return "affine(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::square: return "square";
    case Kind::pow2: return "pow2";
    case Kind::explicit_cycle: {
      std::vector<std::string> parts;
      for (Index v : values_) parts.push_back(std::to_string(v));
      return "explicit(" + dsl::join(parts) + ")";
    }
    case Kind::composite:
      return "compose(" + outer_->to_string() + "," + inner_->to_string() + ")";
  }
  return "?";
}

IndexMap IndexMap::parse(std::string_view text) {
  const dsl::Call call = dsl::parse_call(text);
  const auto expect = [&](std::size_t n) {
    if (call.args.size() != n)
      throw ParseError("index map '" + call.head + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (call.head == "identity") return identity();
  if (call.head == "square") return square();
  if (call.head == "pow2") return pow2();
  if (call.head == "affine") {
    expect(2);
    return affine(dsl::parse_index(call.args[0]), dsl::parse_integer(call.args[1]));
  }
  if (call.head == "const") {
    expect(1);
    return constant(dsl::parse_index(call.args[0]));
  }
  if (call.head == "explicit") {
    std::vector<Index> values;
    for (const std::string& a : call.args) values.push_back(dsl::parse_index(a));
    return explicit_cycle(std::move(values));
  }
  if (call.head == "compose") {
    expect(2);
    return compose(parse(call.args[0]), parse(call.args[1]));
  }
  throw ParseError("unknown index map '" + call.head +
                   "'; expected identity, affine(a,b), const(c), square, pow2, explicit(...), compose(g,h)");
}

}  // namespace filterlab
