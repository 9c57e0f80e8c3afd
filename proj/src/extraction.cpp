#include "filterlab/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"

namespace filterlab {
namespace {

std::vector<double> parse_point(const std::string& text) {
  const dsl::Call c = dsl::parse_call(text);
  if (c.head != "[") throw ParseError("expected a point like [0, 1], got '" + text + "'");
  std::vector<double> out;
  for (const auto& a : c.args) out.push_back(dsl::parse_number(a));
  if (out.empty()) throw ParseError("empty point");
  return out;
}

std::string point_text(const std::vector<double>& p) {
  std::vector<std::string> parts;
  for (double v : p) parts.push_back(dsl::format_number(v));
  return "[" + dsl::join(parts) + "]";
}

Norm parse_norm(const std::string& text) {
  if (text == "l1") return Norm::l1;
  if (text == "linf") return Norm::linf;
  throw ParseError("unknown norm '" + text + "'; expected l1 or linf");
}

const char* norm_name(Norm n) { return n == Norm::l1 ? "l1" : "linf"; }

// Fold of per-coordinate magnitudes under the norm.
template <class Fn>
double fold(std::size_t dim, Norm norm, Fn&& coord) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) acc = norm == Norm::l1 ? acc + coord(i) : std::max(acc, coord(i));
  return acc;
}

// Exact intersection of box-shaped regions (boxes and linf balls).
bool box_like(const Region& r) { return r.kind() == Region::Kind::box || r.ball_norm() == Norm::linf; }

std::pair<std::vector<double>, std::vector<double>> as_box(const Region& r) {
  if (r.kind() == Region::Kind::box) return {r.lo_or_center(), r.hi()};
  std::vector<double> lo = r.lo_or_center(), hi = r.lo_or_center();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    lo[i] -= r.radius();
    hi[i] += r.radius();
  }
  return {lo, hi};
}

}  // namespace

Region Region::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) throw DimensionMismatchError("box corners differ in dimension");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] <= hi[i])) throw PreconditionError("box has lo > hi in coordinate " + std::to_string(i + 1));
  Region r;
  r.kind_ = Kind::box;
  r.a_ = std::move(lo);
  r.b_ = std::move(hi);
  return r;
}

Region Region::ball(std::vector<double> center, double radius, Norm norm) {
  if (center.empty()) throw PreconditionError("ball needs a center");
  if (!(radius >= 0.0)) throw PreconditionError("ball radius must be non-negative");
  Region r;
  r.kind_ = Kind::ball;
  r.a_ = std::move(center);
  r.r_ = radius;
  r.norm_ = norm;
  return r;
}

Region Region::parse(std::string_view text) {
  const dsl::Call c = dsl::parse_call(text);
  if (c.head == "box" && c.args.size() == 2) return box(parse_point(c.args[0]), parse_point(c.args[1]));
  if (c.head == "ball" && (c.args.size() == 2 || c.args.size() == 3))
    return ball(parse_point(c.args[0]), dsl::parse_number(c.args[1]),
                c.args.size() == 3 ? parse_norm(c.args[2]) : Norm::linf);
  throw ParseError("unknown region '" + dsl::trim(text) + "'; expected box([..],[..]) or ball([..], r[, norm])");
}

bool Region::contains(const std::vector<double>& p, double slack) const {
  if (p.size() != dim()) throw DimensionMismatchError("point dimension differs from region");
  if (kind_ == Kind::box) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] < a_[i] - slack || p[i] > b_[i] + slack) return false;
    return true;
  }
  return norm_distance(p, a_, norm_) <= r_ + slack * std::max(1.0, r_);
}

double Region::diameter(Norm norm) const {
  if (kind_ == Kind::box) return fold(dim(), norm, [&](std::size_t i) { return b_[i] - a_[i]; });
  if (norm_ == Norm::linf && norm == Norm::l1) return 2.0 * r_ * static_cast<double>(dim());
  return 2.0 * r_;
}

double Region::farthest(const std::vector<double>& q, Norm norm) const {
  if (q.size() != dim()) throw DimensionMismatchError("point dimension differs from region");
  if (box_like(*this)) {
    const auto [lo, hi] = as_box(*this);
    return fold(dim(), norm, [&](std::size_t i) {
      return std::max(std::fabs(lo[i] - q[i]), std::fabs(hi[i] - q[i]));
    });
  }
  // l1 ball: the farthest point is a vertex c +- r e_i in either norm.
  return norm_distance(a_, q, norm) + r_;
}

std::string Region::to_string() const {
  if (kind_ == Kind::box) return "box(" + point_text(a_) + "," + point_text(b_) + ")";
  return "ball(" + point_text(a_) + "," + dsl::format_number(r_) + "," + norm_name(norm_) + ")";
}

Selector Selector::parse(std::string_view text) {
  const dsl::Call c = dsl::parse_call(text);
  Selector s;
  if (c.head == "center" && c.args.empty()) return s;
  if (c.head == "boundary" && c.args.empty()) {
    s.kind = Kind::boundary;
    return s;
  }
  if (c.head == "random" && c.args.size() <= 1) {
    s.kind = Kind::random;
    if (!c.args.empty()) s.seed = dsl::parse_index(c.args[0]);
    return s;
  }
  throw ParseError("unknown selector '" + dsl::trim(text) + "'; expected center, boundary, random(seed)");
}

std::string Selector::to_string() const {
  switch (kind) {
    case Kind::center: return "center";
    case Kind::boundary: return "boundary";
    case Kind::random: return "random(" + std::to_string(seed) + ")";
  }
  return "?";
}

double norm_distance(const std::vector<double>& a, const std::vector<double>& b, Norm norm) {
  if (a.size() != b.size()) throw DimensionMismatchError("points differ in dimension");
  return fold(a.size(), norm, [&](std::size_t i) { return std::fabs(a[i] - b[i]); });
}

ExtractionResult extract_cauchy_from_base(const std::vector<Region>& base, const Selector& selector,
                                          const ExtractionOptions& options) {
  if (base.empty()) throw PreconditionError("extraction needs at least one base element");
  const std::size_t dim = base.front().dim();
  for (const Region& r : base)
    if (r.dim() != dim) throw DimensionMismatchError("base elements differ in dimension");

  const auto allowed = [&](std::size_t n) { return options.radius_scale * std::ldexp(1.0, 1 - static_cast<int>(n)); };
  for (std::size_t n = 1; n <= base.size(); ++n) {
    const double d = base[n - 1].diameter(options.norm);
    if (d > allowed(n) * (1.0 + 1e-12)) throw NotCauchyFilterError(n, d, allowed(n));
  }

  std::mt19937_64 rng(selector.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ExtractionResult out;
  bool boxes = true;
  std::vector<double> blo, bhi;
  for (std::size_t n = 1; n <= base.size(); ++n) {
    const Region& a = base[n - 1];
    std::vector<double> chosen;
    boxes = boxes && box_like(a);
    if (boxes) {
      const auto [lo, hi] = as_box(a);
      if (n == 1) {
        blo = lo;
        bhi = hi;
      }
      for (std::size_t i = 0; i < dim; ++i) {
        blo[i] = std::max(blo[i], lo[i]);
        bhi[i] = std::min(bhi[i], hi[i]);
        if (blo[i] > bhi[i])
          throw BaseNotFilterError("A_1 ∩ ... ∩ A_" + std::to_string(n) + " is empty");
      }
      chosen.resize(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        switch (selector.kind) {
          case Selector::Kind::center: chosen[i] = 0.5 * (blo[i] + bhi[i]); break;
          case Selector::Kind::boundary: chosen[i] = bhi[i]; break;
          case Selector::Kind::random: chosen[i] = blo[i] + unit(rng) * (bhi[i] - blo[i]); break;
        }
      }
    } else {
      const auto in_all = [&](const std::vector<double>& p) {
        for (std::size_t k = 0; k < n; ++k)
          if (!base[k].contains(p)) return false;
        return true;
      };
      const std::vector<double> c =
          a.kind() == Region::Kind::ball ? a.lo_or_center() : [&] {
            std::vector<double> m(dim);
            for (std::size_t i = 0; i < dim; ++i) m[i] = 0.5 * (a.lo_or_center()[i] + a.hi()[i]);
            return m;
          }();
      const double r = a.kind() == Region::Kind::ball ? a.radius() : 0.0;
      std::vector<std::vector<double>> tries;
      if (selector.kind == Selector::Kind::boundary) {
        std::vector<double> p = c;
        p[0] += r;
        tries.push_back(p);
      }
      if (selector.kind != Selector::Kind::random) tries.push_back(c);
      for (int t = 0; t < options.attempts; ++t) {
        std::vector<double> u(dim);
        double l1 = 0.0;
        for (double& ui : u) {
          ui = 2.0 * unit(rng) - 1.0;
          l1 += std::fabs(ui);
        }
        const double scale = r * unit(rng) / std::max(l1, 1e-300);
        std::vector<double> p = c;
        for (std::size_t i = 0; i < dim; ++i) p[i] += u[i] * scale;
        tries.push_back(std::move(p));
      }
      for (auto& p : tries) {
        if (in_all(p)) {
          chosen = std::move(p);
          break;
        }
      }
      if (chosen.empty())
        throw BaseNotFilterError("no point of A_1 ∩ ... ∩ A_" + std::to_string(n) + " found after " +
                                 std::to_string(tries.size()) + " candidates");
    }
    out.points.push_back(std::move(chosen));
  }

  const std::size_t count = out.points.size();
  out.limit = out.points.back();
  {
    auto pts = out.points;
    out.sequence = function_sequence(
        "extracted(" + selector.to_string() + ")",
        [pts](Index n) {
          if (n < 1 || n > pts.size()) throw DimensionMismatchError("extracted index out of range");
          return Vector::dense(pts[n - 1]);
        },
        count);
  }

  // Cauchy audit: ||x_n - x_m|| <= rho_N for all n, m >= N.
  std::vector<std::vector<double>> dist(count, std::vector<double>(count, 0.0));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      dist[i][j] = dist[j][i] = norm_distance(out.points[i], out.points[j], options.norm);
  Json rows = Json::array();
  bool ok = true;
  Json witness;
  double block = 0.0;
  std::size_t bi = count - 1, bj = count - 1;
  for (std::size_t N = count; N >= 1; --N) {
    const std::size_t i = N - 1;
    for (std::size_t j = i; j < count; ++j) {
      if (dist[i][j] > block) {
        block = dist[i][j];
        bi = i;
        bj = j;
      }
    }
    const double rho = allowed(N);
    Json row;
    row["N"] = N;
    row["max_distance"] = block;
    row["allowed"] = rho;
    rows.push_back(row);
    if (block > rho * (1.0 + 1e-9) + 1e-12 && ok) {
      ok = false;
      witness["N"] = N;
      witness["n"] = bi + 1;
      witness["m"] = bj + 1;
      witness["distance"] = block;
    }
  }
  {
    Json diag;
    diag["norm"] = norm_name(options.norm);
    diag["count"] = count;
    diag["rows"] = rows;
    if (!ok) diag["witness"] = witness;
    out.cauchy_audit = ok ? Verdict::make(Outcome::holds, "||x_n - x_m|| <= 2^(1-N) for all n, m >= N",
                                          std::move(diag))
                          : Verdict::make(Outcome::fails, "selected points spread beyond the schedule",
                                          std::move(diag));
  }

  // Limit audit: every neighborhood B(limit, eps) contains some A_k.
  {
    Json rowsl = Json::array();
    Outcome o = Outcome::holds;
    for (double eps : options.eps_grid) {
      Json row;
      row["eps"] = eps;
      std::optional<std::size_t> k;
      for (std::size_t n = 0; n < base.size() && !k; ++n)
        if (base[n].farthest(out.limit, options.norm) < eps) k = n + 1;
      row["inside"] = k ? Json(*k) : Json(nullptr);
      rowsl.push_back(row);
      if (!k) o = Outcome::inconclusive;
    }
    Json diag;
    diag["limit"] = out.limit;
    diag["neighborhoods"] = rowsl;
    out.limit_audit = Verdict::make(o,
                                    o == Outcome::holds ? "each neighborhood of the limit contains a base element"
                                                        : "base is too short for the finest neighborhoods",
                                    std::move(diag));
  }
  return out;
}

Json to_json(const ExtractionResult& result) {
  Json j;
  Json pts = Json::array();
  for (const auto& p : result.points) pts.push_back(p);
  j["points"] = pts;
  j["limit"] = result.limit;
  j["cauchy_audit"] = to_json(result.cauchy_audit);
  j["limit_audit"] = to_json(result.limit_audit);
  return j;
}

}  // namespace filterlab
