#pragma once
// Shared helpers: fixed-seed generators and independent oracles.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "filterlab/index_map.hpp"

namespace testing {

using filterlab::Index;

inline constexpr int kCases = 1000;

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine);
  }
  Index index(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  std::vector<double> values(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
};

/// A set description together with a membership bitmap on [1, n]
/// computed by direct enumeration, independent of the library.
struct OracleSet {
  std::string text;
  std::vector<bool> in;  // in[k] for k in [0, n]; in[0] unused
  Index count(Index n) const {
    Index c = 0;
    for (Index k = 1; k <= n; ++k) c += in[k] ? 1 : 0;
    return c;
  }
};

inline bool is_prime(Index n) {
  if (n < 2) return false;
  for (Index d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline OracleSet oracle_leaf(Rng& rng, Index n) {
  OracleSet s;
  s.in.assign(n + 1, false);
  const auto mark = [&](Index k) {
    if (k >= 1 && k <= n) s.in[k] = true;
  };
  switch (rng.integer(0, 11)) {
    case 0:
      s.text = "evens";
      for (Index k = 2; k <= n; k += 2) mark(k);
      break;
    case 1:
      s.text = "squares";
      for (Index k = 1; k * k <= n; ++k) mark(k * k);
      break;
    case 2:
      s.text = "primes";
      for (Index k = 2; k <= n; ++k)
        if (is_prime(k)) mark(k);
      break;
    case 3: {
      const Index a = rng.index(1, 20), d = rng.index(1, 9);
      s.text = "ap(" + std::to_string(a) + "," + std::to_string(d) + ")";
      for (Index k = a; k <= n; k += d) mark(k);
      break;
    }
    case 4: {
      const Index c0 = rng.index(0, 5), c1 = rng.index(0, 3), c2 = rng.index(1, 2);
      s.text = "poly(" + std::to_string(c0) + "," + std::to_string(c1) + "," + std::to_string(c2) + ")";
      for (Index k = 1; c0 + c1 * k + c2 * k * k <= n; ++k) mark(c0 + c1 * k + c2 * k * k);
      break;
    }
    case 5: {
      const Index b = rng.index(2, 3);
      s.text = "blocks(" + std::to_string(b) + ")";
      for (Index lo = 1; lo <= n; lo *= b * b)
        for (Index k = lo; k < lo * b && k <= n; ++k) mark(k);
      break;
    }
    case 6: {
      const Index b = rng.index(2, 5);
      s.text = "powers(" + std::to_string(b) + ")";
      for (Index k = 1; k <= n; k *= b) mark(k);
      break;
    }
    case 7: {
      std::vector<Index> el;
      const int m = static_cast<int>(rng.integer(1, 6));
      s.text = "finite(";
      for (int i = 0; i < m; ++i) {
        const Index v = rng.index(1, n + 50);
        s.text += (i ? "," : "") + std::to_string(v);
        mark(v);
      }
      s.text += ")";
      break;
    }
    case 8: {
      const Index lo = rng.index(1, n), hi = rng.index(lo, n + 100);
      s.text = "range(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
      for (Index k = lo; k <= hi; ++k) mark(k);
      break;
    }
    case 9: {
      const Index t = rng.index(1, n);
      s.text = "tail(" + std::to_string(t) + ")";
      for (Index k = t; k <= n; ++k) mark(k);
      break;
    }
    case 10:
      s.text = "cubes";
      for (Index k = 1; k * k * k <= n; ++k) mark(k * k * k);
      break;
    default:
      s.text = "odds";
      for (Index k = 1; k <= n; k += 2) mark(k);
      break;
  }
  return s;
}

/// Random constructor tree with compl / union / inter nodes.
inline OracleSet oracle_set(Rng& rng, Index n, int depth = 2) {
  if (depth == 0 || rng.coin(0.4)) return oracle_leaf(rng, n);
  const int op = static_cast<int>(rng.integer(0, 2));
  OracleSet a = oracle_set(rng, n, depth - 1);
  if (op == 0) {
    for (Index k = 1; k <= n; ++k) a.in[k] = !a.in[k];
    a.text = "compl(" + a.text + ")";
    return a;
  }
  const OracleSet b = oracle_set(rng, n, depth - 1);
  for (Index k = 1; k <= n; ++k) a.in[k] = op == 1 ? (a.in[k] || b.in[k]) : (a.in[k] && b.in[k]);
  a.text = std::string(op == 1 ? "union(" : "inter(") + a.text + "," + b.text + ")";
  return a;
}

}  // namespace testing
