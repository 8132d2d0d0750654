#pragma once

// Seeded random small LPs with a known-feasible construction: a reference
// point inside the bounds is sampled first and every row is built to hold at
// it, so instances are feasible (optimal or unbounded) unless a contradiction
// is injected on purpose.

#include <cmath>
#include <vector>

#include "pregwa/lp.hpp"
#include "pregwa/rng.hpp"

namespace pregwa {
namespace testsupport {

inline lp::LinearProgram random_small_lp(std::uint64_t seed, bool inject_infeasible = false) {
  Rng rng(seed * 2654435761ULL + 17);
  const int n = 1 + static_cast<int>(rng.uniform_int(5));
  const int m = 1 + static_cast<int>(rng.uniform_int(7));

  lp::LinearProgram p;
  std::vector<double> ref(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    double lo, hi;
    switch (rng.uniform_int(3)) {
      case 0: lo = 0.0; break;
      case 1: lo = -rng.uniform(0.0, 2.0); break;
      case 2: lo = rng.uniform(0.0, 1.0); break;
      default: lo = -lp::kInf; break;
    }
    if (rng.uniform_int(3) == 0)
      hi = lp::kInf;
    else
      hi = (lo == -lp::kInf ? 0.0 : lo) + rng.uniform(0.5, 3.0);
    double cost = rng.uniform(-2.0, 2.0);
    if (rng.uniform_int(4) == 0) cost = 0.0;
    p.add_variable(lo, hi, cost);
    const double blo = lo == -lp::kInf ? -4.0 : lo;
    const double bhi = hi == lp::kInf ? blo + 4.0 : hi;
    ref[static_cast<std::size_t>(v)] = rng.uniform(blo, bhi);
  }

  for (int k = 0; k < m; ++k) {
    const int nnz = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) vars[static_cast<std::size_t>(v)] = v;
    for (int i = 0; i < nnz; ++i) {
      const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1 - i)));
      std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
    }
    std::vector<int> idx(vars.begin(), vars.begin() + nnz);
    std::vector<double> val(static_cast<std::size_t>(nnz));
    double act = 0.0;
    for (int i = 0; i < nnz; ++i) {
      double c = rng.uniform(-3.0, 3.0);
      if (std::abs(c) < 0.05) c = c < 0.0 ? -0.5 : 0.5;
      val[static_cast<std::size_t>(i)] = c;
      act += c * ref[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    }
    const auto pick = rng.uniform_int(4);
    const double slack = rng.uniform_int(3) == 0 ? 0.0 : rng.uniform(0.0, 2.0);
    if (pick == 0)
      p.add_row(lp::Relation::eq, act, idx, val);
    else if (pick <= 2)
      p.add_row(lp::Relation::le, act + slack, idx, val);
    else
      p.add_row(lp::Relation::ge, act - slack, idx, val);
  }

  if (inject_infeasible) {
    const int idx0[] = {0};
    const double one[] = {1.0};
    p.add_row(lp::Relation::le, ref[0] - 1.0, idx0, one);
    p.add_row(lp::Relation::ge, ref[0] + 1.0, idx0, one);
  }
  return p;
}

}  // namespace testsupport
}  // namespace pregwa
