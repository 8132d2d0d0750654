#include <algorithm>
#include <cmath>
#include <vector>

#include "pregwa/lp.hpp"

// Test oracle: enumerate every vertex candidate of the polyhedron. A vertex is
// the intersection of n tight hyperplanes, split here into a subset of tight
// rows (equalities are always tight) and a bound assignment for the remaining
// variables. The feasible candidate with the best objective is the optimum.
// Infinite bounds are boxed at +-kBox; if the optimum leans on an artificial
// box wall we re-run with a wider box and call the instance unbounded when the
// objective keeps improving. Completely independent of the simplex path.

namespace pregwa {
namespace lp {
namespace {

constexpr double kBox = 1e8;
constexpr double kFeas = 1e-9;

struct Boxed {
  std::vector<double> lo, hi;
  std::vector<bool> lo_boxed, hi_boxed;
};

Boxed box_bounds(const LinearProgram& lp, double box) {
  Boxed b;
  const auto n = static_cast<std::size_t>(lp.n_vars());
  b.lo.resize(n);
  b.hi.resize(n);
  b.lo_boxed.resize(n);
  b.hi_boxed.resize(n);
  for (int v = 0; v < lp.n_vars(); ++v) {
    const auto vu = static_cast<std::size_t>(v);
    b.lo_boxed[vu] = lp.lower(v) == -kInf;
    b.hi_boxed[vu] = lp.upper(v) == kInf;
    b.lo[vu] = b.lo_boxed[vu] ? -box : lp.lower(v);
    b.hi[vu] = b.hi_boxed[vu] ? box : lp.upper(v);
  }
  return b;
}

// Exact count of (tight-row subset, free-variable subset, bound-side) candidates.
double candidate_count(const LinearProgram& lp) {
  const int n = lp.n_vars();
  const int m = lp.n_rows();

  // ways[k] = C(n, k) * 2^k: pick k variables to sit at a bound and a side for
  // each (every variable has two usable sides once boxed).
  std::vector<double> ways(static_cast<std::size_t>(n) + 1, 0.0);
  ways[0] = 1.0;
  for (int v = 0; v < n; ++v)
    for (int k = n; k >= 1; --k)
      ways[static_cast<std::size_t>(k)] += 2.0 * ways[static_cast<std::size_t>(k) - 1];

  double total = 0.0;
  for (int f = 0; f <= n && f <= m; ++f) {
    double comb = 1.0;
    for (int i = 0; i < f; ++i)
      comb = comb * static_cast<double>(m - i) / static_cast<double>(i + 1);
    total += comb * ways[static_cast<std::size_t>(n - f)];
    if (total > 1e15) return total;
  }
  return total;
}

// Dense Gaussian elimination with partial pivoting; returns false if singular.
bool dense_solve(std::vector<double>& a, std::vector<double>& b, int k) {
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * k + col]) >
          std::abs(a[static_cast<std::size_t>(piv) * k + col]))
        piv = r;
    if (std::abs(a[static_cast<std::size_t>(piv) * k + col]) < 1e-11) return false;
    if (piv != col) {
      for (int c = 0; c < k; ++c)
        std::swap(a[static_cast<std::size_t>(piv) * k + c], a[static_cast<std::size_t>(col) * k + c]);
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    }
    const double d = a[static_cast<std::size_t>(col) * k + col];
    for (int r = col + 1; r < k; ++r) {
      const double f = a[static_cast<std::size_t>(r) * k + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c)
        a[static_cast<std::size_t>(r) * k + c] -= f * a[static_cast<std::size_t>(col) * k + c];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int r = k - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < k; ++c) s -= a[static_cast<std::size_t>(r) * k + c] * b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * k + r];
  }
  return true;
}

struct EnumResult {
  bool feasible_found = false;
  double best_obj = kInf;
  std::vector<double> best_x;
  bool best_on_box = false;
};

bool point_feasible(const LinearProgram& lp, const Boxed& box, std::span<const double> x) {
  for (int v = 0; v < lp.n_vars(); ++v) {
    const auto vu = static_cast<std::size_t>(v);
    if (x[vu] < box.lo[vu] - kFeas || x[vu] > box.hi[vu] + kFeas) return false;
  }
  for (int k = 0; k < lp.n_rows(); ++k) {
    const auto& r = lp.row(k);
    double act = 0.0;
    double norm = 1.0;
    for (std::size_t e = 0; e < r.idx.size(); ++e) {
      act += r.val[e] * x[static_cast<std::size_t>(r.idx[e])];
      norm = std::max(norm, std::abs(r.val[e]));
    }
    const double resid = act - r.rhs;
    switch (r.rel) {
      case Relation::le:
        if (resid > kFeas * norm * 100) return false;
        break;
      case Relation::ge:
        if (-resid > kFeas * norm * 100) return false;
        break;
      case Relation::eq:
        if (std::abs(resid) > kFeas * norm * 100) return false;
        break;
    }
  }
  return true;
}

EnumResult enumerate_vertices(const LinearProgram& lp, const Boxed& box) {
  const int n = lp.n_vars();
  const int m = lp.n_rows();
  EnumResult result;

  // Any vertex has n tight constraints of full rank among rows and bounds.
  // Rows of every relation are candidates (a dependent-but-consistent equality
  // need not sit in the chosen square system; the residual check covers it).
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> a, b;
  std::vector<int> free_vars, tight_rows;

  const auto evaluate = [&]() {
    const int f = static_cast<int>(free_vars.size());
    // Assemble the f x f system A_SF x_F = rhs - A_S,fixed x_fixed.
    a.assign(static_cast<std::size_t>(f) * f, 0.0);
    b.assign(static_cast<std::size_t>(f), 0.0);
    std::vector<int> var_slot(static_cast<std::size_t>(n), -1);
    for (int s = 0; s < f; ++s) var_slot[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(s)])] = s;
    for (int s = 0; s < f; ++s) {
      const auto& r = lp.row(tight_rows[static_cast<std::size_t>(s)]);
      double rhs = r.rhs;
      for (std::size_t e = 0; e < r.idx.size(); ++e) {
        const int v = r.idx[e];
        const int slot = var_slot[static_cast<std::size_t>(v)];
        if (slot >= 0)
          a[static_cast<std::size_t>(s) * f + slot] += r.val[e];
        else
          rhs -= r.val[e] * x[static_cast<std::size_t>(v)];
      }
      b[static_cast<std::size_t>(s)] = rhs;
    }
    if (f > 0 && !dense_solve(a, b, f)) return;
    for (int s = 0; s < f; ++s) x[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(s)])] = b[static_cast<std::size_t>(s)];
    if (!point_feasible(lp, box, x)) return;
    const double obj = objective_value(lp, x);
    if (!result.feasible_found || obj < result.best_obj - 1e-12) {
      result.feasible_found = true;
      result.best_obj = obj;
      result.best_x.assign(x.begin(), x.end());
      result.best_on_box = false;
      for (int v = 0; v < n; ++v) {
        const auto vu = static_cast<std::size_t>(v);
        if ((box.lo_boxed[vu] && x[vu] < box.lo[vu] + 1e-3) ||
            (box.hi_boxed[vu] && x[vu] > box.hi[vu] - 1e-3))
          result.best_on_box = true;
      }
    }
  };

  // Recursive enumeration with explicit lambdas: pick fixed variables and their
  // side, then pick the tight inequality rows.
  const auto enum_rows = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      evaluate();
      return;
    }
    for (int i = start; i <= m - remaining; ++i) {
      tight_rows.push_back(i);
      self(self, i + 1, remaining - 1);
      tight_rows.pop_back();
    }
  };

  const auto enum_vars = [&](auto&& self, int v, int n_free_needed) -> void {
    const int vars_left = n - v;
    if (n_free_needed > vars_left) return;
    if (v == n) {
      tight_rows.clear();
      const int rows_needed = static_cast<int>(free_vars.size());
      if (rows_needed > m) return;
      enum_rows(enum_rows, 0, rows_needed);
      return;
    }
    const auto vu = static_cast<std::size_t>(v);
    // Variable v free:
    if (n_free_needed > 0) {
      free_vars.push_back(v);
      self(self, v + 1, n_free_needed - 1);
      free_vars.pop_back();
    }
    // Variable v fixed at a bound:
    x[vu] = box.lo[vu];
    self(self, v + 1, n_free_needed);
    if (box.hi[vu] != box.lo[vu]) {
      x[vu] = box.hi[vu];
      self(self, v + 1, n_free_needed);
    }
    x[vu] = box.lo[vu];
  };

  for (int f = 0; f <= n && f <= m; ++f) enum_vars(enum_vars, 0, f);
  return result;
}

}  // namespace

Solution brute_force_solve(const LinearProgram& lp, long max_candidates) {
  lp.validate();
  Solution sol;
  if (candidate_count(lp) > static_cast<double>(max_candidates)) {
    sol.status = Status::refused;
    return sol;
  }

  const EnumResult first = enumerate_vertices(lp, box_bounds(lp, kBox));
  if (!first.feasible_found) {
    sol.status = Status::infeasible;
    return sol;
  }
  if (first.best_on_box) {
    const EnumResult wider = enumerate_vertices(lp, box_bounds(lp, kBox * 4));
    if (wider.feasible_found && wider.best_obj < first.best_obj - 1e-6 * std::max(1.0, std::abs(first.best_obj))) {
      sol.status = Status::unbounded;
      return sol;
    }
  }
  sol.status = Status::optimal;
  sol.x = first.best_x;
  sol.objective = first.best_obj;
  return sol;
}

}  // namespace lp
}  // namespace pregwa
