#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pregwa/errors.hpp"
#include "pregwa/lp.hpp"

// Bounded-variable revised simplex.
//
// Standard form: one slack per row (coefficient +1, bounds encoding the
// relation), artificial columns only for rows the initial slack basis cannot
// satisfy. Phase 1 minimizes the artificial sum, phase 2 the real objective
// with artificial bounds pinned to [0,0]. The basis is held as a sparse LU
// (left-looking, partial pivoting) plus a product-form eta file, refactorized
// periodically. Pricing is Dantzig with lowest-index tie-breaks; after a run
// of degenerate pivots the rule switches to Bland until progress resumes, so
// cycling cannot persist. Everything is index-ordered and deterministic.

namespace pregwa {
namespace lp {
namespace {

constexpr double kPivotTol = 1e-9;   // smallest |w_p| accepted as a ratio-test blocker
constexpr double kEtaDropTol = 1e-12;
constexpr double kSingularTol = 1e-11;
constexpr double kDegenStep = 1e-10;
constexpr int kBlandTrigger = 64;    // degenerate pivots before switching to Bland
constexpr int kRefactorEvery = 64;

struct SparseCol {
  std::vector<int> idx;
  std::vector<double> val;
  void clear() {
    idx.clear();
    val.clear();
  }
  void push(int i, double v) {
    idx.push_back(i);
    val.push_back(v);
  }
};

// ---------------------------------------------------------------------------
// Sparse LU of the basis matrix (left-looking, partial pivoting).
// ---------------------------------------------------------------------------

class BasisLu {
 public:
  // cols[k] is the k-th basis column, with original row indices. Returns false
  // when the matrix is numerically singular.
  bool factorize(int m, const std::vector<SparseCol>& cols) {
    m_ = m;
    const auto mu = static_cast<std::size_t>(m);
    lcol_.assign(mu, {});
    ucol_.assign(mu, {});
    udiag_.assign(mu, 0.0);
    pinv_.assign(mu, -1);
    prow_.assign(mu, -1);
    qcol_.assign(mu, -1);
    work_.assign(mu, 0.0);
    mark_.assign(mu, -1);
    ta_.resize(mu);
    tb_.resize(mu);

    // Cheap fill-reducing order: sparsest columns first, index-stable.
    std::vector<int> order(mu);
    for (int k = 0; k < m; ++k) order[static_cast<std::size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return cols[static_cast<std::size_t>(a)].idx.size() <
             cols[static_cast<std::size_t>(b)].idx.size();
    });

    std::vector<int> pattern;
    std::vector<int> stack, stack_pos;
    pattern.reserve(mu);
    for (int step = 0; step < m; ++step) {
      const int j = order[static_cast<std::size_t>(step)];
      const SparseCol& a = cols[static_cast<std::size_t>(j)];

      // Symbolic reach of the column pattern through already-built L columns,
      // in topological order (DFS postorder, reversed).
      pattern.clear();
      for (std::size_t e = 0; e < a.idx.size(); ++e) {
        const int start = a.idx[e];
        if (mark_[static_cast<std::size_t>(start)] == step) continue;
        mark_[static_cast<std::size_t>(start)] = step;
        stack.assign(1, start);
        stack_pos.assign(1, 0);
        while (!stack.empty()) {
          const int r = stack.back();
          const int pk = pinv_[static_cast<std::size_t>(r)];
          bool descended = false;
          if (pk >= 0) {
            const auto& lc = lcol_[static_cast<std::size_t>(pk)];
            int& pos = stack_pos.back();
            while (pos < static_cast<int>(lc.idx.size())) {
              const int child = lc.idx[static_cast<std::size_t>(pos)];
              ++pos;
              if (mark_[static_cast<std::size_t>(child)] != step) {
                mark_[static_cast<std::size_t>(child)] = step;
                stack.push_back(child);
                stack_pos.push_back(0);
                descended = true;
                break;
              }
            }
          }
          if (!descended) {
            pattern.push_back(r);
            stack.pop_back();
            stack_pos.pop_back();
          }
        }
      }
      std::reverse(pattern.begin(), pattern.end());

      // Numeric lower-triangular solve over the pattern.
      for (std::size_t e = 0; e < a.idx.size(); ++e)
        work_[static_cast<std::size_t>(a.idx[e])] += a.val[e];
      for (const int r : pattern) {
        const int pk = pinv_[static_cast<std::size_t>(r)];
        if (pk < 0) continue;
        const double xr = work_[static_cast<std::size_t>(r)];
        if (xr == 0.0) continue;
        const auto& lc = lcol_[static_cast<std::size_t>(pk)];
        for (std::size_t e = 0; e < lc.idx.size(); ++e)
          work_[static_cast<std::size_t>(lc.idx[e])] -= lc.val[e] * xr;
      }

      // Partial pivoting among not-yet-pivoted rows; ties to the smallest row.
      int pivot_row = -1;
      double pivot_abs = 0.0;
      for (const int r : pattern) {
        if (pinv_[static_cast<std::size_t>(r)] >= 0) continue;
        const double v = std::abs(work_[static_cast<std::size_t>(r)]);
        if (v > pivot_abs || (v == pivot_abs && pivot_row >= 0 && v > 0.0 && r < pivot_row)) {
          pivot_abs = v;
          pivot_row = r;
        }
      }
      if (pivot_row < 0 || pivot_abs <= kSingularTol) {
        for (const int r : pattern) work_[static_cast<std::size_t>(r)] = 0.0;
        return false;
      }
      const double pivot = work_[static_cast<std::size_t>(pivot_row)];

      SparseCol& lc = lcol_[static_cast<std::size_t>(step)];
      SparseCol& uc = ucol_[static_cast<std::size_t>(step)];
      for (const int r : pattern) {
        const double v = work_[static_cast<std::size_t>(r)];
        work_[static_cast<std::size_t>(r)] = 0.0;
        if (v == 0.0) continue;
        const int pk = pinv_[static_cast<std::size_t>(r)];
        if (pk >= 0)
          uc.push(pk, v);
        else if (r != pivot_row)
          lc.push(r, v / pivot);
      }
      udiag_[static_cast<std::size_t>(step)] = pivot;
      pinv_[static_cast<std::size_t>(pivot_row)] = step;
      prow_[static_cast<std::size_t>(step)] = pivot_row;
      qcol_[static_cast<std::size_t>(step)] = j;
    }
    return true;
  }

  // x := B^{-1} x. Input indexed by original row, output by basis position.
  void solve(std::vector<double>& x) {
    for (int k = 0; k < m_; ++k) {
      const double yk = x[static_cast<std::size_t>(prow_[static_cast<std::size_t>(k)])];
      ta_[static_cast<std::size_t>(k)] = yk;
      if (yk == 0.0) continue;
      const auto& lc = lcol_[static_cast<std::size_t>(k)];
      for (std::size_t e = 0; e < lc.idx.size(); ++e)
        x[static_cast<std::size_t>(lc.idx[e])] -= lc.val[e] * yk;
    }
    for (int k = m_ - 1; k >= 0; --k) {
      const double vk = ta_[static_cast<std::size_t>(k)] / udiag_[static_cast<std::size_t>(k)];
      tb_[static_cast<std::size_t>(k)] = vk;
      if (vk == 0.0) continue;
      const auto& uc = ucol_[static_cast<std::size_t>(k)];
      for (std::size_t e = 0; e < uc.idx.size(); ++e)
        ta_[static_cast<std::size_t>(uc.idx[e])] -= uc.val[e] * vk;
    }
    for (int k = 0; k < m_; ++k)
      x[static_cast<std::size_t>(qcol_[static_cast<std::size_t>(k)])] =
          tb_[static_cast<std::size_t>(k)];
  }

  // x := B^{-T} x. Input indexed by basis position, output by original row.
  void solve_transpose(std::vector<double>& x) {
    for (int k = 0; k < m_; ++k)
      ta_[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(qcol_[static_cast<std::size_t>(k)])];
    // U^T t = g, forward in step order.
    for (int k = 0; k < m_; ++k) {
      double g = ta_[static_cast<std::size_t>(k)];
      const auto& uc = ucol_[static_cast<std::size_t>(k)];
      for (std::size_t e = 0; e < uc.idx.size(); ++e)
        g -= uc.val[e] * tb_[static_cast<std::size_t>(uc.idx[e])];
      tb_[static_cast<std::size_t>(k)] = g / udiag_[static_cast<std::size_t>(k)];
    }
    // L^T s = t, backward; in place on tb_ (entries above k are already s).
    for (int k = m_ - 1; k >= 0; --k) {
      double s = tb_[static_cast<std::size_t>(k)];
      const auto& lc = lcol_[static_cast<std::size_t>(k)];
      for (std::size_t e = 0; e < lc.idx.size(); ++e)
        s -= lc.val[e] *
             tb_[static_cast<std::size_t>(pinv_[static_cast<std::size_t>(lc.idx[e])])];
      tb_[static_cast<std::size_t>(k)] = s;
    }
    for (int k = 0; k < m_; ++k)
      x[static_cast<std::size_t>(prow_[static_cast<std::size_t>(k)])] =
          tb_[static_cast<std::size_t>(k)];
  }

 private:
  int m_ = 0;
  std::vector<SparseCol> lcol_, ucol_;
  std::vector<double> udiag_;
  std::vector<int> pinv_, prow_, qcol_;
  std::vector<double> work_, ta_, tb_;
  std::vector<int> mark_;
};

// ---------------------------------------------------------------------------
// Simplex driver.
// ---------------------------------------------------------------------------

enum class VState : std::uint8_t { basic, at_lower, at_upper, nb_free, fixed };

struct Eta {
  std::vector<int> idx;
  std::vector<double> val;
  int pivot_pos = 0;
  double pivot_val = 1.0;
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {}

  Solution run() {
    build_standard_form();
    if (!init_basis()) return fail(Status::numerical_error);

    const long auto_limit = 2000 + 20L * (static_cast<long>(m_) + n_total_);
    max_iters_ = opt_.max_iterations > 0 ? opt_.max_iterations : auto_limit;

    if (n_art_ > 0) {
      const Status s1 = iterate(/*phase1=*/true);
      if (s1 != Status::optimal) return fail(s1 == Status::unbounded ? Status::numerical_error : s1);
      double infeas = 0.0;
      for (int a = 0; a < n_art_; ++a) infeas += value_[static_cast<std::size_t>(n_ + m_ + a)];
      if (infeas > 1e-6) return fail(Status::infeasible);
      // Pin artificials at zero for phase 2.
      for (int a = 0; a < n_art_; ++a) {
        const int v = n_ + m_ + a;
        hi_[static_cast<std::size_t>(v)] = 0.0;
        if (state_[static_cast<std::size_t>(v)] != VState::basic) {
          state_[static_cast<std::size_t>(v)] = VState::fixed;
          value_[static_cast<std::size_t>(v)] = 0.0;
        }
      }
    }

    const Status s2 = iterate(/*phase1=*/false);
    if (s2 != Status::optimal) return fail(s2);
    return finish();
  }

 private:
  // ---- setup -------------------------------------------------------------

  void build_standard_form() {
    n_ = lp_.n_vars();
    m_ = lp_.n_rows();

    scale_.assign(static_cast<std::size_t>(m_), 1.0);
    rhs_.assign(static_cast<std::size_t>(m_), 0.0);
    slo_.assign(static_cast<std::size_t>(m_), 0.0);
    shi_.assign(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k) {
      const auto& r = lp_.row(k);
      double norm = 0.0;
      for (const double v : r.val) norm = std::max(norm, std::abs(v));
      const double s = norm > 0.0 ? 1.0 / std::clamp(norm, 1e-8, 1e8) : 1.0;
      scale_[static_cast<std::size_t>(k)] = s;
      rhs_[static_cast<std::size_t>(k)] = r.rhs * s;
      switch (r.rel) {
        case Relation::le: slo_[static_cast<std::size_t>(k)] = 0.0; shi_[static_cast<std::size_t>(k)] = kInf; break;
        case Relation::ge: slo_[static_cast<std::size_t>(k)] = -kInf; shi_[static_cast<std::size_t>(k)] = 0.0; break;
        case Relation::eq: slo_[static_cast<std::size_t>(k)] = 0.0; shi_[static_cast<std::size_t>(k)] = 0.0; break;
      }
    }

    // Structural columns, scaled, duplicates coalesced.
    std::vector<int> count(static_cast<std::size_t>(n_), 0);
    for (int k = 0; k < m_; ++k)
      for (const int v : lp_.row(k).idx) ++count[static_cast<std::size_t>(v)];
    colptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int v = 0; v < n_; ++v)
      colptr_[static_cast<std::size_t>(v) + 1] =
          colptr_[static_cast<std::size_t>(v)] + count[static_cast<std::size_t>(v)];
    rowidx_.assign(static_cast<std::size_t>(colptr_[static_cast<std::size_t>(n_)]), 0);
    colval_.assign(rowidx_.size(), 0.0);
    std::vector<int> fill(static_cast<std::size_t>(n_), 0);
    for (int k = 0; k < m_; ++k) {
      const auto& r = lp_.row(k);
      for (std::size_t e = 0; e < r.idx.size(); ++e) {
        const int v = r.idx[e];
        const std::size_t at = static_cast<std::size_t>(colptr_[static_cast<std::size_t>(v)] +
                                                        fill[static_cast<std::size_t>(v)]++);
        rowidx_[at] = k;
        colval_[at] = r.val[e] * scale_[static_cast<std::size_t>(k)];
      }
    }
    coalesce_columns();

    // Variable arrays: structurals, slacks, artificials appended later.
    n_total_ = n_ + m_;
    lo_.resize(static_cast<std::size_t>(n_total_));
    hi_.resize(static_cast<std::size_t>(n_total_));
    cost_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int v = 0; v < n_; ++v) {
      lo_[static_cast<std::size_t>(v)] = lp_.lower(v);
      hi_[static_cast<std::size_t>(v)] = lp_.upper(v);
      cost_[static_cast<std::size_t>(v)] = lp_.cost(v);
    }
    for (int k = 0; k < m_; ++k) {
      lo_[static_cast<std::size_t>(n_ + k)] = slo_[static_cast<std::size_t>(k)];
      hi_[static_cast<std::size_t>(n_ + k)] = shi_[static_cast<std::size_t>(k)];
    }
  }

  void coalesce_columns() {
    std::vector<int> nidx;
    std::vector<double> nval;
    nidx.reserve(rowidx_.size());
    nval.reserve(rowidx_.size());
    std::vector<int> nptr(static_cast<std::size_t>(n_) + 1, 0);
    std::vector<std::pair<int, double>> tmp;
    for (int v = 0; v < n_; ++v) {
      tmp.clear();
      for (int e = colptr_[static_cast<std::size_t>(v)]; e < colptr_[static_cast<std::size_t>(v) + 1]; ++e)
        tmp.emplace_back(rowidx_[static_cast<std::size_t>(e)], colval_[static_cast<std::size_t>(e)]);
      std::sort(tmp.begin(), tmp.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const std::size_t col_start = nidx.size();
      for (const auto& [row, val] : tmp) {
        if (nidx.size() > col_start && nidx.back() == row)
          nval.back() += val;  // duplicate entry in the same row: sum semantics
        else {
          nidx.push_back(row);
          nval.push_back(val);
        }
      }
      nptr[static_cast<std::size_t>(v) + 1] = static_cast<int>(nidx.size());
    }
    colptr_ = std::move(nptr);
    rowidx_ = std::move(nidx);
    colval_ = std::move(nval);
  }

  template <typename Fn>
  void for_column(int var, Fn&& fn) const {
    if (var < n_) {
      for (int e = colptr_[static_cast<std::size_t>(var)];
           e < colptr_[static_cast<std::size_t>(var) + 1]; ++e)
        fn(rowidx_[static_cast<std::size_t>(e)], colval_[static_cast<std::size_t>(e)]);
    } else if (var < n_ + m_) {
      fn(var - n_, 1.0);
    } else {
      const int a = var - n_ - m_;
      fn(art_row_[static_cast<std::size_t>(a)], art_coef_[static_cast<std::size_t>(a)]);
    }
  }

  bool init_basis() {
    value_.assign(static_cast<std::size_t>(n_total_), 0.0);
    state_.assign(static_cast<std::size_t>(n_total_), VState::nb_free);
    for (int v = 0; v < n_; ++v) {
      const double lo = lo_[static_cast<std::size_t>(v)];
      const double hi = hi_[static_cast<std::size_t>(v)];
      if (lo == hi) {
        state_[static_cast<std::size_t>(v)] = VState::fixed;
        value_[static_cast<std::size_t>(v)] = lo;
      } else if (lo > -kInf) {
        state_[static_cast<std::size_t>(v)] = VState::at_lower;
        value_[static_cast<std::size_t>(v)] = lo;
      } else if (hi < kInf) {
        state_[static_cast<std::size_t>(v)] = VState::at_upper;
        value_[static_cast<std::size_t>(v)] = hi;
      } else {
        state_[static_cast<std::size_t>(v)] = VState::nb_free;
        value_[static_cast<std::size_t>(v)] = 0.0;
      }
    }

    // Row activity of the nonbasic structural point.
    std::vector<double> act(static_cast<std::size_t>(m_), 0.0);
    for (int v = 0; v < n_; ++v) {
      const double xv = value_[static_cast<std::size_t>(v)];
      if (xv == 0.0) continue;
      for_column(v, [&](int k, double a) { act[static_cast<std::size_t>(k)] += a * xv; });
    }

    basis_.assign(static_cast<std::size_t>(m_), -1);
    art_row_.clear();
    art_coef_.clear();
    art_value_.clear();
    for (int k = 0; k < m_; ++k) {
      const double target = rhs_[static_cast<std::size_t>(k)] - act[static_cast<std::size_t>(k)];
      const double lo = slo_[static_cast<std::size_t>(k)];
      const double hi = shi_[static_cast<std::size_t>(k)];
      const int sv = n_ + k;
      if (target >= lo && target <= hi) {
        basis_[static_cast<std::size_t>(k)] = sv;
        state_[static_cast<std::size_t>(sv)] = VState::basic;
        value_[static_cast<std::size_t>(sv)] = target;
      } else {
        const double clamped = std::clamp(target, lo, hi);
        state_[static_cast<std::size_t>(sv)] =
            lo == hi ? VState::fixed : (clamped == lo ? VState::at_lower : VState::at_upper);
        value_[static_cast<std::size_t>(sv)] = clamped;
        const double resid = target - clamped;
        art_row_.push_back(k);
        art_coef_.push_back(resid >= 0.0 ? 1.0 : -1.0);
        art_value_.push_back(std::abs(resid));
        const int av = n_ + m_ + static_cast<int>(art_row_.size()) - 1;
        basis_[static_cast<std::size_t>(k)] = av;
      }
    }
    n_art_ = static_cast<int>(art_row_.size());
    n_total_ += n_art_;
    lo_.resize(static_cast<std::size_t>(n_total_), 0.0);
    hi_.resize(static_cast<std::size_t>(n_total_), kInf);
    cost_.resize(static_cast<std::size_t>(n_total_), 0.0);
    value_.resize(static_cast<std::size_t>(n_total_), 0.0);
    state_.resize(static_cast<std::size_t>(n_total_), VState::basic);
    for (int a = 0; a < n_art_; ++a) {
      const int av = n_ + m_ + a;
      state_[static_cast<std::size_t>(av)] = VState::basic;
      value_[static_cast<std::size_t>(av)] = art_value_[static_cast<std::size_t>(a)];
    }

    work_rhs_.resize(static_cast<std::size_t>(m_));
    work_y_.resize(static_cast<std::size_t>(m_));
    work_w_.resize(static_cast<std::size_t>(m_));
    return refactorize();
  }

  // ---- factorization ------------------------------------------------------

  bool refactorize() {
    std::vector<SparseCol> cols(static_cast<std::size_t>(m_));
    for (int p = 0; p < m_; ++p) {
      SparseCol& c = cols[static_cast<std::size_t>(p)];
      for_column(basis_[static_cast<std::size_t>(p)], [&](int k, double a) { c.push(k, a); });
    }
    if (!lu_.factorize(m_, cols)) return false;
    etas_.clear();
    eta_nnz_ = 0;
    recompute_basic_values();
    return true;
  }

  void recompute_basic_values() {
    std::fill(work_rhs_.begin(), work_rhs_.end(), 0.0);
    for (int k = 0; k < m_; ++k) work_rhs_[static_cast<std::size_t>(k)] = rhs_[static_cast<std::size_t>(k)];
    for (int v = 0; v < n_total_; ++v) {
      if (state_[static_cast<std::size_t>(v)] == VState::basic) continue;
      const double xv = value_[static_cast<std::size_t>(v)];
      if (xv == 0.0) continue;
      for_column(v, [&](int k, double a) { work_rhs_[static_cast<std::size_t>(k)] -= a * xv; });
    }
    ftran(work_rhs_);  // full B^{-1}: base LU plus any etas since the last refactor
    for (int p = 0; p < m_; ++p)
      value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(p)])] =
          work_rhs_[static_cast<std::size_t>(p)];
  }

  void ftran(std::vector<double>& v) {
    lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = v[static_cast<std::size_t>(e.pivot_pos)] / e.pivot_val;
      if (t != 0.0) {
        for (std::size_t i = 0; i < e.idx.size(); ++i)
          v[static_cast<std::size_t>(e.idx[i])] -= e.val[i] * t;
      }
      v[static_cast<std::size_t>(e.pivot_pos)] = t;
    }
  }

  void btran(std::vector<double>& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double s = 0.0;
      for (std::size_t i = 0; i < e.idx.size(); ++i)
        s += e.val[i] * v[static_cast<std::size_t>(e.idx[i])];
      const double yr = v[static_cast<std::size_t>(e.pivot_pos)];
      s += e.pivot_val * yr;
      v[static_cast<std::size_t>(e.pivot_pos)] = yr - (s - yr) / e.pivot_val;
    }
    lu_.solve_transpose(v);
  }

  // ---- iteration ----------------------------------------------------------

  double phase_cost(int v, bool phase1) const {
    if (phase1) return v >= n_ + m_ ? 1.0 : 0.0;
    return cost_[static_cast<std::size_t>(v)];
  }

  Status iterate(bool phase1) {
    int degen_run = 0;
    bool bland = false;
    double cmax = 1.0;
    if (!phase1)
      for (int v = 0; v < n_total_; ++v) cmax = std::max(cmax, std::abs(cost_[static_cast<std::size_t>(v)]));
    const double dual_tol = opt_.dual_tol * cmax;

    while (true) {
      if (iterations_ >= max_iters_) return Status::iteration_limit;

      // Dual prices y = B^{-T} c_B.
      for (int p = 0; p < m_; ++p)
        work_y_[static_cast<std::size_t>(p)] = phase_cost(basis_[static_cast<std::size_t>(p)], phase1);
      btran(work_y_);

      // Pricing.
      int enter = -1;
      int enter_dir = 0;
      double best_score = dual_tol;
      for (int v = 0; v < n_total_; ++v) {
        const VState st = state_[static_cast<std::size_t>(v)];
        if (st == VState::basic || st == VState::fixed) continue;
        double d = phase_cost(v, phase1);
        for_column(v, [&](int k, double a) { d -= a * work_y_[static_cast<std::size_t>(k)]; });
        int dir = 0;
        if (st == VState::at_lower && d < -best_score) dir = 1;
        else if (st == VState::at_upper && d > best_score) dir = -1;
        else if (st == VState::nb_free && std::abs(d) > best_score) dir = d < 0.0 ? 1 : -1;
        if (dir != 0) {
          enter = v;
          enter_dir = dir;
          if (bland) break;
          best_score = std::abs(d);
        }
      }
      if (enter < 0) return Status::optimal;

      // Direction of basic values: w = B^{-1} a_enter.
      std::fill(work_w_.begin(), work_w_.end(), 0.0);
      for_column(enter, [&](int k, double a) { work_w_[static_cast<std::size_t>(k)] += a; });
      ftran(work_w_);

      // Ratio test, two passes: find the tightest step, then pick the leaving
      // variable among near-ties (largest pivot for stability, or lowest index
      // under Bland).
      const double sigma = static_cast<double>(enter_dir);
      const auto blocker = [&](int p, double& ratio, double& bound, bool& at_lower) {
        const double wp = work_w_[static_cast<std::size_t>(p)];
        const double eff = sigma * wp;
        if (std::abs(eff) <= kPivotTol) return false;
        const int vb = basis_[static_cast<std::size_t>(p)];
        const double vv = value_[static_cast<std::size_t>(vb)];
        if (eff > 0.0) {
          bound = lo_[static_cast<std::size_t>(vb)];
          if (bound == -kInf) return false;
          at_lower = true;
        } else {
          bound = hi_[static_cast<std::size_t>(vb)];
          if (bound == kInf) return false;
          at_lower = false;
        }
        ratio = std::max((vv - bound) / eff, 0.0);
        return true;
      };

      double min_ratio = kInf;
      for (int p = 0; p < m_; ++p) {
        double ratio, bound;
        bool at_lower;
        if (blocker(p, ratio, bound, at_lower)) min_ratio = std::min(min_ratio, ratio);
      }

      int leave_pos = -1;
      double leave_bound = 0.0;
      bool leave_at_lower = false;
      if (min_ratio < kInf) {
        double best_piv = 0.0;
        int best_var = std::numeric_limits<int>::max();
        for (int p = 0; p < m_; ++p) {
          double ratio, bound;
          bool at_lower;
          if (!blocker(p, ratio, bound, at_lower) || ratio > min_ratio + 1e-10) continue;
          const int vb = basis_[static_cast<std::size_t>(p)];
          const double piv = std::abs(work_w_[static_cast<std::size_t>(p)]);
          const bool take = bland ? vb < best_var
                                  : (piv > best_piv || (piv == best_piv && vb < best_var));
          if (take) {
            best_piv = piv;
            best_var = vb;
            leave_pos = p;
            leave_bound = bound;
            leave_at_lower = at_lower;
          }
        }
      }
      const double best_ratio = min_ratio;

      // Bound flip of the entering variable can beat every basic blocker.
      double flip = kInf;
      if (lo_[static_cast<std::size_t>(enter)] > -kInf && hi_[static_cast<std::size_t>(enter)] < kInf)
        flip = hi_[static_cast<std::size_t>(enter)] - lo_[static_cast<std::size_t>(enter)];

      const double step = std::min(best_ratio, flip);
      if (step == kInf) {
        // No blocker in phase 1 is a numerical breakdown; the phase-1 objective
        // is bounded below by zero.
        return phase1 ? Status::numerical_error : Status::unbounded;
      }

      ++iterations_;
      if (step <= kDegenStep) {
        if (++degen_run >= kBlandTrigger) bland = true;
      } else {
        degen_run = 0;
        bland = false;
      }

      if (flip < best_ratio) {
        // Bound flip: no basis change.
        for (int p = 0; p < m_; ++p) {
          const double wp = work_w_[static_cast<std::size_t>(p)];
          if (wp == 0.0) continue;
          value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(p)])] -= sigma * flip * wp;
        }
        const bool was_lower = state_[static_cast<std::size_t>(enter)] == VState::at_lower;
        state_[static_cast<std::size_t>(enter)] = was_lower ? VState::at_upper : VState::at_lower;
        value_[static_cast<std::size_t>(enter)] =
            was_lower ? hi_[static_cast<std::size_t>(enter)] : lo_[static_cast<std::size_t>(enter)];
        continue;
      }

      // Pivot: update values, swap basis, push an eta.
      for (int p = 0; p < m_; ++p) {
        const double wp = work_w_[static_cast<std::size_t>(p)];
        if (wp == 0.0) continue;
        value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(p)])] -= sigma * step * wp;
      }
      const int leave_var = basis_[static_cast<std::size_t>(leave_pos)];
      value_[static_cast<std::size_t>(leave_var)] = leave_bound;
      state_[static_cast<std::size_t>(leave_var)] =
          lo_[static_cast<std::size_t>(leave_var)] == hi_[static_cast<std::size_t>(leave_var)]
              ? VState::fixed
              : (leave_at_lower ? VState::at_lower : VState::at_upper);
      value_[static_cast<std::size_t>(enter)] += sigma * step;
      state_[static_cast<std::size_t>(enter)] = VState::basic;
      basis_[static_cast<std::size_t>(leave_pos)] = enter;

      Eta eta;
      eta.pivot_pos = leave_pos;
      eta.pivot_val = work_w_[static_cast<std::size_t>(leave_pos)];
      for (int p = 0; p < m_; ++p) {
        if (p == leave_pos) continue;
        const double wp = work_w_[static_cast<std::size_t>(p)];
        if (std::abs(wp) > kEtaDropTol) {
          eta.idx.push_back(p);
          eta.val.push_back(wp);
        }
      }
      eta_nnz_ += static_cast<long>(eta.idx.size());
      etas_.push_back(std::move(eta));

      if (static_cast<int>(etas_.size()) >= kRefactorEvery ||
          eta_nnz_ > std::max(4000L, 10L * m_)) {
        if (!refactorize()) return Status::numerical_error;
      }
    }
  }

  // ---- wrap-up ------------------------------------------------------------

  Solution fail(Status s) {
    Solution sol;
    sol.status = s;
    sol.iterations = iterations_;
    return sol;
  }

  Solution finish() {
    recompute_basic_values();
    Solution sol;
    sol.iterations = iterations_;
    sol.x.resize(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) {
      double xv = value_[static_cast<std::size_t>(v)];
      // Snap tolerance-level drift onto the bound; larger violations are left
      // for the verification pass to reject.
      const double lo = lp_.lower(v);
      const double hi = lp_.upper(v);
      if (xv < lo && xv > lo - opt_.bound_tol) xv = lo;
      if (xv > hi && xv < hi + opt_.bound_tol) xv = hi;
      sol.x[static_cast<std::size_t>(v)] = xv;
    }
    sol.objective = objective_value(lp_, sol.x);
    if (check_point(lp_, sol.x, opt_.feas_tol, opt_.bound_tol)) {
      // Never report a violating point as optimal.
      sol.status = Status::numerical_error;
      return sol;
    }
    sol.status = Status::optimal;
    return sol;
  }

  const LinearProgram& lp_;
  SolveOptions opt_;

  int n_ = 0, m_ = 0, n_art_ = 0, n_total_ = 0;
  long iterations_ = 0, max_iters_ = 0, eta_nnz_ = 0;

  std::vector<int> colptr_, rowidx_;
  std::vector<double> colval_;
  std::vector<double> scale_, rhs_, slo_, shi_;
  std::vector<double> lo_, hi_, cost_, value_;
  std::vector<VState> state_;
  std::vector<int> basis_;
  std::vector<int> art_row_;
  std::vector<double> art_coef_;
  std::vector<double> art_value_;

  BasisLu lu_;
  std::vector<Eta> etas_;
  std::vector<double> work_rhs_, work_y_, work_w_;
};

}  // namespace

Solution solve(const LinearProgram& lp, const SolveOptions& options) {
  lp.validate();
  Simplex s(lp, options);
  return s.run();
}

}  // namespace lp
}  // namespace pregwa
