#include <algorithm>
#include <cmath>
#include <ostream>

#include "pregwa/errors.hpp"
#include "pregwa/lp.hpp"

namespace pregwa {
namespace lp {

int LinearProgram::add_variable(double lo, double hi, double cost) {
  cost_.push_back(cost);
  lower_.push_back(lo);
  upper_.push_back(hi);
  return static_cast<int>(cost_.size()) - 1;
}

void LinearProgram::add_row(Relation rel, double rhs, std::span<const int> idx,
                            std::span<const double> val) {
  Row r;
  r.idx.assign(idx.begin(), idx.end());
  r.val.assign(val.begin(), val.end());
  r.rel = rel;
  r.rhs = rhs;
  rows_.push_back(std::move(r));
}

void LinearProgram::add_row(Relation rel, double rhs,
                            std::initializer_list<std::pair<int, double>> terms) {
  Row r;
  r.rel = rel;
  r.rhs = rhs;
  for (const auto& [i, v] : terms) {
    r.idx.push_back(i);
    r.val.push_back(v);
  }
  rows_.push_back(std::move(r));
}

void LinearProgram::validate() const {
  for (int v = 0; v < n_vars(); ++v) {
    if (std::isnan(lower(v)) || std::isnan(upper(v)) || lower(v) > upper(v))
      throw ConfigError("variable " + std::to_string(v) + " has invalid bounds");
    if (!std::isfinite(cost(v))) throw ConfigError("variable " + std::to_string(v) + " has non-finite cost");
  }
  for (int k = 0; k < n_rows(); ++k) {
    const Row& r = row(k);
    if (r.idx.size() != r.val.size())
      throw ConfigError("row " + std::to_string(k) + " has mismatched index/value lengths");
    if (!std::isfinite(r.rhs)) throw ConfigError("row " + std::to_string(k) + " has non-finite rhs");
    for (std::size_t e = 0; e < r.idx.size(); ++e) {
      if (r.idx[e] < 0 || r.idx[e] >= n_vars())
        throw ConfigError("row " + std::to_string(k) + " references unknown variable");
      if (!std::isfinite(r.val[e]))
        throw ConfigError("row " + std::to_string(k) + " has non-finite coefficient");
    }
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::numerical_error: return "numerical_error";
    case Status::refused: return "refused";
  }
  return "unknown";
}

double objective_value(const LinearProgram& lp, std::span<const double> x) {
  double z = 0.0;
  for (int v = 0; v < lp.n_vars(); ++v) z += lp.cost(v) * x[static_cast<std::size_t>(v)];
  return z;
}

std::optional<Violation> check_point(const LinearProgram& lp, std::span<const double> x,
                                     double feas_tol, double bound_tol) {
  for (int v = 0; v < lp.n_vars(); ++v) {
    const double xv = x[static_cast<std::size_t>(v)];
    const double below = lp.lower(v) - xv;
    const double above = xv - lp.upper(v);
    const double worst = std::max(below, above);
    if (worst > bound_tol) return Violation{Violation::Kind::bound, v, worst};
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
    double viol = 0.0;
    switch (r.rel) {
      case Relation::le: viol = resid; break;
      case Relation::ge: viol = -resid; break;
      case Relation::eq: viol = std::abs(resid); break;
    }
    if (viol / norm > feas_tol) return Violation{Violation::Kind::row, k, viol / norm};
  }
  return std::nullopt;
}

void write_lp_format(std::ostream& out, const LinearProgram& lp, const std::string& name) {
  // Old LP-format parsers cap line length, so wrap long expressions.
  constexpr int kTermsPerLine = 8;
  out << "\\ " << name << "\nMinimize\n obj:";
  bool any = false;
  int terms = 0;
  for (int v = 0; v < lp.n_vars(); ++v) {
    if (lp.cost(v) == 0.0) continue;
    if (terms && terms % kTermsPerLine == 0) out << "\n     ";
    out << (lp.cost(v) >= 0 ? " + " : " - ") << std::abs(lp.cost(v)) << " x" << v;
    any = true;
    ++terms;
  }
  if (!any) out << " 0 x0";
  out << "\nSubject To\n";
  for (int k = 0; k < lp.n_rows(); ++k) {
    const auto& r = lp.row(k);
    out << " c" << k << ":";
    for (std::size_t e = 0; e < r.idx.size(); ++e) {
      if (e && e % kTermsPerLine == 0) out << "\n     ";
      out << (r.val[e] >= 0 ? " + " : " - ") << std::abs(r.val[e]) << " x" << r.idx[e];
    }
    switch (r.rel) {
      case Relation::le: out << " <= "; break;
      case Relation::ge: out << " >= "; break;
      case Relation::eq: out << " = "; break;
    }
    out << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (int v = 0; v < lp.n_vars(); ++v) {
    const double lo = lp.lower(v);
    const double hi = lp.upper(v);
    if (lo == -kInf && hi == kInf) {
      out << " x" << v << " free\n";
    } else {
      if (lo == -kInf)
        out << " -inf <= x" << v;
      else
        out << " " << lo << " <= x" << v;
      if (hi == kInf)
        out << "\n";
      else
        out << " <= " << hi << "\n";
    }
  }
  out << "End\n";
}

}  // namespace lp
}  // namespace pregwa
