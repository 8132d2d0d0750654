#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pregwa {
namespace lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { le, ge, eq };

// Minimization problem over bounded variables:
//   min c'x  s.t.  row_k . x {<=,>=,=} rhs_k,  lo <= x <= hi.
class LinearProgram {
 public:
  struct Row {
    std::vector<int> idx;
    std::vector<double> val;
    Relation rel = Relation::le;
    double rhs = 0.0;
  };

  int add_variable(double lo, double hi, double cost = 0.0);
  void set_cost(int var, double cost) { cost_[static_cast<std::size_t>(var)] = cost; }
  void add_row(Relation rel, double rhs, std::span<const int> idx, std::span<const double> val);
  void add_row(Relation rel, double rhs, std::initializer_list<std::pair<int, double>> terms);

  int n_vars() const { return static_cast<int>(cost_.size()); }
  int n_rows() const { return static_cast<int>(rows_.size()); }
  double cost(int v) const { return cost_[static_cast<std::size_t>(v)]; }
  double lower(int v) const { return lower_[static_cast<std::size_t>(v)]; }
  double upper(int v) const { return upper_[static_cast<std::size_t>(v)]; }
  const Row& row(int k) const { return rows_[static_cast<std::size_t>(k)]; }
  const std::vector<Row>& rows() const { return rows_; }

  void validate() const;  // throws ConfigError on malformed input

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class Status {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,   // bounded-iteration safety stop; never reported as optimal
  numerical_error,   // post-solve verification failed; never reported as optimal
  refused,           // brute force only: instance too large to enumerate
};

const char* to_string(Status s);

struct Solution {
  Status status = Status::numerical_error;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;

  bool is_optimal() const { return status == Status::optimal; }
};

struct SolveOptions {
  double feas_tol = 1e-7;    // absolute, on rows normalized by their inf-norm
  double bound_tol = 1e-9;
  double dual_tol = 1e-9;
  long max_iterations = 0;   // 0 = automatic (scales with problem size)
};

// Revised simplex over bounded variables (two-phase, sparse LU basis with
// product-form updates, Dantzig pricing with a Bland anti-cycling fallback,
// lowest-index tie-breaking). Deterministic for identical input. An "optimal"
// result has passed an independent feasibility check of the returned point.
Solution solve(const LinearProgram& lp, const SolveOptions& options = {});

// Exhaustive oracle: enumerates every intersection of tight constraints and
// variable bounds. Exact within floating point for small instances and fully
// independent of solve(). Refuses (Status::refused) when the candidate count
// is too large; intended for at most ~12 variables and ~20 constraints.
Solution brute_force_solve(const LinearProgram& lp, long max_candidates = 5'000'000);

struct Violation {
  enum class Kind { row, bound } kind = Kind::row;
  int index = 0;       // row or variable index
  double amount = 0.0; // normalized violation magnitude
};

// Independent check of a candidate point against the program. Does not share
// any state with the solver.
std::optional<Violation> check_point(const LinearProgram& lp, std::span<const double> x,
                                     double feas_tol = 1e-7, double bound_tol = 1e-9);

// Objective value of a candidate point.
double objective_value(const LinearProgram& lp, std::span<const double> x);

// Text dump in the CPLEX LP interchange format, for cross-checking against
// external solvers during development.
void write_lp_format(std::ostream& out, const LinearProgram& lp, const std::string& name = "lp");

}  // namespace lp
}  // namespace pregwa
