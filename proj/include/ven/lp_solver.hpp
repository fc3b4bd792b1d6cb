#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace ven::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// optimize c^T x  s.t.  rows,  lower <= x <= upper.
/// Bounds may be infinite; a variable with both bounds infinite is free.
struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t variables() const { return objective.size(); }

  /// Adds a variable with the given objective coefficient and bounds and
  /// returns its index; existing rows get a zero coefficient.
  std::size_t add_variable(double cost, double lo = 0.0, double hi = kInfinity);
  void add_constraint(std::vector<double> coefficients, Relation relation, double rhs);
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(Status status);

struct Options {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-11;
  std::size_t max_iterations = 0;  // 0 picks a limit from the problem size
};

struct Solution {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::string diagnostics;
};

/// Dense two-phase primal simplex with bounded variables and Bland's rule.
///
/// Every row gets a bounded slack, phase one minimises the sum of
/// artificial variables from a basis of artificials, and phase two
/// optimises the real objective with the artificials fixed at zero.
/// Nonbasic variables may rest at either bound, so box constraints never
/// become rows. Throws std::invalid_argument on dimension mismatches or
/// inverted bounds.
Solution solve(const LinearProgram& program, const Options& options = {});

}  // namespace ven::lp
