#include "ven/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ven::lp {

std::size_t LinearProgram::add_variable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (Constraint& row : constraints) row.coefficients.push_back(0.0);
  return objective.size() - 1;
}

void LinearProgram::add_constraint(std::vector<double> coefficients, Relation relation,
                                   double rhs) {
  constraints.push_back(Constraint{std::move(coefficients), relation, rhs});
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

enum class Rest { Lower, Upper, Zero, Basic };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const Options& options)
      : options_(options), n_(lp.variables()), m_(lp.constraints.size()) {
    total_ = n_ + 2 * m_;
    lower_.assign(total_, 0.0);
    upper_.assign(total_, kInfinity);
    value_.assign(total_, 0.0);
    rest_.assign(total_, Rest::Lower);
    tableau_.assign(m_, std::vector<double>(total_ + 1, 0.0));
    basis_.assign(m_, 0);

    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = lp.lower.empty() ? 0.0 : lp.lower[j];
      upper_[j] = lp.upper.empty() ? kInfinity : lp.upper[j];
      if (std::isfinite(lower_[j])) {
        value_[j] = lower_[j];
        rest_[j] = Rest::Lower;
      } else if (std::isfinite(upper_[j])) {
        value_[j] = upper_[j];
        rest_[j] = Rest::Upper;
      } else {
        value_[j] = 0.0;
        rest_[j] = Rest::Zero;
      }
    }

    for (std::size_t i = 0; i < m_; ++i) {
      const Constraint& row = lp.constraints[i];
      const std::size_t slack = n_ + i;
      const std::size_t art = n_ + m_ + i;
      switch (row.relation) {
        case Relation::LessEqual: lower_[slack] = 0.0; upper_[slack] = kInfinity; break;
        case Relation::GreaterEqual: lower_[slack] = -kInfinity; upper_[slack] = 0.0; break;
        case Relation::Equal: lower_[slack] = 0.0; upper_[slack] = 0.0; break;
      }
      rest_[slack] = row.relation == Relation::GreaterEqual ? Rest::Upper : Rest::Lower;

      double residual = row.rhs;
      for (std::size_t j = 0; j < n_; ++j) residual -= row.coefficients[j] * value_[j];

      const bool slack_fits = (row.relation == Relation::LessEqual && residual >= 0.0) ||
                              (row.relation == Relation::GreaterEqual && residual <= 0.0);
      double pivot = 1.0;
      if (slack_fits) {
        basis_[i] = slack;
        value_[slack] = residual;
        rest_[slack] = Rest::Basic;
        upper_[art] = 0.0;  // never needed
      } else {
        pivot = residual >= 0.0 ? 1.0 : -1.0;
        basis_[i] = art;
        value_[art] = std::abs(residual);
        rest_[art] = Rest::Basic;
        needs_phase_one_ = true;
      }
      std::vector<double>& t = tableau_[i];
      for (std::size_t j = 0; j < n_; ++j) t[j] = row.coefficients[j] / pivot;
      t[slack] = 1.0 / pivot;
      t[art] = (slack_fits ? 0.0 : pivot) / pivot;
      t[total_] = row.rhs / pivot;
      rhs_scale_ = std::max(rhs_scale_, std::abs(row.rhs));
    }

    limit_ = options_.max_iterations > 0 ? options_.max_iterations : 100 * (m_ + total_) + 1000;
  }

  Solution run(const LinearProgram& lp) {
    Solution out;
    if (needs_phase_one_) {
      std::vector<double> cost(total_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) cost[n_ + m_ + i] = 1.0;
      const Status phase_one = optimize(cost);
      if (phase_one == Status::IterationLimit) return finish(lp, Status::IterationLimit, "phase 1");
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i) infeasibility += std::abs(value_[n_ + m_ + i]);
      if (infeasibility > options_.feasibility_tolerance * (1.0 + rhs_scale_)) {
        std::ostringstream msg;
        msg << "phase 1 residual infeasibility " << infeasibility;
        return finish(lp, Status::Infeasible, msg.str());
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t art = n_ + m_ + i;
      lower_[art] = upper_[art] = 0.0;
      if (rest_[art] != Rest::Basic) {
        value_[art] = 0.0;
        rest_[art] = Rest::Lower;
      }
    }

    std::vector<double> cost(total_, 0.0);
    const double sign = lp.sense == Sense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) cost[j] = sign * lp.objective[j];
    const Status phase_two = optimize(cost);
    return finish(lp, phase_two, phase_two == Status::Optimal ? "" : "phase 2");
  }

 private:
  bool fixed(std::size_t j) const { return lower_[j] == upper_[j]; }

  Status optimize(const std::vector<double>& cost) {
    while (true) {
      if (iterations_ >= limit_) return Status::IterationLimit;

      // Bland: lowest-index improving nonbasic variable enters.
      std::size_t entering = total_;
      double direction = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (rest_[j] == Rest::Basic || fixed(j)) continue;
        double reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) reduced -= cost[basis_[i]] * tableau_[i][j];
        if (reduced < -options_.optimality_tolerance && rest_[j] != Rest::Upper) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (reduced > options_.optimality_tolerance && rest_[j] != Rest::Lower) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering == total_) {
        refresh_basic_values();
        return Status::Optimal;
      }
      ++iterations_;

      // Ratio test; ties go to the lowest-index basic variable.
      double step = kInfinity;
      std::size_t leave_row = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = direction * tableau_[i][entering];
        const std::size_t b = basis_[i];
        double limit = kInfinity;
        if (alpha > options_.pivot_tolerance && std::isfinite(lower_[b])) {
          limit = (value_[b] - lower_[b]) / alpha;
        } else if (alpha < -options_.pivot_tolerance && std::isfinite(upper_[b])) {
          limit = (upper_[b] - value_[b]) / -alpha;
        }
        if (!std::isfinite(limit)) continue;
        limit = std::max(0.0, limit);
        if (limit < step || (limit == step && leave_row < m_ && b < basis_[leave_row])) {
          step = limit;
          leave_row = i;
        }
      }
      const double span = upper_[entering] - lower_[entering];
      const bool flip = std::isfinite(span) && span <= step;
      if (flip) step = span;
      if (!std::isfinite(step)) return Status::Unbounded;

      value_[entering] += direction * step;
      for (std::size_t i = 0; i < m_; ++i) {
        value_[basis_[i]] -= direction * tableau_[i][entering] * step;
      }

      if (flip) {
        const bool to_upper = direction > 0.0;
        rest_[entering] = to_upper ? Rest::Upper : Rest::Lower;
        value_[entering] = to_upper ? upper_[entering] : lower_[entering];
        continue;
      }

      const std::size_t leaving = basis_[leave_row];
      const bool to_lower = direction * tableau_[leave_row][entering] > 0.0;
      rest_[leaving] = to_lower ? Rest::Lower : Rest::Upper;
      value_[leaving] = to_lower ? lower_[leaving] : upper_[leaving];
      rest_[entering] = Rest::Basic;
      basis_[leave_row] = entering;
      pivot(leave_row, entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    std::vector<double>& pr = tableau_[row];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    pr[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      std::vector<double>& r = tableau_[i];
      const double factor = r[col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= total_; ++j) r[j] -= factor * pr[j];
      r[col] = 0.0;
    }
  }

  // x_B = B^-1 b - B^-1 N x_N, recomputed from the tableau to shed drift.
  void refresh_basic_values() {
    for (std::size_t i = 0; i < m_; ++i) {
      double v = tableau_[i][total_];
      for (std::size_t j = 0; j < total_; ++j) {
        if (rest_[j] != Rest::Basic && value_[j] != 0.0) v -= tableau_[i][j] * value_[j];
      }
      value_[basis_[i]] = v;
    }
  }

  Solution finish(const LinearProgram& lp, Status status, std::string where) {
    Solution out;
    out.status = status;
    out.iterations = iterations_;
    out.x.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      out.x[j] = std::clamp(value_[j], lower_[j], upper_[j]);
    }
    for (std::size_t j = 0; j < n_; ++j) out.objective += lp.objective[j] * out.x[j];
    if (!where.empty()) {
      std::ostringstream msg;
      msg << to_string(status) << " (" << where << ") after " << iterations_ << " iterations, "
          << m_ << " rows, " << n_ << " columns";
      out.diagnostics = msg.str();
    }
    return out;
  }

  Options options_;
  std::size_t n_;
  std::size_t m_;
  std::size_t total_ = 0;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> value_;
  std::vector<Rest> rest_;
  std::vector<std::vector<double>> tableau_;  // m x (total + 1), last column B^-1 b
  std::vector<std::size_t> basis_;
  bool needs_phase_one_ = false;
  double rhs_scale_ = 0.0;
  std::size_t iterations_ = 0;
  std::size_t limit_ = 0;
};

void check_dimensions(const LinearProgram& lp) {
  const std::size_t n = lp.variables();
  if (!lp.lower.empty() && lp.lower.size() != n) {
    throw std::invalid_argument("lower bound vector size does not match objective");
  }
  if (!lp.upper.empty() && lp.upper.size() != n) {
    throw std::invalid_argument("upper bound vector size does not match objective");
  }
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const Constraint& row = lp.constraints[i];
    if (row.coefficients.size() != n) {
      throw std::invalid_argument("constraint " + std::to_string(i) + " has " +
                                  std::to_string(row.coefficients.size()) +
                                  " coefficients, expected " + std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) {
      throw std::invalid_argument("constraint " + std::to_string(i) + " has a non-finite rhs");
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw std::invalid_argument("constraint " + std::to_string(i) +
                                    " has a non-finite coefficient");
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lp.objective[j])) {
      throw std::invalid_argument("objective coefficient " + std::to_string(j) + " is not finite");
    }
    const double lo = lp.lower.empty() ? 0.0 : lp.lower[j];
    const double hi = lp.upper.empty() ? kInfinity : lp.upper[j];
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInfinity || hi == -kInfinity) {
      throw std::invalid_argument("variable " + std::to_string(j) + " has invalid bounds");
    }
  }
}

}  // namespace

Solution solve(const LinearProgram& program, const Options& options) {
  check_dimensions(program);
  Simplex simplex(program, options);
  return simplex.run(program);
}

}  // namespace ven::lp
