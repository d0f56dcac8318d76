#pragma once

#include <clfqp/linalg.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace clfqp {

/// Dense convex QP
///   min ½ 𝒳ᵀH𝒳 + fᵀ𝒳
///   s.t. A_eq 𝒳 = b_eq,  A_in 𝒳 ≤ b_in,  lb ≤ 𝒳 ≤ ub.
/// H is symmetrized on validation and ridge-regularized to positive
/// definite when its smallest eigenvalue falls below 1e-9.
struct QpProblem {
    Mat H;
    Vec f;
    Mat A_eq;
    Vec b_eq;
    Mat A_in;
    Vec b_in;
    Vec lb;
    Vec ub;

    int n() const { return static_cast<int>(f.size()); }
    int n_eq() const { return static_cast<int>(b_eq.size()); }
    int n_in() const { return static_cast<int>(b_in.size()); }

    static QpProblem zero(int n);
    void validate_and_regularize();
};

enum class QpStatus { Optimal, Infeasible, MaxIter };

const char* to_string(QpStatus status);

struct KktReport {
    double stationarity = 0.0;
    double primal = 0.0;
    double complementarity = 0.0;
    double dual = 0.0;
    double max_residual() const;
};

struct QpSolution {
    Vec x;
    double objective = 0.0;
    QpStatus status = QpStatus::Infeasible;
    Vec nu;     // equality multipliers
    Vec mu;     // general inequality multipliers, ≥ 0
    Vec mu_lb;  // lower-bound multipliers, ≥ 0
    Vec mu_ub;  // upper-bound multipliers, ≥ 0
    KktReport kkt;
    /// Active inequality rows in the combined indexing:
    /// [0, n_in) general rows, then lower bounds, then upper bounds.
    std::vector<int> active_set;
    int iterations = 0;
    double solve_time_us = 0.0;
    std::vector<double> objective_trace;  // objective at each active-set iteration
};

/// Primal active-set solver with range-space KKT solves. Deterministic:
/// identical problems and warm starts replay the identical active-set
/// sequence. Hold one instance per thread.
class QpSolver {
public:
    QpSolution solve(const QpProblem& problem, std::span<const int> warm_active = {});
};

KktReport kkt_residuals(const QpProblem& problem, const Vec& x, const Vec& nu, const Vec& mu,
                        const Vec& mu_lb, const Vec& mu_ub);

/// Plain-text dump (documented header plus row-major values) for
/// offline debugging.
void dump_problem(const QpProblem& problem, std::ostream& os);

}  // namespace clfqp
