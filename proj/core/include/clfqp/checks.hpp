#pragma once

#include <clfqp/qp.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace clfqp {

/// Reference optimum by brute force: enumerate every subset of the
/// inequality rows (general rows and finite bounds) as a candidate
/// active set, solve the equality-KKT system, keep the best feasible
/// point. Shares nothing with QpSolver's solve path.
struct OracleResult {
    bool feasible = false;
    double objective = 0.0;
    Vec x;
};
OracleResult qp_enumeration_oracle(const QpProblem& problem);

/// Feasible-by-construction strictly convex random QP (λmin(H) ≥ 0.1).
QpProblem random_strictly_convex_qp(std::mt19937_64& rng, int n, int m_eq, int m_in);

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct CheckOptions {
    bool full = false;          // full sample counts vs. quick
    std::uint64_t seed = 0x5eed;
    bool mutate_kp_sign = false;  // test fixture: must make the FBL suite fail
};

/// Cross-module invariant suites: CARE residuals, exponential bounds,
/// finite-difference agreement, energy and λ-elimination consistency,
/// the QP enumeration oracle, both theorem suites, pyramid/cone
/// containment and telemetry determinism.
std::vector<CheckResult> run_checks(const CheckOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace clfqp
