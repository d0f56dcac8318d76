#include <doctest.h>

#include <clfqp/checks.hpp>
#include <clfqp/qp.hpp>

#include <random>
#include <sstream>

using namespace clfqp;

TEST_CASE("scalar active bound") {
    // min x² s.t. x ≥ 1
    QpProblem p = QpProblem::zero(1);
    p.H(0, 0) = 2.0;
    p.lb(0) = 1.0;
    QpSolver solver;
    const QpSolution sol = solver.solve(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.kkt.max_residual() < 1e-10);
    CHECK(sol.active_set.size() == 1);
}

TEST_CASE("projection onto a line") {
    // min ‖x − (1,1)‖² s.t. x₁ + x₂ = 0
    QpProblem p = QpProblem::zero(2);
    p.H = 2.0 * Mat::Identity(2, 2);
    p.f = Vec::Constant(2, -2.0);
    p.A_eq = Mat::Ones(1, 2);
    p.b_eq = Vec::Zero(1);
    QpSolver solver;
    const QpSolution sol = solver.solve(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    CHECK(sol.x.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sol.kkt.max_residual() < 1e-10);
}

TEST_CASE("kkt residuals flag perturbed points") {
    QpProblem p = QpProblem::zero(1);
    p.H(0, 0) = 2.0;
    p.lb(0) = 1.0;
    QpSolver solver;
    const QpSolution sol = solver.solve(p);
    const KktReport good =
        kkt_residuals(p, sol.x, sol.nu, sol.mu, sol.mu_lb, sol.mu_ub);
    CHECK(good.max_residual() < 1e-10);
    Vec bad = sol.x;
    bad(0) = 0.5;  // violates the bound
    const KktReport report = kkt_residuals(p, bad, sol.nu, sol.mu, sol.mu_lb, sol.mu_ub);
    CHECK(report.primal > 0.4);
}

TEST_CASE("random strictly convex problems match the enumeration oracle") {
    std::mt19937_64 rng(101);
    QpSolver solver;
    int checked = 0;
    for (int k = 0; k < 120; ++k) {
        const int n = 1 + static_cast<int>(rng() % 12);
        const int m_eq = n > 1 ? static_cast<int>(rng() % std::min<int>(4, n)) : 0;
        const int m_in = static_cast<int>(rng() % 11);
        const QpProblem p = random_strictly_convex_qp(rng, n, m_eq, m_in);
        const OracleResult oracle = qp_enumeration_oracle(p);
        REQUIRE(oracle.feasible);
        const QpSolution sol = solver.solve(p);
        REQUIRE(sol.status == QpStatus::Optimal);
        CHECK(std::abs(sol.objective - oracle.objective) < 1e-8);
        CHECK(sol.kkt.max_residual() < 1e-6);
        ++checked;
    }
    CHECK(checked == 120);
}

TEST_CASE("oracle-optimal points have clean kkt residuals") {
    std::mt19937_64 rng(555);
    for (int k = 0; k < 10; ++k) {
        const QpProblem p = random_strictly_convex_qp(rng, 5, 1, 6);
        const OracleResult oracle = qp_enumeration_oracle(p);
        REQUIRE(oracle.feasible);
        QpSolver solver;
        const QpSolution sol = solver.solve(p);
        CHECK((sol.x - oracle.x).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("infeasible problems are reported as such") {
    QpProblem p = QpProblem::zero(1);
    p.H(0, 0) = 2.0;
    p.lb(0) = 1.0;
    p.ub(0) = 0.0;  // empty box
    QpSolver solver;
    CHECK(solver.solve(p).status == QpStatus::Infeasible);

    QpProblem q = QpProblem::zero(2);
    q.H = Mat::Identity(2, 2);
    q.A_in = Mat(2, 2);
    q.A_in << 1.0, 0.0, -1.0, 0.0;
    q.b_in = Vec(2);
    q.b_in << -1.0, -1.0;  // x ≤ −1 and x ≥ 1
    CHECK(solver.solve(q).status == QpStatus::Infeasible);
}

TEST_CASE("determinism: identical problems replay identical solves") {
    std::mt19937_64 rng(202);
    const QpProblem p = random_strictly_convex_qp(rng, 8, 2, 8);
    QpSolver solver;
    const QpSolution a = solver.solve(p);
    const QpSolution b = solver.solve(p);
    REQUIRE(a.status == QpStatus::Optimal);
    CHECK(a.x == b.x);  // bitwise
    CHECK(a.active_set == b.active_set);
    CHECK(a.iterations == b.iterations);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("objective decreases monotonically across active-set iterations") {
    std::mt19937_64 rng(303);
    QpSolver solver;
    for (int k = 0; k < 30; ++k) {
        const QpProblem p = random_strictly_convex_qp(rng, 10, 2, 10);
        const QpSolution sol = solver.solve(p);
        REQUIRE(sol.status == QpStatus::Optimal);
        for (size_t i = 1; i < sol.objective_trace.size(); ++i)
            CHECK(sol.objective_trace[i] <= sol.objective_trace[i - 1] + 1e-9);
    }
}

TEST_CASE("warm starts do not cost more iterations than cold starts") {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> dist(0.0, 0.01);
    QpSolver solver;
    int wins = 0, total = 0;
    for (int k = 0; k < 1000; ++k) {
        const QpProblem base = random_strictly_convex_qp(rng, 8, 2, 8);
        const QpSolution first = solver.solve(base);
        if (first.status != QpStatus::Optimal) continue;
        QpProblem perturbed = base;
        for (int i = 0; i < perturbed.f.size(); ++i) perturbed.f(i) += dist(rng);
        for (int i = 0; i < perturbed.b_in.size(); ++i) perturbed.b_in(i) += dist(rng);
        const QpSolution cold = solver.solve(perturbed);
        const QpSolution warm = solver.solve(perturbed, first.active_set);
        if (cold.status != QpStatus::Optimal || warm.status != QpStatus::Optimal) continue;
        CHECK(std::abs(cold.objective - warm.objective) < 1e-7);
        ++total;
        if (warm.iterations <= cold.iterations) ++wins;
    }
    REQUIRE(total > 900);
    CHECK(static_cast<double>(wins) / total >= 0.9);
}

TEST_CASE("dimension mismatches are rejected") {
    QpProblem p = QpProblem::zero(2);
    p.A_eq = Mat::Ones(1, 3);
    p.b_eq = Vec::Zero(1);
    QpSolver solver;
    CHECK_THROWS_AS(solver.solve(p), DimensionError);
}

TEST_CASE("asymmetric H beyond tolerance is rejected") {
    QpProblem p = QpProblem::zero(2);
    p.H << 1.0, 0.5, -0.5, 1.0;
    QpSolver solver;
    CHECK_THROWS_AS(solver.solve(p), DimensionError);
}

TEST_CASE("indefinite H beyond regularization is rejected") {
    QpProblem p = QpProblem::zero(2);
    p.H << 1.0, 0.0, 0.0, -1.0;
    QpSolver solver;
    CHECK_THROWS_AS(solver.solve(p), Error);
}

TEST_CASE("rank-deficient cost is regularized into solvability") {
    // Only x₀ appears in the cost; the ridge must keep the solve well posed.
    QpProblem p = QpProblem::zero(2);
    p.H(0, 0) = 2.0;
    p.f(0) = -2.0;
    p.lb = Vec::Constant(2, -5.0);
    p.ub = Vec::Constant(2, 5.0);
    QpSolver solver;
    const QpSolution sol = solver.solve(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    CHECK(sol.x(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("problem dump carries the documented header and full data") {
    QpProblem p = QpProblem::zero(2);
    p.H = 2.0 * Mat::Identity(2, 2);
    p.f << 1.0, -0.25;
    p.A_in = Mat::Ones(1, 2);
    p.b_in = Vec::Constant(1, 3.0);
    std::ostringstream os;
    dump_problem(p, os);
    const std::string text = os.str();
    CHECK(text.find("# clfqp qp dump v1") == 0);
    CHECK(text.find("\nn 2\n") != std::string::npos);
    CHECK(text.find("H 2 2") != std::string::npos);
    CHECK(text.find("-0.25") != std::string::npos);
    CHECK(text.find("A_in 1 2") != std::string::npos);
}
