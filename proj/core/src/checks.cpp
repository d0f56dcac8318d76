#include <clfqp/checks.hpp>

#include <clfqp/config.hpp>
#include <clfqp/csv.hpp>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace clfqp {
namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

struct Suite {
    std::vector<CheckResult> results;

    void add(const std::string& name, bool passed, const std::string& detail, double seconds) {
        results.push_back({name, passed, detail, seconds});
    }

    template <typename Fn>
    void timed(const std::string& name, Fn&& fn) {
        const auto t0 = Clock::now();
        bool passed = false;
        std::string detail;
        try {
            detail = fn(passed);
        } catch (const std::exception& e) {
            passed = false;
            detail = std::string("exception: ") + e.what();
        }
        add(name, passed, detail, std::chrono::duration<double>(Clock::now() - t0).count());
    }
};

Vec random_vec(Rng& rng, int n, double scale) {
    std::normal_distribution<double> dist(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = dist(rng);
    return v;
}

// ---------------------------------------------------------------- CARE

std::string check_care(bool& passed, bool full, Rng& rng) {
    double worst = 0.0;
    int count = 0;
    const int random_q = full ? 20 : 5;
    for (int m1 = 0; m1 <= 3; ++m1) {
        for (int m2 = 0; m2 <= 3; ++m2) {
            if (m1 + m2 == 0) continue;
            const OutputDynamics sys = make_output_dynamics(m1, m2);
            const int n = sys.eta_dim();
            {
                const Mat P = solve_care(sys.F, sys.G, Mat::Identity(n, n));
                worst = std::max(worst, care_residual(sys.F, sys.G, Mat::Identity(n, n), P));
                ++count;
            }
            std::uniform_real_distribution<double> mag(0.05, 20.0);
            for (int k = 0; k < random_q; ++k) {
                Vec d(n);
                for (int i = 0; i < n; ++i) d(i) = mag(rng);
                const Mat Q = d.asDiagonal();
                const Mat P = solve_care(sys.F, sys.G, Q);
                worst = std::max(worst, care_residual(sys.F, sys.G, Q, P));
                ++count;
            }
        }
    }
    passed = worst < 1e-8;
    std::ostringstream os;
    os << count << " problems, worst residual " << worst;
    return os.str();
}

// ------------------------------------------------------ RES-CLF bound

std::string check_resclf_bound(bool& passed, Rng& rng) {
    passed = true;
    std::ostringstream os;
    double worst_excess = 0.0;
    for (double eps : {1.0, 0.5, 0.25}) {
        const ResClf clf = make_resclf(1, 2, Mat::Identity(5, 5), eps);
        const Mat A = clf.sys.F - clf.sys.G * resclf_feedback_gain(clf);
        for (int trial = 0; trial < 5; ++trial) {
            Vec eta = random_vec(rng, 5, 1.0);
            const double v0 = clf.V(eta);
            const double dt = 1e-3;
            for (int k = 1; k <= 4000; ++k) {
                const Vec k1 = A * eta;
                const Vec k2 = A * (eta + 0.5 * dt * k1);
                const Vec k3 = A * (eta + 0.5 * dt * k2);
                const Vec k4 = A * (eta + dt * k3);
                eta += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                const double bound = v0 * std::exp(-clf.gamma * k * dt) * (1.0 + 1e-6);
                worst_excess = std::max(worst_excess, clf.V(eta) - bound);
                if (clf.V(eta) > bound) passed = false;
            }
        }
    }
    // Certified-rate scaling: λmin(Q)/(ε λmax(P)) doubles exactly when ε
    // halves (P does not depend on ε).
    {
        const ResClf a = make_resclf(0, 1, Mat::Identity(2, 2), 1.0);
        Eigen::SelfAdjointEigenSolver<Mat> es(a.P);
        const double rate1 = 1.0 / es.eigenvalues().maxCoeff();
        const double rate_half = 1.0 / (0.5 * es.eigenvalues().maxCoeff());
        if (!(rate_half >= 2.0 * rate1 * (1.0 - 1e-12))) passed = false;
    }
    os << "worst bound excess " << worst_excess;
    return os.str();
}

// ------------------------------------------------- finite differences

std::string check_finite_diff(bool& passed, bool full, Rng& rng) {
    const int samples = full ? 100 : 25;
    double worst = 0.0;
    const BuiltinModel leg = make_crouching_leg();
    const BuiltinModel dp = make_double_pendulum();
    for (int k = 0; k < samples; ++k) {
        {
            const Vec q = random_vec(rng, 6, 0.4);
            const Vec qd = random_vec(rng, 6, 0.5);
            const FiniteDiffReport r = finite_diff_check(leg.model, q, qd, 1e-6);
            worst = std::max({worst, r.max_jacobian_error, r.max_jdot_qd_error});
        }
        // Output relative-degree composition: ÿ₂ from J̇_y q̇ + J_y q̈
        // must match a central difference along the true flow.
        {
            const OutputSet outs =
                make_crouch_task_outputs(leg, DesiredTrajectory::constant(Vec::Zero(3)),
                                         PhaseParam{});
            Vec q = crouch_pose_for_hip_height({}, 0.75) + random_vec(rng, 6, 0.05);
            Vec qd = random_vec(rng, 6, 0.3);
            const Vec u = random_vec(rng, 3, 5.0);
            const double h = 1e-4;
            // Three points along the true flow; compare the second
            // difference at the middle one.
            const SimState s0{0.0, q, qd};
            const SimState s1 = step(leg.model, s0, u, LambdaPolicy::Explicit, h);
            const SimState s2 = step(leg.model, s1, u, LambdaPolicy::Explicit, h);
            const OutputJacobians oj = output_jacobians(outs, s1.q, s1.qd);
            const Vec qdd = forward_dynamics(leg.model, s1.q, s1.qd, u).qdd;
            const Vec pred = oj.Jdot_qd + oj.J_y * qdd;
            const Vec fd =
                (outs.actual_r2(s2.q) - 2.0 * outs.actual_r2(s1.q) + outs.actual_r2(s0.q)) /
                (h * h);
            worst = std::max(worst, (fd - pred).cwiseAbs().maxCoeff());
        }
    }
    // Constant-Jacobian and zero-velocity cases are exactly zero.
    {
        const Vec q = random_vec(rng, 2, 1.0);
        const FiniteDiffReport r = finite_diff_check(dp.model, q, Vec::Zero(2), 1e-6);
        worst = std::max(worst, r.max_jdot_qd_error);
    }
    passed = worst < 1e-5;
    std::ostringstream os;
    os << "worst error " << worst;
    return os.str();
}

// ----------------------------------------------- energy / λ routes

std::string check_energy(bool& passed) {
    // Conservative double pendulum, u = 0: E(t) − E(0) stays at
    // integration-error scale. Crouching leg with a held torque: E(t)
    // minus accumulated actuator work stays at the same scale; the
    // contact wrench is workless on the constraint manifold.
    double worst = 0.0;
    {
        const BuiltinModel dp = make_double_pendulum();
        SimState s{0.0, Vec::Zero(2), Vec::Zero(2)};
        s.q << 0.9, -0.4;
        const double e0 = dp.model.energy_fn(s.q, s.qd);
        for (int k = 0; k < 10000; ++k)
            s = step(dp.model, s, Vec::Zero(2), LambdaPolicy::Explicit, 1e-4);
        worst = std::max(worst, std::abs(dp.model.energy_fn(s.q, s.qd) - e0));
    }
    {
        const BuiltinModel leg = make_crouching_leg();
        Vec u(3);
        u << 0.8, -1.2, 0.4;
        Vec q = crouch_pose_for_hip_height({}, 0.8);
        Vec qd = Vec::Zero(6);
        double work = 0.0;
        const double dt = 1e-4;
        const double e0 = leg.model.energy_fn(q, qd);
        for (int k = 0; k < 10000; ++k) {
            // augmented RK4: state plus actuator-work quadrature
            const auto rate = [&](const Vec& qq, const Vec& vv) {
                const ForwardDynamics fd = forward_dynamics(leg.model, qq, vv, u);
                const DynamicsTerms d = eval_dynamics(leg.model, qq, vv);
                Vec out(13);
                out.head(6) = vv;
                out.segment(6, 6) = fd.qdd;
                out(12) = vv.dot(d.B * u + d.J.transpose() * fd.lambda);
                return out;
            };
            Vec y(13);
            y.head(6) = q;
            y.segment(6, 6) = qd;
            y(12) = work;
            const Vec k1 = rate(y.head(6), y.segment(6, 6));
            const Vec y2 = y + 0.5 * dt * k1;
            const Vec k2 = rate(y2.head(6), y2.segment(6, 6));
            const Vec y3 = y + 0.5 * dt * k2;
            const Vec k3 = rate(y3.head(6), y3.segment(6, 6));
            const Vec y4 = y + dt * k3;
            const Vec k4 = rate(y4.head(6), y4.segment(6, 6));
            y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            q = y.head(6);
            qd = y.segment(6, 6);
            work = y(12);
        }
        worst = std::max(worst, std::abs(leg.model.energy_fn(q, qd) - e0 - work));
    }
    passed = worst < 1e-6;
    std::ostringstream os;
    os << "worst drift " << worst;
    return os.str();
}

std::string check_lambda_routes(bool& passed) {
    // Explicit elimination vs. augmented block solve vs. the λ-folded
    // vector fields must integrate to the same trajectory.
    const BuiltinModel leg = make_crouching_leg();
    Vec q0 = crouch_pose_for_hip_height({}, 0.8);
    Vec u(3);
    u << 1.0, -2.0, 0.5;
    SimState a{0.0, q0, Vec::Zero(6)};
    SimState b = a;
    SimState c = a;
    const double dt = 1e-4;
    for (int k = 0; k < 10000; ++k) {
        a = step(leg.model, a, u, LambdaPolicy::Explicit, dt);
        b = step(leg.model, b, u, LambdaPolicy::KktBlock, dt);
        // f + g u route
        const auto rate = [&](const SimState& s) {
            const VectorFields vf = vector_fields(leg.model, s.q, s.qd, LambdaMode::Eliminate);
            return Vec(vf.f + vf.g * u);
        };
        const Vec k1 = rate(c);
        const Vec k2 = rate({0.0, c.q + 0.5 * dt * k1.head(6), c.qd + 0.5 * dt * k1.tail(6)});
        const Vec k3 = rate({0.0, c.q + 0.5 * dt * k2.head(6), c.qd + 0.5 * dt * k2.tail(6)});
        const Vec k4 = rate({0.0, c.q + dt * k3.head(6), c.qd + dt * k3.tail(6)});
        c.q += dt / 6.0 * (k1.head(6) + 2.0 * k2.head(6) + 2.0 * k3.head(6) + k4.head(6));
        c.qd += dt / 6.0 * (k1.tail(6) + 2.0 * k2.tail(6) + 2.0 * k3.tail(6) + k4.tail(6));
    }
    const double gap_ab = std::max((a.q - b.q).cwiseAbs().maxCoeff(),
                                   (a.qd - b.qd).cwiseAbs().maxCoeff());
    const double gap_ac = std::max((a.q - c.q).cwiseAbs().maxCoeff(),
                                   (a.qd - c.qd).cwiseAbs().maxCoeff());
    passed = gap_ab < 1e-6 && gap_ac < 1e-6;
    std::ostringstream os;
    os << "kkt gap " << gap_ab << ", vector-field gap " << gap_ac;
    return os.str();
}

}  // namespace

// ------------------------------------------------------------ oracle

OracleResult qp_enumeration_oracle(const QpProblem& problem) {
    QpProblem p = problem;
    p.validate_and_regularize();
    const int n = p.n();

    std::vector<Vec> rows;
    std::vector<double> rhs;
    for (int i = 0; i < p.n_in(); ++i) {
        rows.push_back(p.A_in.row(i).transpose());
        rhs.push_back(p.b_in(i));
    }
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(p.lb(i))) {
            Vec a = Vec::Zero(n);
            a(i) = -1.0;
            rows.push_back(a);
            rhs.push_back(-p.lb(i));
        }
        if (std::isfinite(p.ub(i))) {
            Vec a = Vec::Zero(n);
            a(i) = 1.0;
            rows.push_back(a);
            rhs.push_back(p.ub(i));
        }
    }
    const int m = static_cast<int>(rows.size());
    require(m <= 22, "enumeration oracle: too many inequality rows");

    OracleResult best;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        const int k = static_cast<int>(__builtin_popcountll(mask));
        if (k > n) continue;
        const int dim = n + p.n_eq() + k;
        Mat K = Mat::Zero(dim, dim);
        Vec r = Vec::Zero(dim);
        K.topLeftCorner(n, n) = p.H;
        r.head(n) = -p.f;
        int at = n;
        if (p.n_eq() > 0) {
            K.block(at, 0, p.n_eq(), n) = p.A_eq;
            K.block(0, at, n, p.n_eq()) = p.A_eq.transpose();
            r.segment(at, p.n_eq()) = p.b_eq;
            at += p.n_eq();
        }
        for (int i = 0; i < m; ++i) {
            if (!(mask & (1ull << i))) continue;
            K.block(at, 0, 1, n) = rows[i].transpose();
            K.block(0, at, n, 1) = rows[i];
            r(at) = rhs[i];
            ++at;
        }
        const Eigen::PartialPivLU<Mat> lu(K);
        Vec sol = lu.solve(r);
        if (!sol.allFinite()) continue;
        sol += lu.solve(r - K * sol);  // one refinement pass
        if (!((K * sol - r).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + r.cwiseAbs().maxCoeff())))
            continue;  // singular candidate set
        const Vec x = sol.head(n);
        bool feasible = true;
        if (p.n_eq() > 0 &&
            (p.A_eq * x - p.b_eq).cwiseAbs().maxCoeff() > 1e-9)
            feasible = false;
        for (int i = 0; feasible && i < m; ++i)
            if (rows[i].dot(x) > rhs[i] + 1e-10) feasible = false;
        if (!feasible) continue;
        const double obj = 0.5 * x.dot(p.H * x) + p.f.dot(x);
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.x = x;
        }
    }
    return best;
}

QpProblem random_strictly_convex_qp(std::mt19937_64& rng, int n, int m_eq, int m_in) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> slack_dist(0.0, 1.0);
    QpProblem p = QpProblem::zero(n);
    Mat M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = normal(rng);
    p.H = M.transpose() * M + 0.1 * Mat::Identity(n, n);
    for (int i = 0; i < n; ++i) p.f(i) = normal(rng);
    Vec anchor(n);
    for (int i = 0; i < n; ++i) anchor(i) = normal(rng);
    p.A_eq = Mat(m_eq, n);
    for (int i = 0; i < m_eq; ++i)
        for (int j = 0; j < n; ++j) p.A_eq(i, j) = normal(rng);
    p.b_eq = p.A_eq * anchor;
    p.A_in = Mat(m_in, n);
    p.b_in = Vec(m_in);
    for (int i = 0; i < m_in; ++i) {
        for (int j = 0; j < n; ++j) p.A_in(i, j) = normal(rng);
        const double s = slack_dist(rng);
        p.b_in(i) = p.A_in.row(i).dot(anchor) + (s < 0.3 ? 0.0 : s);
    }
    return p;
}

namespace {

std::string check_qp_oracle(bool& passed, bool full, Rng& rng) {
    QpSolver solver;
    const int problems = full ? 500 : 80;
    double worst = 0.0;
    int solved = 0;
    for (int k = 0; k < problems; ++k) {
        // Keep the enumeration tractable: large inequality counts come
        // with small n so 2^m × KKT stays cheap.
        std::uniform_int_distribution<int> n_dist(1, 30);
        int n = n_dist(rng);
        int m_in;
        if (k % 25 == 24) {
            m_in = 15 + static_cast<int>(rng() % 6);  // up to 20
            n = 2 + static_cast<int>(rng() % 7);
        } else {
            m_in = static_cast<int>(rng() % 15);
        }
        const int m_eq = n > 1 ? static_cast<int>(rng() % std::min(11, n)) : 0;
        const QpProblem p = random_strictly_convex_qp(rng, n, m_eq, m_in);
        const OracleResult oracle = qp_enumeration_oracle(p);
        const QpSolution sol = solver.solve(p);
        if (!oracle.feasible) continue;  // generator guarantees feasibility; be safe
        if (sol.status != QpStatus::Optimal) {
            passed = false;
            return "solver failed on a feasible random problem (index " + std::to_string(k) +
                   ")";
        }
        worst = std::max(worst, std::abs(sol.objective - oracle.objective));
        ++solved;
    }
    passed = worst < 1e-8;
    std::ostringstream os;
    os << solved << " problems, worst objective gap " << worst;
    return os.str();
}

// -------------------------------------------------------- theorem 1

std::string check_theorem1(bool& passed, bool full, Rng& rng, bool mutate_kp_sign) {
    const BuiltinModel dp = make_double_pendulum();
    const OutputSet outputs = make_identity_outputs(
        2, DesiredTrajectory::constant(Vec::Zero(2)), PhaseParam{});
    const ResClf clf = make_resclf(0, 2, Mat::Identity(4, 4), 0.5);

    ControllerSpec id_spec;
    id_spec.variant = ControllerVariant::IdClfQp;
    id_spec.sigma = 1e-10;
    id_spec.torque_bounds = false;
    id_spec.friction_pyramid = false;
    ControllerSpec clf_spec = id_spec;
    clf_spec.variant = ControllerVariant::ClfQp;

    QpSolver solver;
    const int samples = full ? 100 : 30;
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vec q = random_vec(rng, 2, 0.8);
        const Vec qd = random_vec(rng, 2, 0.8);
        // classical path: recover the realized auxiliary value v*
        const AssembledQp classical = assemble_clf_qp(dp.model, outputs, clf, q, qd, 0.0,
                                                      clf_spec);
        const QpSolution csol = solver.solve(classical.qp);
        if (csol.status != QpStatus::Optimal) {
            passed = false;
            return "classical CLF-QP failed to solve";
        }
        const VectorFields vf = vector_fields(dp.model, q, qd, LambdaMode::None);
        const OutputJacobians oj = output_jacobians(outputs, q, qd);
        const Vec a_y = error_accel_affine(outputs, q, qd, 0.0);
        const Vec v_star = oj.J_y * (vf.f.tail(2) + vf.g.bottomRows(2) * csol.x.head(2)) + a_y;

        const AssembledQp id = assemble_id_clf_qp(dp.model, outputs, clf, q, qd, 0.0, id_spec,
                                                  false, false);
        const QpSolution isol = solver.solve(id.qp);
        if (isol.status != QpStatus::Optimal) {
            passed = false;
            return "id-clf-qp failed to solve";
        }
        const Vec w_star = oj.J_y * isol.x.head(2) + a_y;
        worst = std::max(worst, (w_star - v_star).cwiseAbs().maxCoeff());
    }

    // Closed-loop sanity of the feedback-linearization path: with PD
    // gains of the right sign the output error contracts.
    Gains gains;
    gains.kv = Vec(0);
    gains.kp = Vec::Constant(2, mutate_kp_sign ? -60.0 : 60.0);
    gains.kd = Vec::Constant(2, 15.0);
    gains.epsilon = 1.0;
    if (mutate_kp_sign) gains.kp = -gains.kp.cwiseAbs();
    bool contracted = false;
    try {
        SimState s{0.0, Vec::Zero(2), Vec::Zero(2)};
        s.q << 0.4, -0.3;
        const double eta0 = eval_error(outputs, s.q, s.qd, 0.0).eta.norm();
        for (int k = 0; k < 5000; ++k) {
            const Vec u = fbl_control(dp.model, outputs, gains, s.q, s.qd, s.t);
            s = step(dp.model, s, u, LambdaPolicy::Explicit, 2e-4);
        }
        contracted = eval_error(outputs, s.q, s.qd, 1.0).eta.norm() < 0.05 * eta0;
    } catch (const Error&) {
        contracted = false;
    }

    passed = worst < 1e-6 && contracted;
    std::ostringstream os;
    os << "worst output-acceleration gap " << worst
       << (contracted ? ", fbl contraction ok" : ", fbl contraction FAILED");
    return os.str();
}

// -------------------------------------------------------- theorem 2

RunSetup crouch_setup(const BuiltinModel& leg, const OutputSet& outputs,
                      std::optional<ResClf> clf, double duration) {
    RunSetup s;
    s.model = &leg.model;
    s.outputs = &outputs;
    s.clf = std::move(clf);
    s.controller.variant = ControllerVariant::IdClfQpPlus;
    s.controller.sigma = 1e-5;
    s.controller.gains.kv = Vec(0);
    s.controller.gains.kp = Vec::Constant(3, 100.0);
    s.controller.gains.kd = Vec::Constant(3, 20.0);
    s.sim.dt = 1e-4;
    s.sim.control_period = 1e-3;
    s.sim.duration = duration;
    s.sim.q0 = crouch_pose_for_hip_height({}, 0.9);
    s.sim.qd0 = Vec::Zero(6);
    Vec dq = Vec::Zero(6);
    dq(3) = 0.06;
    dq(4) = -0.12;
    dq(5) = 0.06;
    s.sim.perturb_q = dq;
    return s;
}

std::string check_theorem2(bool& passed, bool full) {
    const BuiltinModel leg = make_crouching_leg();
    Vec from(3), to(3);
    from << 0.0, 0.9, 0.0;
    to << 0.0, 0.5, 0.0;
    PhaseParam phase;
    phase.t_start = 0.0;
    phase.t_end = 2.0;
    const OutputSet outputs = make_crouch_task_outputs(
        leg, DesiredTrajectory::smooth_move(from, to), phase);
    const ResClf clf = make_resclf(0, 3, Mat::Identity(6, 6), 0.5);

    const RunSetup setup = crouch_setup(leg, outputs, clf, full ? 2.0 : 0.2);
    const Theorem2Report report = theorem2_paired_run(setup);
    passed = report.mutually_optimal > 0 && report.violations == 0;
    std::ostringstream os;
    os << report.mutually_optimal << "/" << report.ticks << " mutually-optimal ticks, "
       << report.violations << " rate violations, min gap " << report.min_gap;
    return os.str();
}

// --------------------------------------------- pyramid containment

std::string check_pyramid_cone(bool& passed, bool full, Rng& rng) {
    ContactGeometry g;
    g.normal_row = 2;
    g.tangent_x_row = 0;
    g.tangent_y_row = 1;
    g.moment_x_row = -1;
    g.moment_y_row = -1;
    g.mu = 0.7;
    const int samples = full ? 1000000 : 100000;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> normal_force(0.0, 100.0);
    int inside = 0;
    for (int k = 0; k < samples; ++k) {
        Vec lambda(3);
        const double lz = normal_force(rng);
        const double bound = g.mu / std::sqrt(2.0) * lz;
        lambda(0) = unit(rng) * bound;
        lambda(1) = unit(rng) * bound;
        lambda(2) = lz;
        if (!pyramid_feasible(g, lambda, 1e-12)) {
            passed = false;
            return "generator produced a pyramid-infeasible sample";
        }
        if (cone_feasible(g, lambda, 1e-12)) ++inside;
    }
    passed = inside == samples;
    std::ostringstream os;
    os << inside << "/" << samples << " pyramid samples inside the cone";
    return os.str();
}

// ------------------------------------------------------ determinism

std::string check_determinism(bool& passed) {
    const BuiltinModel dp = make_double_pendulum();
    Vec target(2);
    target << 0.6, -0.4;
    const OutputSet outputs = make_identity_outputs(
        2, DesiredTrajectory::smooth_move(Vec::Zero(2), target), [] {
            PhaseParam p;
            p.t_end = 0.5;
            return p;
        }());
    const ResClf clf = make_resclf(0, 2, Mat::Identity(4, 4), 0.5);
    RunSetup s;
    s.model = &dp.model;
    s.outputs = &outputs;
    s.clf = clf;
    s.controller.variant = ControllerVariant::IdClfQpPlus;
    s.controller.gains.kv = Vec(0);
    s.controller.gains.kp = Vec::Constant(2, 100.0);
    s.controller.gains.kd = Vec::Constant(2, 20.0);
    s.sim.dt = 1e-4;
    s.sim.control_period = 1e-3;
    s.sim.duration = 0.2;
    s.sim.q0 = Vec::Zero(2);
    s.sim.qd0 = Vec::Zero(2);
    const std::string a = csv_string(run(s));
    const std::string b = csv_string(run(s));
    passed = !a.empty() && a == b;
    return passed ? "telemetry bytes identical across reruns" : "telemetry bytes differ";
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& options) {
    Suite suite;
    Rng rng(options.seed);

    suite.timed("care_residuals", [&](bool& ok) { return check_care(ok, options.full, rng); });
    suite.timed("resclf_exponential_bound",
                [&](bool& ok) { return check_resclf_bound(ok, rng); });
    suite.timed("finite_difference_agreement",
                [&](bool& ok) { return check_finite_diff(ok, options.full, rng); });
    suite.timed("energy_consistency", [&](bool& ok) { return check_energy(ok); });
    suite.timed("lambda_route_equivalence", [&](bool& ok) { return check_lambda_routes(ok); });
    suite.timed("qp_enumeration_oracle",
                [&](bool& ok) { return check_qp_oracle(ok, options.full, rng); });
    suite.timed("theorem1_output_equivalence", [&](bool& ok) {
        return check_theorem1(ok, options.full, rng, options.mutate_kp_sign);
    });
    suite.timed("theorem2_rate_ordering",
                [&](bool& ok) { return check_theorem2(ok, options.full); });
    suite.timed("pyramid_within_cone",
                [&](bool& ok) { return check_pyramid_cone(ok, options.full, rng); });
    suite.timed("telemetry_determinism", [&](bool& ok) { return check_determinism(ok); });
    return suite.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace clfqp
