#include <doctest.h>

#include <clfqp/outputs.hpp>
#include <clfqp/sim.hpp>

#include <random>

using namespace clfqp;

namespace {

PhaseParam time_phase(double t0, double t1) {
    PhaseParam p;
    p.mode = PhaseParam::Mode::Time;
    p.t_start = t0;
    p.t_end = t1;
    return p;
}

}  // namespace

TEST_CASE("time-based phase hits the endpoints and midpoint") {
    const PhaseParam p = time_phase(0.0, 2.0);
    CHECK(eval_phase(p, 1.0, Vec()) == doctest::Approx(0.5));
    CHECK(eval_phase(p, 0.0, Vec()) == doctest::Approx(0.0));
    CHECK(eval_phase(p, 5.0, Vec()) == doctest::Approx(1.0));  // clamped
    CHECK(eval_phase_rate(p, 5.0, Vec(), Vec()) == 0.0);
    CHECK(eval_phase_rate(p, 1.0, Vec(), Vec()) == doctest::Approx(0.5));
}

TEST_CASE("state-based phase follows the designated output") {
    PhaseParam p;
    p.mode = PhaseParam::Mode::State;
    p.initial_value = 0.2;
    p.rate = 0.5;
    p.position_fn = [](const Vec& q) { return q(0); };
    p.position_grad_fn = [](const Vec& q) {
        RowVec g = RowVec::Zero(q.size());
        g(0) = 1.0;
        return g;
    };
    Vec q(1);
    q << 0.2 + 0.5 * 0.3;
    CHECK(eval_phase(p, 0.0, q) == doctest::Approx(0.3));
    Vec qd(1);
    qd << 0.25;
    CHECK(eval_phase_rate(p, 0.0, q, qd) == doctest::Approx(0.5));

    PhaseParam bad = p;
    bad.rate = 0.0;
    CHECK_THROWS_AS(eval_phase(bad, 0.0, q), DimensionError);
}

TEST_CASE("phase is nondecreasing along time and tracked progress") {
    const PhaseParam p = time_phase(0.5, 1.5);
    double prev = -1.0;
    for (double t = 0.0; t < 2.5; t += 0.01) {
        const double tau = eval_phase(p, t, Vec());
        CHECK(tau >= prev);
        prev = tau;
    }
}

TEST_CASE("perfect tracking gives zero error, static desired gives zero rate") {
    Vec target(2);
    target << 0.3, -0.1;
    const OutputSet outs =
        make_identity_outputs(2, DesiredTrajectory::constant(target), time_phase(0, 1));
    const OutputError err = eval_error(outs, target, Vec::Zero(2), 0.7);
    CHECK(err.eta.cwiseAbs().maxCoeff() < 1e-14);
    const OutputError off = eval_error(outs, Vec::Zero(2), Vec::Zero(2), 0.7);
    CHECK(off.y2dot.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("identity outputs have identity Jacobian and zero bias") {
    const OutputSet outs =
        make_identity_outputs(3, DesiredTrajectory::constant(Vec::Zero(3)), time_phase(0, 1));
    const OutputJacobians oj = output_jacobians(outs, Vec::Zero(3), Vec::Zero(3));
    CHECK((oj.J_y - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oj.Jdot_qd.cwiseAbs().maxCoeff() == 0.0);
    CHECK(oj.full_row_rank);
}

TEST_CASE("velocity output row appears verbatim in the Jacobian") {
    RowVec c(2);
    c << 2.0, -1.0;
    Vec zero3 = Vec::Zero(2);
    const OutputSet outs = make_velocity_position_outputs(
        2, c, {1}, DesiredTrajectory::constant(Vec::Zero(2)), time_phase(0, 1));
    const OutputJacobians oj = output_jacobians(outs, Vec::Zero(2), Vec::Zero(2));
    CHECK((oj.J_y.row(0) - c).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oj.J_y(1, 1) == 1.0);
}

TEST_CASE("desired-trajectory endpoints and derivatives are consistent") {
    Vec from(2), to(2);
    from << 0.1, -0.2;
    to << 0.8, 0.4;
    const DesiredTrajectory traj = DesiredTrajectory::smooth_move(from, to);
    CHECK((traj.value(0.0) - traj.start_values()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((traj.value(1.0) - traj.end_values()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((traj.value(0.0) - from).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((traj.value(1.0) - to).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(traj.deriv(0.0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(traj.deriv(1.0).cwiseAbs().maxCoeff() < 1e-12);

    // derivative evaluators vs central differences
    const double h = 1e-6;
    for (double tau : {0.15, 0.5, 0.85}) {
        const Vec fd1 = (traj.value(tau + h) - traj.value(tau - h)) / (2.0 * h);
        CHECK((fd1 - traj.deriv(tau)).cwiseAbs().maxCoeff() < 1e-8);
        const Vec fd2 = (traj.deriv(tau + h) - traj.deriv(tau - h)) / (2.0 * h);
        CHECK((fd2 - traj.deriv2(tau)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("bezier basis matches an equivalent power polynomial") {
    // Control points of a quadratic Bezier vs its expanded power form.
    Vec bez(3);
    bez << 1.0, 2.0, 0.5;
    Vec pow3(3);
    pow3 << 1.0, 2.0, -2.5;  // b0 + 2(b1-b0)τ + (b0-2b1+b2)τ²
    const DesiredTrajectory b(DesiredTrajectory::Basis::Bezier, {bez});
    const DesiredTrajectory p(DesiredTrajectory::Basis::Power, {pow3});
    for (double tau : {0.0, 0.3, 0.77, 1.0}) {
        CHECK(b.value(tau)(0) == doctest::Approx(p.value(tau)(0)).epsilon(1e-12));
        CHECK(b.deriv(tau)(0) == doctest::Approx(p.deriv(tau)(0)).epsilon(1e-12));
        CHECK(b.deriv2(tau)(0) == doctest::Approx(p.deriv2(tau)(0)).epsilon(1e-12));
    }
}

TEST_CASE("polynomial degree above 7 is rejected") {
    std::vector<Vec> coeffs{Vec::Zero(9)};
    CHECK_THROWS_AS(DesiredTrajectory(DesiredTrajectory::Basis::Power, coeffs),
                    DimensionError);
}

TEST_CASE("error velocity matches finite differences of the error output") {
    const BuiltinModel leg = make_crouching_leg();
    Vec from(3), to(3);
    from << 0.0, 0.9, 0.0;
    to << 0.0, 0.5, 0.0;
    const OutputSet outs = make_crouch_task_outputs(
        leg, DesiredTrajectory::smooth_move(from, to), time_phase(0.0, 2.0));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist(0.0, 0.2);
    for (int k = 0; k < 10; ++k) {
        Vec q = crouch_pose_for_hip_height({}, 0.8);
        for (int i = 3; i < 6; ++i) q(i) += dist(rng);
        Vec qd = Vec::Zero(6);
        for (int i = 3; i < 6; ++i) qd(i) = dist(rng);
        const double t = 0.5 + 0.1 * k;

        const OutputError err = eval_error(outs, q, qd, t);
        const double h = 1e-5;
        const Vec y2_plus = eval_error(outs, q + h * qd, qd, t + h).y2;
        const Vec y2_minus = eval_error(outs, q - h * qd, qd, t - h).y2;
        const Vec fd = (y2_plus - y2_minus) / (2.0 * h);
        CHECK((fd - err.y2dot).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("relative-degree-2 outputs do not depend on velocity") {
    const BuiltinModel leg = make_crouching_leg();
    const OutputSet outs = make_crouch_task_outputs(
        leg, DesiredTrajectory::constant(Vec::Zero(3)), time_phase(0, 1));
    const Vec q = crouch_pose_for_hip_height({}, 0.75);
    Vec qd1 = Vec::Zero(6), qd2 = Vec::Ones(6);
    Mat J1, J2;
    Vec jd1, jd2;
    outs.jacobians_fn(q, qd1, J1, jd1);
    outs.jacobians_fn(q, qd2, J2, jd2);
    CHECK((J1 - J2).cwiseAbs().maxCoeff() == 0.0);  // J_y is configuration-only
}

TEST_CASE("error acceleration affine term closes the chain rule") {
    // Along a simulated trajectory the composed (J̇_y q̇ + J_y q̈) − ff
    // must equal the numerically differentiated error rate.
    const BuiltinModel leg = make_crouching_leg();
    Vec from(3), to(3);
    from << 0.0, 0.85, 0.0;
    to << 0.0, 0.55, 0.0;
    const OutputSet outs = make_crouch_task_outputs(
        leg, DesiredTrajectory::smooth_move(from, to), time_phase(0.0, 1.0));
    Vec u(3);
    u << 1.0, -2.0, 0.5;
    SimState s{0.3, crouch_pose_for_hip_height({}, 0.8), Vec::Zero(6)};
    const double h = 1e-5;
    const SimState s1 = step(leg.model, s, u, LambdaPolicy::Explicit, h);
    const SimState s2 = step(leg.model, s1, u, LambdaPolicy::Explicit, h);

    const OutputJacobians oj = output_jacobians(outs, s1.q, s1.qd);
    const Vec a_y = error_accel_affine(outs, s1.q, s1.qd, s1.t);
    const Vec qdd = forward_dynamics(leg.model, s1.q, s1.qd, u).qdd;
    const Vec pred = oj.J_y * qdd + a_y;

    const Vec e0 = eval_error(outs, s.q, s.qd, s.t).y2;
    const Vec e1 = eval_error(outs, s1.q, s1.qd, s1.t).y2;
    const Vec e2 = eval_error(outs, s2.q, s2.qd, s2.t).y2;
    const Vec fd = (e2 - 2.0 * e1 + e0) / (h * h);
    CHECK((fd - pred).cwiseAbs().maxCoeff() < 1e-4);
}
