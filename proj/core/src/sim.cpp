#include <clfqp/sim.hpp>

#include <algorithm>
#include <cmath>

namespace clfqp {
namespace {

Vec accel(const RobotModel& model, const Vec& q, const Vec& qd, const Vec& u,
          LambdaPolicy policy) {
    return policy == LambdaPolicy::Explicit ? forward_dynamics(model, q, qd, u).qdd
                                            : forward_dynamics_kkt(model, q, qd, u).qdd;
}

}  // namespace

SimState step(const RobotModel& model, const SimState& state, const Vec& u,
              LambdaPolicy lambda_policy, double dt) {
    require(dt > 0.0, "step: dt must be positive");
    const Vec& q = state.q;
    const Vec& qd = state.qd;

    SimState next;
    try {
        const Vec k1q = qd;
        const Vec k1v = accel(model, q, qd, u, lambda_policy);
        const Vec k2q = qd + 0.5 * dt * k1v;
        const Vec k2v = accel(model, q + 0.5 * dt * k1q, qd + 0.5 * dt * k1v, u, lambda_policy);
        const Vec k3q = qd + 0.5 * dt * k2v;
        const Vec k3v = accel(model, q + 0.5 * dt * k2q, qd + 0.5 * dt * k2v, u, lambda_policy);
        const Vec k4q = qd + dt * k3v;
        const Vec k4v = accel(model, q + dt * k3q, qd + dt * k3v, u, lambda_policy);
        next.t = state.t + dt;
        next.q = q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        next.qd = qd + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const IntegrationError&) {
        throw;
    } catch (const Error& e) {
        // Non-finite intermediates surface inside the stage evaluations.
        throw IntegrationError(
            "integration blew up at t = " + std::to_string(state.t) + ": " + e.what(), state);
    }
    if (!next.q.allFinite() || !next.qd.allFinite())
        throw IntegrationError("integration blew up at t = " + std::to_string(next.t), state);
    return next;
}

void SimConfig::validate(int n_q) const {
    require(dt > 0.0, "sim: dt must be positive");
    require(duration > 0.0, "sim: duration must be positive");
    require(control_period >= dt, "sim: control period must be at least dt");
    const double ratio = control_period / dt;
    require(std::abs(ratio - std::round(ratio)) < 1e-9 * ratio,
            "sim: control period must be an integer multiple of dt");
    require(q0.size() == n_q && qd0.size() == n_q, "sim: initial state dimension mismatch");
    require(perturb_q.size() == 0 || perturb_q.size() == n_q,
            "sim: perturbation dq dimension mismatch");
    require(perturb_qd.size() == 0 || perturb_qd.size() == n_q,
            "sim: perturbation dqd dimension mismatch");
}

int SimConfig::steps_per_tick() const {
    return static_cast<int>(std::llround(control_period / dt));
}

RunResult run(const RunSetup& setup) {
    require(setup.model != nullptr && setup.outputs != nullptr, "run: missing model or outputs");
    const RobotModel& model = *setup.model;
    setup.sim.validate(model.n_q);

    RunResult result;
    result.label = setup.label;
    result.n_q = model.n_q;
    result.n_u = model.n_u;
    result.m_h = model.constraint_dim();

    SimState state;
    state.t = 0.0;
    state.q = setup.sim.q0;
    state.qd = setup.sim.qd0;
    if (setup.sim.perturb_q.size() > 0) state.q += setup.sim.perturb_q;
    if (setup.sim.perturb_qd.size() > 0) state.qd += setup.sim.perturb_qd;

    ControllerSession session(model, *setup.outputs, setup.clf, setup.controller);

    const int steps = setup.sim.steps_per_tick();
    const int n_ticks =
        static_cast<int>(std::ceil(setup.sim.duration / setup.sim.control_period - 1e-12));

    RunSummary& s = result.summary;
    double wall_accum = 0.0;
    for (int k = 0; k < n_ticks; ++k) {
        TelemetryRow row;
        try {
            const ControlTick tick = session.tick(state.q, state.qd, state.t);
            row.t = state.t;
            row.q = state.q;
            row.qd = state.qd;
            row.u = tick.u;
            row.lambda = tick.lambda;
            row.V = tick.V;
            row.Vdot_analytic = tick.Vdot;
            row.gamma_inst = tick.gamma_inst;
            row.delta = tick.delta;
            row.eta_norm = tick.eta_norm;
            row.status = to_string(tick.status);
            row.active_set = tick.active_set_size;
            row.solve_us = tick.iterations;
            row.wall_us = tick.solve_time_us;
            result.telemetry.push_back(row);

            s.peak_V = std::max(s.peak_V, tick.V);
            if (k >= 1) s.recovery_peak_V = std::max(s.recovery_peak_V, tick.V);
            if (tick.eta_norm < setup.sim.eta_tol)
                s.time_to_eta_tol = std::min(s.time_to_eta_tol, state.t);
            s.effort_integral += tick.u.squaredNorm() * setup.sim.control_period;
            if (tick.flagged()) ++s.flagged_ticks;
            if (tick.status == QpStatus::Optimal)
                s.max_dynamics_residual = std::max(
                    s.max_dynamics_residual, dynamics_residual(model, state.q, state.qd, tick));
            if (model.constraint_dim() > 0) {
                const DynamicsTerms d = eval_dynamics(model, state.q, state.qd);
                s.max_holonomic_drift =
                    std::max(s.max_holonomic_drift, (d.J * state.qd).norm());
            }
            wall_accum += tick.solve_time_us;
            s.max_wall_us = std::max(s.max_wall_us, tick.solve_time_us);
            s.final_eta_norm = tick.eta_norm;

            for (int i = 0; i < steps; ++i)
                state = step(model, state, tick.u, setup.sim.lambda_policy, setup.sim.dt);
        } catch (const Error& e) {
            result.aborted = true;
            result.error = e.what();
            break;
        }
    }
    if (!result.telemetry.empty()) s.mean_wall_us = wall_accum / result.telemetry.size();

    // Centered finite difference of the logged V; one-sided at the edges.
    auto& rows = result.telemetry;
    const double dt_ctl = setup.sim.control_period;
    for (size_t k = 0; k < rows.size(); ++k) {
        if (rows.size() < 2) {
            rows[k].Vdot_fd = 0.0;
        } else if (k == 0) {
            rows[k].Vdot_fd = (rows[1].V - rows[0].V) / dt_ctl;
        } else if (k + 1 == rows.size()) {
            rows[k].Vdot_fd = (rows[k].V - rows[k - 1].V) / dt_ctl;
        } else {
            rows[k].Vdot_fd = (rows[k + 1].V - rows[k - 1].V) / (2.0 * dt_ctl);
        }
    }
    return result;
}

Theorem2Report theorem2_paired_run(const RunSetup& plus_setup) {
    require(plus_setup.controller.variant == ControllerVariant::IdClfQpPlus ||
                plus_setup.controller.variant == ControllerVariant::IdClfQpPlusDelta,
            "theorem2_paired_run drives the plus variant");
    require(plus_setup.clf.has_value(), "theorem2_paired_run needs a CLF");
    const RobotModel& model = *plus_setup.model;
    const OutputSet& outputs = *plus_setup.outputs;
    const ResClf& clf = *plus_setup.clf;
    plus_setup.sim.validate(model.n_q);

    ControllerSpec plus_spec = plus_setup.controller;
    ControllerSpec tilde_spec = plus_setup.controller;
    tilde_spec.variant = plus_spec.variant == ControllerVariant::IdClfQpPlusDelta
                             ? ControllerVariant::IdClfQpDelta
                             : ControllerVariant::IdClfQp;

    SimState state;
    state.q = plus_setup.sim.q0;
    state.qd = plus_setup.sim.qd0;
    if (plus_setup.sim.perturb_q.size() > 0) state.q += plus_setup.sim.perturb_q;
    if (plus_setup.sim.perturb_qd.size() > 0) state.qd += plus_setup.sim.perturb_qd;

    ControllerSession plus_session(model, outputs, plus_setup.clf, plus_spec);
    QpSolver tilde_solver;
    std::vector<int> tilde_warm;

    const int steps = plus_setup.sim.steps_per_tick();
    const int n_ticks = static_cast<int>(
        std::ceil(plus_setup.sim.duration / plus_setup.sim.control_period - 1e-12));

    Theorem2Report report;
    for (int k = 0; k < n_ticks; ++k) {
        const ControlTick plus_tick = plus_session.tick(state.q, state.qd, state.t);
        const AssembledQp tilde = assemble_id_clf_qp(model, outputs, clf, state.q, state.qd,
                                                     state.t, tilde_spec, /*plus=*/false,
                                                     /*relaxed=*/false, nullptr);
        const QpSolution tilde_sol = tilde_solver.solve(tilde.qp, tilde_warm);
        ++report.ticks;

        const OutputError err = eval_error(outputs, state.q, state.qd, state.t);
        const double V = clf.V(err.eta);
        if (plus_tick.status == QpStatus::Optimal && tilde_sol.status == QpStatus::Optimal &&
            plus_tick.fallback_level == 0 && V > 1e-12) {
            tilde_warm = tilde_sol.active_set;
            const OutputJacobians oj = output_jacobians(outputs, state.q, state.qd);
            const Vec a_y = error_accel_affine(outputs, state.q, state.qd, state.t);
            const auto rate_of = [&](const Vec& qdd) {
                return -(clf.LFV(err.eta) + clf.LGV(err.eta).dot(oj.J_y * qdd + a_y)) / V;
            };
            const double gamma_plus = rate_of(plus_tick.qdd);
            const double gamma_tilde =
                rate_of(tilde_sol.x.segment(tilde.layout.qdd_offset(), model.n_q));
            ++report.mutually_optimal;
            report.min_gap = std::min(report.min_gap, gamma_plus - gamma_tilde);
            if (gamma_plus < gamma_tilde - 1e-9) ++report.violations;
        }
        for (int i = 0; i < steps; ++i)
            state = step(model, state, plus_tick.u, plus_setup.sim.lambda_policy,
                         plus_setup.sim.dt);
    }
    return report;
}

CompareResult compare(const std::vector<RunSetup>& setups) {
    require(!setups.empty(), "compare: no runs given");
    for (const auto& s : setups) {
        require(s.model == setups.front().model && s.outputs == setups.front().outputs,
                "compare: all runs must share the model and output set");
    }
    CompareResult result;
    for (const auto& s : setups) result.runs.push_back(run(s));

    // Embed the Theorem-2 diagnostic when a plus/non-plus pair with the
    // same numerics is present.
    for (const auto& plus : setups) {
        if (plus.controller.variant != ControllerVariant::IdClfQpPlus) continue;
        for (const auto& tilde : setups) {
            if (tilde.controller.variant != ControllerVariant::IdClfQp) continue;
            if (tilde.sim.control_period != plus.sim.control_period) continue;
            result.theorem2 = theorem2_paired_run(plus);
            return result;
        }
    }
    return result;
}

}  // namespace clfqp
