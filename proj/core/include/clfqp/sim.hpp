#pragma once

#include <clfqp/controllers.hpp>

#include <optional>
#include <string>
#include <vector>

namespace clfqp {

struct SimState {
    double t = 0.0;
    Vec q;
    Vec qd;
};

/// How λ is produced inside integrator stages: the explicit elimination
/// or the augmented block solve. The two must agree; keeping both gives
/// the cross-check.
enum class LambdaPolicy { Explicit, KktBlock };

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& msg, SimState last_good)
        : Error(msg), last_good_(std::move(last_good)) {}
    const SimState& last_good() const { return last_good_; }

private:
    SimState last_good_;
};

/// One RK4 step of the constrained dynamics with u held constant; λ is
/// recomputed inside every stage.
SimState step(const RobotModel& model, const SimState& state, const Vec& u,
              LambdaPolicy lambda_policy, double dt);

struct SimConfig {
    double dt = 1e-4;              // physics step, s
    double control_period = 1e-3;  // integer multiple of dt
    double duration = 2.0;         // s
    Vec q0;
    Vec qd0;
    Vec perturb_q;                 // additive state offset at t = 0 (may be empty)
    Vec perturb_qd;
    LambdaPolicy lambda_policy = LambdaPolicy::Explicit;
    double eta_tol = 1e-2;

    void validate(int n_q) const;
    int steps_per_tick() const;
};

struct TelemetryRow {
    double t = 0.0;
    Vec q;
    Vec qd;
    Vec u;
    Vec lambda;
    double V = 0.0;
    double Vdot_analytic = 0.0;
    double Vdot_fd = 0.0;
    double gamma_inst = std::numeric_limits<double>::quiet_NaN();
    double delta = 0.0;
    double eta_norm = 0.0;
    std::string status = "optimal";
    int active_set = 0;
    /// Deterministic solver-effort column (active-set iterations); wall
    /// time stays out of the reproducible telemetry and lives in the
    /// summary instead.
    int solve_us = 0;
    double wall_us = 0.0;  // not serialized
};

struct RunSummary {
    double peak_V = 0.0;
    double recovery_peak_V = 0.0;  // peak after the first control period
    double time_to_eta_tol = std::numeric_limits<double>::infinity();
    double effort_integral = 0.0;  // ∫ ‖u‖² dt
    int flagged_ticks = 0;
    double max_holonomic_drift = 0.0;  // max ‖J q̇‖
    double max_dynamics_residual = 0.0;
    double final_eta_norm = 0.0;
    double mean_wall_us = 0.0;
    double max_wall_us = 0.0;
};

struct RunSetup {
    const RobotModel* model = nullptr;
    const OutputSet* outputs = nullptr;
    std::optional<ResClf> clf;
    ControllerSpec controller;
    SimConfig sim;
    std::string label;
};

struct RunResult {
    std::vector<TelemetryRow> telemetry;
    RunSummary summary;
    bool aborted = false;
    std::string error;
    std::string label;
    int n_q = 0, n_u = 0, m_h = 0;
};

RunResult run(const RunSetup& setup);

/// Per-tick Theorem-2 diagnostic: drive the trajectory with the plus
/// variant and solve the non-plus problem on the identical states,
/// comparing the instantaneous rates recovered from each solution.
struct Theorem2Report {
    int ticks = 0;
    int mutually_optimal = 0;
    int violations = 0;  // γ⁺ < γ̃ − 1e-9
    double min_gap = std::numeric_limits<double>::infinity();
    bool ok() const { return mutually_optimal > 0 && violations == 0; }
};
Theorem2Report theorem2_paired_run(const RunSetup& plus_setup);

struct CompareResult {
    std::vector<RunResult> runs;
    std::optional<Theorem2Report> theorem2;
};

/// Run several setups sharing the same model and output set. When the
/// list holds an id-clf-qp / id-clf-qp+ pair with identical numerics the
/// Theorem-2 diagnostic is embedded in the result.
CompareResult compare(const std::vector<RunSetup>& setups);

}  // namespace clfqp
