#pragma once

#include <clfqp/linalg.hpp>
#include <clfqp/models.hpp>

#include <functional>
#include <vector>

namespace clfqp {

/// Per-output polynomial curves over the phase τ ∈ [0,1], degree ≤ 7,
/// in power or Bezier basis.
class DesiredTrajectory {
public:
    enum class Basis { Power, Bezier };

    DesiredTrajectory() = default;
    DesiredTrajectory(Basis basis, std::vector<Vec> coefficients);

    int size() const { return static_cast<int>(coeffs_.size()); }
    Vec value(double tau) const;
    Vec deriv(double tau) const;   // d/dτ
    Vec deriv2(double tau) const;  // d²/dτ²

    const Vec& start_values() const { return start_; }
    const Vec& end_values() const { return end_; }
    Basis basis() const { return basis_; }
    const std::vector<Vec>& coefficients() const { return coeffs_; }

    static DesiredTrajectory constant(const Vec& values);
    /// Quintic rest-to-rest blend: zero velocity and acceleration at both
    /// ends, per output.
    static DesiredTrajectory smooth_move(const Vec& from, const Vec& to);

private:
    Basis basis_ = Basis::Power;
    std::vector<Vec> coeffs_;
    Vec start_, end_;
};

struct PhaseParam {
    enum class Mode { Time, State };
    Mode mode = Mode::Time;
    // time-based
    double t_start = 0.0;
    double t_end = 1.0;
    // state-based
    int output_index = 0;       // which relative-degree-1 output modulates τ
    double initial_value = 0.0;  // δy₁ at the start of the segment
    double rate = 1.0;           // v̄, desired progression rate
    std::function<double(const Vec& q)> position_fn;       // δy₁(q)
    std::function<RowVec(const Vec& q)> position_grad_fn;  // ∂δy₁/∂q

    void validate() const;
};

/// Normalized phase, clamped to [0,1].
double eval_phase(const PhaseParam& phase, double t, const Vec& q);
/// dτ/dt; zero while the raw phase sits outside [0,1].
double eval_phase_rate(const PhaseParam& phase, double t, const Vec& q, const Vec& qd);

/// Tracking outputs: m1 relative-degree-1 rows stacked over m2
/// relative-degree-2 rows. Jacobians follow that row order.
struct OutputSet {
    int m1 = 0;
    int m2 = 0;
    std::function<Vec(const Vec& q, const Vec& qd)> actual_r1;
    std::function<Vec(const Vec& q)> actual_r2;
    /// Fills J_y ((m1+m2) × n_q) and J̇_y q̇ of the actual outputs.
    std::function<void(const Vec& q, const Vec& qd, Mat& J_y, Vec& Jdot_qd)> jacobians_fn;
    DesiredTrajectory desired;
    PhaseParam phase;

    int m() const { return m1 + m2; }
    int eta_dim() const { return m1 + 2 * m2; }
    void validate() const;
};

/// η = (y₁ᵀ, y₂ᵀ, ẏ₂ᵀ)ᵀ plus the pieces it was built from.
struct OutputError {
    Vec eta;
    Vec y1;
    Vec y2;
    Vec y2dot;
    double tau = 0.0;
    double tau_rate = 0.0;
};
OutputError eval_error(const OutputSet& outputs, const Vec& q, const Vec& qd, double t);

struct OutputJacobians {
    Mat J_y;
    Vec Jdot_qd;
    Vec singular_values;
    bool full_row_rank = true;
};
OutputJacobians output_jacobians(const OutputSet& outputs, const Vec& q, const Vec& qd);

/// Affine part a of the error-output rate dynamics
///   (ẏ₁ᵀ, ÿ₂ᵀ)ᵀ = J_y q̈ + a,
/// i.e. J̇_y q̇ minus the desired-trajectory feedforward at the current
/// phase. This is the "J̇_y q̇" every controller formula consumes.
Vec error_accel_affine(const OutputSet& outputs, const Vec& q, const Vec& qd, double t);

// ---- built-in output sets ----

/// y₂ = q with a desired joint trajectory; m1 = 0.
OutputSet make_identity_outputs(int n_q, DesiredTrajectory desired, PhaseParam phase);

/// Crouching-leg task outputs: hip x, hip z, torso pitch (all relative
/// degree 2).
OutputSet make_crouch_task_outputs(const BuiltinModel& leg, DesiredTrajectory desired,
                                   PhaseParam phase);

/// Pole angle output for the cart-pole; m2 = 1.
OutputSet make_cartpole_angle_output(DesiredTrajectory desired, PhaseParam phase);

/// One velocity output y₁ = c·q̇ (with δy₁ = c·q available for
/// state-based phasing) plus selected configuration outputs.
OutputSet make_velocity_position_outputs(int n_q, const RowVec& velocity_row,
                                         std::vector<int> position_coords,
                                         DesiredTrajectory desired, PhaseParam phase);

}  // namespace clfqp
