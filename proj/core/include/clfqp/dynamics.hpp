#pragma once

#include <clfqp/linalg.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace clfqp {

/// Which wrench components a contact carries and where they live inside
/// the constraint's lambda block. Planar contacts have no y-tangent or
/// roll moment; unused slots stay at -1.
struct ContactGeometry {
    int normal_row = -1;
    int tangent_x_row = -1;
    int tangent_y_row = -1;
    int moment_x_row = -1;  // pitch moment, bounded by patch_length
    int moment_y_row = -1;  // roll moment, bounded by patch_width
    double mu = 0.0;
    double patch_length = 0.0;
    double patch_width = 0.0;
};

enum class ConstraintKind { Contact, Internal };

struct HolonomicConstraint {
    int dim = 0;
    ConstraintKind kind = ConstraintKind::Internal;
    std::function<Vec(const Vec& q)> value_fn;  // h(q); used for consistency checks
    std::function<Mat(const Vec& q)> jacobian_fn;
    std::function<Vec(const Vec& q, const Vec& qd)> jdot_qdot_fn;
    std::optional<ContactGeometry> contact;
    std::string name;
};

struct RobotModel {
    int n_q = 0;
    int n_u = 0;
    std::function<Mat(const Vec& q)> mass_matrix_fn;
    std::function<Vec(const Vec& q, const Vec& qd)> bias_fn;
    Mat actuation;  // B, n_q × n_u
    std::vector<HolonomicConstraint> constraints;
    Vec torque_lower;  // per actuator, N·m
    Vec torque_upper;
    std::function<double(const Vec& q, const Vec& qd)> energy_fn;  // optional
    std::string name;

    int constraint_dim() const;
    bool has_contacts() const;
    void validate_state(const Vec& q, const Vec& qd) const;
};

/// Everything needed to write D q̈ + H = B u + Jᵀ λ and J q̈ + J̇q̇ = 0.
/// J stacks all constraint Jacobians in declaration order.
struct DynamicsTerms {
    Mat D;
    Vec H;
    Mat B;
    Mat J;        // m_h × n_q (0 × n_q when unconstrained)
    Vec Jdot_qd;  // m_h
};

DynamicsTerms eval_dynamics(const RobotModel& model, const Vec& q, const Vec& qd);

/// Constraint force from the explicit elimination
///   λ = (J D⁻¹ Jᵀ)⁻¹ (J D⁻¹ (H − B u) − J̇ q̇).
/// Empty when the model has no constraints.
Vec solve_constraint_forces(const RobotModel& model, const Vec& q, const Vec& qd, const Vec& u);

/// Generalized acceleration under torque u with constraint forces
/// eliminated; the λ used is reported alongside.
struct ForwardDynamics {
    Vec qdd;
    Vec lambda;
};
ForwardDynamics forward_dynamics(const RobotModel& model, const Vec& q, const Vec& qd,
                                 const Vec& u);
/// Same acceleration via the augmented KKT system
///   [D −Jᵀ; J 0] [q̈; λ] = [Bu − H; −J̇q̇],
/// kept as an independent route for cross-checks.
ForwardDynamics forward_dynamics_kkt(const RobotModel& model, const Vec& q, const Vec& qd,
                                     const Vec& u);

enum class LambdaMode { None, Eliminate };

/// Control-affine form ẋ = f(x) + g(x) u of the constrained dynamics.
/// With LambdaMode::Eliminate the constraint force is an affine function
/// of u and is folded into both fields.
struct VectorFields {
    Vec f;  // 2 n_q
    Mat g;  // 2 n_q × n_u
};
VectorFields vector_fields(const RobotModel& model, const Vec& q, const Vec& qd,
                           LambdaMode lambda_mode);

/// Central-difference validation of constraint Jacobians and J̇q̇.
struct FiniteDiffReport {
    double max_jacobian_error = 0.0;   // vs d h(q)/dq, when h is available
    double max_jdot_qd_error = 0.0;    // vs d/dt [J(q(t)) q̇]
    bool jacobian_checked = false;
};
FiniteDiffReport finite_diff_check(const RobotModel& model, const Vec& q, const Vec& qd,
                                   double h);

}  // namespace clfqp
