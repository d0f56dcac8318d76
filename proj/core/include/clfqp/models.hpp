#pragma once

#include <clfqp/dynamics.hpp>
#include <clfqp/planar_chain.hpp>

#include <memory>

namespace clfqp {

/// A built-in model together with the chain it was generated from; the
/// chain is what task-space output sets hang their kinematics on.
struct BuiltinModel {
    RobotModel model;
    std::shared_ptr<const PlanarChain> chain;
};

/// Two-link chain with point masses at the link ends, fully actuated,
/// no constraints. Zero configuration hangs straight down.
struct DoublePendulumParams {
    double m1 = 1.0, m2 = 1.0;      // kg
    double l1 = 1.0, l2 = 1.0;      // m
    double gravity = 9.81;          // m/s²
    double damping = 0.0;           // N·m·s per joint
    double torque_limit = 40.0;     // N·m
};
BuiltinModel make_double_pendulum(const DoublePendulumParams& p = {});

/// Cart with a pole; one force actuator on the cart (n_u = 1 < n_q = 2).
/// Zero pole angle points straight up.
struct CartPoleParams {
    double cart_mass = 1.0;
    double pole_mass = 0.3;
    double pole_length = 0.5;
    double gravity = 9.81;
    double damping = 0.0;
    double force_limit = 60.0;  // N
};
BuiltinModel make_cart_pole(const CartPoleParams& p = {});

/// Planar three-link leg (shank, thigh, torso) on a flat foot. The foot
/// patch contact contributes tangent/normal force rows plus a pitch
/// moment row, so the stack is underactuated at the contact. Coordinates:
/// ankle x, ankle z, foot pitch, ankle angle, knee angle, hip angle.
struct CrouchLegParams {
    double foot_mass = 0.5;
    double shank_mass = 1.0;
    double thigh_mass = 1.5;
    double torso_mass = 10.0;
    double shank_length = 0.5;
    double thigh_length = 0.5;
    double torso_com = 0.25;     // m above hip
    double ankle_height = 0.05;  // ankle above patch center
    double foot_inertia = 0.003;
    double torso_inertia = 0.3;
    double gravity = 9.81;
    double damping = 0.0;
    double mu = 0.8;
    double patch_length = 0.25;  // m
    double torque_limit = 120.0;
};
BuiltinModel make_crouching_leg(const CrouchLegParams& p = {});

/// Symmetric rest pose with the patch centered at the world origin, the
/// torso vertical, and the hip at the requested height. Throws when the
/// height is outside the leg's reach.
Vec crouch_pose_for_hip_height(const CrouchLegParams& p, double hip_height);

/// Hip joint position for a crouching-leg configuration.
Eigen::Vector2d crouch_hip_position(const PlanarChain& chain, const Vec& q);

/// Assemble a RobotModel whose callbacks delegate to a planar chain.
RobotModel model_from_chain(std::shared_ptr<const PlanarChain> chain, Mat actuation,
                            Vec torque_lower, Vec torque_upper,
                            std::vector<HolonomicConstraint> constraints, std::string name);

}  // namespace clfqp
