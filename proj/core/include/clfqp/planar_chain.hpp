#pragma once

#include <clfqp/linalg.hpp>

#include <string>
#include <vector>

namespace clfqp {

/// Serial planar chain in the x-z plane. Each joint adds one generalized
/// coordinate; revolute angles are relative to the parent link and the
/// world angle of a link is the sum of revolute coordinates along its
/// ancestry. Mass matrix and bias forces are assembled from exact COM
/// Jacobians and their time derivatives (d'Alembert), so no finite
/// differencing enters the model itself.
class PlanarChain {
public:
    enum class JointType { PrismaticX, PrismaticZ, Revolute };

    struct Link {
        JointType joint;
        Eigen::Vector2d joint_origin{0.0, 0.0};  // in parent link frame
        double mass = 0.0;
        double inertia = 0.0;                    // about COM
        Eigen::Vector2d com{0.0, 0.0};           // in link frame
        double damping = 0.0;                    // viscous, N·m·s (or N·s)
        std::string name;
    };

    explicit PlanarChain(std::vector<Link> links, double gravity = 9.81);

    int dof() const { return static_cast<int>(links_.size()); }
    double gravity() const { return gravity_; }
    void set_gravity(double g) { gravity_ = g; }
    const std::vector<Link>& links() const { return links_; }

    /// World pose of a link frame: origin and absolute angle.
    struct Pose {
        Eigen::Vector2d origin;
        double angle;
    };
    Pose link_pose(const Vec& q, int body) const;

    Eigen::Vector2d point_position(const Vec& q, int body, const Eigen::Vector2d& local) const;
    /// 2×n Jacobian of a body-fixed point (world frame).
    Mat point_jacobian(const Vec& q, int body, const Eigen::Vector2d& local) const;
    Eigen::Vector2d point_velocity(const Vec& q, const Vec& qd, int body,
                                   const Eigen::Vector2d& local) const;
    /// J̇ q̇ of a body-fixed point (the acceleration at q̈ = 0).
    Eigen::Vector2d point_bias_acc(const Vec& q, const Vec& qd, int body,
                                   const Eigen::Vector2d& local) const;

    double link_angle(const Vec& q, int body) const;
    /// Row of ∂(absolute angle)/∂q; constant for these chains.
    RowVec angle_jacobian(int body) const;

    Mat mass_matrix(const Vec& q) const;
    /// Coriolis/centrifugal + gravity + viscous damping, N·m scale.
    Vec bias_forces(const Vec& q, const Vec& qd) const;
    /// Kinetic + potential energy.
    double energy(const Vec& q, const Vec& qd) const;

private:
    void check_q(const Vec& q) const;

    std::vector<Link> links_;
    double gravity_;
};

}  // namespace clfqp
