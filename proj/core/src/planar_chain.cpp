#include <clfqp/planar_chain.hpp>

#include <cmath>

namespace clfqp {
namespace {

Eigen::Matrix2d rot(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix2d R;
    R << c, -s, s, c;
    return R;
}

// 90° rotation, d/dθ of R(θ)v = perp(R(θ)v).
Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

}  // namespace

PlanarChain::PlanarChain(std::vector<Link> links, double gravity)
    : links_(std::move(links)), gravity_(gravity) {
    require(!links_.empty(), "PlanarChain: no links");
}

void PlanarChain::check_q(const Vec& q) const {
    require(q.size() == dof(), "PlanarChain: state dimension mismatch");
}

PlanarChain::Pose PlanarChain::link_pose(const Vec& q, int body) const {
    check_q(q);
    require(body >= 0 && body < dof(), "PlanarChain: bad body index");
    Eigen::Vector2d origin{0.0, 0.0};
    double angle = 0.0;
    for (int i = 0; i <= body; ++i) {
        origin += rot(angle) * links_[i].joint_origin;
        switch (links_[i].joint) {
            case JointType::PrismaticX: origin.x() += q(i); break;
            case JointType::PrismaticZ: origin.y() += q(i); break;
            case JointType::Revolute: angle += q(i); break;
        }
    }
    return {origin, angle};
}

Eigen::Vector2d PlanarChain::point_position(const Vec& q, int body,
                                            const Eigen::Vector2d& local) const {
    const Pose pose = link_pose(q, body);
    return pose.origin + rot(pose.angle) * local;
}

Mat PlanarChain::point_jacobian(const Vec& q, int body, const Eigen::Vector2d& local) const {
    const Eigen::Vector2d p = point_position(q, body, local);
    Mat J = Mat::Zero(2, dof());
    for (int j = 0; j <= body; ++j) {
        switch (links_[j].joint) {
            case JointType::PrismaticX: J(0, j) = 1.0; break;
            case JointType::PrismaticZ: J(1, j) = 1.0; break;
            case JointType::Revolute: {
                // Joint j's anchor is the origin of link j's frame.
                const Eigen::Vector2d a = link_pose(q, j).origin;
                J.col(j) = perp(p - a);
                break;
            }
        }
    }
    return J;
}

Eigen::Vector2d PlanarChain::point_velocity(const Vec& q, const Vec& qd, int body,
                                            const Eigen::Vector2d& local) const {
    require(qd.size() == dof(), "PlanarChain: velocity dimension mismatch");
    return point_jacobian(q, body, local) * qd;
}

Eigen::Vector2d PlanarChain::point_bias_acc(const Vec& q, const Vec& qd, int body,
                                            const Eigen::Vector2d& local) const {
    require(qd.size() == dof(), "PlanarChain: velocity dimension mismatch");
    const Eigen::Vector2d pdot = point_velocity(q, qd, body, local);
    Eigen::Vector2d bias{0.0, 0.0};
    for (int j = 0; j <= body; ++j) {
        if (links_[j].joint != JointType::Revolute) continue;
        // d/dt of the revolute Jacobian column perp(p - a_j).
        const Eigen::Vector2d adot = point_velocity(q, qd, j, Eigen::Vector2d::Zero());
        bias += qd(j) * perp(pdot - adot);
    }
    return bias;
}

double PlanarChain::link_angle(const Vec& q, int body) const {
    return link_pose(q, body).angle;
}

RowVec PlanarChain::angle_jacobian(int body) const {
    RowVec row = RowVec::Zero(dof());
    for (int j = 0; j <= body; ++j)
        if (links_[j].joint == JointType::Revolute) row(j) = 1.0;
    return row;
}

Mat PlanarChain::mass_matrix(const Vec& q) const {
    check_q(q);
    const int n = dof();
    Mat D = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const Link& link = links_[i];
        if (link.mass > 0.0) {
            const Mat Jv = point_jacobian(q, i, link.com);
            D.noalias() += link.mass * Jv.transpose() * Jv;
        }
        if (link.inertia > 0.0) {
            const RowVec Jw = angle_jacobian(i);
            D.noalias() += link.inertia * Jw.transpose() * Jw;
        }
    }
    return D;
}

Vec PlanarChain::bias_forces(const Vec& q, const Vec& qd) const {
    check_q(q);
    require(qd.size() == dof(), "PlanarChain: velocity dimension mismatch");
    const int n = dof();
    Vec H = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        const Link& link = links_[i];
        if (link.mass > 0.0) {
            const Mat Jv = point_jacobian(q, i, link.com);
            // Centripetal/Coriolis part: generalized force of m·(J̇q̇),
            // plus gravity acting along -z on the COM.
            const Eigen::Vector2d abias = point_bias_acc(q, qd, i, link.com);
            H.noalias() += link.mass * (Jv.transpose() * abias);
            H.noalias() += link.mass * gravity_ * Jv.row(1).transpose();
        }
        // Angular J̇ω q̇ vanishes: angle Jacobians are constant.
        if (link.damping != 0.0) H(i) += link.damping * qd(i);
    }
    return H;
}

double PlanarChain::energy(const Vec& q, const Vec& qd) const {
    double T = 0.5 * qd.dot(mass_matrix(q) * qd);
    double U = 0.0;
    for (int i = 0; i < dof(); ++i) {
        const Link& link = links_[i];
        if (link.mass > 0.0)
            U += link.mass * gravity_ * point_position(q, i, link.com).y();
    }
    return T + U;
}

}  // namespace clfqp
