#include <clfqp/models.hpp>

#include <cmath>

namespace clfqp {

RobotModel model_from_chain(std::shared_ptr<const PlanarChain> chain, Mat actuation,
                            Vec torque_lower, Vec torque_upper,
                            std::vector<HolonomicConstraint> constraints, std::string name) {
    RobotModel m;
    m.n_q = chain->dof();
    m.n_u = static_cast<int>(actuation.cols());
    require(actuation.rows() == m.n_q, "actuation matrix must have n_q rows");
    require(torque_lower.size() == m.n_u && torque_upper.size() == m.n_u,
            "torque bounds must have n_u entries");
    m.mass_matrix_fn = [chain](const Vec& q) { return chain->mass_matrix(q); };
    m.bias_fn = [chain](const Vec& q, const Vec& qd) { return chain->bias_forces(q, qd); };
    m.energy_fn = [chain](const Vec& q, const Vec& qd) { return chain->energy(q, qd); };
    m.actuation = std::move(actuation);
    m.torque_lower = std::move(torque_lower);
    m.torque_upper = std::move(torque_upper);
    m.constraints = std::move(constraints);
    m.name = std::move(name);
    return m;
}

BuiltinModel make_double_pendulum(const DoublePendulumParams& p) {
    using JT = PlanarChain::JointType;
    std::vector<PlanarChain::Link> links(2);
    links[0] = {JT::Revolute, {0.0, 0.0}, p.m1, 0.0, {0.0, -p.l1}, p.damping, "link1"};
    links[1] = {JT::Revolute, {0.0, -p.l1}, p.m2, 0.0, {0.0, -p.l2}, p.damping, "link2"};
    auto chain = std::make_shared<const PlanarChain>(std::move(links), p.gravity);

    const Vec limit = Vec::Constant(2, p.torque_limit);
    RobotModel model = model_from_chain(chain, Mat::Identity(2, 2), -limit, limit, {},
                                        "double_pendulum");
    return {std::move(model), chain};
}

BuiltinModel make_cart_pole(const CartPoleParams& p) {
    using JT = PlanarChain::JointType;
    std::vector<PlanarChain::Link> links(2);
    links[0] = {JT::PrismaticX, {0.0, 0.0}, p.cart_mass, 0.0, {0.0, 0.0}, p.damping, "cart"};
    links[1] = {JT::Revolute, {0.0, 0.0}, p.pole_mass, 0.0, {0.0, p.pole_length}, p.damping,
                "pole"};
    auto chain = std::make_shared<const PlanarChain>(std::move(links), p.gravity);

    Mat B = Mat::Zero(2, 1);
    B(0, 0) = 1.0;
    const Vec limit = Vec::Constant(1, p.force_limit);
    RobotModel model = model_from_chain(chain, B, -limit, limit, {}, "cart_pole");
    return {std::move(model), chain};
}

namespace {

// Body indices in the crouching-leg chain.
constexpr int kFootBody = 2;
constexpr int kTorsoBody = 5;

}  // namespace

BuiltinModel make_crouching_leg(const CrouchLegParams& p) {
    using JT = PlanarChain::JointType;
    std::vector<PlanarChain::Link> links(6);
    links[0] = {JT::PrismaticX, {0.0, 0.0}, 0.0, 0.0, {0.0, 0.0}, 0.0, "base_x"};
    links[1] = {JT::PrismaticZ, {0.0, 0.0}, 0.0, 0.0, {0.0, 0.0}, 0.0, "base_z"};
    links[2] = {JT::Revolute, {0.0, 0.0}, p.foot_mass, p.foot_inertia,
                {0.0, -0.5 * p.ankle_height}, 0.0, "foot"};
    links[3] = {JT::Revolute, {0.0, 0.0}, p.shank_mass, 0.0, {0.0, 0.5 * p.shank_length},
                p.damping, "shank"};
    links[4] = {JT::Revolute, {0.0, p.shank_length}, p.thigh_mass, 0.0,
                {0.0, 0.5 * p.thigh_length}, p.damping, "thigh"};
    links[5] = {JT::Revolute, {0.0, p.thigh_length}, p.torso_mass, p.torso_inertia,
                {0.0, p.torso_com}, p.damping, "torso"};
    auto chain = std::make_shared<const PlanarChain>(std::move(links), p.gravity);

    // Flat-foot patch contact: the patch-center point plus the foot pitch.
    const Eigen::Vector2d patch_local{0.0, -p.ankle_height};
    HolonomicConstraint contact;
    contact.dim = 3;
    contact.kind = ConstraintKind::Contact;
    contact.name = "foot_patch";
    contact.value_fn = [chain, patch_local](const Vec& q) {
        Vec h(3);
        h.head<2>() = chain->point_position(q, kFootBody, patch_local);
        h(2) = chain->link_angle(q, kFootBody);
        return h;
    };
    contact.jacobian_fn = [chain, patch_local](const Vec& q) {
        Mat J(3, chain->dof());
        J.topRows(2) = chain->point_jacobian(q, kFootBody, patch_local);
        J.row(2) = chain->angle_jacobian(kFootBody);
        return J;
    };
    contact.jdot_qdot_fn = [chain, patch_local](const Vec& q, const Vec& qd) {
        Vec jd = Vec::Zero(3);
        jd.head<2>() = chain->point_bias_acc(q, qd, kFootBody, patch_local);
        return jd;
    };
    ContactGeometry geom;
    geom.tangent_x_row = 0;
    geom.normal_row = 1;
    geom.moment_x_row = 2;
    geom.mu = p.mu;
    geom.patch_length = p.patch_length;
    contact.contact = geom;

    // Ankle, knee, hip actuated; base coordinates are not.
    Mat B = Mat::Zero(6, 3);
    B(3, 0) = 1.0;
    B(4, 1) = 1.0;
    B(5, 2) = 1.0;
    const Vec limit = Vec::Constant(3, p.torque_limit);
    RobotModel model =
        model_from_chain(chain, B, -limit, limit, {std::move(contact)}, "crouching_leg");
    return {std::move(model), chain};
}

Vec crouch_pose_for_hip_height(const CrouchLegParams& p, double hip_height) {
    const double d = hip_height - p.ankle_height;
    const double reach = p.shank_length + p.thigh_length;
    require(d > 0.0 && d < reach,
            "crouch_pose_for_hip_height: height " + std::to_string(hip_height) +
                " is outside the leg reach");
    require(std::abs(p.shank_length - p.thigh_length) < 1e-12,
            "crouch_pose_for_hip_height: symmetric pose needs equal link lengths");
    // Symmetric knee bend with vertical torso.
    const double half = std::acos(d / reach);
    Vec q(6);
    q << 0.0, p.ankle_height, 0.0, half, -2.0 * half, half;
    return q;
}

Eigen::Vector2d crouch_hip_position(const PlanarChain& chain, const Vec& q) {
    return chain.link_pose(q, kTorsoBody).origin;
}

}  // namespace clfqp
