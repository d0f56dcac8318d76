#include <clfqp/dynamics.hpp>

#include <algorithm>
#include <cmath>

namespace clfqp {

int RobotModel::constraint_dim() const {
    int m = 0;
    for (const auto& c : constraints) m += c.dim;
    return m;
}

bool RobotModel::has_contacts() const {
    return std::any_of(constraints.begin(), constraints.end(),
                       [](const auto& c) { return c.kind == ConstraintKind::Contact; });
}

void RobotModel::validate_state(const Vec& q, const Vec& qd) const {
    require(q.size() == n_q && qd.size() == n_q,
            "model '" + name + "': state must have dimension n_q = " + std::to_string(n_q));
}

DynamicsTerms eval_dynamics(const RobotModel& model, const Vec& q, const Vec& qd) {
    model.validate_state(q, qd);
    DynamicsTerms t;
    t.D = model.mass_matrix_fn(q);
    t.H = model.bias_fn(q, qd);
    t.B = model.actuation;
    check_finite(t.D, "mass matrix");
    check_finite(t.H, "bias forces");
    require(t.D.rows() == model.n_q && t.D.cols() == model.n_q, "mass matrix shape");
    require(t.H.size() == model.n_q, "bias vector shape");

    const int m = model.constraint_dim();
    t.J = Mat::Zero(m, model.n_q);
    t.Jdot_qd = Vec::Zero(m);
    int row = 0;
    for (const auto& c : model.constraints) {
        Mat Jc = c.jacobian_fn(q);
        Vec jd = c.jdot_qdot_fn(q, qd);
        check_finite(Jc, "constraint Jacobian '" + c.name + "'");
        check_finite(jd, "constraint J̇q̇ '" + c.name + "'");
        require(Jc.rows() == c.dim && Jc.cols() == model.n_q,
                "constraint '" + c.name + "': Jacobian shape");
        require(jd.size() == c.dim, "constraint '" + c.name + "': J̇q̇ shape");
        t.J.middleRows(row, c.dim) = Jc;
        t.Jdot_qd.segment(row, c.dim) = jd;
        row += c.dim;
    }
    return t;
}

Vec solve_constraint_forces(const RobotModel& model, const Vec& q, const Vec& qd, const Vec& u) {
    require(u.size() == model.n_u, "torque dimension mismatch");
    const DynamicsTerms t = eval_dynamics(model, q, qd);
    if (t.J.rows() == 0) return Vec(0);

    const Mat Dinv_Jt = solve_checked(t.D, Mat(t.J.transpose()), "mass matrix D");
    const Mat JDinvJt = t.J * Dinv_Jt;
    const Vec Dinv_rhs = solve_checked(t.D, Vec(t.H - t.B * u), "mass matrix D");
    const double cond = condition_number(JDinvJt);
    if (!(cond < kMaxCondition))
        throw SingularMatrixError("constraint operator J D⁻¹ Jᵀ", cond);
    return JDinvJt.partialPivLu().solve(t.J * Dinv_rhs - t.Jdot_qd);
}

ForwardDynamics forward_dynamics(const RobotModel& model, const Vec& q, const Vec& qd,
                                 const Vec& u) {
    const DynamicsTerms t = eval_dynamics(model, q, qd);
    ForwardDynamics out;
    if (t.J.rows() == 0) {
        out.lambda = Vec(0);
        out.qdd = solve_checked(t.D, Vec(t.B * u - t.H), "mass matrix D");
        return out;
    }
    out.lambda = solve_constraint_forces(model, q, qd, u);
    out.qdd = solve_checked(t.D, Vec(t.B * u + t.J.transpose() * out.lambda - t.H),
                            "mass matrix D");
    return out;
}

ForwardDynamics forward_dynamics_kkt(const RobotModel& model, const Vec& q, const Vec& qd,
                                     const Vec& u) {
    const DynamicsTerms t = eval_dynamics(model, q, qd);
    const int n = model.n_q;
    const int m = static_cast<int>(t.J.rows());
    Mat K = Mat::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = t.D;
    if (m > 0) {
        K.topRightCorner(n, m) = -t.J.transpose();
        K.bottomLeftCorner(m, n) = t.J;
    }
    Vec rhs(n + m);
    rhs.head(n) = t.B * u - t.H;
    if (m > 0) rhs.tail(m) = -t.Jdot_qd;
    const Vec sol = solve_checked(K, rhs, "constrained dynamics KKT matrix");
    return {sol.head(n), sol.tail(m)};
}

VectorFields vector_fields(const RobotModel& model, const Vec& q, const Vec& qd,
                           LambdaMode lambda_mode) {
    const DynamicsTerms t = eval_dynamics(model, q, qd);
    const int n = model.n_q;
    VectorFields vf;
    vf.f = Vec::Zero(2 * n);
    vf.f.head(n) = qd;
    vf.g = Mat::Zero(2 * n, model.n_u);

    if (lambda_mode == LambdaMode::None || t.J.rows() == 0) {
        vf.f.tail(n) = solve_checked(t.D, Vec(-t.H), "mass matrix D");
        vf.g.bottomRows(n) = solve_checked(t.D, t.B, "mass matrix D");
        return vf;
    }

    // λ(u) is affine: λ = λ0 + Λu u with both terms from the explicit
    // elimination; fold them into the drift and input matrix.
    const Mat Dinv_Jt = solve_checked(t.D, Mat(t.J.transpose()), "mass matrix D");
    const Mat JDinvJt = t.J * Dinv_Jt;
    const double cond = condition_number(JDinvJt);
    if (!(cond < kMaxCondition))
        throw SingularMatrixError("constraint operator J D⁻¹ Jᵀ", cond);
    const auto lu = JDinvJt.partialPivLu();
    const Vec Dinv_H = solve_checked(t.D, t.H, "mass matrix D");
    const Mat Dinv_B = solve_checked(t.D, t.B, "mass matrix D");
    const Vec lambda0 = lu.solve(t.J * Dinv_H - t.Jdot_qd);
    const Mat lambda_u = -lu.solve(t.J * Dinv_B);

    vf.f.tail(n) = solve_checked(t.D, Vec(t.J.transpose() * lambda0 - t.H), "mass matrix D");
    vf.g.bottomRows(n) = Dinv_B + Dinv_Jt * lambda_u;
    return vf;
}

FiniteDiffReport finite_diff_check(const RobotModel& model, const Vec& q, const Vec& qd,
                                   double h) {
    require(h > 0.0, "finite_diff_check: step must be positive");
    model.validate_state(q, qd);
    FiniteDiffReport report;
    for (const auto& c : model.constraints) {
        if (c.value_fn) {
            report.jacobian_checked = true;
            const Mat J = c.jacobian_fn(q);
            for (int i = 0; i < model.n_q; ++i) {
                Vec qp = q, qm = q;
                qp(i) += h;
                qm(i) -= h;
                const Vec col = (c.value_fn(qp) - c.value_fn(qm)) / (2.0 * h);
                report.max_jacobian_error =
                    std::max(report.max_jacobian_error, (col - J.col(i)).cwiseAbs().maxCoeff());
            }
        }
        {
            // d/dt [J(q(t)) q̇] along q(t) = q + t q̇ at fixed q̇.
            const Vec jd = c.jdot_qdot_fn(q, qd);
            const Vec plus = c.jacobian_fn(q + h * qd) * qd;
            const Vec minus = c.jacobian_fn(q - h * qd) * qd;
            const Vec fd = (plus - minus) / (2.0 * h);
            report.max_jdot_qd_error =
                std::max(report.max_jdot_qd_error, (fd - jd).cwiseAbs().maxCoeff());
        }
    }
    return report;
}

}  // namespace clfqp
