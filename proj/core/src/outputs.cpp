#include <clfqp/outputs.hpp>

#include <algorithm>
#include <cmath>

namespace clfqp {
namespace {

constexpr int kMaxDegree = 7;

double bernstein_eval(const Vec& b, double tau) {
    // de Casteljau
    Vec w = b;
    for (int r = 1; r < b.size(); ++r)
        for (int i = 0; i < b.size() - r; ++i) w(i) = (1.0 - tau) * w(i) + tau * w(i + 1);
    return b.size() ? w(0) : 0.0;
}

Vec bernstein_diff(const Vec& b) {
    if (b.size() <= 1) return Vec::Zero(1);
    const int n = static_cast<int>(b.size()) - 1;
    Vec d(n);
    for (int i = 0; i < n; ++i) d(i) = n * (b(i + 1) - b(i));
    return d;
}

double power_eval(const Vec& c, double tau, int deriv_order) {
    double acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= deriv_order; --k) {
        double factor = 1.0;
        for (int j = 0; j < deriv_order; ++j) factor *= static_cast<double>(k - j);
        acc = acc * tau + factor * c(k);
    }
    return acc;
}

}  // namespace

DesiredTrajectory::DesiredTrajectory(Basis basis, std::vector<Vec> coefficients)
    : basis_(basis), coeffs_(std::move(coefficients)) {
    for (const auto& c : coeffs_) {
        require(c.size() >= 1 && c.size() <= kMaxDegree + 1,
                "desired trajectory: polynomial degree must be in [0, 7]");
        check_finite(c, "spline coefficients");
    }
    start_ = value(0.0);
    end_ = value(1.0);
}

Vec DesiredTrajectory::value(double tau) const {
    Vec out(size());
    for (int i = 0; i < size(); ++i)
        out(i) = basis_ == Basis::Power ? power_eval(coeffs_[i], tau, 0)
                                        : bernstein_eval(coeffs_[i], tau);
    return out;
}

Vec DesiredTrajectory::deriv(double tau) const {
    Vec out(size());
    for (int i = 0; i < size(); ++i)
        out(i) = basis_ == Basis::Power ? power_eval(coeffs_[i], tau, 1)
                                        : bernstein_eval(bernstein_diff(coeffs_[i]), tau);
    return out;
}

Vec DesiredTrajectory::deriv2(double tau) const {
    Vec out(size());
    for (int i = 0; i < size(); ++i)
        out(i) = basis_ == Basis::Power
                     ? power_eval(coeffs_[i], tau, 2)
                     : bernstein_eval(bernstein_diff(bernstein_diff(coeffs_[i])), tau);
    return out;
}

DesiredTrajectory DesiredTrajectory::constant(const Vec& values) {
    std::vector<Vec> coeffs;
    for (int i = 0; i < values.size(); ++i) coeffs.push_back(Vec::Constant(1, values(i)));
    return DesiredTrajectory(Basis::Power, std::move(coeffs));
}

DesiredTrajectory DesiredTrajectory::smooth_move(const Vec& from, const Vec& to) {
    require(from.size() == to.size(), "smooth_move: endpoint dimension mismatch");
    std::vector<Vec> coeffs;
    for (int i = 0; i < from.size(); ++i) {
        const double a = from(i), span = to(i) - from(i);
        // a + span·(10τ³ − 15τ⁴ + 6τ⁵)
        Vec c = Vec::Zero(6);
        c(0) = a;
        c(3) = 10.0 * span;
        c(4) = -15.0 * span;
        c(5) = 6.0 * span;
        coeffs.push_back(c);
    }
    return DesiredTrajectory(Basis::Power, std::move(coeffs));
}

void PhaseParam::validate() const {
    if (mode == Mode::Time) {
        require(t_end > t_start, "phase: t_end must exceed t_start");
    } else {
        require(rate != 0.0, "phase: state-based rate v̄ must be nonzero");
        require(static_cast<bool>(position_fn) && static_cast<bool>(position_grad_fn),
                "phase: state-based mode needs a designated relative-degree-1 output");
    }
}

double eval_phase(const PhaseParam& phase, double t, const Vec& q) {
    phase.validate();
    double raw;
    if (phase.mode == PhaseParam::Mode::Time) {
        raw = (t - phase.t_start) / (phase.t_end - phase.t_start);
    } else {
        raw = (phase.position_fn(q) - phase.initial_value) / phase.rate;
    }
    return std::clamp(raw, 0.0, 1.0);
}

double eval_phase_rate(const PhaseParam& phase, double t, const Vec& q, const Vec& qd) {
    phase.validate();
    double raw, rate;
    if (phase.mode == PhaseParam::Mode::Time) {
        raw = (t - phase.t_start) / (phase.t_end - phase.t_start);
        rate = 1.0 / (phase.t_end - phase.t_start);
    } else {
        raw = (phase.position_fn(q) - phase.initial_value) / phase.rate;
        rate = phase.position_grad_fn(q).dot(qd) / phase.rate;
    }
    return (raw < 0.0 || raw > 1.0) ? 0.0 : rate;
}

void OutputSet::validate() const {
    require(m1 >= 0 && m2 >= 0 && m() > 0, "output set must have at least one output");
    require(desired.size() == m(), "desired trajectory must cover every output");
    if (m1 > 0) require(static_cast<bool>(actual_r1), "missing relative-degree-1 evaluator");
    if (m2 > 0) require(static_cast<bool>(actual_r2), "missing relative-degree-2 evaluator");
    require(static_cast<bool>(jacobians_fn), "missing output Jacobian evaluator");
}

OutputError eval_error(const OutputSet& outputs, const Vec& q, const Vec& qd, double t) {
    outputs.validate();
    OutputError err;
    err.tau = eval_phase(outputs.phase, t, q);
    err.tau_rate = eval_phase_rate(outputs.phase, t, q, qd);

    const Vec yd = outputs.desired.value(err.tau);
    const Vec yd_dot_tau = outputs.desired.deriv(err.tau);

    err.y1 = Vec(outputs.m1);
    if (outputs.m1 > 0) err.y1 = outputs.actual_r1(q, qd) - yd.head(outputs.m1);
    err.y2 = Vec(outputs.m2);
    err.y2dot = Vec(outputs.m2);
    if (outputs.m2 > 0) {
        err.y2 = outputs.actual_r2(q) - yd.tail(outputs.m2);
        Mat J_y;
        Vec jd;
        outputs.jacobians_fn(q, qd, J_y, jd);
        const Vec y2dot_actual = J_y.bottomRows(outputs.m2) * qd;
        err.y2dot = y2dot_actual - yd_dot_tau.tail(outputs.m2) * err.tau_rate;
    }
    err.eta = Vec(outputs.eta_dim());
    err.eta << err.y1, err.y2, err.y2dot;
    return err;
}

OutputJacobians output_jacobians(const OutputSet& outputs, const Vec& q, const Vec& qd) {
    outputs.validate();
    OutputJacobians out;
    outputs.jacobians_fn(q, qd, out.J_y, out.Jdot_qd);
    require(out.J_y.rows() == outputs.m() && out.Jdot_qd.size() == outputs.m(),
            "output Jacobian evaluator returned wrong shapes");
    Eigen::JacobiSVD<Mat> svd(out.J_y);
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() ? out.singular_values(0) : 0.0;
    const double smin = out.singular_values.size()
                            ? out.singular_values(out.singular_values.size() - 1)
                            : 0.0;
    out.full_row_rank = out.J_y.rows() <= out.J_y.cols() && smax > 0.0 &&
                        smin > smax / kMaxCondition;
    return out;
}

Vec error_accel_affine(const OutputSet& outputs, const Vec& q, const Vec& qd, double t) {
    const OutputError err = eval_error(outputs, q, qd, t);
    Mat J_y;
    Vec jd;
    outputs.jacobians_fn(q, qd, J_y, jd);
    Vec a = jd;
    const Vec d1 = outputs.desired.deriv(err.tau);
    if (outputs.m1 > 0) a.head(outputs.m1) -= d1.head(outputs.m1) * err.tau_rate;
    if (outputs.m2 > 0) {
        const Vec d2 = outputs.desired.deriv2(err.tau);
        // τ̈ is zero for time-based phases and neglected for state-based
        // ones, where it would couple into q̈.
        a.tail(outputs.m2) -= d2.tail(outputs.m2) * (err.tau_rate * err.tau_rate);
    }
    return a;
}

OutputSet make_identity_outputs(int n_q, DesiredTrajectory desired, PhaseParam phase) {
    OutputSet set;
    set.m1 = 0;
    set.m2 = n_q;
    set.actual_r2 = [](const Vec& q) { return q; };
    set.jacobians_fn = [n_q](const Vec&, const Vec&, Mat& J_y, Vec& jd) {
        J_y = Mat::Identity(n_q, n_q);
        jd = Vec::Zero(n_q);
    };
    set.desired = std::move(desired);
    set.phase = std::move(phase);
    set.validate();
    return set;
}

OutputSet make_crouch_task_outputs(const BuiltinModel& leg, DesiredTrajectory desired,
                                   PhaseParam phase) {
    auto chain = leg.chain;
    constexpr int kTorso = 5;
    OutputSet set;
    set.m1 = 0;
    set.m2 = 3;
    set.actual_r2 = [chain](const Vec& q) {
        Vec y(3);
        y.head<2>() = crouch_hip_position(*chain, q);
        y(2) = chain->link_angle(q, kTorso);
        return y;
    };
    set.jacobians_fn = [chain](const Vec& q, const Vec& qd, Mat& J_y, Vec& jd) {
        J_y = Mat(3, chain->dof());
        J_y.topRows(2) = chain->point_jacobian(q, kTorso, Eigen::Vector2d::Zero());
        J_y.row(2) = chain->angle_jacobian(kTorso);
        jd = Vec::Zero(3);
        jd.head<2>() = chain->point_bias_acc(q, qd, kTorso, Eigen::Vector2d::Zero());
    };
    set.desired = std::move(desired);
    set.phase = std::move(phase);
    set.validate();
    return set;
}

OutputSet make_cartpole_angle_output(DesiredTrajectory desired, PhaseParam phase) {
    OutputSet set;
    set.m1 = 0;
    set.m2 = 1;
    set.actual_r2 = [](const Vec& q) { return Vec::Constant(1, q(1)); };
    set.jacobians_fn = [](const Vec& q, const Vec&, Mat& J_y, Vec& jd) {
        J_y = Mat::Zero(1, q.size());
        J_y(0, 1) = 1.0;
        jd = Vec::Zero(1);
    };
    set.desired = std::move(desired);
    set.phase = std::move(phase);
    set.validate();
    return set;
}

OutputSet make_velocity_position_outputs(int n_q, const RowVec& velocity_row,
                                         std::vector<int> position_coords,
                                         DesiredTrajectory desired, PhaseParam phase) {
    require(velocity_row.size() == n_q, "velocity output row must have n_q entries");
    OutputSet set;
    set.m1 = 1;
    set.m2 = static_cast<int>(position_coords.size());
    RowVec c = velocity_row;
    set.actual_r1 = [c](const Vec&, const Vec& qd) { return Vec::Constant(1, c.dot(qd)); };
    set.actual_r2 = [position_coords](const Vec& q) {
        Vec y(position_coords.size());
        for (size_t i = 0; i < position_coords.size(); ++i) y(i) = q(position_coords[i]);
        return y;
    };
    set.jacobians_fn = [c, position_coords, n_q](const Vec&, const Vec&, Mat& J_y, Vec& jd) {
        J_y = Mat::Zero(1 + position_coords.size(), n_q);
        J_y.row(0) = c;
        for (size_t i = 0; i < position_coords.size(); ++i)
            J_y(1 + i, position_coords[i]) = 1.0;
        jd = Vec::Zero(1 + position_coords.size());
    };
    // δy₁ = c·q integrates the velocity output; wire it for state phasing.
    if (phase.mode == PhaseParam::Mode::State && !phase.position_fn) {
        phase.position_fn = [c](const Vec& q) { return c.dot(q); };
        phase.position_grad_fn = [c](const Vec&) { return c; };
    }
    set.desired = std::move(desired);
    set.phase = std::move(phase);
    set.validate();
    return set;
}

}  // namespace clfqp
