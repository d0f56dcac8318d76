#include <clfqp/resclf.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>

namespace clfqp {

OutputDynamics make_output_dynamics(int m1, int m2) {
    require(m1 >= 0 && m2 >= 0 && m1 + m2 > 0, "output dynamics need m1 + m2 > 0");
    OutputDynamics sys;
    sys.m1 = m1;
    sys.m2 = m2;
    const int n = m1 + 2 * m2;
    sys.F = Mat::Zero(n, n);
    sys.G = Mat::Zero(n, m1 + m2);
    // η = (y₁, y₂, ẏ₂), v = (ẏ₁-channel, ÿ₂-channel):
    //   ẏ₁ = v₁, ẏ₂ = ẏ₂, ÿ₂ = v₂.
    sys.F.block(m1, m1 + m2, m2, m2).setIdentity();
    sys.G.block(0, 0, m1, m1).setIdentity();
    sys.G.block(m1 + m2, m1, m2, m2).setIdentity();
    return sys;
}

bool matches_block_pattern(const Mat& F, const Mat& G) {
    const int n = static_cast<int>(F.rows());
    const int m = static_cast<int>(G.cols());
    if (F.cols() != n || G.rows() != n) return false;
    const int m2 = n - m;
    const int m1 = 2 * m - n;
    if (m1 < 0 || m2 < 0) return false;
    const OutputDynamics ref = make_output_dynamics(m1, m2);
    return (F - ref.F).cwiseAbs().maxCoeff() == 0.0 && (G - ref.G).cwiseAbs().maxCoeff() == 0.0;
}

CareError::CareError(const std::string& msg, std::vector<double> residual_history)
    : Error(msg), history_(std::move(residual_history)) {}

double care_residual(const Mat& F, const Mat& G, const Mat& Q, const Mat& P) {
    const Mat R = F.transpose() * P + P * F - P * G * G.transpose() * P + Q;
    return R.cwiseAbs().maxCoeff();
}

namespace {

// Closed-form CARE solution for the block pattern with Q = I: each
// relative-degree-1 channel contributes P = 1, each double-integrator
// channel contributes [[√3, 1], [1, √3]]. Used to seed Newton–Kleinman.
Mat block_pattern_seed(int m1, int m2) {
    const double s3 = std::sqrt(3.0);
    const int n = m1 + 2 * m2;
    Mat P = Mat::Zero(n, n);
    P.topLeftCorner(m1, m1).setIdentity();
    P.block(m1, m1, m2, m2) = s3 * Mat::Identity(m2, m2);
    P.block(m1, m1 + m2, m2, m2).setIdentity();
    P.block(m1 + m2, m1, m2, m2).setIdentity();
    P.block(m1 + m2, m1 + m2, m2, m2) = s3 * Mat::Identity(m2, m2);
    return P;
}

}  // namespace

Mat solve_care(const Mat& F, const Mat& G, const Mat& Q) {
    require(matches_block_pattern(F, G), "solve_care expects the output-dynamics block pattern");
    const int n = static_cast<int>(F.rows());
    const int m = static_cast<int>(G.cols());
    const int m2 = n - m;
    const int m1 = 2 * m - n;
    require(Q.rows() == n && Q.cols() == n, "Q must match the η dimension");
    require((Q - Q.transpose()).cwiseAbs().maxCoeff() < 1e-10, "Q must be symmetric");
    {
        Eigen::SelfAdjointEigenSolver<Mat> es(Q);
        require(es.eigenvalues().minCoeff() > 0.0, "Q must be positive definite");
    }

    Mat K = G.transpose() * block_pattern_seed(m1, m2);
    Mat P = Mat::Zero(n, n);
    std::vector<double> history;
    constexpr int kMaxIter = 60;
    for (int it = 0; it < kMaxIter; ++it) {
        const Mat A = F - G * K;
        const Mat P_next = solve_continuous_lyapunov(A, Mat(Q + K.transpose() * K));
        K = G.transpose() * P_next;
        const double res = care_residual(F, G, Q, P_next);
        history.push_back(res);
        const double delta = (P_next - P).cwiseAbs().maxCoeff();
        P = P_next;
        if (res < 1e-12 || (it > 0 && delta < 1e-14 * std::max(1.0, P.cwiseAbs().maxCoeff())))
            return 0.5 * (P + P.transpose());
    }
    if (!history.empty() && history.back() < 1e-9) return 0.5 * (P + P.transpose());
    throw CareError("Newton-Kleinman CARE iteration did not converge", history);
}

double ResClf::V(const Vec& eta) const {
    require(eta.size() == eta_dim(), "η dimension mismatch");
    return eta.dot(P_eps * eta);
}

double ResClf::LFV(const Vec& eta) const {
    require(eta.size() == eta_dim(), "η dimension mismatch");
    return eta.dot(lfv_matrix * eta);
}

RowVec ResClf::LGV(const Vec& eta) const {
    require(eta.size() == eta_dim(), "η dimension mismatch");
    return 2.0 * eta.transpose() * P_eps_G;
}

ResClf build_resclf(const OutputDynamics& sys, const Mat& P, const Mat& Q, double epsilon,
                    std::optional<double> gamma_override) {
    require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
    const int n = sys.eta_dim();
    require(P.rows() == n && P.cols() == n, "P must match the η dimension");

    ResClf clf;
    clf.sys = sys;
    clf.Q = Q;
    clf.P = P;
    clf.epsilon = epsilon;

    Vec scale = Vec::Ones(n);
    scale.segment(sys.m1, sys.m2).setConstant(1.0 / epsilon);
    clf.P_eps = scale.asDiagonal() * P * scale.asDiagonal();
    clf.lfv_matrix = sys.F.transpose() * clf.P_eps + clf.P_eps * sys.F;
    clf.P_eps_G = clf.P_eps * sys.G;

    Eigen::SelfAdjointEigenSolver<Mat> esP(clf.P_eps);
    require(esP.eigenvalues().minCoeff() > 0.0, "P_ε must be positive definite");
    Eigen::SelfAdjointEigenSolver<Mat> esQ(Q);
    clf.gamma = gamma_override.value_or(esQ.eigenvalues().minCoeff() /
                                        (epsilon * esP.eigenvalues().maxCoeff()));
    require(clf.gamma > 0.0, "convergence rate γ must be positive");
    return clf;
}

ResClf make_resclf(int m1, int m2, const Mat& Q, double epsilon,
                   std::optional<double> gamma_override) {
    const OutputDynamics sys = make_output_dynamics(m1, m2);
    const Mat P = solve_care(sys.F, sys.G, Q);
    return build_resclf(sys, P, Q, epsilon, gamma_override);
}

Mat resclf_feedback_gain(const ResClf& clf) {
    return clf.sys.G.transpose() * clf.P_eps / clf.epsilon;
}

ConstraintRow convergence_constraint_row(const ResClf& clf, const Vec& eta, const Mat& J_y,
                                         const Vec& a_y, int x_dim, int qdd_offset,
                                         int delta_col) {
    require(J_y.rows() == clf.input_dim(), "J_y row count must equal m1 + m2");
    require(a_y.size() == clf.input_dim(), "a_y must have m1 + m2 entries");
    require(qdd_offset >= 0 && qdd_offset + J_y.cols() <= x_dim, "q̈ block out of range");

    const RowVec lgv = clf.LGV(eta);
    ConstraintRow out;
    out.row = Vec::Zero(x_dim);
    out.row.segment(qdd_offset, J_y.cols()) = (lgv * J_y).transpose();
    out.rhs = -clf.gamma * clf.V(eta) - clf.LFV(eta) - lgv.dot(a_y);
    if (delta_col >= 0) {
        require(delta_col < x_dim, "δ column out of range");
        out.row(delta_col) = -1.0;
    } else {
        // Near η = 0 the coefficients vanish; normalize so the solver
        // never sees a meaninglessly scaled row. (With δ the row always
        // carries its -1 coefficient and is well scaled.)
        const double scale = out.row.norm();
        if (scale > 1e-10) {
            out.row /= scale;
            out.rhs /= scale;
        }
    }
    return out;
}

}  // namespace clfqp
