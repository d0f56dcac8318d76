#pragma once

#include <clfqp/linalg.hpp>

#include <optional>
#include <vector>

namespace clfqp {

/// Linear error dynamics η̇ = F η + G v for η = (y₁, y₂, ẏ₂) with m1
/// relative-degree-1 and m2 relative-degree-2 outputs. F and G carry the
/// fixed zero/identity block pattern; (F, G) is controllable by
/// construction.
struct OutputDynamics {
    int m1 = 0;
    int m2 = 0;
    Mat F;  // (m1+2m2) × (m1+2m2)
    Mat G;  // (m1+2m2) × (m1+m2)

    int eta_dim() const { return m1 + 2 * m2; }
    int input_dim() const { return m1 + m2; }
};

OutputDynamics make_output_dynamics(int m1, int m2);

/// True when (F, G) carries exactly the block pattern produced by
/// make_output_dynamics for some (m1, m2).
bool matches_block_pattern(const Mat& F, const Mat& G);

class CareError : public Error {
public:
    CareError(const std::string& msg, std::vector<double> residual_history);
    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Max-norm of Fᵀ P + P F − P G Gᵀ P + Q.
double care_residual(const Mat& F, const Mat& G, const Mat& Q, const Mat& P);

/// Stabilizing solution of the CARE by Newton–Kleinman iteration. The
/// initial stabilizing gain comes from the closed-form per-output
/// solutions of the block pattern; each Newton step is a Lyapunov solve.
Mat solve_care(const Mat& F, const Mat& G, const Mat& Q);

struct ResClf {
    OutputDynamics sys;
    Mat Q;
    Mat P;            // CARE solution
    double epsilon = 1.0;
    Mat P_eps;        // I_ε P I_ε with I_ε = diag(I, (1/ε)I, I)
    Mat lfv_matrix;   // Fᵀ P_ε + P_ε F
    Mat P_eps_G;
    double gamma = 0.0;  // λmin(Q) / (ε λmax(P_ε)), unless overridden

    double V(const Vec& eta) const;
    double LFV(const Vec& eta) const;
    RowVec LGV(const Vec& eta) const;
    int eta_dim() const { return sys.eta_dim(); }
    int input_dim() const { return sys.input_dim(); }
};

ResClf build_resclf(const OutputDynamics& sys, const Mat& P, const Mat& Q, double epsilon,
                    std::optional<double> gamma_override = std::nullopt);

/// CARE plus construction in one step.
ResClf make_resclf(int m1, int m2, const Mat& Q, double epsilon,
                   std::optional<double> gamma_override = std::nullopt);

/// Gain K of the rate-certifying feedback v = −K η (the Eq.-(8)-shaped
/// law with CARE gains, K = (1/ε) Gᵀ P_ε).
Mat resclf_feedback_gain(const ResClf& clf);

/// The CLF convergence inequality as a linear row over a stacked
/// decision vector whose q̈ block starts at qdd_offset:
///   (L_G V · J_y) q̈ − δ ≤ −γV − L_F V − L_G V · a_y.
/// Coefficients outside the q̈ block (and the optional δ column) are zero.
struct ConstraintRow {
    Vec row;
    double rhs = 0.0;
};
ConstraintRow convergence_constraint_row(const ResClf& clf, const Vec& eta, const Mat& J_y,
                                         const Vec& a_y, int x_dim, int qdd_offset,
                                         int delta_col = -1);

}  // namespace clfqp
