#pragma once

#include <clfqp/dynamics.hpp>
#include <clfqp/outputs.hpp>
#include <clfqp/qp.hpp>
#include <clfqp/resclf.hpp>

#include <optional>
#include <string>
#include <vector>

namespace clfqp {

enum class ControllerVariant {
    Fbl,
    ClfQp,
    ClfQpDelta,
    IdQp,
    IdClfQp,
    IdClfQpDelta,
    IdClfQpPlus,
    IdClfQpPlusDelta,
    IdClfQpPlusRelaxed,
};

const char* to_string(ControllerVariant v);
ControllerVariant variant_from_string(const std::string& name);

/// True for variants whose decision vector is 𝒳 = (q̈, u, λ[, δ]).
bool uses_extended_decision(ControllerVariant v);
bool has_delta(ControllerVariant v);
bool has_clf_constraint(ControllerVariant v);
bool has_vdot_cost(ControllerVariant v);

/// Offsets of the blocks inside the stacked decision vector.
struct DecisionLayout {
    int n_q = 0;
    int n_u = 0;
    int m_h = 0;
    bool with_delta = false;

    int qdd_offset() const { return 0; }
    int u_offset() const { return n_q; }
    int lambda_offset() const { return n_q + n_u; }
    int delta_index() const { return with_delta ? n_q + n_u + m_h : -1; }
    int total() const { return n_q + n_u + m_h + (with_delta ? 1 : 0); }
};

/// PD gains for the auxiliary feedback; ε scales them into the
/// (1/ε², 1/ε) pattern where the CLF path applies.
struct Gains {
    Vec kv;  // m1 entries
    Vec kp;  // m2 entries
    Vec kd;  // m2 entries
    double epsilon = 1.0;

    void validate(int m1, int m2) const;
};

/// Preferred linear relationship w‖𝒜𝒳 − b‖² added to the cost instead of
/// being imposed exactly.
struct SoftConstraint {
    Mat A;
    Vec b;
    double weight = 1.0;
    std::string label;
};

struct SoftConstraintRequest {
    enum class Kind { Holonomic, TorqueRate, Custom };
    Kind kind = Kind::Holonomic;
    double weight = 1.0;
    Mat A;  // Custom only
    Vec b;  // Custom only
};

struct ControllerSpec {
    ControllerVariant variant = ControllerVariant::IdClfQpPlus;
    double sigma = 1e-5;   // regularization weight on W(𝒳)
    double rho = 1e3;      // δ penalty
    Gains gains;
    bool torque_bounds = true;
    bool friction_pyramid = true;
    bool rollover = true;
    enum class HolonomicMode { Hard, Soft };
    HolonomicMode holonomic = HolonomicMode::Hard;
    double holonomic_weight = 1e4;
    std::vector<SoftConstraintRequest> soft_constraints;
    double vdot_weight = 1.0;
    // W(𝒳) block weights; torque dominates by default.
    double w_qdd = 1e-2;
    double w_u = 1.0;
    double w_lambda = 1e-2;

    void validate() const;
};

/// Feedback-linearization terms on the error outputs:
///   (ẏ₁ᵀ, ÿ₂ᵀ)ᵀ = Lf_y + A u,  v = PD law, u = A⁻¹(v − Lf_y).
struct FblTerms {
    Mat A;
    Vec Lf_y;
    Vec v;
    Vec u;
};
FblTerms fbl_terms(const RobotModel& model, const OutputSet& outputs, const Gains& gains,
                   const Vec& q, const Vec& qd, double t);
Vec fbl_control(const RobotModel& model, const OutputSet& outputs, const Gains& gains,
                const Vec& q, const Vec& qd, double t);

struct AssembledQp {
    QpProblem qp;
    DecisionLayout layout;  // meaningful for extended variants
    int clf_row = -1;       // row index into A_in, -1 when absent
    int friction_rows_begin = -1;
    int friction_rows_end = -1;
};

AssembledQp assemble_clf_qp(const RobotModel& model, const OutputSet& outputs, const ResClf& clf,
                            const Vec& q, const Vec& qd, double t, const ControllerSpec& spec);

AssembledQp assemble_id_qp(const RobotModel& model, const OutputSet& outputs, const Vec& q,
                           const Vec& qd, double t, const ControllerSpec& spec);

AssembledQp assemble_id_clf_qp(const RobotModel& model, const OutputSet& outputs,
                               const ResClf& clf, const Vec& q, const Vec& qd, double t,
                               const ControllerSpec& spec, bool plus, bool relaxed,
                               const Vec* u_prev = nullptr);

/// Pyramid (and optionally rollover) rows over one contact's λ block,
/// as A λ ≤ 0.
struct IneqRows {
    Mat A;
    Vec b;
};
IneqRows friction_pyramid_rows(const HolonomicConstraint& contact, bool include_rollover);

bool pyramid_feasible(const ContactGeometry& geom, const Vec& lambda_block, double tol = 0.0);
/// Exact Coulomb cone membership; diagnostic only, never imposed.
bool cone_feasible(const ContactGeometry& geom, const Vec& lambda_block, double tol = 0.0);

struct ControlTick {
    Vec u;
    Vec qdd;
    Vec lambda;
    double delta = 0.0;
    double V = 0.0;
    double Vdot = 0.0;
    double gamma_inst = std::numeric_limits<double>::quiet_NaN();
    double eta_norm = 0.0;
    QpStatus status = QpStatus::Optimal;
    int iterations = 0;
    int active_set_size = 0;
    double solve_time_us = 0.0;
    /// 0: clean, 1: δ-relaxation injected, 2: friction rows dropped,
    /// 3: previous torque reused.
    int fallback_level = 0;

    bool flagged() const { return fallback_level > 0 || status != QpStatus::Optimal; }
};

class TickError : public Error {
public:
    explicit TickError(const std::string& msg) : Error(msg) {}
};

/// One controller instance with warm-start state; single-threaded.
class ControllerSession {
public:
    ControllerSession(const RobotModel& model, const OutputSet& outputs,
                      std::optional<ResClf> clf, ControllerSpec spec);

    ControlTick tick(const Vec& q, const Vec& qd, double t);
    void reset();

    const ControllerSpec& spec() const { return spec_; }
    const ResClf* clf() const { return clf_ ? &*clf_ : nullptr; }

private:
    ControlTick solve_variant(const Vec& q, const Vec& qd, double t);

    const RobotModel& model_;
    const OutputSet& outputs_;
    std::optional<ResClf> clf_;
    ControllerSpec spec_;
    QpSolver solver_;
    std::optional<Vec> u_prev_;
    std::vector<int> warm_active_;
};

/// ‖D q̈ + H − B u − Jᵀ λ‖∞ at a tick's solution.
double dynamics_residual(const RobotModel& model, const Vec& q, const Vec& qd,
                         const ControlTick& tick);

}  // namespace clfqp
