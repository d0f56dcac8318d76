#include <clfqp/controllers.hpp>

#include <algorithm>
#include <cmath>

namespace clfqp {

const char* to_string(ControllerVariant v) {
    switch (v) {
        case ControllerVariant::Fbl: return "fbl";
        case ControllerVariant::ClfQp: return "clf-qp";
        case ControllerVariant::ClfQpDelta: return "clf-qp-delta";
        case ControllerVariant::IdQp: return "id-qp";
        case ControllerVariant::IdClfQp: return "id-clf-qp";
        case ControllerVariant::IdClfQpDelta: return "id-clf-qp-delta";
        case ControllerVariant::IdClfQpPlus: return "id-clf-qp+";
        case ControllerVariant::IdClfQpPlusDelta: return "id-clf-qp+-delta";
        case ControllerVariant::IdClfQpPlusRelaxed: return "id-clf-qp+-relaxed";
    }
    return "?";
}

ControllerVariant variant_from_string(const std::string& name) {
    for (ControllerVariant v :
         {ControllerVariant::Fbl, ControllerVariant::ClfQp, ControllerVariant::ClfQpDelta,
          ControllerVariant::IdQp, ControllerVariant::IdClfQp, ControllerVariant::IdClfQpDelta,
          ControllerVariant::IdClfQpPlus, ControllerVariant::IdClfQpPlusDelta,
          ControllerVariant::IdClfQpPlusRelaxed}) {
        if (name == to_string(v)) return v;
    }
    throw ConfigError("controller.variant", "unknown variant '" + name + "'");
}

bool uses_extended_decision(ControllerVariant v) {
    switch (v) {
        case ControllerVariant::Fbl:
        case ControllerVariant::ClfQp:
        case ControllerVariant::ClfQpDelta: return false;
        default: return true;
    }
}

bool has_delta(ControllerVariant v) {
    return v == ControllerVariant::ClfQpDelta || v == ControllerVariant::IdClfQpDelta ||
           v == ControllerVariant::IdClfQpPlusDelta;
}

bool has_clf_constraint(ControllerVariant v) {
    switch (v) {
        case ControllerVariant::ClfQp:
        case ControllerVariant::ClfQpDelta:
        case ControllerVariant::IdClfQp:
        case ControllerVariant::IdClfQpDelta:
        case ControllerVariant::IdClfQpPlus:
        case ControllerVariant::IdClfQpPlusDelta: return true;
        default: return false;
    }
}

bool has_vdot_cost(ControllerVariant v) {
    return v == ControllerVariant::IdClfQpPlus || v == ControllerVariant::IdClfQpPlusDelta ||
           v == ControllerVariant::IdClfQpPlusRelaxed;
}

void Gains::validate(int m1, int m2) const {
    require(kv.size() == m1, "gains: kv must have one entry per relative-degree-1 output");
    require(kp.size() == m2 && kd.size() == m2,
            "gains: kp/kd must have one entry per relative-degree-2 output");
    require((kv.array() > 0.0).all() && (kp.array() > 0.0).all() && (kd.array() > 0.0).all(),
            "gains: entries must be positive");
    require(epsilon > 0.0 && epsilon <= 1.0, "gains: epsilon must lie in (0, 1]");
}

void ControllerSpec::validate() const {
    require(sigma > 0.0, "controller: sigma must be positive");
    if (has_delta(variant)) require(rho > 0.0, "controller: rho must be positive");
    require(w_qdd >= 0.0 && w_u >= 0.0 && w_lambda >= 0.0,
            "controller: W(X) weights must be nonnegative");
    if (holonomic == HolonomicMode::Soft)
        require(holonomic_weight > 0.0, "controller: soft holonomic weight must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TickContext {
    DynamicsTerms dyn;
    OutputJacobians oj;
    Vec a_y;  // affine part of the error output-rate dynamics
    OutputError err;
};

TickContext make_context(const RobotModel& model, const OutputSet& outputs, const Vec& q,
                         const Vec& qd, double t) {
    TickContext ctx;
    ctx.dyn = eval_dynamics(model, q, qd);
    ctx.oj = output_jacobians(outputs, q, qd);
    ctx.a_y = error_accel_affine(outputs, q, qd, t);
    ctx.err = eval_error(outputs, q, qd, t);
    return ctx;
}

void add_least_squares(QpProblem& qp, const Mat& A, const Vec& b, double w) {
    qp.H.noalias() += 2.0 * w * A.transpose() * A;
    qp.f.noalias() -= 2.0 * w * A.transpose() * b;
}

void append_rows(Mat& A, Vec& b, const Mat& rows, const Vec& rhs) {
    const Eigen::Index old = A.rows();
    A.conservativeResize(old + rows.rows(), Eigen::NoChange);
    b.conservativeResize(old + rows.rows());
    A.bottomRows(rows.rows()) = rows;
    b.tail(rhs.size()) = rhs;
}

Vec pd_target(const OutputSet& outputs, const Gains& gains, const OutputError& err) {
    // Negative feedback; the desired-acceleration feedforward already
    // lives in a_y.
    Vec y_star(outputs.m());
    if (outputs.m1 > 0) y_star.head(outputs.m1) = -gains.kv.cwiseProduct(err.y1);
    if (outputs.m2 > 0)
        y_star.tail(outputs.m2) =
            -gains.kp.cwiseProduct(err.y2) - gains.kd.cwiseProduct(err.y2dot);
    return y_star;
}

/// Shared scaffolding for every controller over 𝒳 = (q̈, u, λ[, δ]).
AssembledQp assemble_extended(const RobotModel& model, const OutputSet& outputs,
                              const ResClf* clf, const Vec& q, const Vec& qd, double t,
                              const ControllerSpec& spec, bool clf_row, bool vdot_cost,
                              bool with_delta, bool id_qp_target, const Vec* u_prev) {
    const TickContext ctx = make_context(model, outputs, q, qd, t);
    AssembledQp out;
    out.layout = {model.n_q, model.n_u, model.constraint_dim(), with_delta};
    const DecisionLayout& L = out.layout;
    QpProblem& qp = out.qp;
    qp = QpProblem::zero(L.total());

    // Task cost over the q̈ block.
    Mat A_task = Mat::Zero(outputs.m(), L.total());
    A_task.middleCols(L.qdd_offset(), L.n_q) = ctx.oj.J_y;
    Vec b_task = -ctx.a_y;
    if (id_qp_target) b_task += pd_target(outputs, spec.gains, ctx.err);
    add_least_squares(qp, A_task, b_task, 1.0);

    // σW(𝒳)
    qp.H.diagonal().segment(L.qdd_offset(), L.n_q).array() += 2.0 * spec.sigma * spec.w_qdd;
    qp.H.diagonal().segment(L.u_offset(), L.n_u).array() += 2.0 * spec.sigma * spec.w_u;
    if (L.m_h > 0)
        qp.H.diagonal().segment(L.lambda_offset(), L.m_h).array() +=
            2.0 * spec.sigma * spec.w_lambda;

    if (vdot_cost) {
        require(clf != nullptr, "V̇ cost needs a constructed CLF");
        qp.f.segment(L.qdd_offset(), L.n_q) +=
            spec.vdot_weight * (clf->LGV(ctx.err.eta) * ctx.oj.J_y).transpose();
    }

    if (with_delta) {
        qp.H(L.delta_index(), L.delta_index()) += 2.0 * spec.rho;
        qp.lb(L.delta_index()) = 0.0;
    }

    // Dynamics equality: D q̈ − B u − Jᵀ λ = −H.
    {
        Mat rows = Mat::Zero(L.n_q, L.total());
        rows.middleCols(L.qdd_offset(), L.n_q) = ctx.dyn.D;
        rows.middleCols(L.u_offset(), L.n_u) = -ctx.dyn.B;
        if (L.m_h > 0) rows.middleCols(L.lambda_offset(), L.m_h) = -ctx.dyn.J.transpose();
        append_rows(qp.A_eq, qp.b_eq, rows, Vec(-ctx.dyn.H));
    }

    // Holonomic acceleration constraint, hard or soft.
    if (L.m_h > 0) {
        Mat rows = Mat::Zero(L.m_h, L.total());
        rows.middleCols(L.qdd_offset(), L.n_q) = ctx.dyn.J;
        const Vec rhs = -ctx.dyn.Jdot_qd;
        if (spec.holonomic == ControllerSpec::HolonomicMode::Hard)
            append_rows(qp.A_eq, qp.b_eq, rows, rhs);
        else
            add_least_squares(qp, rows, rhs, spec.holonomic_weight);
    }

    // Friction pyramid / rollover rows per contact.
    if (spec.friction_pyramid && L.m_h > 0) {
        out.friction_rows_begin = static_cast<int>(qp.A_in.rows());
        int lambda_off = L.lambda_offset();
        for (const auto& c : model.constraints) {
            if (c.kind == ConstraintKind::Contact && c.contact) {
                const IneqRows rows = friction_pyramid_rows(c, spec.rollover);
                Mat A = Mat::Zero(rows.A.rows(), L.total());
                A.middleCols(lambda_off, c.dim) = rows.A;
                append_rows(qp.A_in, qp.b_in, A, rows.b);
            }
            lambda_off += c.dim;
        }
        out.friction_rows_end = static_cast<int>(qp.A_in.rows());
    }

    if (spec.torque_bounds) {
        qp.lb.segment(L.u_offset(), L.n_u) = model.torque_lower;
        qp.ub.segment(L.u_offset(), L.n_u) = model.torque_upper;
    }

    // Additional soft constraints.
    for (const auto& req : spec.soft_constraints) {
        switch (req.kind) {
            case SoftConstraintRequest::Kind::Holonomic: {
                if (L.m_h == 0) break;
                Mat rows = Mat::Zero(L.m_h, L.total());
                rows.middleCols(L.qdd_offset(), L.n_q) = ctx.dyn.J;
                add_least_squares(qp, rows, Vec(-ctx.dyn.Jdot_qd), req.weight);
                break;
            }
            case SoftConstraintRequest::Kind::TorqueRate: {
                Mat rows = Mat::Zero(L.n_u, L.total());
                rows.middleCols(L.u_offset(), L.n_u).setIdentity();
                const Vec target = u_prev ? *u_prev : Vec::Zero(L.n_u);
                add_least_squares(qp, rows, target, req.weight);
                break;
            }
            case SoftConstraintRequest::Kind::Custom: {
                require(req.A.cols() == L.total() && req.A.rows() == req.b.size(),
                        "custom soft constraint shape mismatch");
                add_least_squares(qp, req.A, req.b, req.weight);
                break;
            }
        }
    }

    if (clf_row) {
        require(clf != nullptr, "CLF constraint needs a constructed CLF");
        const ConstraintRow row = convergence_constraint_row(
            *clf, ctx.err.eta, ctx.oj.J_y, ctx.a_y, L.total(), L.qdd_offset(), L.delta_index());
        out.clf_row = static_cast<int>(qp.A_in.rows());
        append_rows(qp.A_in, qp.b_in, Mat(row.row.transpose()), Vec::Constant(1, row.rhs));
    }
    return out;
}

/// Decoupling matrix and drift of the error outputs through the
/// λ-eliminated vector fields.
void classical_terms(const RobotModel& model, const OutputSet& outputs, const Vec& q,
                     const Vec& qd, double t, Mat& A_dec, Vec& Lf_y, TickContext& ctx) {
    ctx = make_context(model, outputs, q, qd, t);
    require(outputs.m() == model.n_u,
            "classical CLF path needs a square decoupling matrix (m = n_u); "
            "use an inverse-dynamics variant instead");
    if (!ctx.oj.full_row_rank)
        throw SingularMatrixError("output Jacobian J_y", condition_number(ctx.oj.J_y));
    const VectorFields vf = vector_fields(
        model, q, qd, model.constraint_dim() > 0 ? LambdaMode::Eliminate : LambdaMode::None);
    A_dec = ctx.oj.J_y * vf.g.bottomRows(model.n_q);
    Lf_y = ctx.oj.J_y * vf.f.tail(model.n_q) + ctx.a_y;
}

}  // namespace

FblTerms fbl_terms(const RobotModel& model, const OutputSet& outputs, const Gains& gains,
                   const Vec& q, const Vec& qd, double t) {
    gains.validate(outputs.m1, outputs.m2);
    TickContext ctx;
    FblTerms terms;
    classical_terms(model, outputs, q, qd, t, terms.A, terms.Lf_y, ctx);

    const double eps = gains.epsilon;
    terms.v = Vec(outputs.m());
    if (outputs.m1 > 0)
        terms.v.head(outputs.m1) = -gains.kv.cwiseProduct(ctx.err.y1) / eps;
    if (outputs.m2 > 0)
        terms.v.tail(outputs.m2) = -gains.kp.cwiseProduct(ctx.err.y2) / (eps * eps) -
                                   gains.kd.cwiseProduct(ctx.err.y2dot) / eps;

    const double cond = condition_number(terms.A);
    if (!(cond < kMaxCondition)) throw SingularMatrixError("decoupling matrix A", cond);
    terms.u = terms.A.partialPivLu().solve(terms.v - terms.Lf_y);
    return terms;
}

Vec fbl_control(const RobotModel& model, const OutputSet& outputs, const Gains& gains,
                const Vec& q, const Vec& qd, double t) {
    return fbl_terms(model, outputs, gains, q, qd, t).u;
}

AssembledQp assemble_clf_qp(const RobotModel& model, const OutputSet& outputs, const ResClf& clf,
                            const Vec& q, const Vec& qd, double t, const ControllerSpec& spec) {
    spec.validate();
    TickContext ctx;
    Mat A_dec;
    Vec Lf_y;
    classical_terms(model, outputs, q, qd, t, A_dec, Lf_y, ctx);

    const bool with_delta = has_delta(spec.variant);
    AssembledQp out;
    out.layout = {0, model.n_u, 0, with_delta};
    QpProblem& qp = out.qp;
    qp = QpProblem::zero(out.layout.total());

    Mat A_cost = Mat::Zero(outputs.m(), out.layout.total());
    A_cost.leftCols(model.n_u) = A_dec;
    add_least_squares(qp, A_cost, Vec(-Lf_y), 1.0);
    if (with_delta) {
        qp.H(out.layout.delta_index(), out.layout.delta_index()) += 2.0 * spec.rho;
        qp.lb(out.layout.delta_index()) = 0.0;
    }

    // L_f V + L_g V u ≤ −γV (+ δ), with L_f V = L_F V + L_G V·Lf_y.
    const RowVec lgv = clf.LGV(ctx.err.eta);
    Vec row = Vec::Zero(out.layout.total());
    row.head(model.n_u) = (lgv * A_dec).transpose();
    double rhs = -clf.gamma * clf.V(ctx.err.eta) - clf.LFV(ctx.err.eta) - lgv.dot(Lf_y);
    if (with_delta) {
        row(out.layout.delta_index()) = -1.0;
    } else {
        const double scale = row.norm();
        if (scale > 1e-10) {
            row /= scale;
            rhs /= scale;
        }
    }
    out.clf_row = 0;
    append_rows(qp.A_in, qp.b_in, Mat(row.transpose()), Vec::Constant(1, rhs));

    if (spec.torque_bounds) {
        qp.lb.head(model.n_u) = model.torque_lower;
        qp.ub.head(model.n_u) = model.torque_upper;
    }
    return out;
}

AssembledQp assemble_id_qp(const RobotModel& model, const OutputSet& outputs, const Vec& q,
                           const Vec& qd, double t, const ControllerSpec& spec) {
    spec.validate();
    spec.gains.validate(outputs.m1, outputs.m2);
    return assemble_extended(model, outputs, nullptr, q, qd, t, spec, /*clf_row=*/false,
                             /*vdot_cost=*/false, /*with_delta=*/false, /*id_qp_target=*/true,
                             nullptr);
}

AssembledQp assemble_id_clf_qp(const RobotModel& model, const OutputSet& outputs,
                               const ResClf& clf, const Vec& q, const Vec& qd, double t,
                               const ControllerSpec& spec, bool plus, bool relaxed,
                               const Vec* u_prev) {
    spec.validate();
    return assemble_extended(model, outputs, &clf, q, qd, t, spec,
                             /*clf_row=*/!relaxed, /*vdot_cost=*/plus,
                             /*with_delta=*/has_delta(spec.variant), /*id_qp_target=*/false,
                             u_prev);
}

IneqRows friction_pyramid_rows(const HolonomicConstraint& contact, bool include_rollover) {
    if (!contact.contact)
        throw ConfigError("model.constraints", "contact '" + contact.name +
                                                   "' has no friction geometry");
    const ContactGeometry& g = *contact.contact;
    require(g.normal_row >= 0 && g.normal_row < contact.dim,
            "contact geometry: normal component index out of range");
    std::vector<std::pair<Vec, double>> rows;
    const auto unit = [&](int i) {
        Vec e = Vec::Zero(contact.dim);
        e(i) = 1.0;
        return e;
    };
    const Vec n = unit(g.normal_row);
    rows.push_back({-n, 0.0});  // λ_z ≥ 0
    const double k = g.mu / std::sqrt(2.0);
    for (int t_row : {g.tangent_x_row, g.tangent_y_row}) {
        if (t_row < 0) continue;
        rows.push_back({unit(t_row) - k * n, 0.0});
        rows.push_back({-unit(t_row) - k * n, 0.0});
    }
    if (include_rollover) {
        if (g.moment_x_row >= 0) {
            const double half = 0.5 * g.patch_length;
            rows.push_back({unit(g.moment_x_row) - half * n, 0.0});
            rows.push_back({-unit(g.moment_x_row) - half * n, 0.0});
        }
        if (g.moment_y_row >= 0) {
            const double half = 0.5 * g.patch_width;
            rows.push_back({unit(g.moment_y_row) - half * n, 0.0});
            rows.push_back({-unit(g.moment_y_row) - half * n, 0.0});
        }
    }
    IneqRows out;
    out.A = Mat::Zero(static_cast<int>(rows.size()), contact.dim);
    out.b = Vec::Zero(static_cast<int>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        out.A.row(static_cast<int>(i)) = rows[i].first.transpose();
        out.b(static_cast<int>(i)) = rows[i].second;
    }
    return out;
}

bool pyramid_feasible(const ContactGeometry& g, const Vec& lambda, double tol) {
    const double lz = lambda(g.normal_row);
    if (lz < -tol) return false;
    const double k = g.mu / std::sqrt(2.0);
    for (int t_row : {g.tangent_x_row, g.tangent_y_row})
        if (t_row >= 0 && std::abs(lambda(t_row)) > k * lz + tol) return false;
    if (g.moment_x_row >= 0 &&
        std::abs(lambda(g.moment_x_row)) > 0.5 * g.patch_length * lz + tol)
        return false;
    if (g.moment_y_row >= 0 &&
        std::abs(lambda(g.moment_y_row)) > 0.5 * g.patch_width * lz + tol)
        return false;
    return true;
}

bool cone_feasible(const ContactGeometry& g, const Vec& lambda, double tol) {
    const double lz = lambda(g.normal_row);
    if (lz < -tol) return false;
    const double fx = g.tangent_x_row >= 0 ? lambda(g.tangent_x_row) : 0.0;
    const double fy = g.tangent_y_row >= 0 ? lambda(g.tangent_y_row) : 0.0;
    return std::hypot(fx, fy) <= g.mu * lz + tol;
}

ControllerSession::ControllerSession(const RobotModel& model, const OutputSet& outputs,
                                     std::optional<ResClf> clf, ControllerSpec spec)
    : model_(model), outputs_(outputs), clf_(std::move(clf)), spec_(std::move(spec)) {
    spec_.validate();
    outputs_.validate();
    require(outputs_.m() <= model_.n_u || uses_extended_decision(spec_.variant),
            "m1 + m2 must not exceed n_u for the classical variants");
    if (has_clf_constraint(spec_.variant) || has_vdot_cost(spec_.variant))
        require(clf_.has_value(), "variant '" + std::string(to_string(spec_.variant)) +
                                      "' needs a CLF");
}

void ControllerSession::reset() {
    u_prev_.reset();
    warm_active_.clear();
}

ControlTick ControllerSession::solve_variant(const Vec& q, const Vec& qd, double t) {
    ControlTick tick;
    const ControllerVariant v = spec_.variant;

    if (v == ControllerVariant::Fbl) {
        tick.u = fbl_control(model_, outputs_, spec_.gains, q, qd, t);
        if (spec_.torque_bounds)
            tick.u = tick.u.cwiseMax(model_.torque_lower).cwiseMin(model_.torque_upper);
        const ForwardDynamics fd = forward_dynamics(model_, q, qd, tick.u);
        tick.qdd = fd.qdd;
        tick.lambda = fd.lambda;
        return tick;
    }

    // Assembly for the requested variant, with optional overrides used by
    // the infeasibility fallback ladder.
    const auto assemble = [&](bool inject_delta, bool keep_friction) {
        ControllerSpec spec = spec_;
        spec.friction_pyramid = spec_.friction_pyramid && keep_friction;
        if (inject_delta) {
            switch (v) {
                case ControllerVariant::ClfQp: spec.variant = ControllerVariant::ClfQpDelta; break;
                case ControllerVariant::IdClfQp:
                    spec.variant = ControllerVariant::IdClfQpDelta;
                    break;
                case ControllerVariant::IdClfQpPlus:
                    spec.variant = ControllerVariant::IdClfQpPlusDelta;
                    break;
                default: break;
            }
        }
        const Vec* up = u_prev_ ? &*u_prev_ : nullptr;
        switch (spec.variant) {
            case ControllerVariant::ClfQp:
            case ControllerVariant::ClfQpDelta:
                return assemble_clf_qp(model_, outputs_, *clf_, q, qd, t, spec);
            case ControllerVariant::IdQp:
                return assemble_id_qp(model_, outputs_, q, qd, t, spec);
            default:
                return assemble_id_clf_qp(model_, outputs_, *clf_, q, qd, t, spec,
                                          has_vdot_cost(spec.variant),
                                          spec.variant == ControllerVariant::IdClfQpPlusRelaxed,
                                          up);
        }
    };

    const auto extract = [&](const AssembledQp& a, const QpSolution& sol) {
        const DecisionLayout& L = a.layout;
        if (uses_extended_decision(v)) {
            tick.qdd = sol.x.segment(L.qdd_offset(), L.n_q);
            tick.u = sol.x.segment(L.u_offset(), L.n_u);
            tick.lambda = sol.x.segment(L.lambda_offset(), L.m_h);
        } else {
            tick.u = sol.x.head(L.n_u);
            const ForwardDynamics fd = forward_dynamics(model_, q, qd, tick.u);
            tick.qdd = fd.qdd;
            tick.lambda = fd.lambda;
        }
        tick.delta = L.with_delta ? sol.x(L.delta_index()) : 0.0;
        tick.status = sol.status;
        tick.iterations = sol.iterations;
        tick.active_set_size = static_cast<int>(sol.active_set.size());
        tick.solve_time_us = sol.solve_time_us;
    };

    AssembledQp base = assemble(false, true);
    QpSolution sol = solver_.solve(base.qp, warm_active_);
    tick.iterations = sol.iterations;
    if (sol.status == QpStatus::Optimal) {
        extract(base, sol);
        warm_active_ = sol.active_set;
        return tick;
    }

    // Fallback ladder: δ-relaxation, then friction dropped, then hold.
    warm_active_.clear();
    if (has_clf_constraint(v) && !has_delta(v)) {
        AssembledQp relaxed = assemble(true, true);
        QpSolution rsol = solver_.solve(relaxed.qp);
        if (rsol.status == QpStatus::Optimal) {
            extract(relaxed, rsol);
            tick.fallback_level = 1;
            return tick;
        }
    }
    if (spec_.friction_pyramid && model_.has_contacts()) {
        AssembledQp nofric = assemble(has_clf_constraint(v) && !has_delta(v), false);
        QpSolution fsol = solver_.solve(nofric.qp);
        if (fsol.status == QpStatus::Optimal) {
            extract(nofric, fsol);
            tick.fallback_level = 2;
            return tick;
        }
    }
    if (u_prev_) {
        tick.u = *u_prev_;
        const ForwardDynamics fd = forward_dynamics(model_, q, qd, tick.u);
        tick.qdd = fd.qdd;
        tick.lambda = fd.lambda;
        tick.delta = 0.0;
        tick.status = sol.status;
        tick.fallback_level = 3;
        return tick;
    }
    throw TickError("controller tick failed: " + std::string(to_string(sol.status)) +
                    " with no previous torque to fall back on");
}

ControlTick ControllerSession::tick(const Vec& q, const Vec& qd, double t) {
    ControlTick out = solve_variant(q, qd, t);

    const OutputError err = eval_error(outputs_, q, qd, t);
    out.eta_norm = err.eta.norm();
    if (clf_) {
        const OutputJacobians oj = output_jacobians(outputs_, q, qd);
        const Vec a_y = error_accel_affine(outputs_, q, qd, t);
        const Vec w = oj.J_y * out.qdd + a_y;
        out.V = clf_->V(err.eta);
        out.Vdot = clf_->LFV(err.eta) + clf_->LGV(err.eta).dot(w);
        out.gamma_inst = out.V > 1e-12 ? -out.Vdot / out.V
                                       : std::numeric_limits<double>::quiet_NaN();
    }
    u_prev_ = out.u;
    return out;
}

double dynamics_residual(const RobotModel& model, const Vec& q, const Vec& qd,
                         const ControlTick& tick) {
    const DynamicsTerms d = eval_dynamics(model, q, qd);
    Vec r = d.D * tick.qdd + d.H - d.B * tick.u;
    if (tick.lambda.size() > 0) r -= d.J.transpose() * tick.lambda;
    return r.cwiseAbs().maxCoeff();
}

}  // namespace clfqp
