#include <clfqp/qp.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace clfqp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRidge = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr double kStepDirTol = 1e-11;
constexpr double kMultiplierTol = 1e-10;
constexpr double kPhase1Tol = 1e-7;

/// One inequality row of the equality-reduced problem, unit-normalized.
/// `id` is the combined index in the original problem ([general rows,
/// lower bounds, upper bounds]) and `scale` the norm divided out, so
/// original multipliers are psi/scale.
struct IneqRow {
    Vec a;
    double b;
    int id;
    double scale;
};

/// Equality-free strictly convex problem over the null-space coordinate.
struct Reduced {
    Mat H;
    Vec f;
    double objective_offset = 0.0;
    std::vector<IneqRow> rows;
    int dim() const { return static_cast<int>(f.size()); }
};

struct Workspace {
    const Reduced* p = nullptr;
    Eigen::LLT<Mat> hllt;
    std::vector<int> working;  // indices into p->rows
    Vec y;
    int iterations = 0;
    std::vector<double> objective_trace;
};

double objective_of(const Reduced& p, const Vec& y) {
    return 0.5 * y.dot(p.H * y) + p.f.dot(y) + p.objective_offset;
}

void working_matrix(const Workspace& ws, Mat& A, Vec& b) {
    const int m = static_cast<int>(ws.working.size());
    A.resize(m, ws.p->dim());
    b.resize(m);
    for (int k = 0; k < m; ++k) {
        A.row(k) = ws.p->rows[ws.working[k]].a.transpose();
        b(k) = ws.p->rows[ws.working[k]].b;
    }
}

/// Range-space solve of the equality-constrained step from the current
/// iterate: Hp + g + A_Wᵀψ = 0, A_W p = b_W − A_W y. Returns false when
/// the working set is numerically rank deficient.
bool eqp_step(Workspace& ws, Vec& step, Vec& psi) {
    const Reduced& p = *ws.p;
    const Vec g = p.H * ws.y + p.f;
    if (ws.working.empty()) {
        step = -ws.hllt.solve(g);
        psi.resize(0);
        return true;
    }
    Mat A;
    Vec b;
    working_matrix(ws, A, b);
    const Mat HinvAt = ws.hllt.solve(A.transpose());
    const Mat S = A * HinvAt;
    Eigen::LDLT<Mat> sldlt(S);
    if (sldlt.info() != Eigen::Success) return false;
    const Vec d = sldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 0.0) || d.cwiseAbs().minCoeff() <= 1e-12 * std::max(dmax, 1e-12))
        return false;
    const Vec r = b - A * ws.y;
    const Vec rhs = -(HinvAt.transpose() * g) - r;
    psi = sldlt.solve(rhs);
    psi += sldlt.solve(rhs - S * psi);  // one refinement pass
    if ((S * psi - rhs).cwiseAbs().maxCoeff() > 1e-6 * (1.0 + psi.cwiseAbs().maxCoeff()))
        return false;
    step = -ws.hllt.solve(Vec(g + A.transpose() * psi));
    return true;
}

double max_violation(const Reduced& p, const Vec& y) {
    double v = 0.0;
    for (const auto& row : p.rows) v = std::max(v, row.a.dot(y) - row.b);
    return v;
}

enum class LoopResult { Optimal, MaxIter };

/// Primal active-set iteration from a feasible y. The objective is
/// non-increasing. Degenerate vertices are handled by an exchange pivot
/// (a dependent blocking row replaces a working row from its dependency
/// support); after a stalled stretch the pivot rules switch to
/// lowest-index (Bland) so the loop cannot cycle.
LoopResult active_set_loop(Workspace& ws, int max_iter) {
    const Reduced& p = *ws.p;
    int stall = 0;
    double last_objective = std::numeric_limits<double>::infinity();
    const int stall_limit = 2 * (p.dim() + static_cast<int>(p.rows.size())) + 10;
    int pending_add = -1;  // row whose addition made the working set singular

    while (true) {
        if (ws.iterations >= max_iter) return LoopResult::MaxIter;
        ++ws.iterations;
        const double objective = objective_of(p, ws.y);
        ws.objective_trace.push_back(objective);
        if (objective < last_objective - 1e-14 * (1.0 + std::abs(objective)))
            stall = 0;
        else
            ++stall;
        last_objective = objective;
        const bool bland = stall > stall_limit;

        Vec step, psi;
        if (!eqp_step(ws, step, psi)) {
            if (ws.working.empty()) return LoopResult::MaxIter;
            const int offender = ws.working.back();
            ws.working.pop_back();
            // Exchange: express the offender over the remaining working
            // rows and swap it for a row in its dependency support.
            Mat A;
            Vec b;
            working_matrix(ws, A, b);
            if (A.rows() > 0) {
                const Vec c = A.transpose()
                                  .completeOrthogonalDecomposition()
                                  .solve(p.rows[offender].a);
                int swap = -1;
                double best = 1e-10;
                for (int k = 0; k < c.size(); ++k) {
                    if (c(k) > 1e-10) {
                        const bool take =
                            bland ? (swap < 0 || p.rows[ws.working[k]].id <
                                                     p.rows[ws.working[swap]].id)
                                  : c(k) > best;
                        if (take) {
                            swap = k;
                            best = c(k);
                        }
                    }
                }
                if (swap >= 0) {
                    ws.working.erase(ws.working.begin() + swap);
                    ws.working.push_back(offender);
                    continue;
                }
            }
            // No exchange available: leave the offender out and let the
            // ratio test clamp against it.
            pending_add = offender;
            continue;
        }

        const Vec gradient = p.H * ws.y + p.f;
        const double predicted_decrease =
            -(gradient.dot(step) + 0.5 * step.dot(p.H * step));
        const double step_norm = step.cwiseAbs().maxCoeff();
        if (step_norm <= kStepDirTol * (1.0 + ws.y.cwiseAbs().maxCoeff()) ||
            predicted_decrease <= 1e-15 * (1.0 + std::abs(objective))) {
            // Numerically at the EQP optimum of this working set; land on
            // it exactly when the residual step stays feasible.
            if (step_norm > 0.0) {
                double fraction = 1.0;
                for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) {
                    if (std::find(ws.working.begin(), ws.working.end(), i) !=
                        ws.working.end())
                        continue;
                    const double rate = p.rows[i].a.dot(step);
                    if (rate <= kStepDirTol) continue;
                    const double slack = p.rows[i].b - p.rows[i].a.dot(ws.y);
                    fraction = std::min(fraction, std::max(0.0, slack) / rate);
                }
                ws.y += fraction * step;
            }
            int drop = -1;
            double most_negative = -kMultiplierTol;
            for (size_t k = 0; k < ws.working.size(); ++k) {
                const double mu_k = psi(static_cast<Eigen::Index>(k));
                const bool candidate = mu_k < -kMultiplierTol;
                if (bland) {
                    if (candidate &&
                        (drop < 0 ||
                         p.rows[ws.working[k]].id < p.rows[ws.working[drop]].id))
                        drop = static_cast<int>(k);
                } else if (mu_k < most_negative) {
                    most_negative = mu_k;
                    drop = static_cast<int>(k);
                }
            }
            if (drop < 0) return LoopResult::Optimal;
            ws.working.erase(ws.working.begin() + drop);
            pending_add = -1;
            continue;
        }

        // Ratio test over rows outside the working set.
        double alpha = 1.0;
        int blocking = -1;
        double blocking_rate = 0.0;
        for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) {
            if (std::find(ws.working.begin(), ws.working.end(), i) != ws.working.end())
                continue;
            const double rate = p.rows[i].a.dot(step);
            if (rate <= kStepDirTol) continue;
            const double slack = p.rows[i].b - p.rows[i].a.dot(ws.y);
            const double a_i = std::max(0.0, slack) / rate;
            const bool closer = a_i < alpha - 1e-14;
            const bool tied = std::abs(a_i - alpha) <= 1e-14;
            bool take = closer;
            if (!take && tied && blocking >= 0) {
                // Ties go to the lowest id under Bland, otherwise to the
                // fastest-violating row, then the lowest id.
                if (bland)
                    take = p.rows[i].id < p.rows[blocking].id;
                else
                    take = rate > blocking_rate + 1e-14 ||
                           (std::abs(rate - blocking_rate) <= 1e-14 &&
                            p.rows[i].id < p.rows[blocking].id);
            }
            if (take) {
                alpha = std::min(a_i, alpha);
                blocking = i;
                blocking_rate = rate;
            }
        }

        ws.y += alpha * step;
        if (blocking >= 0 && alpha < 1.0 && blocking != pending_add) {
            ws.working.push_back(blocking);
        }
        if (alpha > 1e-12) pending_add = -1;
    }
}

/// Feasibility phase on the reduced problem: minimize one relaxation t
/// loosening every (already normalized) row, re-centering the tiny
/// positive-definiteness ridge until t settles; on infeasible problems
/// t settles at the (positive) distance to feasibility instead.
bool phase1(const Reduced& p, Vec& y_feas, int& iterations_used) {
    const int n = p.dim();
    constexpr double kRidgeX = 1e-8;

    Reduced relaxed;
    relaxed.H = Mat::Zero(n + 1, n + 1);
    relaxed.H.topLeftCorner(n, n) = kRidgeX * Mat::Identity(n, n);
    relaxed.H(n, n) = 1.0;
    relaxed.f = Vec::Zero(n + 1);
    for (size_t i = 0; i < p.rows.size(); ++i) {
        Vec a = Vec::Zero(n + 1);
        a.head(n) = p.rows[i].a;
        a(n) = -1.0;
        relaxed.rows.push_back({std::move(a), p.rows[i].b, static_cast<int>(i), 1.0});
    }
    {
        Vec a = Vec::Zero(n + 1);
        a(n) = -1.0;  // t >= 0
        relaxed.rows.push_back({std::move(a), 0.0, static_cast<int>(p.rows.size()), 1.0});
    }

    double last_t = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 4; ++pass) {
        relaxed.f.head(n) = -kRidgeX * y_feas;  // pull toward the current center

        Workspace ws;
        ws.p = &relaxed;
        ws.hllt.compute(relaxed.H);
        ws.y = Vec::Zero(n + 1);
        ws.y.head(n) = y_feas;
        ws.y(n) = std::max(0.0, max_violation(p, y_feas)) * 1.001 + 1e-9;

        // The relaxation phase is LP-like and may need more degenerate
        // pivots than the main loop; give it its own budget.
        const int cap = 50 * (n + 1 + static_cast<int>(relaxed.rows.size()));
        const LoopResult result = active_set_loop(ws, cap);
        iterations_used += ws.iterations;
        if (result != LoopResult::Optimal) return false;
        y_feas = ws.y.head(n);
        const double t = ws.y(n);
        if (t <= kPhase1Tol) return true;
        if (t >= 0.9 * last_t) return false;  // settled above tolerance: infeasible
        last_t = t;
    }
    return false;
}

}  // namespace

QpProblem QpProblem::zero(int n) {
    QpProblem p;
    p.H = Mat::Zero(n, n);
    p.f = Vec::Zero(n);
    p.A_eq = Mat::Zero(0, n);
    p.b_eq = Vec::Zero(0);
    p.A_in = Mat::Zero(0, n);
    p.b_in = Vec::Zero(0);
    p.lb = Vec::Constant(n, -kInf);
    p.ub = Vec::Constant(n, kInf);
    return p;
}

void QpProblem::validate_and_regularize() {
    const int nv = n();
    require(H.rows() == nv && H.cols() == nv, "QP: H must be n×n");
    require(A_eq.cols() == nv || A_eq.rows() == 0, "QP: A_eq column count");
    require(A_eq.rows() == b_eq.size(), "QP: equality row mismatch");
    require(A_in.cols() == nv || A_in.rows() == 0, "QP: A_in column count");
    require(A_in.rows() == b_in.size(), "QP: inequality row mismatch");
    require(lb.size() == nv && ub.size() == nv, "QP: bound size mismatch");
    check_finite(f, "QP gradient");

    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    require(asym < 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()) + 1e-12,
            "QP: H is not symmetric");
    H = 0.5 * (H + H.transpose());

    Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues().minCoeff();
    if (lambda_min < -1e-7 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
        throw Error("QP: H is indefinite beyond regularization");
    if (lambda_min < kRidge) H.diagonal().array() += kRidge;
}

const char* to_string(QpStatus status) {
    switch (status) {
        case QpStatus::Optimal: return "optimal";
        case QpStatus::Infeasible: return "infeasible";
        case QpStatus::MaxIter: return "max-iter";
    }
    return "?";
}

double KktReport::max_residual() const {
    return std::max({stationarity, primal, complementarity, dual});
}

KktReport kkt_residuals(const QpProblem& p, const Vec& x, const Vec& nu, const Vec& mu,
                        const Vec& mu_lb, const Vec& mu_ub) {
    KktReport r;
    Vec stat = p.H * x + p.f;
    if (p.n_eq() > 0) stat += p.A_eq.transpose() * nu;
    if (p.n_in() > 0) stat += p.A_in.transpose() * mu;
    stat += mu_ub - mu_lb;
    r.stationarity = stat.cwiseAbs().maxCoeff();

    double primal = 0.0;
    if (p.n_eq() > 0) primal = (p.A_eq * x - p.b_eq).cwiseAbs().maxCoeff();
    for (int i = 0; i < p.n_in(); ++i)
        primal = std::max(primal, p.A_in.row(i).dot(x) - p.b_in(i));
    for (int i = 0; i < p.n(); ++i) {
        if (std::isfinite(p.lb(i))) primal = std::max(primal, p.lb(i) - x(i));
        if (std::isfinite(p.ub(i))) primal = std::max(primal, x(i) - p.ub(i));
    }
    r.primal = std::max(0.0, primal);

    double comp = 0.0;
    for (int i = 0; i < p.n_in(); ++i)
        comp = std::max(comp, std::abs(mu(i) * (p.A_in.row(i).dot(x) - p.b_in(i))));
    for (int i = 0; i < p.n(); ++i) {
        if (std::isfinite(p.lb(i))) comp = std::max(comp, std::abs(mu_lb(i) * (p.lb(i) - x(i))));
        if (std::isfinite(p.ub(i))) comp = std::max(comp, std::abs(mu_ub(i) * (x(i) - p.ub(i))));
    }
    r.complementarity = comp;

    double dual = 0.0;
    if (p.n_in() > 0) dual = std::max(dual, -mu.minCoeff());
    if (p.n() > 0) dual = std::max({dual, -mu_lb.minCoeff(), -mu_ub.minCoeff()});
    r.dual = std::max(0.0, dual);
    return r;
}

QpSolution QpSolver::solve(const QpProblem& problem_in, std::span<const int> warm_active) {
    const auto t0 = std::chrono::steady_clock::now();
    QpProblem p = problem_in;
    p.validate_and_regularize();
    const int n = p.n();

    QpSolution sol;
    sol.nu = Vec::Zero(p.n_eq());
    sol.mu = Vec::Zero(p.n_in());
    sol.mu_lb = Vec::Zero(n);
    sol.mu_ub = Vec::Zero(n);
    const auto finish = [&](QpStatus status) {
        sol.status = status;
        sol.solve_time_us = std::chrono::duration<double, std::micro>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        return sol;
    };

    // Eliminate the equalities: x = x_p + Z y with Z an orthonormal
    // kernel basis. Every later dependence question then lives among the
    // inequality rows alone.
    Vec x_p = Vec::Zero(n);
    Mat Z = Mat::Identity(n, n);
    if (p.n_eq() > 0) {
        const auto cod = p.A_eq.completeOrthogonalDecomposition();
        x_p = cod.solve(p.b_eq);
        if ((p.A_eq * x_p - p.b_eq).cwiseAbs().maxCoeff() >
            kFeasTol * (1.0 + p.b_eq.cwiseAbs().maxCoeff())) {
            sol.x = x_p;
            return finish(QpStatus::Infeasible);  // inconsistent equalities
        }
        Eigen::FullPivLU<Mat> lu(p.A_eq);
        lu.setThreshold(1e-10);
        const Mat kernel = lu.kernel();
        const bool empty_kernel =
            kernel.cols() == 0 || (kernel.cols() == 1 && kernel.cwiseAbs().maxCoeff() == 0.0);
        if (empty_kernel) {
            Z = Mat::Zero(n, 0);
        } else {
            Z = Eigen::HouseholderQR<Mat>(kernel).householderQ() *
                Mat::Identity(n, kernel.cols());
        }
    }
    const int dim = static_cast<int>(Z.cols());

    // Reduced problem with unit-normalized rows; rows that lose their
    // variable dependence become plain feasibility checks.
    Reduced red;
    red.H = Z.transpose() * p.H * Z;
    red.f = Z.transpose() * (p.H * x_p + p.f);
    red.objective_offset = 0.5 * x_p.dot(p.H * x_p) + p.f.dot(x_p);
    bool constant_row_infeasible = false;
    {
        const auto add_row = [&](const Vec& a, double b, int id) {
            const Vec ar = Z.transpose() * a;
            const double br = b - a.dot(x_p);
            const double s = ar.norm();
            if (s <= 1e-10 * std::max(1.0, a.norm())) {
                if (br < -kFeasTol * (1.0 + std::abs(b))) constant_row_infeasible = true;
                return;
            }
            red.rows.push_back({ar / s, br / s, id, s});
        };
        for (int i = 0; i < p.n_in(); ++i) add_row(p.A_in.row(i).transpose(), p.b_in(i), i);
        for (int i = 0; i < n; ++i) {
            if (std::isfinite(p.lb(i))) {
                Vec a = Vec::Zero(n);
                a(i) = -1.0;
                add_row(a, -p.lb(i), p.n_in() + i);
            }
        }
        for (int i = 0; i < n; ++i) {
            if (std::isfinite(p.ub(i))) {
                Vec a = Vec::Zero(n);
                a(i) = 1.0;
                add_row(a, p.ub(i), p.n_in() + n + i);
            }
        }
    }
    if (constant_row_infeasible) {
        sol.x = x_p;
        return finish(QpStatus::Infeasible);
    }

    Workspace ws;
    ws.p = &red;
    LoopResult res = LoopResult::Optimal;
    Vec psi_final;

    if (dim == 0) {
        // The equalities pin the point; rows were checked above.
        ws.y = Vec::Zero(0);
    } else {
        ws.hllt.compute(red.H);
        if (ws.hllt.info() != Eigen::Success)
            throw Error("QP: Cholesky factorization of H failed after regularization");

        const int cap = 10 * (n + p.n_eq() + static_cast<int>(red.rows.size()) + 1);

        // Warm path: rebuild the previous working set and reuse its EQP
        // solution when it is still feasible.
        bool started = false;
        if (!warm_active.empty()) {
            Workspace trial = ws;
            for (int id : warm_active) {
                const auto it = std::find_if(red.rows.begin(), red.rows.end(),
                                             [id](const IneqRow& r) { return r.id == id; });
                if (it != red.rows.end())
                    trial.working.push_back(static_cast<int>(it - red.rows.begin()));
            }
            trial.y = Vec::Zero(dim);
            Vec step, psi;
            if (eqp_step(trial, step, psi)) {
                trial.y += step;
                if (max_violation(red, trial.y) <= kFeasTol) {
                    ws = std::move(trial);
                    started = true;
                }
            }
        }
        if (!started) {
            ws.working.clear();
            ws.y = Vec::Zero(dim);
            if (max_violation(red, ws.y) > kFeasTol) {
                if (!phase1(red, ws.y, ws.iterations)) {
                    sol.x = x_p + Z * ws.y;
                    sol.iterations = ws.iterations;
                    return finish(QpStatus::Infeasible);
                }
            }
            // Rows already on their boundary start active when they keep
            // the working set independent.
            for (int i = 0; i < static_cast<int>(red.rows.size()); ++i) {
                if (red.rows[i].b - red.rows[i].a.dot(ws.y) <= 0.0) {
                    Workspace trial = ws;
                    trial.working.push_back(i);
                    Vec step, psi;
                    if (eqp_step(trial, step, psi)) ws.working.push_back(i);
                }
            }
        }

        res = active_set_loop(ws, cap);
        Vec step;
        if (res == LoopResult::Optimal && !eqp_step(ws, step, psi_final))
            res = LoopResult::MaxIter;
    }

    sol.x = x_p + Z * ws.y;
    if (res == LoopResult::Optimal &&
        psi_final.size() == static_cast<Eigen::Index>(ws.working.size())) {
        for (size_t k = 0; k < ws.working.size(); ++k) {
            const IneqRow& row = red.rows[ws.working[k]];
            const double m =
                std::max(0.0, psi_final(static_cast<Eigen::Index>(k))) / row.scale;
            if (row.id < p.n_in())
                sol.mu(row.id) = m;
            else if (row.id < p.n_in() + n)
                sol.mu_lb(row.id - p.n_in()) = m;
            else
                sol.mu_ub(row.id - p.n_in() - n) = m;
        }
    }
    // Land coordinates that sit on a bound exactly onto it.
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(p.lb(i)) && std::abs(sol.x(i) - p.lb(i)) < 1e-9) sol.x(i) = p.lb(i);
        if (std::isfinite(p.ub(i)) && std::abs(sol.x(i) - p.ub(i)) < 1e-9) sol.x(i) = p.ub(i);
    }
    if (p.n_eq() > 0) {
        // Equality multipliers from stationarity by least squares.
        Vec stat = p.H * sol.x + p.f;
        if (p.n_in() > 0) stat += p.A_in.transpose() * sol.mu;
        stat += sol.mu_ub - sol.mu_lb;
        sol.nu = Mat(p.A_eq.transpose()).completeOrthogonalDecomposition().solve(Vec(-stat));
    }

    sol.objective = 0.5 * sol.x.dot(p.H * sol.x) + p.f.dot(sol.x);
    sol.iterations = ws.iterations;
    sol.objective_trace = std::move(ws.objective_trace);
    for (int idx : ws.working) sol.active_set.push_back(red.rows[idx].id);
    std::sort(sol.active_set.begin(), sol.active_set.end());
    sol.kkt = kkt_residuals(problem_in, sol.x, sol.nu, sol.mu, sol.mu_lb, sol.mu_ub);

    QpStatus status = res == LoopResult::Optimal ? QpStatus::Optimal : QpStatus::MaxIter;
    if (status == QpStatus::Optimal) {
        // Contract: optimal status certifies the KKT conditions, judged
        // relative to the problem's gradient and iterate scale.
        const double grad_scale =
            1.0 + std::max((p.H * sol.x).cwiseAbs().maxCoeff(), p.f.cwiseAbs().maxCoeff());
        const double x_scale = 1.0 + sol.x.cwiseAbs().maxCoeff();
        const bool certified = sol.kkt.stationarity < 1e-6 * grad_scale &&
                               sol.kkt.primal < 1e-6 * x_scale &&
                               sol.kkt.complementarity < 1e-6 * grad_scale * x_scale &&
                               sol.kkt.dual < 1e-6 * grad_scale;
        if (!certified) status = QpStatus::MaxIter;
    }
    return finish(status);
}

void dump_problem(const QpProblem& p, std::ostream& os) {
    const auto emit_matrix = [&os](const char* tag, const Mat& M) {
        os << tag << " " << M.rows() << " " << M.cols() << "\n";
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
                os << buf << (j + 1 == M.cols() ? "" : " ");
            }
            os << "\n";
        }
    };
    os << "# clfqp qp dump v1: row-major matrices, one matrix row per line\n";
    os << "n " << p.n() << "\n";
    emit_matrix("H", p.H);
    emit_matrix("f", Mat(p.f.transpose()));
    emit_matrix("A_eq", p.A_eq);
    emit_matrix("b_eq", Mat(p.b_eq.transpose()));
    emit_matrix("A_in", p.A_in);
    emit_matrix("b_in", Mat(p.b_in.transpose()));
    emit_matrix("lb", Mat(p.lb.transpose()));
    emit_matrix("ub", Mat(p.ub.transpose()));
}

}  // namespace clfqp
