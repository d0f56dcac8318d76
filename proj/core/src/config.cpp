#include <clfqp/config.hpp>

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace clfqp {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) throw ConfigError(path + "." + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(path + "." + key, "expected a number");
    return obj[key].get<double>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) throw ConfigError(path + "." + key, "expected a boolean");
    return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError(path + "." + key, "missing required key");
        return fallback;
    }
    if (!obj[key].is_string()) throw ConfigError(path + "." + key, "expected a string");
    return obj[key].get<std::string>();
}

std::vector<double> get_array(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) return {};
    if (!obj[key].is_array()) throw ConfigError(path + "." + key, "expected an array");
    std::vector<double> out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError(path + "." + key, "expected numeric entries");
        out.push_back(v.get<double>());
    }
    return out;
}

Vec to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ModelConfig parse_model(const json& j) {
    const std::string path = "model";
    check_keys(j, path,
               {"name", "masses", "lengths", "mu", "patch_length", "gravity", "damping",
                "torque_limit", "ankle_height", "torso_com"});
    ModelConfig m;
    m.name = get_string(j, path, "name", "", true);
    if (j.contains("masses")) m.masses = get_array(j, path, "masses");
    if (j.contains("lengths")) m.lengths = get_array(j, path, "lengths");
    for (auto [key, slot] : std::initializer_list<std::pair<const char*, std::optional<double>*>>{
             {"mu", &m.mu},
             {"patch_length", &m.patch_length},
             {"gravity", &m.gravity},
             {"damping", &m.damping},
             {"torque_limit", &m.torque_limit},
             {"ankle_height", &m.ankle_height},
             {"torso_com", &m.torso_com}}) {
        if (j.contains(key)) *slot = get_number(j, path, key, 0.0);
    }
    return m;
}

OutputsConfig parse_outputs(const json& j) {
    const std::string path = "outputs";
    check_keys(j, path, {"set", "velocity_row", "position_coords", "desired", "phase"});
    OutputsConfig o;
    o.set = get_string(j, path, "set", "", true);
    o.velocity_row = get_array(j, path, "velocity_row");
    if (j.contains("position_coords")) {
        for (double v : get_array(j, path, "position_coords"))
            o.position_coords.push_back(static_cast<int>(v));
    }
    if (j.contains("desired")) {
        const json& d = j["desired"];
        const std::string dpath = path + ".desired";
        check_keys(d, dpath, {"type", "values", "from", "to", "basis", "coefficients"});
        o.desired.type = get_string(d, dpath, "type", "constant");
        o.desired.values = get_array(d, dpath, "values");
        o.desired.from = get_array(d, dpath, "from");
        o.desired.to = get_array(d, dpath, "to");
        o.desired.basis = get_string(d, dpath, "basis", "power");
        if (d.contains("coefficients")) {
            if (!d["coefficients"].is_array())
                throw ConfigError(dpath + ".coefficients", "expected an array of arrays");
            for (const auto& row : d["coefficients"]) {
                std::vector<double> c;
                for (const auto& v : row) c.push_back(v.get<double>());
                o.desired.coefficients.push_back(std::move(c));
            }
        }
    } else {
        throw ConfigError(path + ".desired", "missing required key");
    }
    if (j.contains("phase")) {
        const json& p = j["phase"];
        const std::string ppath = path + ".phase";
        check_keys(p, ppath,
                   {"mode", "t_start", "t_end", "output_index", "initial_value", "rate"});
        o.phase.mode = get_string(p, ppath, "mode", "time");
        o.phase.t_start = get_number(p, ppath, "t_start", 0.0);
        o.phase.t_end = get_number(p, ppath, "t_end", 1.0);
        o.phase.output_index = static_cast<int>(get_number(p, ppath, "output_index", 0));
        o.phase.initial_value = get_number(p, ppath, "initial_value", 0.0);
        o.phase.rate = get_number(p, ppath, "rate", 1.0);
    }
    return o;
}

ClfConfig parse_clf(const json& j) {
    const std::string path = "clf";
    check_keys(j, path, {"q_diag", "epsilon", "gamma_override"});
    ClfConfig c;
    if (j.contains("q_diag")) c.q_diag = get_array(j, path, "q_diag");
    c.epsilon = get_number(j, path, "epsilon", 1.0);
    if (j.contains("gamma_override") && !j["gamma_override"].is_null())
        c.gamma_override = get_number(j, path, "gamma_override", 0.0);
    return c;
}

ControllerConfig parse_controller(const json& j) {
    const std::string path = "controller";
    check_keys(j, path,
               {"variant", "variants", "sigma", "rho", "gains", "torque_bounds",
                "friction_pyramid", "rollover", "holonomic", "holonomic_weight",
                "soft_constraints", "vdot_weight", "w_qdd", "w_u", "w_lambda"});
    ControllerConfig c;
    if (j.contains("variant")) c.variants.push_back(get_string(j, path, "variant", "", true));
    if (j.contains("variants")) {
        if (!j["variants"].is_array())
            throw ConfigError(path + ".variants", "expected an array of strings");
        for (const auto& v : j["variants"]) c.variants.push_back(v.get<std::string>());
    }
    if (c.variants.empty())
        throw ConfigError(path + ".variant", "missing required key (or use 'variants')");
    c.sigma = get_number(j, path, "sigma", c.sigma);
    c.rho = get_number(j, path, "rho", c.rho);
    if (j.contains("gains")) {
        const json& g = j["gains"];
        const std::string gpath = path + ".gains";
        check_keys(g, gpath, {"kv", "kp", "kd"});
        c.kv = get_array(g, gpath, "kv");
        c.kp = get_array(g, gpath, "kp");
        c.kd = get_array(g, gpath, "kd");
    }
    c.torque_bounds = get_bool(j, path, "torque_bounds", c.torque_bounds);
    c.friction_pyramid = get_bool(j, path, "friction_pyramid", c.friction_pyramid);
    c.rollover = get_bool(j, path, "rollover", c.rollover);
    c.holonomic = get_string(j, path, "holonomic", c.holonomic);
    c.holonomic_weight = get_number(j, path, "holonomic_weight", c.holonomic_weight);
    if (j.contains("soft_constraints")) {
        if (!j["soft_constraints"].is_array())
            throw ConfigError(path + ".soft_constraints", "expected an array");
        for (const auto& s : j["soft_constraints"]) {
            const std::string spath = path + ".soft_constraints";
            check_keys(s, spath, {"type", "weight"});
            SoftConstraintConfig sc;
            sc.type = get_string(s, spath, "type", "", true);
            sc.weight = get_number(s, spath, "weight", 1.0);
            c.soft_constraints.push_back(sc);
        }
    }
    c.vdot_weight = get_number(j, path, "vdot_weight", c.vdot_weight);
    c.w_qdd = get_number(j, path, "w_qdd", c.w_qdd);
    c.w_u = get_number(j, path, "w_u", c.w_u);
    c.w_lambda = get_number(j, path, "w_lambda", c.w_lambda);
    return c;
}

SimSectionConfig parse_sim(const json& j) {
    const std::string path = "sim";
    check_keys(j, path,
               {"dt", "control_rate_hz", "control_rates_hz", "duration", "initial_state",
                "perturbation", "eta_tol", "lambda_policy"});
    SimSectionConfig s;
    s.dt = get_number(j, path, "dt", s.dt);
    if (j.contains("control_rate_hz"))
        s.control_rates_hz = {get_number(j, path, "control_rate_hz", 1000.0)};
    if (j.contains("control_rates_hz")) s.control_rates_hz = get_array(j, path, "control_rates_hz");
    s.duration = get_number(j, path, "duration", s.duration);
    if (j.contains("initial_state")) {
        const json& is = j["initial_state"];
        const std::string ipath = path + ".initial_state";
        check_keys(is, ipath, {"type", "q", "qd"});
        s.initial_state.type = get_string(is, ipath, "type", "nominal");
        s.initial_state.q = get_array(is, ipath, "q");
        s.initial_state.qd = get_array(is, ipath, "qd");
    }
    if (j.contains("perturbation")) {
        const json& p = j["perturbation"];
        const std::string ppath = path + ".perturbation";
        check_keys(p, ppath, {"dq", "dqd"});
        s.perturb_q = get_array(p, ppath, "dq");
        s.perturb_qd = get_array(p, ppath, "dqd");
    }
    s.eta_tol = get_number(j, path, "eta_tol", s.eta_tol);
    s.lambda_policy = get_string(j, path, "lambda_policy", s.lambda_policy);
    return s;
}

}  // namespace

ConfigFile parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "<root>", {"model", "outputs", "clf", "controller", "sim"});
    for (const char* key : {"model", "outputs", "controller", "sim"})
        if (!j.contains(key)) throw ConfigError(key, "missing required section");

    ConfigFile cfg;
    cfg.model = parse_model(j["model"]);
    cfg.outputs = parse_outputs(j["outputs"]);
    if (j.contains("clf")) cfg.clf = parse_clf(j["clf"]);
    cfg.controller = parse_controller(j["controller"]);
    cfg.sim = parse_sim(j["sim"]);
    return cfg;
}

ConfigFile load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("<file>", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

namespace {

BuiltinModel build_model(const ModelConfig& m) {
    const auto reject = [&](bool cond, const std::string& key) {
        if (cond) throw ConfigError("model." + key, "not applicable to model '" + m.name + "'");
    };
    if (m.name == "double_pendulum") {
        reject(m.mu.has_value(), "mu");
        reject(m.patch_length.has_value(), "patch_length");
        reject(m.ankle_height.has_value(), "ankle_height");
        reject(m.torso_com.has_value(), "torso_com");
        DoublePendulumParams p;
        if (m.masses) {
            if (m.masses->size() != 2) throw ConfigError("model.masses", "expected 2 entries");
            p.m1 = (*m.masses)[0];
            p.m2 = (*m.masses)[1];
        }
        if (m.lengths) {
            if (m.lengths->size() != 2) throw ConfigError("model.lengths", "expected 2 entries");
            p.l1 = (*m.lengths)[0];
            p.l2 = (*m.lengths)[1];
        }
        if (m.gravity) p.gravity = *m.gravity;
        if (m.damping) p.damping = *m.damping;
        if (m.torque_limit) p.torque_limit = *m.torque_limit;
        return make_double_pendulum(p);
    }
    if (m.name == "cart_pole") {
        reject(m.mu.has_value(), "mu");
        reject(m.patch_length.has_value(), "patch_length");
        reject(m.ankle_height.has_value(), "ankle_height");
        reject(m.torso_com.has_value(), "torso_com");
        CartPoleParams p;
        if (m.masses) {
            if (m.masses->size() != 2) throw ConfigError("model.masses", "expected 2 entries");
            p.cart_mass = (*m.masses)[0];
            p.pole_mass = (*m.masses)[1];
        }
        if (m.lengths) {
            if (m.lengths->size() != 1) throw ConfigError("model.lengths", "expected 1 entry");
            p.pole_length = (*m.lengths)[0];
        }
        if (m.gravity) p.gravity = *m.gravity;
        if (m.damping) p.damping = *m.damping;
        if (m.torque_limit) p.force_limit = *m.torque_limit;
        return make_cart_pole(p);
    }
    if (m.name == "crouching_leg") {
        CrouchLegParams p;
        if (m.masses) {
            if (m.masses->size() != 4)
                throw ConfigError("model.masses",
                                  "expected 4 entries (foot, shank, thigh, torso)");
            p.foot_mass = (*m.masses)[0];
            p.shank_mass = (*m.masses)[1];
            p.thigh_mass = (*m.masses)[2];
            p.torso_mass = (*m.masses)[3];
        }
        if (m.lengths) {
            if (m.lengths->size() != 2)
                throw ConfigError("model.lengths", "expected 2 entries (shank, thigh)");
            p.shank_length = (*m.lengths)[0];
            p.thigh_length = (*m.lengths)[1];
        }
        if (m.mu) p.mu = *m.mu;
        if (m.patch_length) p.patch_length = *m.patch_length;
        if (m.gravity) p.gravity = *m.gravity;
        if (m.damping) p.damping = *m.damping;
        if (m.torque_limit) p.torque_limit = *m.torque_limit;
        if (m.ankle_height) p.ankle_height = *m.ankle_height;
        if (m.torso_com) p.torso_com = *m.torso_com;
        return make_crouching_leg(p);
    }
    throw ConfigError("model.name", "unknown model '" + m.name + "'");
}

DesiredTrajectory build_desired(const DesiredConfig& d) {
    if (d.type == "constant") return DesiredTrajectory::constant(to_vec(d.values));
    if (d.type == "smooth_move") {
        if (d.from.size() != d.to.size())
            throw ConfigError("outputs.desired", "'from' and 'to' must have equal sizes");
        return DesiredTrajectory::smooth_move(to_vec(d.from), to_vec(d.to));
    }
    if (d.type == "coeffs") {
        const auto basis = d.basis == "bezier" ? DesiredTrajectory::Basis::Bezier
                          : d.basis == "power"
                              ? DesiredTrajectory::Basis::Power
                              : throw ConfigError("outputs.desired.basis",
                                                  "expected 'power' or 'bezier'");
        std::vector<Vec> coeffs;
        for (const auto& c : d.coefficients) coeffs.push_back(to_vec(c));
        return DesiredTrajectory(basis, std::move(coeffs));
    }
    throw ConfigError("outputs.desired.type", "unknown type '" + d.type + "'");
}

PhaseParam build_phase(const PhaseConfig& p) {
    PhaseParam out;
    if (p.mode == "time") {
        out.mode = PhaseParam::Mode::Time;
        out.t_start = p.t_start;
        out.t_end = p.t_end;
        if (!(p.t_end > p.t_start))
            throw ConfigError("outputs.phase.t_end", "must exceed t_start");
    } else if (p.mode == "state") {
        out.mode = PhaseParam::Mode::State;
        out.output_index = p.output_index;
        out.initial_value = p.initial_value;
        out.rate = p.rate;
        if (p.rate == 0.0) throw ConfigError("outputs.phase.rate", "must be nonzero");
    } else {
        throw ConfigError("outputs.phase.mode", "expected 'time' or 'state'");
    }
    return out;
}

OutputSet build_outputs(const OutputsConfig& o, const BuiltinModel& model) {
    DesiredTrajectory desired = build_desired(o.desired);
    PhaseParam phase = build_phase(o.phase);
    const int n_q = model.model.n_q;
    if (o.set == "identity") {
        if (phase.mode == PhaseParam::Mode::State)
            throw ConfigError("outputs.phase.mode",
                              "state-based phase needs a relative-degree-1 output; "
                              "'identity' has none");
        if (desired.size() != n_q)
            throw ConfigError("outputs.desired", "identity outputs need one curve per joint");
        return make_identity_outputs(n_q, std::move(desired), std::move(phase));
    }
    if (o.set == "crouch_task") {
        if (model.model.name != "crouching_leg")
            throw ConfigError("outputs.set", "'crouch_task' requires the crouching_leg model");
        if (phase.mode == PhaseParam::Mode::State)
            throw ConfigError("outputs.phase.mode",
                              "state-based phase needs a relative-degree-1 output; "
                              "'crouch_task' has none");
        if (desired.size() != 3)
            throw ConfigError("outputs.desired",
                              "crouch_task needs 3 curves (hip x, hip z, torso pitch)");
        return make_crouch_task_outputs(model, std::move(desired), std::move(phase));
    }
    if (o.set == "cartpole_angle") {
        if (model.model.name != "cart_pole")
            throw ConfigError("outputs.set", "'cartpole_angle' requires the cart_pole model");
        if (phase.mode == PhaseParam::Mode::State)
            throw ConfigError("outputs.phase.mode",
                              "state-based phase needs a relative-degree-1 output");
        if (desired.size() != 1)
            throw ConfigError("outputs.desired", "cartpole_angle needs 1 curve");
        return make_cartpole_angle_output(std::move(desired), std::move(phase));
    }
    if (o.set == "velocity_position") {
        if (o.velocity_row.size() != static_cast<size_t>(n_q))
            throw ConfigError("outputs.velocity_row", "expected n_q entries");
        if (desired.size() != 1 + static_cast<int>(o.position_coords.size()))
            throw ConfigError("outputs.desired", "need one curve per output");
        for (int c : o.position_coords)
            if (c < 0 || c >= n_q)
                throw ConfigError("outputs.position_coords", "coordinate index out of range");
        return make_velocity_position_outputs(n_q, to_vec(o.velocity_row).transpose(),
                                              o.position_coords, std::move(desired),
                                              std::move(phase));
    }
    throw ConfigError("outputs.set", "unknown output set '" + o.set + "'");
}

}  // namespace

Experiment build_experiment(const ConfigFile& cfg) {
    Experiment exp;
    exp.model = std::make_shared<BuiltinModel>(build_model(cfg.model));
    exp.outputs = std::make_shared<OutputSet>(build_outputs(cfg.outputs, *exp.model));

    // CLF from the output structure; built for every variant so the V
    // telemetry is comparable across controllers.
    {
        const int dim = exp.outputs->eta_dim();
        Mat Q = Mat::Identity(dim, dim);
        if (cfg.clf.q_diag) {
            if (cfg.clf.q_diag->size() != static_cast<size_t>(dim))
                throw ConfigError("clf.q_diag", "expected m1 + 2·m2 entries");
            Q = to_vec(*cfg.clf.q_diag).asDiagonal();
            if ((to_vec(*cfg.clf.q_diag).array() <= 0.0).any())
                throw ConfigError("clf.q_diag", "entries must be positive");
        }
        if (!(cfg.clf.epsilon > 0.0 && cfg.clf.epsilon <= 1.0))
            throw ConfigError("clf.epsilon", "must lie in (0, 1]");
        exp.clf = make_resclf(exp.outputs->m1, exp.outputs->m2, Q, cfg.clf.epsilon,
                              cfg.clf.gamma_override);
    }

    // Controller spec (variant filled per run).
    ControllerSpec& spec = exp.controller;
    spec.sigma = cfg.controller.sigma;
    spec.rho = cfg.controller.rho;
    spec.gains.kv = to_vec(cfg.controller.kv);
    spec.gains.kp = to_vec(cfg.controller.kp);
    spec.gains.kd = to_vec(cfg.controller.kd);
    spec.gains.epsilon = cfg.clf.epsilon;
    if (spec.gains.kv.size() == 0 && exp.outputs->m1 > 0)
        spec.gains.kv = Vec::Constant(exp.outputs->m1, 10.0);
    if (spec.gains.kp.size() == 0) spec.gains.kp = Vec::Constant(exp.outputs->m2, 100.0);
    if (spec.gains.kd.size() == 0) spec.gains.kd = Vec::Constant(exp.outputs->m2, 20.0);
    spec.gains.validate(exp.outputs->m1, exp.outputs->m2);
    spec.torque_bounds = cfg.controller.torque_bounds;
    spec.friction_pyramid = cfg.controller.friction_pyramid;
    spec.rollover = cfg.controller.rollover;
    if (cfg.controller.holonomic == "hard")
        spec.holonomic = ControllerSpec::HolonomicMode::Hard;
    else if (cfg.controller.holonomic == "soft")
        spec.holonomic = ControllerSpec::HolonomicMode::Soft;
    else
        throw ConfigError("controller.holonomic", "expected 'hard' or 'soft'");
    spec.holonomic_weight = cfg.controller.holonomic_weight;
    for (const auto& sc : cfg.controller.soft_constraints) {
        SoftConstraintRequest req;
        if (sc.type == "torque_rate")
            req.kind = SoftConstraintRequest::Kind::TorqueRate;
        else if (sc.type == "holonomic")
            req.kind = SoftConstraintRequest::Kind::Holonomic;
        else
            throw ConfigError("controller.soft_constraints.type",
                              "expected 'torque_rate' or 'holonomic'");
        req.weight = sc.weight;
        if (!(req.weight > 0.0))
            throw ConfigError("controller.soft_constraints.weight", "must be positive");
        spec.soft_constraints.push_back(req);
    }
    spec.vdot_weight = cfg.controller.vdot_weight;
    spec.w_qdd = cfg.controller.w_qdd;
    spec.w_u = cfg.controller.w_u;
    spec.w_lambda = cfg.controller.w_lambda;

    for (const auto& name : cfg.controller.variants)
        exp.variants.push_back(variant_from_string(name));

    // Sim numbers; control_period filled per run from the rate grid.
    exp.sim.dt = cfg.sim.dt;
    exp.sim.duration = cfg.sim.duration;
    exp.sim.eta_tol = cfg.sim.eta_tol;
    if (cfg.sim.lambda_policy == "explicit")
        exp.sim.lambda_policy = LambdaPolicy::Explicit;
    else if (cfg.sim.lambda_policy == "kkt")
        exp.sim.lambda_policy = LambdaPolicy::KktBlock;
    else
        throw ConfigError("sim.lambda_policy", "expected 'explicit' or 'kkt'");
    if (cfg.sim.control_rates_hz.empty())
        throw ConfigError("sim.control_rate_hz", "need at least one control rate");
    exp.control_rates_hz = cfg.sim.control_rates_hz;

    const int n_q = exp.model->model.n_q;
    if (cfg.sim.initial_state.type == "explicit") {
        if (cfg.sim.initial_state.q.size() != static_cast<size_t>(n_q))
            throw ConfigError("sim.initial_state.q", "expected n_q entries");
        exp.sim.q0 = to_vec(cfg.sim.initial_state.q);
        exp.sim.qd0 = cfg.sim.initial_state.qd.empty() ? Vec::Zero(n_q)
                                                       : to_vec(cfg.sim.initial_state.qd);
        if (exp.sim.qd0.size() != n_q)
            throw ConfigError("sim.initial_state.qd", "expected n_q entries");
    } else if (cfg.sim.initial_state.type == "nominal") {
        const Vec start = exp.outputs->desired.start_values();
        if (cfg.outputs.set == "identity") {
            exp.sim.q0 = start;
        } else if (cfg.outputs.set == "crouch_task") {
            CrouchLegParams p;  // rebuilt with the same overrides
            if (cfg.model.masses) {
                p.foot_mass = (*cfg.model.masses)[0];
                p.shank_mass = (*cfg.model.masses)[1];
                p.thigh_mass = (*cfg.model.masses)[2];
                p.torso_mass = (*cfg.model.masses)[3];
            }
            if (cfg.model.lengths) {
                p.shank_length = (*cfg.model.lengths)[0];
                p.thigh_length = (*cfg.model.lengths)[1];
            }
            if (cfg.model.ankle_height) p.ankle_height = *cfg.model.ankle_height;
            exp.sim.q0 = crouch_pose_for_hip_height(p, start(1));
        } else if (cfg.outputs.set == "cartpole_angle") {
            exp.sim.q0 = Vec::Zero(2);
            exp.sim.q0(1) = start(0);
        } else {
            throw ConfigError("sim.initial_state.type",
                              "'nominal' is not defined for output set '" + cfg.outputs.set +
                                  "'; give an explicit state");
        }
        exp.sim.qd0 = Vec::Zero(n_q);
    } else {
        throw ConfigError("sim.initial_state.type", "expected 'nominal' or 'explicit'");
    }
    if (!cfg.sim.perturb_q.empty()) {
        if (cfg.sim.perturb_q.size() != static_cast<size_t>(n_q))
            throw ConfigError("sim.perturbation.dq", "expected n_q entries");
        exp.sim.perturb_q = to_vec(cfg.sim.perturb_q);
    }
    if (!cfg.sim.perturb_qd.empty()) {
        if (cfg.sim.perturb_qd.size() != static_cast<size_t>(n_q))
            throw ConfigError("sim.perturbation.dqd", "expected n_q entries");
        exp.sim.perturb_qd = to_vec(cfg.sim.perturb_qd);
    }

    // A perturbed start must stay on the constraint manifold.
    if (exp.model->model.constraint_dim() > 0) {
        Vec q = exp.sim.q0;
        Vec qd = exp.sim.qd0;
        if (exp.sim.perturb_q.size() > 0) q += exp.sim.perturb_q;
        if (exp.sim.perturb_qd.size() > 0) qd += exp.sim.perturb_qd;
        for (const auto& c : exp.model->model.constraints) {
            if ((c.jacobian_fn(q) * qd).norm() > 1e-9)
                throw ConfigError("sim", "initial velocity violates constraint '" + c.name + "'");
            if (c.value_fn && exp.sim.perturb_q.size() > 0) {
                if ((c.value_fn(q) - c.value_fn(exp.sim.q0)).norm() > 1e-9)
                    throw ConfigError("sim.perturbation.dq",
                                      "perturbation leaves constraint '" + c.name +
                                          "' manifold");
            }
        }
    }
    return exp;
}

Experiment load_experiment(const std::string& path) {
    return build_experiment(load_config_file(path));
}

std::vector<RunSetup> make_run_setups(const Experiment& exp) {
    std::vector<RunSetup> setups;
    for (double rate : exp.control_rates_hz) {
        if (!(rate > 0.0)) throw ConfigError("sim.control_rate_hz", "rates must be positive");
        for (ControllerVariant v : exp.variants) {
            RunSetup s;
            s.model = &exp.model->model;
            s.outputs = exp.outputs.get();
            s.clf = exp.clf;
            s.controller = exp.controller;
            s.controller.variant = v;
            s.sim = exp.sim;
            s.sim.control_period = 1.0 / rate;
            std::ostringstream label;
            label << to_string(v) << "@" << rate << "hz";
            s.label = label.str();
            setups.push_back(std::move(s));
        }
    }
    return setups;
}

std::string file_safe_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (c == '+')
            out += "plus";
        else if (c == '@' || c == ' ')
            out += '_';
        else
            out += c;
    }
    return out;
}

}  // namespace clfqp
