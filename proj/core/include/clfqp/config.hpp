#pragma once

#include <clfqp/sim.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace clfqp {

/// Parsed, schema-checked configuration. Unknown keys anywhere in the
/// document are rejected with their full key path; all physical
/// quantities are SI (m, kg, s, N·m).
struct ModelConfig {
    std::string name;
    std::optional<std::vector<double>> masses;
    std::optional<std::vector<double>> lengths;
    std::optional<double> mu, patch_length, gravity, damping, torque_limit, ankle_height,
        torso_com;
};

struct DesiredConfig {
    std::string type = "constant";  // constant | smooth_move | coeffs
    std::vector<double> values;     // constant
    std::vector<double> from, to;   // smooth_move
    std::string basis = "power";    // coeffs: power | bezier
    std::vector<std::vector<double>> coefficients;
};

struct PhaseConfig {
    std::string mode = "time";
    double t_start = 0.0, t_end = 1.0;
    int output_index = 0;
    double initial_value = 0.0;
    double rate = 1.0;
};

struct OutputsConfig {
    std::string set;  // identity | crouch_task | cartpole_angle | velocity_position
    std::vector<double> velocity_row;
    std::vector<int> position_coords;
    DesiredConfig desired;
    PhaseConfig phase;
};

struct ClfConfig {
    std::optional<std::vector<double>> q_diag;
    double epsilon = 1.0;
    std::optional<double> gamma_override;
};

struct SoftConstraintConfig {
    std::string type;  // holonomic | torque_rate
    double weight = 1.0;
};

struct ControllerConfig {
    std::vector<std::string> variants;
    double sigma = 1e-5;
    double rho = 1e3;
    std::vector<double> kv, kp, kd;
    bool torque_bounds = true;
    bool friction_pyramid = true;
    bool rollover = true;
    std::string holonomic = "hard";
    double holonomic_weight = 1e4;
    std::vector<SoftConstraintConfig> soft_constraints;
    double vdot_weight = 1.0;
    double w_qdd = 1e-2, w_u = 1.0, w_lambda = 1e-2;
};

struct InitialStateConfig {
    std::string type = "nominal";  // nominal | explicit
    std::vector<double> q, qd;
};

struct SimSectionConfig {
    double dt = 1e-4;
    std::vector<double> control_rates_hz{1000.0};
    double duration = 2.0;
    InitialStateConfig initial_state;
    std::vector<double> perturb_q, perturb_qd;
    double eta_tol = 0.01;
    std::string lambda_policy = "explicit";
};

struct ConfigFile {
    ModelConfig model;
    OutputsConfig outputs;
    ClfConfig clf;
    ControllerConfig controller;
    SimSectionConfig sim;
};

ConfigFile load_config_file(const std::string& path);
ConfigFile parse_config(const std::string& json_text);

/// Fully constructed experiment; owns the model, outputs and CLF that
/// the run setups point at.
struct Experiment {
    std::shared_ptr<BuiltinModel> model;
    std::shared_ptr<OutputSet> outputs;
    std::optional<ResClf> clf;
    ControllerSpec controller;  // variant filled per run
    SimConfig sim;              // control_period filled per run
    std::vector<ControllerVariant> variants;
    std::vector<double> control_rates_hz;
};

Experiment build_experiment(const ConfigFile& cfg);
Experiment load_experiment(const std::string& path);

/// One RunSetup per (variant × control rate); labels look like
/// "id-clf-qp+@1000hz".
std::vector<RunSetup> make_run_setups(const Experiment& exp);

/// Label sanitized for file names ('+' → "plus").
std::string file_safe_label(const std::string& label);

}  // namespace clfqp
