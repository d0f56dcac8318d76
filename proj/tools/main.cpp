#include <clfqp/checks.hpp>
#include <clfqp/config.hpp>
#include <clfqp/csv.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace clfqp;

void print_summary(std::ostream& os, const RunResult& r) {
    const RunSummary& s = r.summary;
    os << "run " << r.label << "\n"
       << "  ticks             " << r.telemetry.size() << (r.aborted ? " (aborted)" : "")
       << "\n";
    if (r.aborted) os << "  error             " << r.error << "\n";
    os << "  peak V            " << s.peak_V << "\n"
       << "  recovery peak V   " << s.recovery_peak_V << "\n"
       << "  time to |eta|<tol " << s.time_to_eta_tol << " s\n"
       << "  integral |u|^2 dt " << s.effort_integral << "\n"
       << "  flagged ticks     " << s.flagged_ticks << "\n"
       << "  max |J qdot|      " << s.max_holonomic_drift << "\n"
       << "  max dyn residual  " << s.max_dynamics_residual << "\n"
       << "  final |eta|       " << s.final_eta_norm << "\n"
       << "  solve wall us     mean " << s.mean_wall_us << ", max " << s.max_wall_us << "\n";
}

void write_plot_script(const std::string& path, const std::vector<RunResult>& runs,
                       const std::vector<std::string>& files) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    const int n_q = runs.front().n_q;
    const int n_u = runs.front().n_u;
    const int m_h = runs.front().m_h;
    const int v_col = 1 + 2 * n_q + n_u + m_h + 1;  // gnuplot columns are 1-based
    const int u_first = 1 + 2 * n_q + 1;
    os << "# gnuplot script: Lyapunov function and squared torque per controller\n"
       << "set datafile separator \",\"\n"
       << "set terminal pngcairo size 1280,520\n"
       << "set output \"comparison.png\"\n"
       << "set multiplot layout 1,2\n"
       << "set key autotitle columnhead\n"
       << "set xlabel \"t [s]\"\n"
       << "set ylabel \"V\"\n"
       << "set logscale y\n"
       << "plot ";
    for (size_t i = 0; i < files.size(); ++i) {
        os << "\"" << files[i] << "\" every ::1 using 1:" << v_col << " with lines title \""
           << runs[i].label << "\"";
        os << (i + 1 == files.size() ? "\n" : ", \\\n     ");
    }
    os << "unset logscale y\n"
       << "set ylabel \"|u|^2\"\n"
       << "plot ";
    std::string usq = "(";
    for (int j = 0; j < n_u; ++j) {
        usq += "column(" + std::to_string(u_first + j) + ")**2";
        if (j + 1 < n_u) usq += "+";
    }
    usq += ")";
    for (size_t i = 0; i < files.size(); ++i) {
        os << "\"" << files[i] << "\" every ::1 using 1:" << usq << " with lines title \""
           << runs[i].label << "\"";
        os << (i + 1 == files.size() ? "\n" : ", \\\n     ");
    }
    os << "unset multiplot\n";
}

int exit_code_for(const std::vector<RunResult>& runs) {
    for (const auto& r : runs) {
        if (r.aborted) return 1;
        if (r.summary.flagged_ticks > 0) return 2;
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const Experiment exp = load_experiment(config_path);
    const std::vector<RunSetup> setups = make_run_setups(exp);
    if (setups.size() > 1)
        std::cout << "config defines a grid of " << setups.size()
                  << " runs; simulating the first (" << setups.front().label
                  << "); use 'compare' for the full grid\n";
    const RunResult result = run(setups.front());
    write_csv_file(out_path, result);
    print_summary(std::cout, result);
    std::cout << "telemetry written to " << out_path << "\n";
    return exit_code_for({result});
}

int cmd_compare(const std::string& config_path, const std::string& outdir) {
    const Experiment exp = load_experiment(config_path);
    const std::vector<RunSetup> setups = make_run_setups(exp);
    std::filesystem::create_directories(outdir);

    const CompareResult result = compare(setups);
    std::vector<std::string> files;
    for (const auto& r : result.runs) {
        const std::string name = file_safe_label(r.label) + ".csv";
        write_csv_file((std::filesystem::path(outdir) / name).string(), r);
        files.push_back(name);
    }
    {
        std::ofstream sum((std::filesystem::path(outdir) / "summary.txt").string());
        for (const auto& r : result.runs) {
            print_summary(sum, r);
            print_summary(std::cout, r);
        }
        if (result.theorem2) {
            const Theorem2Report& t = *result.theorem2;
            sum << "rate-ordering check: " << t.mutually_optimal << "/" << t.ticks
                << " mutually-optimal ticks, " << t.violations << " violations, min gap "
                << t.min_gap << (t.ok() ? " [ok]" : " [FAILED]") << "\n";
            std::cout << "rate-ordering check: " << t.violations << " violations across "
                      << t.mutually_optimal << " ticks" << (t.ok() ? " [ok]" : " [FAILED]")
                      << "\n";
        }
    }
    write_plot_script((std::filesystem::path(outdir) / "plot.gp").string(), result.runs, files);
    std::cout << result.runs.size() << " telemetry files + summary.txt + plot.gp written to "
              << outdir << "\n";
    return exit_code_for(result.runs);
}

int cmd_check(const std::string& level) {
    CheckOptions options;
    options.full = level == "full";
    if (const char* seed_env = std::getenv("CLFQP_SEED")) {
        options.seed = std::strtoull(seed_env, nullptr, 10);
    }
    const auto results = run_checks(options);
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " ("
                  << r.seconds << " s)\n";
    }
    return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimization-based whole-body controllers on planar models"};
    app.require_subcommand(1);

    std::string config_path, out_path = "telemetry.csv", outdir = "compare_out";
    std::string level = "quick";

    CLI::App* simulate = app.add_subcommand("simulate", "run one closed-loop simulation");
    simulate->add_option("--config", config_path, "experiment config (JSON)")->required();
    simulate->add_option("--out", out_path, "telemetry CSV path");

    CLI::App* comp = app.add_subcommand("compare", "run a variant/rate grid");
    comp->add_option("--config", config_path, "experiment config (JSON)")->required();
    comp->add_option("--outdir", outdir, "output directory");

    CLI::App* check = app.add_subcommand("check", "run the invariant suites");
    check->add_option("--level", level, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_path);
        if (comp->parsed()) return cmd_compare(config_path, outdir);
        if (check->parsed()) return cmd_check(level);
    } catch (const clfqp::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
