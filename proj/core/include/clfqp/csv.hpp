#pragma once

#include <clfqp/sim.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace clfqp {

/// Fixed telemetry column order:
///   t, q[0..], qd[0..], u[0..], lambda[0..], V, Vdot_analytic, Vdot_fd,
///   gamma_inst, delta, eta_norm, status, active_set, solve_us.
/// Floating-point cells print with 17 significant digits so parsing an
/// emitted file recovers the doubles bit-exactly.
std::vector<std::string> csv_header(int n_q, int n_u, int m_h);

void write_csv(std::ostream& os, const RunResult& result);
std::string csv_string(const RunResult& result);
void write_csv_file(const std::string& path, const RunResult& result);

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
ParsedCsv parse_csv(std::istream& is);
ParsedCsv parse_csv_file(const std::string& path);

/// Column index of a named header entry, -1 when absent.
int csv_column(const ParsedCsv& csv, const std::string& name);

}  // namespace clfqp
