#include <clfqp/csv.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace clfqp {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> csv_header(int n_q, int n_u, int m_h) {
    std::vector<std::string> h;
    h.push_back("t");
    for (int i = 0; i < n_q; ++i) h.push_back("q" + std::to_string(i));
    for (int i = 0; i < n_q; ++i) h.push_back("qd" + std::to_string(i));
    for (int i = 0; i < n_u; ++i) h.push_back("u" + std::to_string(i));
    for (int i = 0; i < m_h; ++i) h.push_back("lambda" + std::to_string(i));
    for (const char* name : {"V", "Vdot_analytic", "Vdot_fd", "gamma_inst", "delta", "eta_norm",
                             "status", "active_set", "solve_us"})
        h.push_back(name);
    return h;
}

void write_csv(std::ostream& os, const RunResult& result) {
    const auto header = csv_header(result.n_q, result.n_u, result.m_h);
    for (size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 == header.size() ? "\n" : ",");
    for (const auto& r : result.telemetry) {
        os << fmt(r.t);
        for (int i = 0; i < result.n_q; ++i) os << "," << fmt(r.q(i));
        for (int i = 0; i < result.n_q; ++i) os << "," << fmt(r.qd(i));
        for (int i = 0; i < result.n_u; ++i) os << "," << fmt(r.u(i));
        for (int i = 0; i < result.m_h; ++i)
            os << "," << fmt(i < r.lambda.size() ? r.lambda(i) : 0.0);
        os << "," << fmt(r.V) << "," << fmt(r.Vdot_analytic) << "," << fmt(r.Vdot_fd) << ","
           << fmt(r.gamma_inst) << "," << fmt(r.delta) << "," << fmt(r.eta_norm) << ","
           << r.status << "," << r.active_set << "," << r.solve_us << "\n";
    }
}

std::string csv_string(const RunResult& result) {
    std::ostringstream os;
    write_csv(os, result);
    return os.str();
}

void write_csv_file(const std::string& path, const RunResult& result) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    write_csv(f, result);
}

ParsedCsv parse_csv(std::istream& is) {
    ParsedCsv out;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            out.header = std::move(cells);
            first = false;
        } else {
            out.rows.push_back(std::move(cells));
        }
    }
    return out;
}

ParsedCsv parse_csv_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    return parse_csv(f);
}

int csv_column(const ParsedCsv& csv, const std::string& name) {
    for (size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return static_cast<int>(i);
    return -1;
}

}  // namespace clfqp
