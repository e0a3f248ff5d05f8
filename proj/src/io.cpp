#include "rcb/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rcb/errors.hpp"

namespace rcb {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

template <class T>
std::string optional_cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) return format_number(*v);
    else return std::to_string(*v);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("csv line " + std::to_string(line) + ": not a number: '" + s + "'");
    }
}

std::uint64_t parse_uint(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError("csv line " + std::to_string(line) + ": not an integer: '" + s + "'");
    }
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void expect_header(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != header)
        throw IoError("csv: expected header '" + std::string(header) + "'");
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
    out << kTraceHeader << '\n';
    for (const TraceRow& r : trace.rows) {
        out << r.round << ',' << r.action << ',' << format_number(r.reward) << ','
            << format_number(r.instant_regret) << ',' << format_number(r.cum_regret) << ','
            << optional_cell(r.weight) << ',' << optional_cell(r.level) << ','
            << optional_cell(r.active_size) << ',' << optional_cell(r.beta_hat) << '\n';
    }
}

void write_summary_csv(std::ostream& out, const SummaryStats& summary) {
    if (summary.rows.empty()) throw PreconditionError("summary csv: empty summary");
    out << kSummaryHeader << '\n';
    for (const SummaryRow& r : summary.rows)
        out << r.round << ',' << format_number(r.mean) << ',' << format_number(r.std) << ','
            << format_number(r.min) << ',' << format_number(r.max) << '\n';
}

RegretTrace read_trace_csv(std::istream& in) {
    expect_header(in, kTraceHeader);
    RegretTrace trace;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto c = split_row(line);
        if (c.size() != 9) throw IoError("csv line " + std::to_string(lineno) + ": expected 9 columns");
        TraceRow r;
        r.round = parse_uint(c[0], lineno);
        r.action = parse_uint(c[1], lineno);
        r.reward = parse_double(c[2], lineno);
        r.instant_regret = parse_double(c[3], lineno);
        r.cum_regret = parse_double(c[4], lineno);
        if (!c[5].empty()) r.weight = parse_double(c[5], lineno);
        if (!c[6].empty()) r.level = static_cast<int>(parse_uint(c[6], lineno));
        if (!c[7].empty()) r.active_size = parse_uint(c[7], lineno);
        if (!c[8].empty()) r.beta_hat = parse_double(c[8], lineno);
        trace.rows.push_back(r);
    }
    return trace;
}

SummaryStats read_summary_csv(std::istream& in) {
    expect_header(in, kSummaryHeader);
    SummaryStats s;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto c = split_row(line);
        if (c.size() != 5) throw IoError("csv line " + std::to_string(lineno) + ": expected 5 columns");
        s.rows.push_back({parse_uint(c[0], lineno), parse_double(c[1], lineno), parse_double(c[2], lineno),
                          parse_double(c[3], lineno), parse_double(c[4], lineno)});
    }
    return s;
}

void emit_csv(const RegretTrace& trace, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    write_trace_csv(out, trace);
    finish_write(out, path);
}

void emit_csv(const SummaryStats& summary, const std::filesystem::path& path) {
    if (summary.rows.empty()) throw PreconditionError("summary csv: empty summary");
    auto out = open_for_write(path);
    write_summary_csv(out, summary);
    finish_write(out, path);
}

RegretTrace load_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    try {
        return read_trace_csv(in);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_for_write(path);
    out << text;
    finish_write(out, path);
}

nlohmann::json to_json(const RegretTrace& trace) {
    nlohmann::json rows = nlohmann::json::array();
    for (const TraceRow& r : trace.rows)
        rows.push_back({{"round", r.round},
                        {"action", r.action},
                        {"reward", r.reward},
                        {"instant_regret", r.instant_regret},
                        {"cum_regret", r.cum_regret},
                        {"weight", optional_json(r.weight)},
                        {"level", optional_json(r.level)},
                        {"active_size", optional_json(r.active_size)},
                        {"beta_hat", optional_json(r.beta_hat)},
                        {"covered", r.covered},
                        {"confidence_failure", r.confidence_failure}});
    return {{"agent", trace.agent}, {"seed", trace.seed}, {"rows", rows}};
}

nlohmann::json to_json(const SummaryStats& summary) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SummaryRow& r : summary.rows)
        rows.push_back({{"round", r.round},
                        {"mean_cum_regret", r.mean},
                        {"std_cum_regret", r.std},
                        {"min", r.min},
                        {"max", r.max}});
    return {{"agent", summary.agent}, {"runs", summary.runs}, {"rows", rows}};
}

nlohmann::json to_json(const ConcentrationReport& rep) {
    nlohmann::json q = nlohmann::json::array();
    for (const QuantileRow& r : rep.quantiles)
        q.push_back({{"level", r.level}, {"catoni", r.catoni}, {"empirical", r.empirical}});
    return {{"mean", rep.mean},
            {"variance_budget", rep.variance_budget},
            {"range", rep.range},
            {"theta_reference", rep.theta_reference},
            {"theta_low", rep.theta_low},
            {"theta_high", rep.theta_high},
            {"theta_star", rep.theta_star},
            {"log_factor_sq", rep.log_factor_sq},
            {"theta_grid", rep.theta_grid},
            {"trials", rep.trials},
            {"failure_fraction", rep.failure_fraction},
            {"fixed_theta_failure_fraction", rep.fixed_theta_failure_fraction},
            {"quantiles", q}};
}

}  // namespace rcb
