#pragma once
// CSV and JSON output for traces, summaries and reports.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rcb/concentration.hpp"
#include "rcb/harness.hpp"

namespace rcb {

inline constexpr std::string_view kTraceHeader =
    "round,action,reward,instant_regret,cum_regret,weight,level,active_size,beta_hat";
inline constexpr std::string_view kSummaryHeader = "round,mean_cum_regret,std_cum_regret,min,max";

// 12 significant digits, shortest of fixed/scientific ("%.12g").
std::string format_number(double v);

void write_trace_csv(std::ostream& out, const RegretTrace& trace);
void write_summary_csv(std::ostream& out, const SummaryStats& summary);
RegretTrace read_trace_csv(std::istream& in);
SummaryStats read_summary_csv(std::istream& in);

// File variants; failures raise IoError naming the path.
void emit_csv(const RegretTrace& trace, const std::filesystem::path& path);
void emit_csv(const SummaryStats& summary, const std::filesystem::path& path);
RegretTrace load_trace_csv(const std::filesystem::path& path);

nlohmann::json to_json(const RegretTrace& trace);
nlohmann::json to_json(const SummaryStats& summary);
nlohmann::json to_json(const ConcentrationReport& report);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rcb
