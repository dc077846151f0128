#pragma once

#include <nlohmann/json.hpp>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "softran/engine.hpp"

namespace softran {

struct ResultRow {
  std::string scheme;
  std::string learner;
  std::size_t user_count = 0;
  std::uint64_t seed = 0;
  double mean_rate = 0.0;
  double mean_tau_cnt = 0.0;
  double mean_max_tau_dst = 0.0;
  double mean_gamma_cnt = 0.0;
  double mean_max_gamma_dst = 0.0;
  double mean_toc = 0.0;
};

inline constexpr const char* kResultHeader =
    "scheme,learner,user_count,seed,mean_rate,mean_tau_cnt,mean_max_tau_dst,mean_gamma_cnt,"
    "mean_max_gamma_dst,mean_toc";

// One row per successful sweep cell, in cell order. Throws if any numeric
// field is not finite.
std::vector<ResultRow> result_rows(const std::vector<SweepCell>& cells);
std::string result_csv(const std::vector<ResultRow>& rows);

// Shortest representation that parses back to the same double.
std::string format_number(double v);

// Mean and standard error across seeds of one metric for one curve point.
struct SummaryPoint {
  std::string figure;
  std::string scheme;
  std::string learner;
  std::size_t user_count = 0;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

// Groups rows by (scheme, learner, user_count), in first-appearance order,
// and summarises every metric column.
std::vector<SummaryPoint> summarize(const std::string& figure, const std::vector<ResultRow>& rows);
std::string summary_csv(const std::vector<SummaryPoint>& points);

// slot,training,x_cnt,r_cnt,r_dst,toc_cnt,toc_dst,reward
std::string decision_trace_csv(const RunResult& run);

nlohmann::json to_json(const Aggregates& a);
nlohmann::json to_json(const RunResult& run, bool include_records);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace softran
