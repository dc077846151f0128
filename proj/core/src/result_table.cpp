#include "softran/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

namespace softran {

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<ResultRow> result_rows(const std::vector<SweepCell>& cells) {
  std::vector<ResultRow> rows;
  for (const auto& c : cells) {
    if (!c.ok()) continue;
    const Aggregates& a = c.aggregates;
    ResultRow r{to_string(c.scheme), to_string(c.learner), c.user_count, c.seed,
                a.mean_rate,         a.tau_cnt,            a.max_tau_dst, a.gamma_cnt,
                a.max_gamma_dst,     a.toc};
    for (double v : {r.mean_rate, r.mean_tau_cnt, r.mean_max_tau_dst, r.mean_gamma_cnt,
                     r.mean_max_gamma_dst, r.mean_toc}) {
      if (!std::isfinite(v)) throw std::runtime_error("non-finite value in sweep cell " + std::to_string(c.index));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string result_csv(const std::vector<ResultRow>& rows) {
  std::string out = kResultHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.scheme + ',' + r.learner + ',' + std::to_string(r.user_count) + ',' +
           std::to_string(r.seed);
    for (double v : {r.mean_rate, r.mean_tau_cnt, r.mean_max_tau_dst, r.mean_gamma_cnt,
                     r.mean_max_gamma_dst, r.mean_toc}) {
      out += ',' + format_number(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<SummaryPoint> summarize(const std::string& figure, const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) {
    Key key{r.scheme, r.learner, r.user_count};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  static const std::pair<const char*, double ResultRow::*> metrics[] = {
      {"mean_rate", &ResultRow::mean_rate},
      {"mean_tau_cnt", &ResultRow::mean_tau_cnt},
      {"mean_max_tau_dst", &ResultRow::mean_max_tau_dst},
      {"mean_gamma_cnt", &ResultRow::mean_gamma_cnt},
      {"mean_max_gamma_dst", &ResultRow::mean_max_gamma_dst},
      {"mean_toc", &ResultRow::mean_toc},
  };
  std::vector<SummaryPoint> points;
  for (const auto& key : order) {
    const auto& group = groups[key];
    const double n = static_cast<double>(group.size());
    for (const auto& [name, member] : metrics) {
      double mean = 0.0;
      for (const auto* r : group) mean += r->*member;
      mean /= n;
      double var = 0.0;
      for (const auto* r : group) var += (r->*member - mean) * (r->*member - mean);
      const double se = group.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
      points.push_back({figure, std::get<0>(key), std::get<1>(key), std::get<2>(key), name, mean,
                        se, group.size()});
    }
  }
  return points;
}

std::string summary_csv(const std::vector<SummaryPoint>& points) {
  std::string out = "figure,scheme,learner,user_count,metric,mean,stderr,samples\n";
  for (const auto& p : points) {
    out += p.figure + ',' + p.scheme + ',' + p.learner + ',' + std::to_string(p.user_count) + ',' +
           p.metric + ',' + format_number(p.mean) + ',' + format_number(p.stderr_) + ',' +
           std::to_string(p.samples) + '\n';
  }
  return out;
}

std::string decision_trace_csv(const RunResult& run) {
  std::string out = "slot,training,x_cnt,r_cnt,r_dst,toc_cnt,toc_dst,reward\n";
  for (const auto& r : run.records) {
    out += std::to_string(r.slot) + ',' + (r.training ? "1" : "0") + ',' +
           (r.executed == Mode::Centralized ? "1" : "0") + ',' + format_number(r.r_cnt) + ',' +
           format_number(r.r_dst) + ',' + format_number(r.toc_cnt) + ',' +
           format_number(r.toc_dst) + ',' + format_number(r.executed_toc()) + '\n';
  }
  return out;
}

nlohmann::json to_json(const Aggregates& a) {
  return {{"slots", a.slots},
          {"mean_rate", a.mean_rate},
          {"rate_cnt", a.rate_cnt},
          {"rate_dst", a.rate_dst},
          {"tau_cnt", a.tau_cnt},
          {"max_tau_dst", a.max_tau_dst},
          {"tau_executed", a.tau_executed},
          {"gamma_cnt", a.gamma_cnt},
          {"max_gamma_dst", a.max_gamma_dst},
          {"gamma_executed", a.gamma_executed},
          {"toc", a.toc},
          {"toc_cnt", a.toc_cnt},
          {"toc_dst", a.toc_dst},
          {"fraction_centralized", a.fraction_centralized}};
}

nlohmann::json to_json(const RunResult& run, bool include_records) {
  nlohmann::json j{{"seed", run.seed},
                   {"wall_seconds", run.wall_seconds},
                   {"exclusivity_violations", run.exclusivity_violations},
                   {"aggregates", to_json(run.aggregates)}};
  if (include_records) {
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& r : run.records) {
      recs.push_back({{"slot", r.slot},
                      {"training", r.training},
                      {"mode", to_string(r.executed)},
                      {"r_cnt", r.r_cnt},
                      {"r_dst", r.r_dst},
                      {"tau_cnt", r.tau_cnt},
                      {"tau_dst", r.tau_dst},
                      {"gamma_cnt", r.gamma_cnt},
                      {"gamma_dst", r.gamma_dst},
                      {"toc_cnt", r.toc_cnt},
                      {"toc_dst", r.toc_dst},
                      {"user_counts", r.user_counts}});
    }
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace softran
