#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swarmctl/bayesopt.hpp"
#include "swarmctl/error.hpp"
#include "swarmctl/sim.hpp"
#include "swarmctl/tasks.hpp"

namespace swarmctl {

// Shortest representation that round-trips exactly.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

// Comma-separated, LF line endings, no quoting. The first line is the
// mandatory header.
inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  CsvTable table;
  std::string line;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = s.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(s.substr(start));
        break;
      }
      fields.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
    return fields;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (line_no == 1) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size())
      throw ConfigError(path + ": line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw ConfigError(path + ": missing header line");
  return table;
}

inline double csv_double(const CsvTable& table, const std::string& path, std::size_t row, int col) {
  const std::string& cell = table.rows[row][static_cast<std::size_t>(col)];
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ConfigError(path + ": line " + std::to_string(row + 2) + ": '" + cell +
                      "' is not a number");
  return v;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path + ": cannot open file for writing");
  out << text;
  if (!out) throw ConfigError(path + ": write failed");
}

}  // namespace detail

// Rows: one per agent per recorded step, ordered by step then agent.
inline void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                                 const std::vector<double>* per_step_cost = nullptr) {
  std::ostringstream out;
  out << "step,time,agent_id,group,x,y,vx,vy";
  if (per_step_cost) out << ",step_cost";
  out << "\n";
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const WorldView& w = traj.steps[t];
    for (const AgentState& a : w.agents) {
      out << w.step << ',' << format_double(w.time) << ',' << a.id << ',' << a.group << ','
          << format_double(a.position.x) << ',' << format_double(a.position.y) << ','
          << format_double(a.velocity.x) << ',' << format_double(a.velocity.y);
      if (per_step_cost) out << ',' << format_double((*per_step_cost)[t]);
      out << "\n";
    }
  }
  detail::write_file(path, out.str());
}

inline void write_cost_steps_csv(const std::string& path, const CostReport& report) {
  std::ostringstream out;
  out << "step,cost\n";
  for (std::size_t t = 0; t < report.per_step.size(); ++t) {
    out << (t + 1) << ',' << format_double(report.per_step[t]) << "\n";
  }
  detail::write_file(path, out.str());
}

inline void write_campaign_csv(const std::string& path, const BOCampaign& campaign) {
  std::ostringstream out;
  out << "eval_index,cost,incumbent_cost";
  int dims = campaign.space.dims();
  for (int d = 0; d < dims; ++d) out << ",param_" << d;
  out << "\n";
  for (std::size_t i = 0; i < campaign.history.size(); ++i) {
    out << i << ',' << format_double(campaign.history[i].cost) << ','
        << format_double(campaign.incumbent_trace[i]);
    for (double p : campaign.history[i].params) out << ',' << format_double(p);
    out << "\n";
  }
  detail::write_file(path, out.str());
}

inline void write_trials_csv(const std::string& path, const RandomSearchResult& result) {
  std::ostringstream out;
  out << "trial,cost\n";
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    out << i << ',' << format_double(result.history[i].cost) << "\n";
  }
  detail::write_file(path, out.str());
}

inline void write_histogram_csv(const std::string& path, const Histogram& h) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << format_double(h.bin_lo[i]) << ',' << format_double(h.bin_hi[i]) << ',' << h.counts[i]
        << "\n";
  }
  detail::write_file(path, out.str());
}

}  // namespace swarmctl
