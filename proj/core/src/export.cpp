#include "minen/export.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "minen/error.hpp"

namespace minen {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_metrics_csv(std::ostream& out, const RunSummary& s) {
  out << "round,alive,awake,total_energy_j,heads\n";
  for (const auto& m : s.series) {
    out << m.round << ',' << m.alive << ',' << m.awake << ',' << format_double(m.total_energy)
        << ',' << m.heads << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const CoverageCounts& c) {
  for (std::size_t r = 0; r < c.cells_per_axis; ++r) {
    for (std::size_t col = 0; col < c.cells_per_axis; ++col) {
      if (col != 0) {
        out << ',';
      }
      out << c.at(r, col);
    }
    out << '\n';
  }
}

nlohmann::json summary_to_json(const RunSummary& s) {
  using nlohmann::json;
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); };
  json series = json::object();
  json round = json::array(), alive = json::array(), awake = json::array(),
       heads = json::array(), energy = json::array(), spent = json::array(),
       cost = json::array();
  for (const auto& m : s.series) {
    round.push_back(m.round);
    alive.push_back(m.alive);
    awake.push_back(m.awake);
    heads.push_back(m.heads);
    energy.push_back(m.total_energy);
    spent.push_back(m.energy_spent);
    cost.push_back(m.path_cost_total);
  }
  series["round"] = std::move(round);
  series["alive"] = std::move(alive);
  series["awake"] = std::move(awake);
  series["heads"] = std::move(heads);
  series["total_energy_j"] = std::move(energy);
  series["energy_spent_j"] = std::move(spent);
  series["path_cost_total_j"] = std::move(cost);

  json j;
  j["rounds_total"] = s.rounds_total;
  j["first_death_round"] = opt(s.first_death_round);
  j["rounds_to_30pct_dead"] = opt(s.rounds_to_30pct_dead);
  j["rounds_to_50pct_dead"] = opt(s.rounds_to_50pct_dead);
  j["initial_energy_j"] = s.initial_energy;
  j["coverage"] = {{"cells_per_axis", s.coverage.cells_per_axis}, {"counts", s.coverage.counts}};
  j["series"] = std::move(series);
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.close();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

void write_run_outputs(const std::filesystem::path& dir, const RunSummary& s) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  }
  std::ostringstream metrics;
  write_metrics_csv(metrics, s);
  write_text_file(dir / kMetricsFile, metrics.str());
  std::ostringstream coverage;
  write_coverage_csv(coverage, s.coverage);
  write_text_file(dir / kCoverageFile, coverage.str());
  write_text_file(dir / kSummaryFile, summary_to_json(s).dump(2) + "\n");
}

}  // namespace minen
