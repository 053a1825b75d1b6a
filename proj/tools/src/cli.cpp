#include "minen/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "minen/config.hpp"
#include "minen/error.hpp"
#include "minen/export.hpp"
#include "minen/sim.hpp"
#include "minen/stats.hpp"

namespace minen::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> protocol;
  std::optional<std::string> scheduler;
  std::optional<std::string> seeds;
  unsigned workers = 1;
  bool force = false;
  bool trace_routes = false;
};

constexpr std::string_view kPassthrough[] = {"variants", "seeds"};

// Timestamped progress log. Lives next to the outputs but never inside them.
class RunLog {
 public:
  RunLog(const fs::path& path, std::ostream& echo) : file_(path, std::ios::trunc), echo_(echo) {
    if (!file_) {
      throw IoError("cannot open '" + path.string() + "' for writing");
    }
  }

  void line(const std::string& msg) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::lock_guard lock(mu_);
    file_ << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << ' ' << msg << '\n';
    file_.flush();
    echo_ << msg << '\n';
  }

 private:
  std::ofstream file_;
  std::ostream& echo_;
  std::mutex mu_;
};

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

// "A..B" inclusive; B < A yields an empty list.
std::vector<std::uint64_t> parse_seed_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    return {parse_u64(text, "seed")};
  }
  const std::uint64_t a = parse_u64(text.substr(0, dots), "seed range start");
  const std::uint64_t b = parse_u64(text.substr(dots + 2), "seed range end");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = a; s <= b && s >= a; ++s) {
    seeds.push_back(s);
    if (s == b) {
      break;
    }
  }
  return seeds;
}

struct LoadedConfig {
  SimulationConfig base;
  json raw;
};

LoadedConfig load(const Options& opt) {
  LoadedConfig lc;
  lc.raw = opt.config_path.empty() ? json::object() : read_json_file(opt.config_path);
  if (!lc.raw.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  lc.base = config_from_json(lc.raw, kPassthrough);
  if (opt.seed) {
    lc.base.network.rng_seed = *opt.seed;
  }
  if (opt.protocol) {
    const auto p = parse_protocol(*opt.protocol);
    if (!p) {
      throw UsageError("unknown protocol '" + *opt.protocol + "'");
    }
    lc.base.protocol = *p;
  }
  if (opt.scheduler) {
    const auto s = parse_scheduler(*opt.scheduler);
    if (!s) {
      throw UsageError("unknown scheduler '" + *opt.scheduler + "'");
    }
    lc.base.scheduler.algorithm = *s;
  }
  lc.base.validate();
  return lc;
}

std::vector<std::uint64_t> seed_list(const Options& opt, const LoadedConfig& lc) {
  if (opt.seeds) {
    return parse_seed_range(*opt.seeds);
  }
  const auto it = lc.raw.find("seeds");
  if (it == lc.raw.end()) {
    return {lc.base.network.rng_seed};
  }
  if (it->is_string()) {
    return parse_seed_range(it->get<std::string>());
  }
  try {
    return it->get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad seeds: ") + e.what());
  }
}

// Creates `dir`, refusing to touch a non-empty one unless forced.
void prepare_out_dir(const fs::path& dir, bool force) {
  std::error_code ec;
  if (fs::exists(dir, ec) && !fs::is_empty(dir, ec) && !force) {
    throw UsageError("output directory '" + dir.string() +
                     "' is not empty; pass --force to overwrite");
  }
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  }
}

RunSummary run_and_write(const SimulationConfig& cfg, const fs::path& dir, bool trace) {
  std::string routes;
  RoundObserver observer;
  if (trace) {
    observer = [&routes](const RoundObservation& obs) {
      json line;
      line["round"] = obs.round;
      json arr = json::array();
      for (const auto& r : obs.outcome->plan.routes) {
        json path = json::array();
        for (NodeId v : r.path) {
          path.push_back(v == kBaseStation ? json(-1) : json(v));
        }
        arr.push_back({{"head", r.path.front()}, {"path", std::move(path)}, {"cost", r.cost}});
      }
      line["routes"] = std::move(arr);
      routes += line.dump();
      routes += '\n';
    };
  }
  RunSummary s = run_simulation(cfg, observer);
  write_run_outputs(dir, s);
  if (trace) {
    write_text_file(dir / "routes.jsonl", routes);
  }
  return s;
}

// Runs job(i) for i in [0, n) on up to `workers` threads. Each job writes
// only its own slot and directory, so scheduling order cannot leak into
// the results.
template <typename Job>
void run_jobs(std::size_t n, unsigned workers, Job job) {
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) {
          failure = std::current_exception();
        }
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::string opt_field(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

int cmd_run(const Options& opt, std::ostream& out) {
  const LoadedConfig lc = load(opt);
  const fs::path dir = opt.out_dir;
  prepare_out_dir(dir, opt.force);
  RunLog log(dir / "run.log", out);
  log.line("run protocol=" + std::string(to_string(lc.base.protocol)) +
           " scheduler=" + std::string(to_string(lc.base.scheduler.algorithm)) +
           " seed=" + std::to_string(lc.base.network.rng_seed));
  const RunSummary s = run_and_write(lc.base, dir, opt.trace_routes);
  log.line("done rounds_total=" + std::to_string(s.rounds_total));
  return kExitOk;
}

struct Variant {
  std::string label;
  SimulationConfig cfg;
};

std::vector<Variant> read_variants(const LoadedConfig& lc) {
  const auto it = lc.raw.find("variants");
  if (it == lc.raw.end() || !it->is_array()) {
    throw UsageError("compare needs a 'variants' array in the config");
  }
  std::vector<Variant> variants;
  std::map<std::string, int> used;
  for (const auto& v : *it) {
    if (!v.is_object()) {
      throw ConfigError("config.variants: each entry must be an object");
    }
    Variant var{"", lc.base};
    for (const auto& [key, value] : v.items()) {
      if (key != "name" && key != "protocol" && key != "scheduler" && key != "clustering") {
        throw ConfigError("config.variants: unknown key '" + key + "'");
      }
      if (!value.is_string()) {
        throw ConfigError("config.variants: '" + key + "' must be a string");
      }
    }
    if (v.contains("protocol")) {
      const auto p = parse_protocol(v["protocol"].get<std::string>());
      if (!p) {
        throw ConfigError("config.variants: unknown protocol");
      }
      var.cfg.protocol = *p;
    }
    if (v.contains("scheduler")) {
      const auto s = parse_scheduler(v["scheduler"].get<std::string>());
      if (!s) {
        throw ConfigError("config.variants: unknown scheduler");
      }
      var.cfg.scheduler.algorithm = *s;
    }
    if (v.contains("clustering")) {
      const auto c = parse_clustering(v["clustering"].get<std::string>());
      if (!c) {
        throw ConfigError("config.variants: unknown clustering");
      }
      var.cfg.clustering.method = *c;
    }
    std::string label;
    if (v.contains("name")) {
      label = v["name"].get<std::string>();
    } else {
      label = std::string(to_string(var.cfg.protocol));
      if (var.cfg.scheduler.algorithm != SchedulerAlgorithm::none) {
        label += "-" + std::string(to_string(var.cfg.scheduler.algorithm));
      }
    }
    if (label.empty() || label.find_first_of("/\\,\n") != std::string::npos || label == "." ||
        label == "..") {
      throw ConfigError("config.variants: unusable variant name '" + label + "'");
    }
    const int n = ++used[label];
    if (n > 1) {
      label += "-" + std::to_string(n);
    }
    var.label = std::move(label);
    variants.push_back(std::move(var));
  }
  if (variants.size() < 2) {
    throw UsageError("compare needs at least two variants");
  }
  return variants;
}

json aggregate_entry(const std::vector<double>& values) {
  const double q1 = quantile(values, 0.25);
  const double q3 = quantile(values, 0.75);
  return {{"median", median(values)}, {"q1", q1}, {"q3", q3}, {"iqr", q3 - q1}};
}

int cmd_compare(const Options& opt, std::ostream& out) {
  if (opt.protocol || opt.scheduler) {
    throw UsageError("compare takes protocols and schedulers from the config variants");
  }
  const LoadedConfig lc = load(opt);
  const std::vector<Variant> variants = read_variants(lc);
  const std::vector<std::uint64_t> seeds = seed_list(opt, lc);
  if (seeds.empty()) {
    throw UsageError("seed list is empty");
  }
  const fs::path dir = opt.out_dir;
  prepare_out_dir(dir, opt.force);
  RunLog log(dir / "run.log", out);
  log.line("compare variants=" + std::to_string(variants.size()) +
           " seeds=" + std::to_string(seeds.size()));

  const std::size_t jobs = variants.size() * seeds.size();
  std::vector<RunSummary> results(jobs);
  run_jobs(jobs, opt.workers, [&](std::size_t i) {
    const Variant& v = variants[i / seeds.size()];
    SimulationConfig cfg = v.cfg;
    cfg.network.rng_seed = seeds[i % seeds.size()];
    results[i] = run_and_write(cfg, dir / v.label / seed_dir(cfg.network.rng_seed),
                               opt.trace_routes);
    log.line("finished " + v.label + " seed=" + std::to_string(cfg.network.rng_seed) +
             " rounds_total=" + std::to_string(results[i].rounds_total));
  });

  std::ostringstream csv;
  csv << "variant,seed,first_death,rounds_30pct,rounds_50pct,rounds_total\n";
  std::ostringstream med;
  med << "variant,runs,first_death,rounds_30pct,rounds_50pct,rounds_total\n";
  for (std::size_t v = 0; v < variants.size(); ++v) {
    std::vector<double> fd, r30, r50, tot;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      const RunSummary& s = results[v * seeds.size() + k];
      csv << variants[v].label << ',' << seeds[k] << ',' << opt_field(s.first_death_round) << ','
          << opt_field(s.rounds_to_30pct_dead) << ',' << opt_field(s.rounds_to_50pct_dead) << ','
          << s.rounds_total << '\n';
      const LifetimeRounds lr = lifetime_rounds(s);
      fd.push_back(lr.first_death);
      r30.push_back(lr.rounds_30pct);
      r50.push_back(lr.rounds_50pct);
      tot.push_back(lr.rounds_total);
    }
    med << variants[v].label << ',' << seeds.size() << ',' << format_double(median(fd)) << ','
        << format_double(median(r30)) << ',' << format_double(median(r50)) << ','
        << format_double(median(tot)) << '\n';
  }
  write_text_file(dir / "comparison.csv", csv.str());
  write_text_file(dir / "comparison_medians.csv", med.str());
  log.line("wrote comparison.csv");
  return kExitOk;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  const LoadedConfig lc = load(opt);
  std::vector<std::uint64_t> seeds = seed_list(opt, lc);
  if (opt.seed && !opt.seeds) {
    seeds = {*opt.seed};
  }
  if (seeds.empty()) {
    throw UsageError("seed list is empty");
  }
  const fs::path dir = opt.out_dir;
  prepare_out_dir(dir, opt.force);
  RunLog log(dir / "run.log", out);
  log.line("sweep seeds=" + std::to_string(seeds.size()) +
           " workers=" + std::to_string(opt.workers));

  std::vector<RunSummary> results(seeds.size());
  run_jobs(seeds.size(), opt.workers, [&](std::size_t i) {
    SimulationConfig cfg = lc.base;
    cfg.network.rng_seed = seeds[i];
    results[i] = run_and_write(cfg, dir / seed_dir(seeds[i]), opt.trace_routes);
    log.line("finished seed=" + std::to_string(seeds[i]) +
             " rounds_total=" + std::to_string(results[i].rounds_total));
  });

  std::ostringstream csv;
  csv << "seed,first_death,rounds_30pct,rounds_50pct,rounds_total\n";
  std::vector<double> fd, r30, r50, tot;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const RunSummary& s = results[i];
    csv << seeds[i] << ',' << opt_field(s.first_death_round) << ','
        << opt_field(s.rounds_to_30pct_dead) << ',' << opt_field(s.rounds_to_50pct_dead) << ','
        << s.rounds_total << '\n';
    const LifetimeRounds lr = lifetime_rounds(s);
    fd.push_back(lr.first_death);
    r30.push_back(lr.rounds_30pct);
    r50.push_back(lr.rounds_50pct);
    tot.push_back(lr.rounds_total);
  }
  json agg;
  agg["protocol"] = to_string(lc.base.protocol);
  agg["scheduler"] = to_string(lc.base.scheduler.algorithm);
  agg["runs"] = seeds.size();
  agg["seeds"] = seeds;
  agg["first_death"] = aggregate_entry(fd);
  agg["rounds_30pct"] = aggregate_entry(r30);
  agg["rounds_50pct"] = aggregate_entry(r50);
  agg["rounds_total"] = aggregate_entry(tot);
  write_text_file(dir / "sweep.csv", csv.str());
  write_text_file(dir / "aggregate.json", agg.dump(2) + "\n");
  log.line("wrote aggregate.json");
  return kExitOk;
}

void add_common(CLI::App& sub, Options& opt, bool multi_seed) {
  sub.add_option("--config", opt.config_path, "JSON config file")->check(CLI::ExistingFile);
  sub.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  sub.add_option("--seed", opt.seed, "override rng_seed");
  sub.add_option("--protocol", opt.protocol, "minen | leach | fcm");
  sub.add_option("--scheduler", opt.scheduler, "none | gso | ga | pso");
  sub.add_flag("--force", opt.force, "overwrite a non-empty output directory");
  sub.add_flag("--trace-routes", opt.trace_routes, "write routes.jsonl for every run");
  if (multi_seed) {
    sub.add_option("--seeds", opt.seeds, "inclusive seed range A..B");
    sub.add_option("--workers", opt.workers, "parallel runs")->check(CLI::PositiveNumber);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MINEN wireless sensor network simulator", "minen"};
  app.require_subcommand(1);
  Options opt;
  CLI::App* run_cmd = app.add_subcommand("run", "one simulation");
  CLI::App* compare_cmd = app.add_subcommand("compare", "protocol/scheduler variants over seeds");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "one variant over many seeds");
  add_common(*run_cmd, opt, false);
  add_common(*compare_cmd, opt, true);
  add_common(*sweep_cmd, opt, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    // A missing --config file is reported here by the ExistingFile check.
    err << "minen: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(opt, out);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(opt, out);
    }
    return cmd_sweep(opt, out);
  } catch (const ConfigError& e) {
    err << "minen: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "minen: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "minen: io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "minen: io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "minen: internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace minen::cli
