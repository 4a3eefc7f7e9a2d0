#include "cwc/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cwc/builtin.hpp"
#include "cwc/parser.hpp"
#include "cwc/scheduler.hpp"
#include "cwc/sweep.hpp"

namespace cwc {

namespace fs = std::filesystem;

namespace {

struct RunSpec {
  std::string model_path;
  std::string builtin;
  std::size_t instances = 1;
  std::string schema = "sliced";
  std::size_t workers = 0;
  std::size_t quantum = 10;
  std::uint64_t seed = 1;
  std::vector<std::string> sweeps;
  std::string outdir = ".";
  bool dump_raw = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> observable_names(const Model& m) {
  std::vector<std::string> names;
  for (Atom a : m.observables) names.push_back(a.name());
  return names;
}

void write_raw(const fs::path& path, const std::vector<std::string>& names, const std::vector<TrajectorySample>& samples) {
  std::ofstream out(path);
  out << "time";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (const auto& s : samples) {
    out << format_number(s.time);
    for (Count v : s.values) out << ',' << v;
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic CWC simulator running many instances over a parallel farm", "cwc-sim"};
  RunSpec spec;
  auto* model_opt = app.add_option("-m,--model", spec.model_path, "Model file");
  auto* builtin_opt = app.add_option("--builtin", spec.builtin, "Built-in model, e.g. lotka-volterra:2");
  model_opt->excludes(builtin_opt);
  app.add_option("-n,--instances", spec.instances, "Simulation instances per sweep point")
      ->check(CLI::PositiveNumber);
  app.add_option("--schema", spec.schema, "static | ondemand | sliced")
      ->check(CLI::IsMember({"static", "ondemand", "sliced"}));
  app.add_option("-w,--workers", spec.workers, "Worker threads (default: hardware threads)")
      ->check(CLI::PositiveNumber);
  app.add_option("--quantum", spec.quantum, "Time slice as a multiple of the sample period")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", spec.seed, "Master seed");
  app.add_option("--sweep", spec.sweeps, "Kinetic constant sweep r<rule>.k=start:stop:step (repeatable)");
  app.add_option("-o,--outdir", spec.outdir, "Output directory");
  app.add_flag("--dump-raw", spec.dump_raw, "Also write one CSV per instance");
  app.set_version_flag("--version", kVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Model base;
  std::string stem;
  std::vector<SweepPoint> points;
  SchedulerConfig config;
  try {
    if (spec.model_path.empty() == spec.builtin.empty()) throw ConfigError("exactly one of --model or --builtin is required");
    if (!spec.model_path.empty()) {
      base = parse_model(read_file(spec.model_path));
      stem = fs::path(spec.model_path).stem().string();
    } else {
      base = builtin_model(spec.builtin);
      stem = base.name;
    }
    if (base.name.empty()) base.name = stem;
    if (base.observables.empty()) throw ConfigError("model has no observables");
    std::vector<SweepSpec> sweeps;
    for (const auto& s : spec.sweeps) sweeps.push_back(parse_sweep(s));
    points = expand_sweeps(base, sweeps);
    config.schema = *parse_schema(spec.schema);
    config.workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    config.quantum_mult = spec.quantum;
    config.master_seed = spec.seed;
  } catch (const ParseError& e) {
    err << "cwc-sim: " << spec.model_path << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "cwc-sim: " << e.what() << '\n';
    return 1;
  }

  try {
    const fs::path dir(spec.outdir);
    fs::create_directories(dir);
    const auto names = observable_names(base);
    std::ostringstream manifest;
    manifest << "version=" << kVersion << '\n'
             << "model=" << (spec.model_path.empty() ? "builtin:" + spec.builtin : spec.model_path) << '\n'
             << "model_name=" << base.name << '\n'
             << "instances=" << spec.instances << '\n'
             << "schema=" << to_string(config.schema) << '\n'
             << "workers=" << config.workers << '\n'
             << "quantum=" << config.quantum_mult << '\n'
             << "seed=" << config.master_seed << '\n'
             << "t_stop=" << format_number(base.t_stop) << '\n'
             << "delta=" << format_number(base.delta) << '\n'
             << "observables=";
    for (std::size_t k = 0; k < names.size(); ++k) manifest << (k ? "," : "") << names[k];
    manifest << '\n';
    for (std::size_t k = 0; k < spec.sweeps.size(); ++k) manifest << "sweep." << k << '=' << spec.sweeps[k] << '\n';
    manifest << "points=" << points.size() << '\n';

    for (std::size_t p = 0; p < points.size(); ++p) {
      const std::string tag = points.size() == 1 ? stem : stem + ".p" + std::to_string(p);
      auto model = std::make_shared<const Model>(points[p].model);
      std::vector<std::vector<TrajectorySample>> raw;
      SampleObserver observer;
      if (spec.dump_raw) {
        raw.resize(spec.instances);
        observer = [&raw](const TrajectorySample& s) { raw[s.instance_id].push_back(s); };
      }
      const fs::path csv_path = dir / (tag + ".stats.csv");
      std::ofstream csv(csv_path);
      if (!csv) throw std::runtime_error("cannot create " + csv_path.string());
      CsvWriter writer(csv, names);
      if (config.schema == Schema::Sliced) {
        run_sliced(model, spec.instances, config, [&](const StatPoint& sp) { writer.write(sp); }, observer);
      } else {
        for (const auto& sp : run_reduced(model, spec.instances, config, observer)) writer.write(sp);
      }
      csv.close();
      if (!csv) throw std::runtime_error("failed to write " + csv_path.string());
      if (spec.dump_raw)
        for (std::size_t i = 0; i < raw.size(); ++i)
          write_raw(dir / (tag + ".raw." + std::to_string(i) + ".csv"), names, raw[i]);

      manifest << "point." << p << ".output=" << csv_path.filename().string() << '\n';
      manifest << "point." << p << ".settings=";
      for (std::size_t k = 0; k < points[p].settings.size(); ++k)
        manifest << (k ? "," : "") << 'r' << points[p].settings[k].first << ".k="
                 << format_number(points[p].settings[k].second);
      manifest << '\n';
      out << "wrote " << csv_path.string() << '\n';
    }
    std::ofstream mf(dir / (stem + ".manifest"));
    mf << manifest.str();
    if (!mf) throw std::runtime_error("failed to write manifest");
  } catch (const std::exception& e) {
    err << "cwc-sim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace cwc
