// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "ecgbench/config.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/ingest.hpp"
#include "ecgbench/parallel.hpp"
#include "ecgbench/regimes.hpp"
#include "ecgbench/results.hpp"
#include "ecgbench/synth.hpp"

namespace ecgbench::cli {

namespace fs = std::filesystem;

namespace {

// Thrown for anything wrong with inputs (config, manifest, signals, results files); exit 2.
struct InputError {
  std::string message;
};

Json read_json_file(const fs::path& path) {
  std::string text;
  try {
    text = ingest::read_text(path);
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError{"SchemaError: " + path.string() + " is not valid JSON"};
  return j;
}

std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("ECGBENCH_SEED_OVERRIDE");
  if (env == nullptr || *env == '\0') return std::nullopt;
  const std::string_view s(env);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError{"InvalidArgument: ECGBENCH_SEED_OVERRIDE must be a non-negative integer, got '" +
                     std::string(s) + "'"};
  }
  return v;
}

RunConfig load_config(const fs::path& path, const std::vector<std::string>& regimes,
                      const std::vector<std::string>& settings) {
  try {
    RunConfig cfg = validate_config(read_json_file(path));
    if (!regimes.empty() || !settings.empty()) {
      Json j = to_json(cfg);
      if (!regimes.empty()) j["regime"]["names"] = regimes;
      if (!settings.empty()) j["regime"]["settings"] = settings;
      cfg = validate_config(j);
    }
    if (auto s = seed_override()) cfg.seeds = {*s};
    return cfg;
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
}

// Files written by a run; removed again unless commit() is reached.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path dir) : dir_(std::move(dir)) {}
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;

  void prepare() {
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
      fs::create_directories(dir_, ec);
      if (ec) throw InputError{"IoError: cannot create " + dir_.string() + ": " + ec.message()};
      created_dir_ = true;
    }
    if (!fs::is_directory(dir_, ec)) throw InputError{"IoError: " + dir_.string() + " is not a directory"};
  }
  fs::path file(const std::string& name) {
    files_.push_back(dir_ / name);
    return files_.back();
  }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

int cmd_synth(const std::string& preset_name, const std::string& spec_path, std::uint64_t seed,
              const std::string& out_dir, std::ostream& out) {
  synth::DatasetSpec spec;
  try {
    if (!preset_name.empty()) {
      const auto names = synth::preset_names();
      if (std::find(names.begin(), names.end(), preset_name) == names.end()) {
        throw InputError{"InvalidArgument: unknown preset '" + preset_name + "'"};
      }
      spec = synth::preset(preset_name);
    } else {
      spec = synth::spec_from_json(read_json_file(spec_path));
    }
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  try {
    const auto index = synth::generate_dataset(spec, seed, out_dir);
    out << "wrote " << index.records.size() << " records to " << out_dir << "\n";
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  return kOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::vector<std::string>& regimes,
            const std::vector<std::string>& settings, int jobs, std::ostream& out) {
  const RunConfig cfg = load_config(config_path, regimes, settings);
  std::optional<parallel::ScopedThreads> threads;
  if (jobs > 0) threads.emplace(jobs);

  OutputGuard guard(out_dir);
  guard.prepare();

  std::pair<ingest::DatasetIndex, std::vector<Recording>> source;
  try {
    source = regimes::load_source(cfg.dataset, fs::path(config_path).parent_path());
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  const auto data = regimes::prepare_dataset(source.first, source.second, cfg);
  const auto report = regimes::run_all(data, cfg);
  const auto file = results::make_results(cfg, report);

  try {
    const auto json_path = guard.file("results.json");
    const auto csv_path = guard.file("results.csv");
    results::write_results(file, json_path, csv_path);
  } catch (const Error& e) {
    throw InputError{e.what()};
  }
  guard.commit();
  out << results::comparison_table({{"run", file}});
  return kOk;
}

int cmd_report(const std::vector<std::string>& files, const std::vector<std::string>& delta, std::ostream& out) {
  auto read = [](const std::string& path) {
    try {
      return results::read_results(path);
    } catch (const Error& e) {
      throw InputError{e.what()};
    }
  };
  if (!delta.empty()) {
    const auto a = read(delta[0]);
    const auto b = read(delta[1]);
    try {
      out << results::delta_table(a, b);
    } catch (const Error& e) {
      throw InputError{e.what()};
    }
    return kOk;
  }
  if (files.empty()) throw InputError{"InvalidArgument: report needs at least one results file"};
  std::vector<std::pair<std::string, results::ResultsFile>> runs;
  for (const auto& f : files) runs.emplace_back(fs::path(f).parent_path().filename().string() + "/" +
                                                     fs::path(f).filename().string(), read(f));
  out << results::comparison_table(runs);
  return kOk;
}

int cmd_validate(const std::string& config_path, std::ostream& out) {
  const RunConfig cfg = load_config(config_path, {}, {});
  if (cfg.dataset.manifest) {
    fs::path path(*cfg.dataset.manifest);
    if (path.is_relative()) path = fs::path(config_path).parent_path() / path;
    try {
      const auto index = ingest::load_manifest(path);
      out << "manifest: " << index.records.size() << " records, " << index.subjects().size() << " subjects\n";
    } catch (const Error& e) {
      throw InputError{e.what()};
    }
  }
  out << "config ok, digest " << config_digest(cfg) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ECG biometrics benchmarking toolkit", "ecgbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ECGBENCH_VERSION));

  std::string preset_name, spec_path, out_dir;
  std::uint64_t seed = 0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  auto* preset_opt = synth_cmd->add_option("--preset", preset_name, "Built-in preset (fallacy30, aging4, ablation)");
  auto* spec_opt = synth_cmd->add_option("--spec", spec_path, "Generator spec JSON file")->check(CLI::ExistingFile);
  preset_opt->excludes(spec_opt);
  synth_cmd->add_option("--seed", seed, "Generator seed");
  synth_cmd->add_option("--out", out_dir, "Output directory")->required();

  std::string config_path, run_out;
  std::vector<std::string> regime_names, setting_names;
  int jobs = 0;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a config across seeds and regimes");
  run_cmd->add_option("--config", config_path, "Run config JSON")->required();
  run_cmd->add_option("--out", run_out, "Output directory for results.json and results.csv")->required();
  run_cmd->add_option("--regime", regime_names, "Only these regimes")->delimiter(',');
  run_cmd->add_option("--setting", setting_names, "Only these settings (closed, open)")->delimiter(',');
  run_cmd->add_option("--jobs", jobs, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  std::vector<std::string> report_files, delta;
  auto* report_cmd = app.add_subcommand("report", "Compare results files");
  report_cmd->add_option("files", report_files, "Results JSON files");
  report_cmd->add_option("--delta", delta, "Print B - A for two results files")->expected(2);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a run config");
  validate_cmd->add_option("--config", validate_path, "Run config JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (synth_cmd->parsed()) {
      if (preset_name.empty() == spec_path.empty()) {
        err << "synth: give exactly one of --preset or --spec\n";
        return kUsageError;
      }
      return cmd_synth(preset_name, spec_path, seed, out_dir, out);
    }
    if (run_cmd->parsed()) return cmd_run(config_path, run_out, regime_names, setting_names, jobs, out);
    if (report_cmd->parsed()) return cmd_report(report_files, delta, out);
    if (validate_cmd->parsed()) return cmd_validate(validate_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.message << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kEvaluationError;
  }
  return kUsageError;
}

}  // namespace ecgbench::cli
