#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "zklab/lab.hpp"

namespace {

std::string usage_text() {
  std::string s = "usage: zklab <subcommand> [--config FILE] [--out DIR] [--threads N] [--tol-scale F] [--seed U64]\n"
                  "subcommands:";
  for (const auto& c : zklab::lab_subcommands()) s += " " + c;
  return s + "\n";
}

int run(const std::string& command, const zklab::LabConfig& cfg, const std::filesystem::path& out) {
  const bool suite = command == "all";
  const std::vector<std::string> steps = suite ? zklab::suite_steps() : std::vector<std::string>{command};

  zklab::ReportEnvelope summary;
  std::vector<zklab::Assertion> all;
  double wall = 0.0;
  for (const auto& name : steps) {
    spdlog::info("{}: running", name);
    const zklab::StepResult step = zklab::run_step(name, cfg);
    const auto files = zklab::emit_report(out, zklab::make_envelope(step, cfg), step.tables, step.blobs);
    const zklab::Verdict v = zklab::overall_verdict(step.assertions);
    for (const auto& a : step.assertions) {
      if (a.verdict != zklab::Verdict::Pass)
        spdlog::warn("{}: {} = {} ({} {}) {}", name, a.name, zklab::format_number(a.value), a.relation,
                     zklab::format_number(a.bound), zklab::verdict_name(a.verdict));
      auto copy = a;
      copy.name = name + ": " + a.name;
      all.push_back(std::move(copy));
    }
    spdlog::info("{}: {} in {:.1f} s, envelope {}", name, zklab::verdict_name(v), step.wall_time_s,
                 files.envelope.string());
    wall += step.wall_time_s;
    for (const auto& t : files.tables) summary.csv_files.push_back(t.filename().string());
  }
  const zklab::Verdict overall = zklab::overall_verdict(all);
  if (suite) {
    zklab::StepResult agg;
    agg.name = "all";
    agg.assertions = all;
    agg.wall_time_s = wall;
    auto env = zklab::make_envelope(agg, cfg);
    const auto files = zklab::emit_report(out, env, {});
    spdlog::info("all: {} in {:.1f} s, summary {}", zklab::verdict_name(overall), wall, files.envelope.string());
  }
  std::cout << zklab::verdict_name(overall) << "\n";
  return zklab::exit_code_for(overall);
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("zklab"));
  spdlog::set_pattern("[%H:%M:%S] %v");

  CLI::App app{"Numerical checks for weighted decay of Zakharov-Kuznetsov solutions"};
  app.set_version_flag("--version", zklab::lab_version());
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<double> tol_scale;
  std::optional<std::uint64_t> seed;
  bool print_default = false;
  app.add_option("subcommand", command, "one of the subcommands listed below");
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default: $ZKLAB_OUT, else ./zklab-out)");
  app.add_option("--threads", threads, "FFTW threads")->check(CLI::PositiveNumber);
  app.add_option("--tol-scale", tol_scale, "multiplies every numerical tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for the Carleman and smoothing corpora");
  app.add_flag("--print-default-config", print_default, "print the documented default configuration and exit");
  app.footer(usage_text());

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (print_default) {
    std::cout << zklab::LabConfig::default_file_text();
    return 0;
  }
  const auto& known = zklab::lab_subcommands();
  if (std::find(known.begin(), known.end(), command) == known.end()) {
    std::cerr << (command.empty() ? "missing subcommand\n" : "unknown subcommand '" + command + "'\n") << usage_text();
    return 1;
  }

  try {
    zklab::LabConfig cfg =
        config_path.empty() ? zklab::LabConfig::defaults() : zklab::LabConfig::from_file(config_path);
    if (threads) cfg.set("global.threads", std::to_string(*threads));
    if (tol_scale) cfg.set("global.tol_scale", zklab::format_number(*tol_scale));
    if (seed) cfg.set("global.seed", std::to_string(*seed));

    std::filesystem::path out = out_dir;
    if (out.empty()) {
      const char* env = std::getenv("ZKLAB_OUT");
      out = env && *env ? env : "zklab-out";
    }
    return run(command, cfg, out);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
}
