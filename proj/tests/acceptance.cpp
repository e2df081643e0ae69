// Runs the suite in-process, prints one line per acceptance criterion, then
// checks the command-line tool against the in-process tables.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zklab/lab.hpp"

namespace fs = std::filesystem;
using namespace zklab;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> steps;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "spectral core", {"spectral"}},
      {2, "fundamental solution", {"fundsol"}},
      {3, "evolution", {"evolve", "equivalence"}},
      {4, "weights and interpolation", {"weights", "interp"}},
      {5, "Carleman estimates", {"carleman"}},
      {6, "smoothing", {"smoothing"}},
      {7, "experiments", {"decay15", "persistence", "annulus"}},
  };
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

void line(int id, bool ok, const std::string& title, const std::string& detail) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << title;
  if (!detail.empty()) std::cout << "  (" << detail << ")";
  std::cout << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli, config, work = "acceptance-work";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    else if (flag == "--config") config = argv[i + 1];
    else if (flag == "--work") work = argv[i + 1];
    else {
      std::cerr << "usage: acceptance [--cli PATH] [--config FILE] [--work DIR]\n";
      return 1;
    }
  }
  const LabConfig cfg = config.empty() ? LabConfig::defaults() : LabConfig::from_file(config);
  const fs::path in_process = fs::path(work) / "in-process";
  const fs::path from_cli = fs::path(work) / "cli";
  fs::remove_all(work);

  bool all_ok = true;
  for (const auto& c : criteria()) {
    bool ok = true;
    std::string detail;
    double seconds = 0.0;
    for (const auto& name : c.steps) {
      try {
        const StepResult r = run_step(name, cfg);
        emit_report(in_process, make_envelope(r, cfg), r.tables, r.blobs);
        seconds += r.wall_time_s;
        for (const auto& a : r.assertions) {
          if (a.verdict == Verdict::Pass) continue;
          ok = false;
          detail += name + ": " + a.name + " = " + format_number(a.value) + " " + verdict_name(a.verdict) + "; ";
        }
      } catch (const std::exception& e) {
        ok = false;
        detail += name + ": error: " + e.what() + "; ";
      }
    }
    if (detail.empty()) detail = format_number(std::round(seconds * 10) / 10) + " s";
    line(c.id, ok, c.title, detail);
    all_ok = all_ok && ok;
  }

  if (cli.empty()) {
    line(8, false, "command-line suite", "no tool path given");
    return 1;
  }
  const std::string cmd = quote(cli) + " all" + (config.empty() ? "" : " --config " + quote(config)) + " --out " +
                          quote(from_cli.string()) + " > " + quote((fs::path(work) / "cli.log").string()) + " 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  bool ok = code == 0;
  std::string detail = "exit " + std::to_string(code);
  int compared = 0;
  for (const auto& e : fs::directory_iterator(in_process)) {
    if (e.path().extension() != ".csv") continue;
    const fs::path other = from_cli / e.path().filename();
    if (!fs::exists(other) || slurp(other) != slurp(e.path())) {
      ok = false;
      detail += ", differs: " + e.path().filename().string();
    }
    ++compared;
  }
  if (compared == 0) ok = false;
  detail += ", " + std::to_string(compared) + " CSVs compared byte for byte";
  line(8, ok, "command-line suite and determinism", detail);
  all_ok = all_ok && ok;
  return all_ok ? 0 : 1;
}
