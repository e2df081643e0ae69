#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zklab/io.hpp"

namespace zklab {

// Sectioned INI configuration. Every key has a default and a constraint;
// unknown sections or keys and out-of-range values are rejected with the key
// named in the message.
class LabConfig {
 public:
  static LabConfig defaults();
  static LabConfig from_file(const std::filesystem::path& path);
  static LabConfig from_string(std::string_view text);

  // `key` is "section.name"; the value is parsed and range-checked.
  void set(const std::string& key, const std::string& value);

  // One "section.name = value" line per key in schema order, numbers in
  // shortest round-trip form. Output location is not part of it.
  std::string canonical_text() const;
  std::string hash() const;

  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t u64(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  // Documented default file, one comment line per key.
  static std::string default_file_text();

 private:
  const std::string& raw(const std::string& key) const;
  std::map<std::string, std::string> values_;
};

struct StepResult {
  std::string name;
  std::vector<Assertion> assertions;
  std::vector<CsvTable> tables;
  std::vector<BinaryBlob> blobs;
  double wall_time_s = 0.0;
};

// Pass if every assertion passed, Fail if any failed, Inconclusive otherwise.
Verdict overall_verdict(const std::vector<Assertion>& assertions);
// 0 pass, 1 fail, 2 inconclusive.
int exit_code_for(Verdict v);

// Subcommands accepted by the command-line tool, `all` last.
const std::vector<std::string>& lab_subcommands();
// What `all` runs, in order; starts with the spectral self-tests.
const std::vector<std::string>& suite_steps();

StepResult run_step(const std::string& name, const LabConfig& cfg);

ReportEnvelope make_envelope(const StepResult& step, const LabConfig& cfg);

const char* lab_version();

}  // namespace zklab
