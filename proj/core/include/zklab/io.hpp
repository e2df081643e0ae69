#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zklab/grid.hpp"

namespace zklab {

// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_number(double v);

struct CsvTable {
  std::string name;                  // suffix used in the file name; empty for the main table
  std::vector<std::string> columns;  // header cells, units in brackets
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);
};

// RFC 4180: CRLF line ends, fields quoted when they contain a comma, quote or
// line break.
std::string render_csv(const CsvTable& table);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Flat binary snapshot: int32 nx, int32 ny, then doubles Lx, Ly, t, then the
// samples in storage order, all in host byte order.
std::string snapshot_bytes(const RealField& f, double t);
RealField read_snapshot_bytes(std::string_view bytes, double* t = nullptr);

std::string sha256_hex(std::string_view data);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct Assertion {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  std::string relation;  // how value is compared with bound, e.g. "<="
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct ReportEnvelope {
  std::string tool_version;
  std::string subcommand;
  std::string config_hash;
  std::string config_text;  // canonical form that was hashed
  double wall_time_s = 0.0;
  double tol_scale = 1.0;
  std::vector<Assertion> assertions;
  std::vector<std::string> csv_files;  // file names relative to the envelope
};

std::string render_envelope_json(const ReportEnvelope& env);

struct EmittedFiles {
  std::filesystem::path envelope;
  std::vector<std::filesystem::path> tables;
  std::vector<std::filesystem::path> blobs;
};

struct BinaryBlob {
  std::string name;  // suffix, as for tables
  std::string extension;
  std::string bytes;
};

// <subcommand>-<hash8>.csv for the unnamed table, <subcommand>-<hash8>-<name>.csv
// for the rest, then <subcommand>-<hash8>.json. The envelope is written last.
// Tables already written are removed if a later write fails.
EmittedFiles emit_report(const std::filesystem::path& out_dir, ReportEnvelope env, const std::vector<CsvTable>& tables,
                         const std::vector<BinaryBlob>& blobs = {});

}  // namespace zklab
