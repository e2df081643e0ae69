#include "zklab/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <system_error>

#include "zklab/grid.hpp"

namespace zklab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc()) throw ZklabError("format_number: conversion failed");
  return std::string(buf.data(), res.ptr);
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw ZklabError("csv table '" + name + "': row has " + std::to_string(cells.size()) + " cells, header has " +
                     std::to_string(columns.size()));
  rows.push_back(std::move(cells));
}

namespace {

void append_field(std::string& out, const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    append_field(out, cells[i]);
  }
  out += "\r\n";
}

}  // namespace

std::string render_csv(const CsvTable& table) {
  std::string out;
  append_record(out, table.columns);
  for (const auto& r : table.rows) append_record(out, r);
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ZklabError("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ZklabError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ZklabError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string snapshot_bytes(const RealField& f, double t) {
  const std::int32_t dims[2] = {f.grid.nx, f.grid.ny};
  const double box[3] = {f.grid.Lx, f.grid.Ly, t};
  std::string out(sizeof dims + sizeof box + f.values.size() * sizeof(double), '\0');
  char* p = out.data();
  std::memcpy(p, dims, sizeof dims);
  std::memcpy(p + sizeof dims, box, sizeof box);
  std::memcpy(p + sizeof dims + sizeof box, f.values.data(), f.values.size() * sizeof(double));
  return out;
}

RealField read_snapshot_bytes(std::string_view bytes, double* t) {
  std::int32_t dims[2];
  double box[3];
  if (bytes.size() < sizeof dims + sizeof box) throw ZklabError("snapshot: truncated header");
  std::memcpy(dims, bytes.data(), sizeof dims);
  std::memcpy(box, bytes.data() + sizeof dims, sizeof box);
  const Grid2D g = Grid2D::centered(dims[0], dims[1], box[0], box[1]);
  g.validate();
  if (bytes.size() != sizeof dims + sizeof box + g.size() * sizeof(double))
    throw ZklabError("snapshot: payload size does not match the header");
  RealField f(g);
  std::memcpy(f.values.data(), bytes.data() + sizeof dims + sizeof box, g.size() * sizeof(double));
  if (t) *t = box[2];
  return f;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw ZklabError("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

// JSON has no inf/nan; those go out as strings.
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

std::string render_envelope_json(const ReportEnvelope& env) {
  nlohmann::json j;
  j["tool_version"] = env.tool_version;
  j["subcommand"] = env.subcommand;
  j["config_hash"] = env.config_hash;
  j["config"] = env.config_text;
  j["wall_time_s"] = env.wall_time_s;
  j["tol_scale"] = env.tol_scale;
  bool all_pass = true;
  bool any_fail = false;
  auto& list = j["assertions"] = nlohmann::json::array();
  for (const auto& a : env.assertions) {
    list.push_back({{"name", a.name},
                    {"value", number(a.value)},
                    {"relation", a.relation},
                    {"bound", number(a.bound)},
                    {"verdict", verdict_name(a.verdict)},
                    {"note", a.note}});
    all_pass = all_pass && a.verdict == Verdict::Pass;
    any_fail = any_fail || a.verdict == Verdict::Fail;
  }
  j["verdict"] = all_pass ? "pass" : (any_fail ? "fail" : "inconclusive");
  j["csv_files"] = env.csv_files;
  return j.dump(2) + "\n";
}

EmittedFiles emit_report(const std::filesystem::path& out_dir, ReportEnvelope env, const std::vector<CsvTable>& tables,
                         const std::vector<BinaryBlob>& blobs) {
  if (env.config_hash.size() < 8) throw ZklabError("emit_report: config hash too short");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ZklabError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const std::string stem = env.subcommand + "-" + env.config_hash.substr(0, 8);
  EmittedFiles files;
  env.csv_files.clear();
  try {
    for (const auto& t : tables) {
      const std::string name = t.name.empty() ? stem + ".csv" : stem + "-" + t.name + ".csv";
      const auto path = out_dir / name;
      write_file_atomic(path, render_csv(t));
      files.tables.push_back(path);
      env.csv_files.push_back(name);
    }
    for (const auto& b : blobs) {
      const auto path = out_dir / ((b.name.empty() ? stem : stem + "-" + b.name) + "." + b.extension);
      write_file_atomic(path, b.bytes);
      files.blobs.push_back(path);
    }
    files.envelope = out_dir / (stem + ".json");
    write_file_atomic(files.envelope, render_envelope_json(env));
  } catch (...) {
    for (const auto& p : files.tables) std::filesystem::remove(p, ec);
    for (const auto& p : files.blobs) std::filesystem::remove(p, ec);
    throw;
  }
  return files;
}

}  // namespace zklab
