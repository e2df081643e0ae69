#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "zklab/io.hpp"

using namespace zklab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("zklab-io-test-" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Io, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-300), "1e-300");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-1.0 / 0.0), "-inf");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(Io, CsvQuotingAndLineEnds) {
  CsvTable t{"", {"t [time]", "note"}, {}};
  t.add_row(std::vector<std::string>{"1", "a,b"});
  t.add_row(std::vector<std::string>{"2", "say \"hi\""});
  EXPECT_EQ(render_csv(t), "t [time],note\r\n1,\"a,b\"\r\n2,\"say \"\"hi\"\"\"\r\n");
  EXPECT_THROW(t.add_row(std::vector<double>{1.0}), ZklabError);
}

TEST(Io, EmptyTableIsHeaderOnly) {
  const CsvTable t{"", {"x", "y"}, {}};
  EXPECT_EQ(render_csv(t), "x,y\r\n");
}

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Io, SnapshotRoundTrip) {
  const Grid2D g = Grid2D::centered(10, 8, 3.0, 2.0);
  RealField f(g);
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = 0.5 * k - 3.0;
  double t = 0.0;
  const RealField back = read_snapshot_bytes(snapshot_bytes(f, 0.75), &t);
  EXPECT_EQ(back.grid, g);
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(t, 0.75);
  EXPECT_THROW(read_snapshot_bytes(snapshot_bytes(f, 0.0).substr(0, 30)), ZklabError);
}

TEST(Io, EmitReportNamesAndEnvelope) {
  const fs::path dir = fresh_dir("emit");
  ReportEnvelope env;
  env.tool_version = "x";
  env.subcommand = "decay15";
  env.config_hash = sha256_hex("cfg");
  env.assertions.push_back({"a", 1.0, 2.0, "<=", Verdict::Pass, ""});
  env.assertions.push_back({"b", 1.0 / 0.0, 2.0, "<=", Verdict::Inconclusive, ""});
  CsvTable main{"", {"t [time]"}, {}};
  main.add_row(std::vector<double>{0.5});
  const CsvTable extra{"fit", {"slope"}, {}};
  const EmittedFiles files = emit_report(dir, env, {main, extra}, {{"state", "bin", "abc"}});
  const std::string stem = "decay15-" + env.config_hash.substr(0, 8);
  EXPECT_EQ(files.envelope, dir / (stem + ".json"));
  EXPECT_EQ(slurp(dir / (stem + ".csv")), "t [time]\r\n0.5\r\n");
  EXPECT_TRUE(fs::exists(dir / (stem + "-fit.csv")));
  EXPECT_EQ(slurp(dir / (stem + "-state.bin")), "abc");
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");

  const auto j = nlohmann::json::parse(slurp(files.envelope));
  EXPECT_EQ(j["verdict"], "inconclusive");
  EXPECT_EQ(j["assertions"][1]["value"], "inf");
  EXPECT_EQ(j["csv_files"].size(), 2u);
  EXPECT_EQ(j["config_hash"], env.config_hash);

  // Rerun overwrites with identical bytes.
  const std::string before = slurp(dir / (stem + ".csv"));
  emit_report(dir, env, {main, extra});
  EXPECT_EQ(slurp(dir / (stem + ".csv")), before);
  fs::remove_all(dir);
}

TEST(Io, EmitReportSurfacesPathOnFailure) {
  const fs::path dir = fresh_dir("fail");
  fs::create_directories(dir);
  ReportEnvelope env;
  env.subcommand = "x";
  env.config_hash = "0123456789";
  // A directory where the envelope should go makes the final write fail.
  fs::create_directories(dir / "x-01234567.json");
  const CsvTable t{"", {"a"}, {}};
  try {
    emit_report(dir, env, {t});
    FAIL() << "expected an exception";
  } catch (const ZklabError& e) {
    EXPECT_NE(std::string(e.what()).find("x-01234567.json"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir / "x-01234567.csv"));
  fs::remove_all(dir);
}
