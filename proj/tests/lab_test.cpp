#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "zklab/lab.hpp"

using namespace zklab;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ZklabError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(LabConfig, ShippedFileMatchesDefaults) {
  std::ifstream f(ZKLAB_DEFAULT_CONFIG, std::ios::binary);
  ASSERT_TRUE(f);
  std::ostringstream s;
  s << f.rdbuf();
  EXPECT_EQ(s.str(), LabConfig::default_file_text());
  EXPECT_EQ(LabConfig::from_file(ZKLAB_DEFAULT_CONFIG).hash(), LabConfig::defaults().hash());
}

TEST(LabConfig, CanonicalFormIgnoresSpelling) {
  const LabConfig a = LabConfig::from_string("[evolve]\ndt = 0.010\n[weights]\nns = 4, 8,16\n");
  const LabConfig b = LabConfig::from_string("; comment\n[weights]\nns=4 8 16\n[evolve]\ndt=1e-2\n");
  EXPECT_EQ(a.canonical_text(), b.canonical_text());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 64u);
  EXPECT_NE(a.hash(), LabConfig::from_string("[evolve]\ndt = 0.005\n").hash());
}

TEST(LabConfig, TypedAccess) {
  const LabConfig c = LabConfig::defaults();
  EXPECT_EQ(c.integer("evolve.n"), 128);
  EXPECT_DOUBLE_EQ(c.real("fundsol.tol"), 1e-6);
  EXPECT_EQ(c.u64("global.seed"), 20240611u);
  EXPECT_FALSE(c.flag("decay15.nonlinear"));
  EXPECT_EQ(c.integers("weights.ns"), (std::vector<int>{4, 8, 16}));
  EXPECT_EQ(c.reals("carleman.radii").size(), 3u);
}

TEST(LabConfig, RejectsUnknownKeysAndBadValuesNamingTheKey) {
  EXPECT_NE(error_of([] { LabConfig::from_string("[evolve]\nstep = 1\n"); }).find("evolve.step"), std::string::npos);
  EXPECT_NE(error_of([] { LabConfig::from_string("[bogus]\nn = 1\n"); }).find("bogus.n"), std::string::npos);
  const std::string neg = error_of([] { LabConfig::from_string("[evolve]\ndt = -0.1\n"); });
  EXPECT_NE(neg.find("evolve.dt"), std::string::npos);
  EXPECT_NE(neg.find("> 0"), std::string::npos);
  EXPECT_NE(error_of([] { LabConfig::from_string("[evolve]\nn = 12.5\n"); }).find("evolve.n"), std::string::npos);
  EXPECT_NE(error_of([] { LabConfig::from_string("[decay15]\nnonlinear = maybe\n"); }).find("decay15.nonlinear"),
            std::string::npos);
  EXPECT_NE(error_of([] { LabConfig::from_string("[fundsol]\ntol = nan\n"); }).find("fundsol.tol"), std::string::npos);
  EXPECT_FALSE(error_of([] { LabConfig::from_string("[evolve\n"); }).empty());
  EXPECT_FALSE(error_of([] { LabConfig::from_string("n = 1\n"); }).empty());
}

TEST(Lab, VerdictsAndExitCodes) {
  std::vector<Assertion> a{{"x", 0, 0, "<=", Verdict::Pass, ""}};
  EXPECT_EQ(overall_verdict(a), Verdict::Pass);
  a.push_back({"y", 0, 0, "<=", Verdict::Inconclusive, ""});
  EXPECT_EQ(overall_verdict(a), Verdict::Inconclusive);
  a.push_back({"z", 0, 0, "<=", Verdict::Fail, ""});
  EXPECT_EQ(overall_verdict(a), Verdict::Fail);
  EXPECT_EQ(exit_code_for(Verdict::Pass), 0);
  EXPECT_EQ(exit_code_for(Verdict::Fail), 1);
  EXPECT_EQ(exit_code_for(Verdict::Inconclusive), 2);
}

TEST(Lab, SuiteStartsWithSpectralSelfTests) {
  EXPECT_EQ(suite_steps().front(), "spectral");
  EXPECT_EQ(lab_subcommands().back(), "all");
  EXPECT_THROW(run_step("nope", LabConfig::defaults()), ZklabError);
}

TEST(Lab, WeightsStepPassesAndIsDeterministic) {
  const LabConfig c = LabConfig::defaults();
  const StepResult a = run_step("weights", c), b = run_step("weights", c);
  EXPECT_EQ(overall_verdict(a.assertions), Verdict::Pass);
  ASSERT_EQ(a.tables.size(), b.tables.size());
  for (std::size_t k = 0; k < a.tables.size(); ++k) EXPECT_EQ(render_csv(a.tables[k]), render_csv(b.tables[k]));
  const ReportEnvelope env = make_envelope(a, c);
  EXPECT_EQ(env.config_hash, c.hash());
  EXPECT_EQ(env.subcommand, "weights");
}

TEST(Lab, TolScaleCanTurnAPassIntoAFail) {
  LabConfig c = LabConfig::defaults();
  c.set("global.tol_scale", "1e-12");
  EXPECT_EQ(overall_verdict(run_step("weights", c).assertions), Verdict::Fail);
}

TEST(Lab, Decay15ColumnsAndGuard) {
  LabConfig c = LabConfig::defaults();
  StepResult r = run_step("decay15", c);
  ASSERT_FALSE(r.tables.empty());
  EXPECT_EQ(r.tables[0].columns, (std::vector<std::string>{"t [time]", "a_t", "W_adaptive", "W_frozen"}));
  EXPECT_EQ(overall_verdict(r.assertions), Verdict::Pass);
  // A guard trip is inconclusive, not a failure.
  c.set("decay15.cap_sensitivity_max", "1e-12");
  EXPECT_EQ(overall_verdict(run_step("decay15", c).assertions), Verdict::Inconclusive);
}
