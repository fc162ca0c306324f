#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flowlab/commands.hpp"
#include "flowlab/io.hpp"
#include "flowlab/kernels.hpp"
#include "flowlab/verify.hpp"

using namespace flowlab;
using app::run_command;
using config::Json;
namespace fs = std::filesystem;

namespace {

fs::path out_dir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("flowlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
  fs::remove_all(dir);
  return dir;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

Json identity_field() { return Json{{"type", "linear"}, {"a", 1.0}}; }

Json edit_doc() {
  return Json{{"grid", {{"steps", 18}}},
              {"seed", 3},
              {"field", "smooth"},
              {"source", {{"prior", 1}, {"dim", 6}}},
              {"reference", {{"prior", 2}, {"dim", 6}}}};
}

int run_binary(const std::string& args, const fs::path& dir) {
  fs::create_directories(dir);
  const std::string cmd = std::string(FLOWLAB_CLI_PATH) + " " + args + " > " + (dir / "stdout.txt").string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(CliSample, IdentityFieldTerminal) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 2}}}, {"field", identity_field()}, {"start", {{"values", {1.0}}}}};
  ASSERT_EQ(run_command("sample", doc, dir, out, err), 0) << err.str();
  const Json summary = read_json(dir / "summary.json");
  EXPECT_EQ(summary.at("terminal").at(0).get<double>(), 2.25);
  EXPECT_EQ(summary.at("nfe").get<int>(), 2);
  EXPECT_EQ(out.str(), "nfe 2\n");
  EXPECT_EQ(io::read_state(dir / "terminal.state")[0], 2.25);
  const Json meta = read_json(dir / "meta.json");
  EXPECT_EQ(meta.at("command"), "sample");
  EXPECT_EQ(meta.at("generator"), PriorSampler::kGeneratorId);
  EXPECT_EQ(meta.at("kernels"), kernels::active().name);
}

TEST(CliSample, ZeroFieldKeepsStart) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 5}}}, {"field", "zero"}, {"start", {{"values", {1.5, -2.0}}}}};
  ASSERT_EQ(run_command("sample", doc, dir, out, err), 0) << err.str();
  EXPECT_EQ(read_json(dir / "summary.json").at("terminal"), Json({1.5, -2.0}));
}

TEST(CliSample, MissingKeyIsNamed) {
  std::ostringstream out, err;
  EXPECT_EQ(run_command("sample", Json{{"field", "zero"}}, out_dir(), out, err), app::kConfigError);
  EXPECT_NE(err.str().find("'grid'"), std::string::npos) << err.str();
}

TEST(CliInvert, ReconExactOnHandFixture) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 2}}},
                 {"field", identity_field()},
                 {"method", "recon"},
                 {"seed", 4},
                 {"source", {{"values", {2.25}}}}};
  ASSERT_EQ(run_command("invert", doc, dir, out, err), 0) << err.str();
  const Json r = read_json(dir / "report.json");
  EXPECT_LE(r.at("identity_gap").get<double>(), 1e-15);
  EXPECT_EQ(r.at("nfe").get<int>(), 2);
}

TEST(CliInvert, VanillaExample) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 2}}},
                 {"field", identity_field()},
                 {"method", "vanilla"},
                 {"condition", {{"tag", "none"}}},
                 {"source", {{"values", {2.25}}}}};
  ASSERT_EQ(run_command("invert", doc, dir, out, err), 0) << err.str();
  EXPECT_EQ(read_json(dir / "report.json").at("estimated_noise").at(0).get<double>(), 0.5625);
}

TEST(CliInvert, IdealAffineNeedsAffineField) {
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 4}}},
                 {"field", "smooth"},
                 {"method", "ideal-affine"},
                 {"source", {{"values", {1.0, 2.0}}}}};
  EXPECT_EQ(run_command("invert", doc, out_dir(), out, err), app::kCapability);
}

TEST(CliEdit, NfePerMethod) {
  struct Case {
    std::string method;
    bool det;
    int nfe;
  };
  for (const Case& c : {Case{"reinversion", false, 18}, Case{"reinversion", true, 14}, Case{"recon-inv", false, 36}}) {
    const fs::path dir = out_dir() / (c.method + (c.det ? "_det" : ""));
    std::ostringstream out, err;
    Json doc = edit_doc();
    doc["method"] = c.method;
    doc["edit"] = {{"t_tau", 0.2}, {"deterministic_stage1", c.det}};
    ASSERT_EQ(run_command("edit", doc, dir, out, err), 0) << err.str();
    const Json s = read_json(dir / "summary.json");
    EXPECT_EQ(s.at("nfe").get<int>(), c.nfe) << c.method;
    EXPECT_EQ(s.at("field_evaluations").get<int>(), c.nfe) << c.method;
    EXPECT_EQ(s.at("tau").get<int>(), 4);
  }
}

TEST(CliEdit, DegenerateSplit) {
  std::ostringstream out, err;
  Json doc = edit_doc();
  doc["grid"] = {{"steps", 4}};
  doc["edit"] = {{"t_tau", 0.9}};
  EXPECT_EQ(run_command("edit", doc, out_dir(), out, err), app::kDegenerateSplit);
}

TEST(CliEdit, Divergence) {
  std::ostringstream out, err;
  const Json doc{{"grid", {{"steps", 4}}},
                 {"field", {{"type", "linear"}, {"a", 1e300}}},
                 {"source", {{"values", {1e300}}}},
                 {"reference", {{"values", {1.0}}}}};
  EXPECT_EQ(run_command("edit", doc, out_dir(), out, err), app::kDiverged);
}

TEST(CliEdit, MaskedGridWritesPreview) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  Json doc;
  doc["grid"] = {{"steps", 10}};
  doc["source"]["blob"] = {{"rows", 8}, {"cols", 8}, {"row", 2}, {"col", 2}, {"radius", 1.5}};
  doc["reference"]["blob"] = {{"rows", 8}, {"cols", 8}, {"row", 5}, {"col", 5}, {"radius", 2}};
  doc["mask"]["box"] = {{"top", 2}, {"left", 2}, {"height", 4}, {"width", 4}};
  ASSERT_EQ(run_command("edit", doc, dir, out, err), 0) << err.str();
  EXPECT_TRUE(fs::exists(dir / "edited.pgm"));
  EXPECT_TRUE(read_json(dir / "summary.json").at("masked").get<bool>());
}

TEST(CliVerify, UnknownSuite) {
  EXPECT_THROW(verify::run_suite("nope"), Error);
  const fs::path dir = out_dir();
  EXPECT_EQ(run_binary("verify nope", dir), app::kConfigError);
}

TEST(CliBinary, ExitCodesAndDefaultOutDir) {
  const fs::path dir = out_dir();
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "sample.json");
    cfg << R"({"grid": {"steps": 2}, "field": {"type": "linear", "a": 1}, "start": {"values": [1]}})";
  }
  const std::string env = "FLOWLAB_OUT=" + (dir / "runs").string() + " ";
  const fs::path logs = dir / "logs";
  fs::create_directories(logs);
  const std::string cmd = env + FLOWLAB_CLI_PATH + " sample --config " + (dir / "sample.json").string() + " > " +
                          (logs / "o.txt").string() + " 2>&1";
  ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0) << slurp(logs / "o.txt");
  EXPECT_TRUE(fs::exists(dir / "runs" / "sample" / "summary.json"));

  EXPECT_EQ(run_binary("sample --config " + (dir / "missing.json").string(), dir / "b"), app::kConfigError);
  EXPECT_EQ(run_binary("edit --config " + (dir / "sample.json").string() + " --out " + (dir / "e").string(),
                       dir / "c"),
            app::kConfigError);
  EXPECT_NE(slurp(dir / "c" / "stderr.txt").find("'source'"), std::string::npos);
  EXPECT_EQ(run_binary("--kernels nosuch verify identity", dir / "d"), app::kCapability);
}

TEST(CliBinary, ReplayReproducesRun) {
  const fs::path dir = out_dir();
  std::ostringstream out, err;
  ASSERT_EQ(run_command("edit", edit_doc(), dir / "run", out, err), 0) << err.str();
  ASSERT_EQ(run_binary("replay " + (dir / "run" / "meta.json").string() + " --out " + (dir / "again").string(),
                       dir / "log"),
            0)
      << slurp(dir / "log" / "stderr.txt");
  EXPECT_EQ(slurp(dir / "run" / "edited.state"), slurp(dir / "again" / "edited.state"));
}

namespace {

void flipped_target_velocity(double* out, const double* target, const double* x, double t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - target[i]) / (1.0 - t);
}

}  // namespace

TEST(VerifyMutation, BrokenTargetVelocityIsCaught) {
  kernels::KernelTable broken = kernels::scalar_table();
  broken.name = "broken";
  broken.target_velocity = &flipped_target_velocity;
  kernels::ScopedTable guard(broken);
  const auto results = verify::run_suite("msd");
  std::size_t failures = 0;
  for (const auto& r : results) failures += r.passed ? 0 : 1;
  EXPECT_GT(failures, 0u);
}
