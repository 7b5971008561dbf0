#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path run_dir(const std::string& name) {
    const fs::path p = fs::path(WIGDEV_TEST_TMP) / name;
    fs::remove_all(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(WIGDEV_CLI) + " " + args + " --quiet > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json load(const fs::path& p) {
    std::ifstream f(p);
    return json::parse(f);
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run("no-such-command"), 2);
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("ho-flow --no-such-flag"), 2);
}

TEST(Cli, ConfigViolationsExitThree) {
    const auto dir = run_dir("config");
    EXPECT_EQ(run("ho-flow --out " + dir.string() + " --override unknown.key=1"), 3);
    EXPECT_EQ(run("ho-flow --out " + dir.string() + " --override grid.n_x=100"), 3);
    EXPECT_EQ(run("ho-flow --out " + dir.string() + " --override grid.hbar=-1"), 3);
    EXPECT_EQ(run("ho-flow --out " + dir.string() + " --config /nonexistent.cfg"), 3);
    fs::create_directories(dir);
    std::ofstream(dir / "bad.cfg") << "grid.n_x = 64\nthis is not a pair\n";
    EXPECT_EQ(run("ho-flow --out " + dir.string() + " --config " + (dir / "bad.cfg").string()), 3);
}

TEST(Cli, FailedCheckExitsOneWithDiagnostic) {
    const auto dir = run_dir("assert");
    EXPECT_EQ(run("box-wigner --out " + dir.string() + " --override grid.n_x=64 --override box.tolerance=1e-12"), 1);
    const auto d = load(dir / "diagnostic.json");
    EXPECT_EQ(d["exit_code"], 1);
    EXPECT_FALSE(d["failed_checks"].empty());
    EXPECT_EQ(load(dir / "manifest.json")["exit_code"], 1);
}

TEST(Cli, ConfigFileAndManifest) {
    const auto dir = run_dir("manifest");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "# flow run\ngrid.n_x = 128\nflow.snapshots = 4\n";
    ASSERT_EQ(run("ho-flow --out " + dir.string() + " --config " + (dir / "run.cfg").string()), 0);
    const auto m = load(dir / "manifest.json");
    EXPECT_EQ(m["subcommand"], "ho-flow");
    EXPECT_EQ(m["config"]["grid.n_x"], "128");
    EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
    EXPECT_TRUE(m["timings_s"].contains("total"));
    EXPECT_FALSE(m["version"].get<std::string>().empty());
    EXPECT_TRUE(fs::exists(dir / "flow_0004.csv"));
    EXPECT_EQ(load(dir / "flow_manifest.json")["snapshots"].size(), 5u);
    EXPECT_EQ(first_line(dir / "flow_0000.csv"), "x,p,value");
}

TEST(Cli, SameConfigSameResults) {
    const auto a = run_dir("det_a"), b = run_dir("det_b");
    ASSERT_EQ(run("closest-wigner --out " + a.string() + " --override grid.n_x=256"), 0);
    ASSERT_EQ(run("closest-wigner --out " + b.string() + " --override grid.n_x=256"), 0);
    EXPECT_EQ(load(a / "summary.json"), load(b / "summary.json"));
    EXPECT_EQ(load(a / "manifest.json")["config_hash"], load(b / "manifest.json")["config_hash"]);
    const auto c = load(a / "certificate.json");
    for (const char* k : {"N", "eps", "tail", "lambda_1", "eigen_gap", "bound_13", "bound_15"}) EXPECT_TRUE(c.contains(k));
}

TEST(Cli, PositivityDemoReportsNegativeOverlap) {
    const auto dir = run_dir("positivity");
    ASSERT_EQ(run("positivity-demo --out " + dir.string() + " --override grid.n_x=512"), 0);
    const auto w = load(dir / "witness.json");
    EXPECT_LT(w["overlap"].get<double>(), 0.0);
    EXPECT_EQ(w.size(), 4u);
    EXPECT_EQ(load(dir / "witness_pairs.json").size(), 4u);
}

TEST(Cli, ProfileCompatDefaultPairIsIncompatible) {
    const auto dir = run_dir("compat");
    ASSERT_EQ(run("profile-compat --out " + dir.string()), 0);
    const auto v = load(dir / "verdict.json");
    EXPECT_EQ(v["verdict"], "incompatible");
    EXPECT_NE(v["evidence"].get<std::string>().find("±1 sqrt(hbar)"), std::string::npos);
}

TEST(Cli, ProfileInputFromCsv) {
    const auto dir = run_dir("profile_csv");
    ASSERT_EQ(run("profile-check --out " + dir.string()), 0);
    const auto src = dir / "profile.csv";
    const auto dir2 = run_dir("profile_csv2");
    ASSERT_EQ(run("profile-realize --out " + dir2.string() + " --override profile.input=" + src.string()), 0);
    EXPECT_LT(load(dir2 / "realization.json")["profile_error"].get<double>(), 1e-4);
}

TEST(Cli, RoundTripRefusesInconsistentInputs) {
    const auto dir = run_dir("refuse");
    EXPECT_EQ(run("profile-roundtrip --out " + dir.string() + " --override roundtrip.g0_state=ho0"), 3);
    EXPECT_FALSE(load(dir / "redundancy.json")["consistent"].get<bool>());
    EXPECT_EQ(load(dir / "diagnostic.json")["kind"], "validation");
    const auto ok = run_dir("roundtrip");
    EXPECT_EQ(run("profile-roundtrip --out " + ok.string()), 0);
}

TEST(Cli, EigenSolveWritesFigureData) {
    const auto dir = run_dir("eigen");
    ASSERT_EQ(run("eigen-solve --out " + dir.string() + " --override grid.n_x=2048 --override schrod.refine_epsilon="), 0);
    EXPECT_EQ(first_line(dir / "eigen_solve.csv"), "x,psi_eps,phi1");
    EXPECT_FALSE(fs::exists(dir / "eigen_solve_refined.csv"));
}

TEST(Cli, BinaryFieldOutput) {
    const auto dir = run_dir("binary");
    ASSERT_EQ(run("box-wigner --out " + dir.string() + " --override box.levels=1 --override output.binary=true"), 0);
    EXPECT_TRUE(fs::exists(dir / "box_wigner_n1.bin"));
    EXPECT_EQ(load(dir / "box_wigner_n1.json")["order"], "column-major");
}
