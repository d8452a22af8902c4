#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(OPTOENT_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string value_of(const std::string& out, const std::string& key) {
    std::istringstream in(out);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
    return {};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "optoent_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST(Cli, PointReportsEntanglement) {
    const RunResult r = run("point --delta-norm -1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(value_of(r.out, "status"), "ok");
    EXPECT_EQ(value_of(r.out, "entangled"), "true");
    EXPECT_GT(std::stod(value_of(r.out, "log_negativity")), 0.0);
    EXPECT_FALSE(value_of(r.out, "eta").empty());
    EXPECT_FALSE(value_of(r.out, "log_negativity_literal").empty());
}

TEST(Cli, PointUnstableIsNotAFailure) {
    const RunResult r = run("point --delta-norm 1 --power-mw 10");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(value_of(r.out, "status"), "unstable");
    EXPECT_TRUE(value_of(r.out, "log_negativity").empty());
}

TEST(Cli, PointThermalOverrides) {
    const RunResult a = run("point --nth 0");
    const RunResult b = run("point --temp-k 0");
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_EQ(value_of(a.out, "log_negativity"), value_of(b.out, "log_negativity"));
    EXPECT_EQ(run("point --nth 1 --temp-k 1").exit_code, 2);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    const auto cfg = scratch("params.cfg");
    std::ofstream(cfg) << "power_w = 0.01\nbeta = 0.3\n";
    const RunResult r = run("point --config " + cfg.string() + " --beta 0.1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(value_of(r.out, "power_w"), "0.01");
    EXPECT_EQ(value_of(r.out, "beta"), "0.1");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("point --beta 1.0").exit_code, 2);
    EXPECT_EQ(run("point --config /nonexistent/x.cfg").exit_code, 4);
    EXPECT_EQ(run("figure --name nope").exit_code, 2);
    EXPECT_EQ(run("sweep --axis kappa").exit_code, 2);
    EXPECT_EQ(run("sweep --start 1 --stop 0").exit_code, 2);
    EXPECT_EQ(run("figure --name fig1a --out /nonexistent-dir/x.csv").exit_code, 4);
    EXPECT_EQ(run("").exit_code, 2);
    const auto bad = scratch("bad.cfg");
    std::ofstream(bad) << "kappa_convention = sideways\n";
    EXPECT_EQ(run("point --config " + bad.string()).exit_code, 2);
}

TEST(Cli, StabilityThresholds) {
    const RunResult r = run("stability --delta-norm -1");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NEAR(std::stod(value_of(r.out, "g_blue")) / 2.26e10, 1.0, 0.02);
    EXPECT_EQ(value_of(r.out, "agree"), "true");
    EXPECT_FALSE(value_of(r.out, "spectral_abscissa").empty());
}

TEST(Cli, SweepWithCurvesToFile) {
    const auto out = scratch("sweep.jsonl");
    const RunResult r = run("sweep --axis n_th --start 0 --stop 1000 --count 5 --curves beta=0,0.3 --power-mw 10 "
                            "--format jsonl --workers 2 --out " + out.string());
    ASSERT_EQ(r.exit_code, 0);
    const std::string text = slurp(out);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
    EXPECT_NE(text.find("\"curve\":0.29999999999999999"), std::string::npos);
}

TEST(Cli, FigureFileMatchesStdout) {
    const auto out = scratch("fig2b.csv");
    ASSERT_EQ(run("figure --name fig2b --out " + out.string()).exit_code, 0);
    const RunResult r = run("figure --name fig2b --workers 3");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(slurp(out), r.out);
    EXPECT_EQ(r.out.rfind("axis,curve,n_s,g_eff,s1,s2,routh_stable,spectral_stable,eta,log_negativity,status\n", 0),
              0u);
}
