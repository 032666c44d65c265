#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

std::string scratch(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lzs_cli_" + std::to_string(::getpid()) + "_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the tool with the given arguments through the shell.
CliRun lzs_run(const std::string& args, const std::string& env = "") {
    const std::string out = scratch("stdout"), err = scratch("stderr");
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(LZS_CLI_PATH) + " " + args + " >" + out +
                            " 2>" + err;
    const int status = std::system(cmd.c_str());
    CliRun r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
    std::filesystem::remove(out);
    std::filesystem::remove(err);
    return r;
}

int count_lines(const std::string& path) {
    std::ifstream in(path);
    int n = 0;
    for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
    return n;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        ledger = scratch("ledger.jsonl");
        std::filesystem::remove(ledger);
    }
    void TearDown() override { std::filesystem::remove(ledger); }

    CliRun run(const std::string& args) { return lzs_run(args + " --ledger " + ledger); }

    std::string ledger;
};

}  // namespace

TEST_F(Cli, ModelShow) {
    const CliRun r = run("model show --family lz2 --delta 1 --slope 1");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["B"], nlohmann::json::parse("[1.0, -1.0]"));
    EXPECT_EQ(j["A"]["const"][0][1], nlohmann::json::parse("[1.0, 0.0]"));
    const CliRun spin = run("model show --family spin --k 4 --delta 1 --slope 1");
    ASSERT_EQ(spin.code, 0);
    EXPECT_EQ(nlohmann::json::parse(spin.out)["dim"], 4);
}

TEST_F(Cli, ModelShowRoundTripThroughFile) {
    const std::string file = scratch("model.json");
    ASSERT_EQ(run("model show --family su3adj8 --delta 0.2 --slope 0.4 --eps 1 --out " + file).code, 0);
    const CliRun again = run("model show --descriptor " + file);
    ASSERT_EQ(again.code, 0) << again.err;
    EXPECT_EQ(again.out, slurp(file));
    std::filesystem::remove(file);
}

TEST_F(Cli, InputErrorsExitTwo) {
    CliRun r = run("model show --family nosuch --delta 1 --slope 1");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("su3six"), std::string::npos);
    EXPECT_EQ(run("model show --family spin --k abc --delta 1 --slope 1").code, 2);
    EXPECT_EQ(run("smatrix --family lz2 --slope 1").code, 2);
    EXPECT_EQ(lzs_run("").code, 2);
    EXPECT_EQ(run("smatrix --family lz2 --delta 1 --slope 1 --bogus").code, 2);
    EXPECT_EQ(run("smatrix --family lz2 --delta 1 --slope 1 --method crossings").code, 2);
    EXPECT_EQ(run("smatrix --descriptor '{\"family\": \"lz2\"'").code, 2);
    EXPECT_EQ(count_lines(ledger), 0);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(lzs_run("--help").code, 0); }

TEST_F(Cli, SmatrixSpinOne) {
    const CliRun r = run("smatrix --family spin --k 3 --delta 1 --slope 1 --method algebraic");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    const double u = std::exp(-M_PI);
    EXPECT_NEAR(j["matrix"][0][0].get<double>(), u * u, 1e-15);
    EXPECT_NEAR(j["matrix"][1][1].get<double>(), (1 - 2 * u) * (1 - 2 * u), 1e-15);
}

TEST_F(Cli, CompareSu3SixAtFigureParameters) {
    const CliRun r = run("compare --family su3six --delta 0.2 --slope 0.4 --eps 1 --methods crossings,numeric");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LE(j["pairs"][0]["max_deviation"].get<double>(), 1e-2);
}

TEST_F(Cli, CompareCorruptionExitsOne) {
    const CliRun r = run("compare --family spin --k 3 --delta 0.5 --slope 1 --inject-corruption");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("FAIL"), std::string::npos);
}

TEST_F(Cli, SpectrumCsv) {
    const std::string file = scratch("spec.csv");
    ASSERT_EQ(run("spectrum --family su3six --delta 0.2 --slope 0.4 --eps 1 --trange=-10:10 --steps 400 --out " + file)
                  .code,
              0);
    const std::string csv = slurp(file);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,e1,e2,e3,e4,e5,e6");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
    std::filesystem::remove(file);
    EXPECT_EQ(run("spectrum --family lz2 --delta 1 --slope 1 --out /nonexistent/dir/x.csv").code, 2);
}

TEST_F(Cli, ZeroCurvature) {
    CliRun r = run("zero-curvature --family bowtie3 --delta 0.3 --slope 1 --eps 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(r.out)["pass"].get<bool>());
    EXPECT_EQ(run("zero-curvature --family su3adj8 --delta 0.2 --slope 0.4 --eps 1").code, 0);
    EXPECT_EQ(run("zero-curvature --family su3adj8 --delta 0.2 --slope 0.4 --eps 1 --partner-form tabulated").code, 1);
    EXPECT_EQ(run("zero-curvature --family lz2 --delta 1 --slope 1").code, 2);
    EXPECT_EQ(run("zero-curvature --family bowtie3 --delta 0.3 --slope 1 --eps 1 --grid 't=0,1;eps=0.5,2'").code, 0);
}

TEST_F(Cli, Sweep) {
    CliRun r = run("sweep --family lz2 --delta 0.1:0.5:0.1 --slope 1");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
    EXPECT_EQ(run("sweep --family lz2 --delta 0.1:0.5:0.1 --slope 1:2:1").code, 2);
    r = run("sweep --family lz2 --delta 1:0:0.1 --slope 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "delta,S1_1\n");
}

TEST_F(Cli, LedgerCountsSuccessfulRuns) {
    const int n = 4;
    for (int i = 0; i < n; ++i) ASSERT_EQ(run("model show --family lz2 --delta 1 --slope 1").code, 0);
    run("model show --family lz2 --delta 1 --slope 0");
    EXPECT_EQ(count_lines(ledger), n);
    const std::string env_ledger = scratch("env_ledger.jsonl");
    std::filesystem::remove(env_ledger);
    ASSERT_EQ(lzs_run("smatrix --family lz2 --delta 1 --slope 1", "LZS_LEDGER=" + env_ledger).code, 0);
    ASSERT_EQ(lzs_run("smatrix --family lz2 --delta 1 --slope 1", "LZS_LEDGER=" + env_ledger).code, 0);
    EXPECT_EQ(count_lines(env_ledger), 2);
    std::ifstream in(env_ledger);
    for (std::string line; std::getline(in, line);) {
        const auto rec = nlohmann::json::parse(line);
        EXPECT_EQ(rec["command"], "smatrix");
        EXPECT_EQ(rec["method"], "algebraic");
    }
    std::filesystem::remove(env_ledger);
}
