#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(SPINRELAX_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("spinrelax_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

}  // namespace

TEST_F(Cli, RatesAtDefaults) {
    const auto r = run("rates");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("4.25341e+01 MHz"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("7.29733e+02"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("2.77033e-06 s"), std::string::npos) << r.out;
}

TEST_F(Cli, RatesWithZeroH1) {
    const auto r = run("rates --h1-oe 0");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("relaxation 1/W    = inf s"), std::string::npos) << r.out;
}

TEST_F(Cli, EvolveTwoPointsAtZero) {
    const auto r = run("evolve --points 2 --t-max-s 0 --out-csv " + path("z.csv"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(slurp(dir / "z.csv"), "t_seconds,t_inverse_mev,markovian,non_markovian,total\n0,0,1,0,1\n0,0,1,0,1\n");
}

TEST_F(Cli, EvolveDefaultsDeterministic) {
    ASSERT_EQ(run("evolve --out-csv " + path("a.csv")).code, 0);
    ASSERT_EQ(run("evolve --threads 3 --out-csv " + path("b.csv")).code, 0);
    const auto a = slurp(dir / "a.csv");
    EXPECT_EQ(a, slurp(dir / "b.csv"));
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 1001);
    const auto first_row = a.substr(a.find('\n') + 1, a.find('\n', a.find('\n') + 1) - a.find('\n') - 1);
    EXPECT_EQ(first_row, "0,0,1,0,1");
}

TEST_F(Cli, UnwritablePathIsIoError) {
    const auto r = run("evolve --points 2 --out-csv " + path("missing/dir/x.csv"));
    EXPECT_EQ(r.code, 3) << r.out;
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("rates --bogus").code, 1);
    EXPECT_EQ(run("rates --delta-per-m 0.03 --delta-mev 1e-15").code, 1);
    EXPECT_EQ(run("rates --particle electron").code, 1);
    EXPECT_EQ(run("evolve --points 1").code, 1);
}

TEST_F(Cli, ConfigErrorNamesLineAndField) {
    std::ofstream(path("bad.cfg")) << "hz = 1 T\nh1 = 3 furlongs\n";
    const auto r = run("rates --config " + path("bad.cfg"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("bad.cfg:2: field 'h1'"), std::string::npos) << r.out;
}

TEST_F(Cli, ConfigFileWithOverride) {
    std::ofstream(path("run.cfg")) << "particle = proton\nhz = 2 T\nt_max = 0 s\npoints = 2\n";
    const auto r = run("rates --config " + path("run.cfg") + " --hz-oe 10000");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("4.25341e+01 MHz"), std::string::npos) << r.out;
}

TEST_F(Cli, Fig1WritesCsvAndSvg) {
    const auto r = run("fig1 --points 100 --out-csv " + path("f.csv") + " --out-svg " + path("f.svg"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto svg = slurp(dir / "f.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("Non-Markovian term"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 10, true);
}

TEST_F(Cli, DoublingH1QuadruplesDecayRate) {
    auto gamma_of = [&](const std::string& extra) {
        const auto r = run("rates " + extra);
        const auto pos = r.out.find("gamma             = ");
        return std::stod(r.out.substr(pos + 20));
    };
    EXPECT_NEAR(gamma_of("--h1-oe 200") / gamma_of("--h1-oe 100"), 4.0, 1e-4);
}

TEST_F(Cli, VerifyCoarseGridReports) {
    const auto r = run("verify --grid 10");
    EXPECT_TRUE(r.code == 0 || r.code == 2) << r.out;
    for (int k = 1; k <= 8; ++k) EXPECT_NE(r.out.find("] " + std::to_string(k) + " "), std::string::npos) << r.out;
}

TEST_F(Cli, VerifyDetectsCorruptedDenominator) {
    const auto clean = run("verify --grid 10");
    const auto faulty = run("verify --grid 10 --inject-fault d-poly");
    EXPECT_NE(faulty.code, 0);
    EXPECT_NE(clean.out.find("[PASS] 3 "), std::string::npos) << clean.out;
    EXPECT_NE(faulty.out.find("[FAIL] 3 "), std::string::npos) << faulty.out;
}

TEST_F(Cli, VerifyDefaultsPass) {
    const auto r = run("verify --grid 200");
    EXPECT_EQ(r.code, 0) << r.out;
}
