#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <algorithm>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("modnull_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        write("tri.txt", "0 1\n0 2\n1 2\n");
        write("part.txt", "1\n2\n2\n");
        write("p.txt", "0.3333333333333333\n0.6666666666666667\n");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(path(name), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    CliRun run(const std::string& args, const std::string& env = "") const {
        const std::string err_file = path("stderr.txt");
        const std::string cmd =
            "cd '" + dir_.string() + "' && " + env + " '" MODNULL_CLI_PATH "' " + args + " 2>'" + err_file + "'";
        CliRun r;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        char buf[4096];
        std::size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
        const int status = ::pclose(pipe);
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = read("stderr.txt");
        return r;
    }

    fs::path dir_;
};

nlohmann::json parse(const std::string& s) { return nlohmann::json::parse(s); }

TEST_F(CliTest, TestSubcommandOnTriangle) {
    const CliRun r = run("test --graph tri.txt --partition part.txt");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = parse(r.out);
    EXPECT_NEAR(j["mu"].get<double>(), -0.148148148148, 1e-12);
    EXPECT_NEAR(j["z_sigma"].get<double>(), -0.70711, 1e-5);
    EXPECT_NEAR(j["p_value"].get<double>(), 0.76025, 1e-5);
    EXPECT_EQ(j["sidedness"], "upper");
    EXPECT_EQ(j["config"]["probabilities"], "empirical");
    EXPECT_TRUE(j.contains("conditions"));
}

TEST_F(CliTest, GenerateThenComputeAllOnes) {
    CliRun r = run("generate --model reg:d=1 --n 4 --seed 7 --out g.txt");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const std::string first = read("g.txt");
    r = run("generate --model reg:d=1 --n 4 --seed 7 --out g.txt");
    EXPECT_EQ(read("g.txt"), first);

    r = run("compute --graph g.txt --partition all-ones");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = parse(r.out);
    EXPECT_EQ(j["Q"].get<double>(), 0.0);
    for (const char* key : {"n", "m", "K", "mu", "sigma2", "delta2", "r1", "r2"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, EnumerateCheck) {
    const CliRun r = run("enumerate-check --graph tri.txt --probs p.txt");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_LE(parse(r.out)["max_rel_error"].get<double>(), 1e-11);
}

TEST_F(CliTest, ConditionsReport) {
    const CliRun r = run("conditions --graph tri.txt");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = parse(r.out);
    EXPECT_NEAR(j["stat_31"].get<double>(), 2.0, 1e-14);
    EXPECT_FALSE(j["holds_c1"].get<bool>());
    for (const char* key : {"stat_311", "stat_c1", "n", "m", "kmax"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(CliTest, NumbersUseSeventeenDigits) {
    const CliRun r = run("compute --graph tri.txt --probs p.txt");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("\"mu\": -0.14814814814814814"), std::string::npos) << r.out;
}

TEST_F(CliTest, ErrorsAreSingleLineJsonWithExitCodes) {
    write("loop.txt", "0 0\n");
    CliRun r = run("compute --graph loop.txt --K 2");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
    auto j = parse(r.err);
    EXPECT_EQ(j["code"], "input_error");
    EXPECT_EQ(j["context"], "line 1");
    EXPECT_TRUE(j.contains("message"));

    r = run("compute --graph tri.txt --unknown-flag");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_EQ(parse(r.err)["code"], "usage_error");

    r = run("test --graph tri.txt --partition all-ones");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_EQ(parse(r.err)["code"], "domain_error");

    r = run("generate --model reg:d=1 --n 5");
    EXPECT_EQ(r.exit_code, 3);

    write("long.txt", "1\n2\n");
    r = run("test --graph tri.txt --partition long.txt");
    EXPECT_EQ(r.exit_code, 2);

    write("path24.txt", [] {
        std::string s;
        for (int i = 0; i < 23; ++i) s += std::to_string(i) + " " + std::to_string(i + 1) + "\n";
        return s;
    }());
    r = run("enumerate-check --graph path24.txt --K 2");
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_EQ(parse(r.err)["code"], "domain_error");
}

TEST_F(CliTest, SeedFallbackAndEcho) {
    CliRun a = run("generate --model er:p=0.3 --n 30", "MODNULL_SEED=99");
    CliRun b = run("generate --model er:p=0.3 --n 30 --seed 99");
    ASSERT_EQ(a.exit_code, 0);
    EXPECT_NE(a.out.find("seed=99"), std::string::npos);
    EXPECT_EQ(a.out, b.out);

    CliRun c = run("generate --model er:p=0.3 --n 30", "MODNULL_SEED=notanumber");
    EXPECT_EQ(c.exit_code, 2);

    run("generate --model reg:d=4 --n 60 --seed 3 --out g.txt");
    CliRun s = run("null-sample --graph g.txt --K 2 --reps 200 --out s.csv", "MODNULL_SEED=12");
    ASSERT_EQ(s.exit_code, 0) << s.err;
    const auto summary = parse(read("s.csv.summary.json"));
    EXPECT_EQ(summary["config"]["master_seed"], 12);
    EXPECT_EQ(summary["config"]["seed_source"], "env");
    EXPECT_EQ(summary["reps"], 200);
}

TEST_F(CliTest, StudiesAreByteIdenticalAcrossRunsAndWorkers) {
    run("generate --model reg:d=4 --n 200 --seed 3 --out g.txt");
    const std::vector<std::string> commands{
        "null-sample --graph g.txt --probs p.txt --reps 500 --seed 5",
        "be-study --model reg:d=4 --sizes 50,100 --reps 200 --seed 5",
        "slln-study --model reg:d=4 --sizes 40,80,160,320 --paths 8 --seed 5",
    };
    for (const auto& cmd : commands) {
        std::string csv, summary;
        for (int threads : {1, 8, 1, 8}) {
            const CliRun r = run(cmd + " --threads " + std::to_string(threads) + " --out o.csv");
            ASSERT_EQ(r.exit_code, 0) << cmd << "\n" << r.err;
            if (csv.empty()) {
                csv = read("o.csv");
                summary = read("o.csv.summary.json");
                ASSERT_FALSE(csv.empty());
            } else {
                EXPECT_EQ(read("o.csv"), csv) << cmd;
                EXPECT_EQ(read("o.csv.summary.json"), summary) << cmd;
            }
        }
    }
}

TEST_F(CliTest, BeStudyCsvShape) {
    const CliRun r = run("be-study --model reg:d=4 --sizes 50,100 --reps 200 --seed 5 --out b.csv");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    std::istringstream csv(read("b.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "n,m,ks,bound_shape,fitted_C,seed_used,ks_sigma,ks_delta,sigma2_over_delta2");
    const auto summary = parse(read("b.csv.summary.json"));
    EXPECT_EQ(summary["config"]["standardize"], "delta");
    EXPECT_EQ(summary["rows"].size(), 2u);
}

}  // namespace
