#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hhqec/cli.hpp"
#include "hhqec/mlp.hpp"
#include "json.hpp"

using namespace hhqec;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "hhqec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string tmp(const std::string& name) { return testing::TempDir() + "hhqec_cli_" + name; }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"eval", "--bogus"}).code, 2);
    EXPECT_EQ(run({"eval", "--decoder", "magic", "-d", "3"}).code, 2);
    EXPECT_EQ(run({"eval", "--decoder", "ann", "-d", "3"}).code, 2);
    EXPECT_EQ(run({"eval"}).code, 2);
    EXPECT_EQ(run({"eval", "-d", "4"}).code, 2);
    EXPECT_EQ(run({"eval", "-d", "3", "--p", "2"}).code, 2);
    EXPECT_EQ(run({"sweep", "--p", "nope", "--out", tmp("x.csv")}).code, 2);
    EXPECT_EQ(run({"sweep", "--out", tmp("x.csv"), "--decoder", "ann"}).code, 2);
    EXPECT_EQ(run({"make-synthetic-device", "--qubits", "100", "--out", tmp("x.json")}).code, 2);
    EXPECT_EQ(run({"gen-data", "-d", "3", "--count", "1"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
    const CliResult r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("subgraph-rank"), std::string::npos);
}

TEST(Cli, RuntimeErrorsExitOne) {
    const CliResult r = run({"eval", "-d", "3", "--calibration", "/nonexistent/cal.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({"eval", "--decoder", "ann", "--model", "/nonexistent/m.json"}).code, 1);
}

TEST(Cli, EvalPrintsRowJson) {
    const CliResult r = run({"eval", "-d", "3", "--p", "5e-3", "--shots", "500", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("distance"), 3);
    EXPECT_EQ(j.at("shots"), 500);
    EXPECT_EQ(j.at("seed"), 3);
    EXPECT_EQ(j.at("decoder"), "mwpm");
    EXPECT_EQ(r.out, run({"eval", "-d", "3", "--p", "5e-3", "--shots", "500", "--seed", "3"}).out);
}

TEST(Cli, SweepIsByteIdenticalForAFixedSeed) {
    const std::vector<std::string> base{"sweep", "--distances", "3,5", "--p", "5e-4:2e-3:3", "--shots", "400"};
    auto with = [&](const std::string& seed, const std::string& out) {
        auto a = base;
        a.insert(a.end(), {"--seed", seed, "--out", out, "--summary", out + ".json"});
        return run(a);
    };
    ASSERT_EQ(with("11", tmp("a.csv")).code, 0);
    ASSERT_EQ(with("11", tmp("b.csv")).code, 0);
    ASSERT_EQ(with("12", tmp("c.csv")).code, 0);
    const std::string a = slurp(tmp("a.csv"));
    EXPECT_EQ(a, slurp(tmp("b.csv")));
    EXPECT_NE(a, slurp(tmp("c.csv")));
    const auto rows = lines(a);
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0], "distance,basis,decoder,noise,p,shots,failures,declared_failures,ler,ci_low,ci_high,seed");
    const auto summary = nlohmann::json::parse(slurp(tmp("a.csv") + ".json"));
    EXPECT_EQ(summary.at("crossovers").size(), 1u);
    EXPECT_TRUE(summary.contains("runtime_seconds"));
}

TEST(Cli, DeviceRankingPipeline) {
    const std::string cal = tmp("dev.json"), csv = tmp("rank.csv");
    ASSERT_EQ(run({"make-synthetic-device", "--qubits", "127", "--jitter", "0.5", "--seed", "2", "--out", cal}).code, 0);
    const CliResult r = run({"subgraph-rank", "--calibration", cal, "-d", "3", "--out", csv});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(slurp(csv));
    ASSERT_GT(rows.size(), 2u);
    EXPECT_EQ(rows[0], "rank,placement_id,anchor_qubit,score,mean_1q,mean_init,mean_idle,mean_readout,mean_2q");
    double prev = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        std::istringstream in(rows[k]);
        std::string field;
        for (int c = 0; c < 4; ++c) std::getline(in, field, ',');
        const double score = std::stod(field);
        EXPECT_GE(score, prev);
        prev = score;
    }
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("placements"), rows.size() - 1);
    EXPECT_LE(j.at("score_min").get<double>(), j.at("score_median").get<double>());
    EXPECT_LE(j.at("score_median").get<double>(), j.at("score_max").get<double>());

    const CliResult e = run({"eval", "-d", "3", "--calibration", cal, "--placement", "worst", "--shots", "200"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_DOUBLE_EQ(nlohmann::json::parse(e.out).at("score").get<double>(), j.at("score_max").get<double>());
    EXPECT_EQ(run({"eval", "-d", "3", "--calibration", cal, "--placement", "100000"}).code, 2);
}

TEST(Cli, GenerateTrainEvaluate) {
    const std::string data = tmp("data.jsonl"), model = tmp("model.json");
    ASSERT_EQ(run({"gen-data", "-d", "3", "--p", "0.01", "--count", "300", "--seed", "1", "--out", data}).code, 0);
    EXPECT_EQ(lines(slurp(data)).size(), 300u);
    const CliResult t = run({"train", "-d", "3", "--data", data, "--epochs", "2", "--batch", "32", "--out", model});
    ASSERT_EQ(t.code, 0) << t.err;
    const Mlp m = load_mlp(model);
    EXPECT_EQ(m.d, 3);
    EXPECT_EQ(nlohmann::json::parse(t.out).at("examples"), 300);
    const CliResult e = run({"eval", "--decoder", "ann", "--model", model, "--p", "0.005", "--shots", "200"});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(nlohmann::json::parse(e.out).at("decoder"), "ann");
    EXPECT_EQ(run({"train", "-d", "5", "--data", data, "--out", model}).code, 1);
}

TEST(Cli, DumpCode) {
    const CliResult r = run({"dump-code", "-d", "3"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("qubits").size(), 23u);
    EXPECT_EQ(j.at("schedule").size(), 11u);
    EXPECT_EQ(j.at("z_stabilizers").size() + j.at("x_stabilizers").size(), 6u);
}
