#include <stablenn/cli/config.hpp>
#include <stablenn/cli/run.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace stablenn;
using namespace stablenn::cli;

namespace {

struct Result {
    int code;
    std::string out, log;
};

Result run_cfg(const RunConfig& cfg, unsigned workers = 2)
{
    std::ostringstream out, log;
    const int code = run(cfg, workers, out, log);
    return {code, out.str(), log.str()};
}

struct Proc {
    int code;
    std::string out;
};

Proc shell(const std::string& args)
{
    const std::string cmd = std::string(STABLENN_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("stablenn_test_" + name);
}

} // namespace

TEST(RunConfig, DefaultsCoverSchema)
{
    RunConfig c;
    EXPECT_EQ(c.entries().size(), schema().size());
    EXPECT_EQ(c.get("command"), "predict");
    EXPECT_EQ(c.get("network.scaling"), "auto");
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues)
{
    RunConfig c;
    try {
        c.set("network.alpah", "1");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "network.alpah");
    }
    EXPECT_THROW(c.set("network.alpha", "abc"), ConfigError);
    EXPECT_THROW(c.set("ensemble.width_n", "1.5"), ConfigError);
    EXPECT_THROW(c.set("network.activation", "softplus"), ConfigError);
    EXPECT_THROW(c.set("network.input", "1,x"), ConfigError);
    EXPECT_THROW(c.merge_text("network.alpha 1.5"), ConfigError);
    EXPECT_THROW(c.apply_preset("nope"), ConfigError);
}

TEST(RunConfig, TextRoundTrip)
{
    RunConfig c;
    c.merge_text("# comment\npreset = cube\nnetwork.sigma0 = 2   # inline\nensemble.seed = 18446744073709551615\n");
    EXPECT_EQ(c.get("network.activation"), "odd_power");
    EXPECT_EQ(c.real("network.gamma"), 3);
    EXPECT_EQ(c.real("network.sigma0"), 2);
    EXPECT_EQ(ensemble_of(c).seed.value, 18446744073709551615ull);
    RunConfig d;
    d.merge_text(c.to_text());
    EXPECT_EQ(c, d);
}

TEST(RunConfig, FieldLevelDomainErrors)
{
    RunConfig c;
    c.set("network.alpha0", "2.5");
    try {
        shallow_of(c);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "network.alpha0");
    }
    RunConfig d;
    d.set("numerics.max_levels", "11");
    EXPECT_THROW(numerics_of(d), ConfigError);
}

TEST(Run, PredictDeepReluMatchesExplicitScale)
{
    RunConfig c;
    c.apply_preset("deep_relu");
    c.set("network.depth", "2");
    c.set("network.input", "1");
    const auto r = run_cfg(c);
    ASSERT_EQ(r.code, 0) << r.log;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["prediction"]["scale"].get<double>(), relu_explicit_scale(2, 1, 1, 1, std::pow(2.0, 1.0)), 1e-12);
    EXPECT_EQ(j["prediction"]["per_layer"].size(), 3u);
    EXPECT_EQ(j["config"]["network.scaling"], "auto");
}

TEST(Run, PredictCsvEchoesConfig)
{
    RunConfig c;
    c.apply_preset("relu");
    c.set("output.format", "csv");
    const auto r = run_cfg(c);
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# network.activation = relu"), std::string::npos);
    EXPECT_NE(r.out.find("layer,stability,scale"), std::string::npos);
}

TEST(Run, SimulateIsDeterministicAcrossWorkers)
{
    RunConfig c;
    c.apply_preset("tanh");
    c.set("command", "simulate");
    c.set("ensemble.width_n", "100");
    c.set("ensemble.replications", "300");
    c.set("output.format", "csv");
    const auto a = run_cfg(c, 1), b = run_cfg(c, 8);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("# normalization: n^(-1/p) with p = 1.7"), std::string::npos);
}

TEST(Run, JsonArtifactReExecutes)
{
    RunConfig c;
    c.apply_preset("deep_relu");
    c.set("command", "simulate");
    c.set("ensemble.width_n", "50");
    c.set("ensemble.replications", "100");
    const auto first = run_cfg(c);
    ASSERT_EQ(first.code, 0) << first.log;
    RunConfig again;
    again.merge_text(first.out);
    EXPECT_EQ(again, c);
    EXPECT_EQ(run_cfg(again).out, first.out);
}

TEST(Run, VerifyTanhPresetPasses)
{
    RunConfig c;
    c.apply_preset("tanh");
    c.set("command", "verify");
    c.set("ensemble.width_n", "2000");
    const auto r = run_cfg(c, 8);
    EXPECT_EQ(r.code, 0) << r.log;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["report"]["checks"][0]["name"], "ks");
    EXPECT_LT(j["report"]["ks_distance"].get<double>(), 0.05);
}

TEST(Run, VerifyFailureExitsOne)
{
    RunConfig c;
    c.apply_preset("tanh");
    c.set("command", "verify");
    c.set("ensemble.width_n", "200");
    c.set("ensemble.replications", "2000");
    c.set("network.sigma1", "1");
    c.set("tolerances.ks", "0.0001");
    EXPECT_EQ(run_cfg(c).code, 1);
}

TEST(Run, BudgetViolationIsUsageError)
{
    RunConfig c;
    c.apply_preset("tanh");
    c.set("command", "simulate");
    c.set("ensemble.budget", "1000");
    const auto r = run_cfg(c);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.log.find("ensemble.budget"), std::string::npos);
}

TEST(Run, TailscanCsv)
{
    RunConfig c;
    c.apply_preset("relu");
    c.set("command", "tailscan");
    c.set("tailscan.count", "2000000");
    c.set("tailscan.levels", "0.995,0.999");
    c.set("output.format", "csv");
    const auto r = run_cfg(c, 8);
    ASSERT_EQ(r.code, 0) << r.log;
    EXPECT_NE(r.out.find("/ log z"), std::string::npos);
    EXPECT_NE(r.out.find("level,z,survival"), std::string::npos);
}

TEST(Run, SurfaceAndSample)
{
    RunConfig c;
    c.apply_preset("deep_relu");
    c.set("command", "surface");
    c.set("network.depth", "1");
    c.set("ensemble.width_n", "20");
    c.set("surface.points", "5");
    const auto r = run_cfg(c);
    ASSERT_EQ(r.code, 0) << r.log;
    EXPECT_EQ(nlohmann::json::parse(r.out)["values"].size(), 25u);

    RunConfig s;
    s.set("command", "sample");
    s.set("sample.count", "10");
    s.set("sample.alpha", "1.2");
    const auto j = nlohmann::json::parse(run_cfg(s).out);
    EXPECT_EQ(j["values"].size(), 10u);

    s.set("sample.beta", "3");
    EXPECT_EQ(run_cfg(s).code, 2);
}

TEST(Binary, FlagsOverrideFile)
{
    const auto path = temp_file("cfg.txt");
    std::ofstream(path) << "preset = id\ncommand = predict\nnetwork.alpha0 = 1.5\nnetwork.alpha1 = 1.5\n";
    const auto p = shell("--config " + path.string() + " --network.alpha1 1.5 --set network.sigma1=2");
    ASSERT_EQ(p.code, 0);
    const auto j = nlohmann::json::parse(p.out);
    EXPECT_EQ(j["config"]["network.sigma1"], "2");
    EXPECT_NEAR(j["prediction"]["scale"].get<double>(), 2 * std::pow(1.5 * c_alpha(1.5), 1 / 1.5), 1e-12);
    std::filesystem::remove(path);
}

TEST(Binary, ExitCodes)
{
    EXPECT_EQ(shell("predict --preset tanh").code, 0);
    EXPECT_EQ(shell("predict --set network.bogus=1").code, 2);
    EXPECT_EQ(shell("frobnicate").code, 2);
    EXPECT_EQ(shell("predict --config /nonexistent/file").code, 2);
    EXPECT_EQ(shell("").code, 2);
}

TEST(Binary, SimulateTwiceIdenticalBytes)
{
    const std::string args = "simulate --preset deep_relu --ensemble.width_n 30 --ensemble.replications 50 --seed 7 --format csv";
    const auto a = shell(args + " --workers 1"), b = shell(args + " --workers 4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("# ensemble.seed = 7"), std::string::npos);
}
