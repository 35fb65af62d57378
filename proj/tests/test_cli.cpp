#include "wdn/cli.hpp"
#include "wdn/network_file.hpp"
#include "wdn/solution_document.hpp"

#include "support/networks.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace wdn {
namespace {

namespace fs = std::filesystem;

const std::string kExampleNet = std::string(WDN_DATA_DIR) + "/paper-net.txt";

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("wdnfp-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& contents) const {
        std::ofstream(path(name), std::ios::binary) << contents;
        return path(name);
    }

    fs::path dir_;
};

TEST_F(CliTest, SolveExampleNetworkToStdout) {
    const CliRun r = invoke({"solve", kExampleNet, "--tol-gpm", "0.001", "--init-gpm", "600"});
    ASSERT_EQ(r.code, 0) << r.err;
    const SolutionDocument doc = parse_solution(r.out);
    EXPECT_TRUE(doc.converged);
    EXPECT_EQ(doc.iterations, 68);
    ASSERT_EQ(doc.flows_gpm.size(), 9u);
    ASSERT_EQ(doc.heads_ft.size(), 7u);
    for (int l = 0; l < 9; ++l) EXPECT_NEAR(doc.flows_gpm[l], testing::kReferenceFlowsGpm[l], 0.05);
    for (int n = 0; n < 7; ++n) EXPECT_NEAR(doc.heads_ft[n], testing::kReferenceHeadsFt[n], 0.05);
    EXPECT_NEAR(doc.reservoir_intake_gpm, 950.0, 0.01);
    EXPECT_FALSE(doc.contraction.has_value());
    ASSERT_EQ(doc.warnings.size(), 1u);
    EXPECT_NE(doc.warnings[0].find("pipe 4"), std::string::npos);

    const auto json = nlohmann::json::parse(r.out);
    for (const char* key : {"flows_gpm", "heads_ft", "reservoir_intake_gpm", "iterations", "converged",
                            "residuals", "contraction", "warnings"}) {
        EXPECT_TRUE(json.contains(key)) << key;
    }
}

TEST_F(CliTest, OutputIsDeterministic) {
    const CliRun a = invoke({"solve", kExampleNet, "--analyze"});
    const CliRun b = invoke({"solve", kExampleNet, "--analyze"});
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, TraceAndOutFiles) {
    const CliRun r = invoke({"solve", kExampleNet, "--trace", path("trace.csv"), "--out", path("sol.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("815.03"), std::string::npos);  // table rounds to 2 decimals

    const SolutionDocument doc = parse_solution(slurp(path("sol.json")));
    const std::string csv = slurp(path("trace.csv"));
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    const auto rows = lines(csv);
    ASSERT_EQ(rows.front(), "iter,step_inf_gpm,ratio");
    ASSERT_EQ(static_cast<int>(rows.size()) - 1, doc.iterations);

    double previous = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        std::istringstream in(rows[k]);
        std::string iter;
        std::string step;
        std::string ratio;
        std::getline(in, iter, ',');
        std::getline(in, step, ',');
        std::getline(in, ratio);
        EXPECT_EQ(std::stoi(iter), static_cast<int>(k));
        const double s = std::stod(step);
        if (k == 1) {
            EXPECT_TRUE(ratio.empty());
        } else {
            EXPECT_NEAR(std::stod(ratio), s / previous, 1e-12);
        }
        previous = s;
    }
}

TEST_F(CliTest, NewtonMethodAgrees) {
    const CliRun fp = invoke({"solve", kExampleNet});
    const CliRun nt = invoke({"solve", kExampleNet, "--method", "newton"});
    ASSERT_EQ(nt.code, 0) << nt.err;
    const SolutionDocument a = parse_solution(fp.out);
    const SolutionDocument b = parse_solution(nt.out);
    EXPECT_EQ(b.method, "newton");
    for (int l = 0; l < 9; ++l) EXPECT_NEAR(a.flows_gpm[l], b.flows_gpm[l], 1e-3);
    for (int n = 0; n < 7; ++n) EXPECT_NEAR(a.heads_ft[n], b.heads_ft[n], 1e-3);
    EXPECT_EQ(invoke({"solve", kExampleNet, "--method", "newton", "--trace", path("t.csv")}).code, 1);
}

TEST_F(CliTest, ForcedNonConvergence) {
    const CliRun r = invoke({"solve", kExampleNet, "--max-iter", "5", "--trace", path("trace.csv")});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(lines(slurp(path("trace.csv"))).size(), 6u);
    const SolutionDocument doc = parse_solution(r.out);
    EXPECT_FALSE(doc.converged);
    EXPECT_EQ(doc.iterations, 5);
}

TEST_F(CliTest, SolveWithAnalyze) {
    const CliRun r = invoke({"solve", kExampleNet, "--analyze"});
    ASSERT_EQ(r.code, 0) << r.err;
    const SolutionDocument doc = parse_solution(r.out);
    ASSERT_TRUE(doc.contraction.has_value());
    EXPECT_NEAR(doc.contraction->spectral_radius, 0.8520, 0.005);
    EXPECT_TRUE(doc.contraction->is_local_contraction);
}

TEST_F(CliTest, AnalyzeExampleNetwork) {
    const CliRun r = invoke({"analyze", kExampleNet, "--out", path("report.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto out = lines(r.out);
    EXPECT_EQ(out[0], "rho=0.8520");
    EXPECT_EQ(out[1], "alpha=0.8520");
    EXPECT_EQ(out[2], "local_contraction=true");
    ASSERT_EQ(out[3].rfind("empirical_ratio=", 0), 0u);
    EXPECT_LT(std::abs(std::stod(out[3].substr(16)) - 0.8520), 0.01);

    const auto report = nlohmann::json::parse(slurp(path("report.json")));
    EXPECT_EQ(report.at("jacobian").size(), 9u);
    EXPECT_LT(std::abs(report.at("alpha").get<double>() - report.at("empirical_ratio").get<double>()), 0.01);
}

TEST_F(CliTest, AnalyzeTree) {
    const std::string tree = write("tree.txt",
                                   "[RESERVOIR]\n0 200\n[JUNCTIONS]\n1 50\n2 30\n3 20\n"
                                   "[PIPES]\n1 0 1 1000 10 120\n2 1 2 800 8 110\n3 1 3 900 6 100\n");
    const CliRun r = invoke({"analyze", tree});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out)[0], "rho=0.0000");
}

TEST_F(CliTest, AnalyzeLoadedSolutionOnScaledDemands) {
    ASSERT_EQ(invoke({"solve", kExampleNet, "--out", path("sol.json")}).code, 0);
    NetworkFile file = load_network_file(kExampleNet);
    std::vector<Junction> doubled = file.network.junctions();
    for (auto& j : doubled) j.demand_gpm *= 2;
    file.network = Network(file.network.reservoir(), doubled, file.network.pipes());
    const std::string scaled = write("scaled.txt", format_network_file(file));

    const CliRun same = invoke({"analyze", kExampleNet, "--solution", path("sol.json")});
    EXPECT_EQ(same.code, 0) << same.err;
    EXPECT_EQ(lines(same.out).size(), 3u);  // no trace, no empirical ratio

    const CliRun r = invoke({"analyze", scaled, "--solution", path("sol.json")});
    EXPECT_EQ(r.code, 3) << r.err;
    EXPECT_EQ(lines(r.out)[2], "local_contraction=false");
}

TEST_F(CliTest, AnalyzeRejectsZeroFlowPipe) {
    // symmetric supply: the cross pipe carries no flow
    const std::string sym = write("sym.txt",
                                  "[RESERVOIR]\n0 100\n[JUNCTIONS]\n1 50\n2 50\n"
                                  "[PIPES]\n1 0 1 1000 8 100\n2 0 2 1000 8 100\n3 1 2 500 6 100\n");
    const CliRun r = invoke({"analyze", sym});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("zero flow"), std::string::npos) << r.err;
}

TEST_F(CliTest, PerPipeInitialFlowFile) {
    const std::string init = write("q0.txt", "900, 400, 200, 20, -100\n300 50 -100 900\n");
    const CliRun r = invoke({"solve", kExampleNet, "--init-gpm", "@" + init});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(parse_solution(r.out).flows_gpm[0], 815.03, 0.05);
    const std::string short_init = write("short.txt", "1 2 3\n");
    EXPECT_EQ(invoke({"solve", kExampleNet, "--init-gpm", "@" + short_init}).code, 1);
}

TEST_F(CliTest, InputErrors) {
    EXPECT_EQ(invoke({"solve", path("missing.txt")}).code, 1);
    EXPECT_EQ(invoke({"solve", kExampleNet, "--method", "hardy-cross"}).code, 1);
    EXPECT_EQ(invoke({"solve", kExampleNet, "--tol-gpm", "-1"}).code, 1);
    EXPECT_EQ(invoke({"solve", kExampleNet, "--init-gpm", "abc"}).code, 1);
    EXPECT_EQ(invoke({}).code, 1);
    const std::string bad = write("bad.txt", "[RESERVOIR]\n0 100\n[JUNCTIONS]\n1 5\n1 5\n[PIPES]\n1 0 1 100 6 100\n");
    const CliRun r = invoke({"solve", bad});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 5"), std::string::npos);
}

TEST(SolutionDocument, JsonRoundTripIsLossless) {
    const HydraulicSystem sys(testing::example_network());
    const SolveResult result = solve(sys);
    SolutionDocument doc = make_document(result);
    doc.contraction = summarize(contraction_report(result.flows_cfs, sys, result.trace));
    EXPECT_EQ(parse_solution(serialize(doc)), doc);
    EXPECT_THROW(parse_solution("{\"method\": \"fp\"}"), std::invalid_argument);
    EXPECT_THROW(parse_solution("not json"), std::invalid_argument);
}

}  // namespace
}  // namespace wdn
