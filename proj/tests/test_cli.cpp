#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fjt/cli.hpp"

using namespace fjt;
using namespace fjt::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string summary_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  const std::string prefix = "# " + key + ",";
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return {};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fjt_test_" + name);
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(NAN), "nan");
}

TEST(Grid, Parsing) {
  EXPECT_EQ(parse_grid("0:1:0.25"), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
  EXPECT_EQ(parse_grid("1,2.5,4"), (std::vector<double>{1, 2.5, 4}));
  EXPECT_THROW(parse_grid("1:0:0.5"), DomainError);
  EXPECT_THROW(parse_grid("a,b"), DomainError);
  EXPECT_THROW(parse_grid(""), DomainError);
}

TEST(Kernel, UnitAtOriginAndColumns) {
  const auto r = run({"kernel", "--grid", "0,1", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "F_n", "Phi_n"}));
  EXPECT_EQ(rows[1][1], "1");
  EXPECT_EQ(std::stod(rows[2][1]), kernels::forward_kernel(JacobiParams(0.75, 1.2), 2, 1.0));
}

TEST(Kernel, CheckDecay) {
  const auto r = run({"kernel", "--grid", "10,20,40", "--check-decay"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(summary_value(r.out, "decay_exponent")), -1.5, 0.3 * 1.5);
  EXPECT_NEAR(std::stod(summary_value(r.out, "phi_decay_exponent")), -1.9, 0.3 * 1.9);
  EXPECT_EQ(summary_value(r.out, "expected_decay_exponent"), "-1.5");
}

TEST(Exit, InvalidParameters) {
  const auto r = run({"kernel", "--a", "0.75", "--c", "0.4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("max(1/2, 2a-1/2) < c < 2a+1/2"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({"kernel", "--a", "-1"}).code, 2);
  EXPECT_EQ(run({"analyze", "--profile", "square"}).code, 2);
  EXPECT_EQ(run({"synth", "--sequence", "ones"}).code, 2);
  EXPECT_EQ(run({"kernel", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"kernel", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"kernel", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"verify", "--identity", "nope"}).code, 2);
  EXPECT_EQ(run({"synth", "--delta", "3"}).code, 2);
}

TEST(Exit, ToleranceBreach) {
  const auto r = run({"roundtrip-func", "--profile", "ramp", "--N", "3"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("reconstruction error"), std::string::npos);
  EXPECT_EQ(summary_value(r.out, "coefficient_paths_agree"), "true");
}

TEST(Exit, NonConvergence) {
  const auto r = run({"invert", "--N", "1", "--abs-tol", "1e-300", "--rel-tol", "1e-16"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("achieved residual"), std::string::npos);
}

TEST(Exit, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("roundtrip-func"), std::string::npos);
}

TEST(Synth, CsvAndJsonAgree) {
  const auto csv = run({"synth", "--grid", "0.5,1,2", "--N", "5"});
  const auto json = run({"synth", "--grid", "0.5,1,2", "--N", "5", "--format", "json"});
  ASSERT_EQ(csv.code, 0);
  ASSERT_EQ(json.code, 0);
  const auto rows = csv_rows(csv.out);
  const auto j = nlohmann::json::parse(json.out);
  ASSERT_EQ(j["rows"].size(), rows.size() - 1);
  for (std::size_t i = 0; i < j["rows"].size(); ++i)
    for (std::size_t k = 0; k < rows[0].size(); ++k)
      EXPECT_EQ(j["rows"][i][rows[0][k]].get<double>(), std::stod(rows[i + 1][k]));
  EXPECT_EQ(j["config"]["N"], 5);
  EXPECT_EQ(j["config"]["command"], "synth");
}

TEST(RoundTrip, ReferenceSequence) {
  const auto r = run({"roundtrip-seq", "--N", "3", "--abs-tol", "1e-7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(std::stod(summary_value(r.out, "max_abs_error")), 1e-4);
  const auto zero = run({"roundtrip-seq", "--N", "2", "--sequence", "zero"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  EXPECT_EQ(std::stod(summary_value(zero.out, "max_abs_error")), 0.0);
  const auto one = run({"invert", "--N", "1"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(csv_rows(one.out).size(), 2u);
}

TEST(RoundTrip, SineProfiles) {
  const auto s = run({"roundtrip-func", "--profile", "sin", "--N", "3", "--max-error", "1e-5"});
  ASSERT_EQ(s.code, 0) << s.err;
  for (const auto& row : csv_rows(s.out))
    if (row[0] == "coefficient" && row[1] != "1") EXPECT_LE(std::abs(std::stod(row[3])), 1e-9);
  EXPECT_EQ(run({"roundtrip-func", "--profile", "sin+0.3sin3", "--N", "3"}).code, 0);
}

TEST(Verify, FilteredGrids) {
  const auto r = run({"verify", "--identity", "laplace_k", "--identity", "k_inequality"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(summary_value(r.out, "checks"), "45");
  EXPECT_EQ(summary_value(r.out, "failed"), "0");
  const auto rows = csv_rows(r.out);
  EXPECT_EQ(rows[0].back(), "passed");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "true");
}

TEST(Config, FileValuesAndFlagPrecedence) {
  const auto path = temp_file("config.ini");
  {
    std::ofstream f(path);
    f << "a = 0.6\nc = 1.3\nn = 2\ngrid = 0.5,1\n";
  }
  const auto from_file = run({"kernel", "--config", path.string(), "--format", "json"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto j = nlohmann::json::parse(from_file.out);
  EXPECT_EQ(j["config"]["a"], 0.6);
  EXPECT_EQ(j["config"]["c"], 1.3);
  EXPECT_EQ(j["config"]["n"], 2);
  const auto overridden = run({"kernel", "--config", path.string(), "--c", "1.0", "--format", "json"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  const auto k = nlohmann::json::parse(overridden.out);
  EXPECT_EQ(k["config"]["c"], 1.0);
  EXPECT_EQ(k["config"]["a"], 0.6);
  EXPECT_EQ(k["rows"][1]["F_n"].get<double>(), kernels::forward_kernel(JacobiParams(0.6, 1.0), 2, 1.0));
  std::filesystem::remove(path);
  EXPECT_EQ(run({"kernel", "--config", path.string()}).code, 2);
}

TEST(Output, FileAndDeterminism) {
  const auto p1 = temp_file("out1.csv"), p2 = temp_file("out2.csv");
  ASSERT_EQ(run({"analyze", "--profile", "ramp", "--N", "3", "--out", p1.string()}).code, 0);
  ASSERT_EQ(run({"analyze", "--profile", "ramp", "--N", "3", "--out", p2.string()}).code, 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const auto a = slurp(p1), b = slurp(p2);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
  EXPECT_EQ(run({"kernel", "--out", "/nonexistent/dir/x.csv"}).code, 2);
}
