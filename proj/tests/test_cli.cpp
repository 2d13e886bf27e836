#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cli_app.hpp"

using namespace exclusion;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "exclusion");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<long, std::uint64_t> pairs_of(const Json& j) {
  std::map<long, std::uint64_t> m;
  for (const auto& p : j.at("pairs")) m[std::lround(p.at("value").get<double>())] = p.at("multiplicity").get<std::uint64_t>();
  return m;
}

using M = std::map<long, std::uint64_t>;

}  // namespace

TEST(Grid, Parsing) {
  EXPECT_EQ(parse_grid("0:2:0.25").size(), 9u);
  EXPECT_EQ(parse_grid("0:1:0.3"), (std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999}));
  EXPECT_EQ(parse_grid("1,2.5,4"), (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_EQ(parse_grid("7"), (std::vector<double>{7.0}));
  EXPECT_THROW(parse_grid("0:1"), ParameterError);
  EXPECT_THROW(parse_grid("0:1:0"), ParameterError);
  EXPECT_THROW(parse_grid("1:0:0.1"), ParameterError);
  EXPECT_THROW(parse_grid("a,b"), ParameterError);
  EXPECT_THROW(parse_grid(""), ParameterError);
}

TEST(Serialization, SpectrumRoundTrip) {
  const auto s = uep_spectrum_closed_form(ProcessParams::uep(6, 3, 1.0));
  const auto back = spectrum_from_json(Json::parse(to_json(s).dump()));
  EXPECT_EQ(back.n, 6);
  EXPECT_EQ(back.ell, 3);
  EXPECT_EQ(back.kind, SpectrumKind::UEP);
  ASSERT_EQ(back.pairs.size(), s.pairs.size());
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    EXPECT_EQ(back.pairs[i].value, s.pairs[i].value);
    EXPECT_EQ(back.pairs[i].multiplicity, s.pairs[i].multiplicity);
  }
  EXPECT_THROW(spectrum_from_json(Json{{"n", 1}, {"ell", 0}, {"alpha", 1.0}, {"kind", "X"}, {"pairs", Json::array()}}),
               ParameterError);
}

TEST(Serialization, MixingReportKeys) {
  const auto j = to_json(tau2(10, 5, ProcessKind::UEP, 0.25));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"n", "ell", "kind", "epsilon", "tau2", "tol"}));
}

TEST(Serialization, CurveCsv) {
  const auto p = ProcessParams::uep(10, 5, standard_alpha(10));
  const std::vector<double> times{1.0, 2.0};
  std::ostringstream os;
  write_curve_csv(os, make_curve(p, times, exact_l2_function(p)));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,c,l2,lower,upper");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Cli, SpectrumClosedForm) {
  const auto r = run({"spectrum", "--n", "4", "--ell", "2", "--alpha", "1", "--kind", "uep"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(pairs_of(j), (M{{0, 1}, {4, 3}, {6, 2}}));
  EXPECT_EQ(j.at("kind"), "UEP");
}

TEST(Cli, SpectrumVerify) {
  const auto r = run({"spectrum", "--n", "4", "--ell", "2", "--kind", "uep", "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_LT(j.at("max_dev").get<double>(), 1e-8);
  EXPECT_TRUE(j.at("multiplicities_match").get<bool>());
  EXPECT_DOUBLE_EQ(j.at("alpha").get<double>(), 2.0 / 16);
}

TEST(Cli, SpectrumEmptyAndOracle) {
  const auto r = run({"spectrum", "--n", "3", "--ell", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(pairs_of(Json::parse(r.out)), (M{{0, 1}}));

  const auto o = run({"spectrum", "--n", "4", "--ell", "3", "--alpha", "1", "--oracle"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(pairs_of(Json::parse(o.out)), (M{{0, 1}, {4, 3}}));

  const auto c = run({"spectrum", "--n", "3", "--kind", "cayley"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(pairs_of(Json::parse(c.out)), (M{{-3, 1}, {0, 4}, {3, 1}}));

  const auto l = run({"spectrum", "--n", "4", "--ell", "2", "--alpha", "1", "--kind", "lep", "--verify"});
  ASSERT_EQ(l.code, 0) << l.out;
  EXPECT_TRUE(Json::parse(l.out).at("envelope_containment").get<bool>());
}

TEST(Cli, EnvelopeExamples) {
  const auto a = run({"envelope", "--n", "4", "--ell", "4", "--alpha", "1"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(Json::parse(a.out).at("values").get<std::vector<double>>(), (std::vector<double>{0, 4, 6, 8, 9, 12}));

  const auto b = run({"envelope", "--n", "4", "--ell", "4", "--check"});
  ASSERT_EQ(b.code, 0);
  const auto jb = Json::parse(b.out);
  EXPECT_TRUE(jb.at("containment").get<bool>());
  EXPECT_EQ(jb.at("symmetric_core").get<std::vector<double>>(), (std::vector<double>{0, 4, 6, 8, 12}));
  EXPECT_TRUE(jb.at("core_contains_spectrum").get<bool>());

  const auto c = run({"envelope", "--n", "4", "--ell", "1"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(Json::parse(c.out).at("values").get<std::vector<double>>(), (std::vector<double>{0, 4}));
}

TEST(Cli, L2CsvCurve) {
  const auto r = run({"l2", "--n", "100", "--ell", "50", "--c-grid", "0:2:0.25", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,c,l2,lower,upper");
  std::vector<double> l2;
  while (std::getline(is, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i < 3; ++i) std::getline(row, cell, ',');
    l2.push_back(std::stod(cell));
  }
  ASSERT_EQ(l2.size(), 9u);
  for (std::size_t i = 1; i < l2.size(); ++i) EXPECT_LT(l2[i], l2[i - 1]);
}

TEST(Cli, L2NeedsGrid) {
  EXPECT_EQ(run({"l2", "--n", "10", "--ell", "5"}).code, 2);
  EXPECT_EQ(run({"l2", "--n", "10", "--ell", "5", "--c-grid", "0:1"}).code, 2);
}

TEST(Cli, MixReportsBisection) {
  const auto r = run({"mix", "--n", "1000", "--ell", "500", "--epsilon", "0.25"});
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j.at("tau2").get<double>(), 2102.11868325326, 1e-3);
  EXPECT_EQ(j.at("kind"), "UEP");
}

TEST(Cli, SimulateOutputs) {
  const std::vector<std::string> base{"simulate", "--n", "5", "--ell", "2", "--alpha", "1", "--t", "1",
                                      "--replicas", "2000", "--seed", "3"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  const auto csv = run(csv_args);
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("rank,count\n", 0), 0u);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 11);

  const auto js = run(base);
  ASSERT_EQ(js.code, 0);
  const auto j = Json::parse(js.out);
  EXPECT_EQ(j.at("replicas").get<int>(), 2000);
  EXPECT_TRUE(j.contains("exact_tv"));
  EXPECT_TRUE(j.contains("chi2_p_value"));
}

TEST(Cli, ByteIdenticalOutputs) {
  const std::vector<std::string> args{"simulate", "--n", "6", "--ell", "3", "--kind", "lep", "--t", "0.7",
                                      "--replicas", "3000", "--seed", "99"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> spec{"spectrum", "--n", "4", "--ell", "3", "--kind", "lep"};
  EXPECT_EQ(run(spec).out, run(spec).out);
}

TEST(Cli, OutFile) {
  const std::string path = testing::TempDir() + "exclusion_cli_out.json";
  const auto r = run({"spectrum", "--n", "4", "--ell", "2", "--alpha", "1", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(pairs_of(Json::parse(buf.str())), (M{{0, 1}, {4, 3}, {6, 2}}));
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nope"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--n", "4", "--ell", "5"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--n", "5", "--ell", "3"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--n", "4", "--ell", "2", "--alpha", "-1"}).code, 2);
  EXPECT_EQ(run({"mix", "--n", "10", "--ell", "5", "--epsilon", "2"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--n", "9", "--ell", "6", "--kind", "lep"}).code, 3);
  EXPECT_EQ(run({"spectrum", "--n", "40", "--ell", "20", "--oracle"}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, SandwichAndLemmas) {
  const auto s = run({"sandwich", "--n", "10000", "--ell", "5000"});
  EXPECT_EQ(s.code, 0) << s.out;
  EXPECT_TRUE(Json::parse(s.out).at("passed").get<bool>());
  const auto c = run({"coefficients", "--n", "4", "--ell", "2", "--alpha", "1", "--kind", "lep"});
  EXPECT_EQ(c.code, 0) << c.out;
  const auto l = run({"lifts", "--n", "4", "--ell", "1", "--alpha", "1"});
  EXPECT_EQ(l.code, 0) << l.out;
}

TEST(Cli, MatrixDump) {
  const auto r = run({"dump", "--n", "3", "--ell", "1", "--alpha", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("dim 3\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 10);
}
