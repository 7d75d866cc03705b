#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "perc_bound_app.hpp"

using namespace percbound;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "perc-bound");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void expect_same_matrix(const MeanMatrix& a, const MeanMatrix& b) {
  EXPECT_EQ(model_id(a.model()), model_id(b.model()));
  EXPECT_EQ(a.spec(), b.spec());
  EXPECT_EQ(a.structure()->row_ptr, b.structure()->row_ptr);
  EXPECT_EQ(a.structure()->cols, b.structure()->cols);
  EXPECT_TRUE(std::equal(a.poly_ids().begin(), a.poly_ids().end(), b.poly_ids().begin(), b.poly_ids().end()));
  EXPECT_EQ(a.pool().entries(), b.pool().entries());
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("percbound_" + name)).string();
}

}  // namespace

TEST(Cache, RoundTrip) {
  for (const char* id : {"bond-vl2", "inhom-4", "site-vl3"}) {
    const ModelSpec model = parse_model(id);
    const SpaceSpec spec = model.lattice == Lattice::VL3 ? SpaceSpec::triangle(4, 3) : SpaceSpec::truncated(7, 2, 3);
    const MeanMatrix m = build_matrix(model, spec);
    std::stringstream buf;
    write_cache(buf, m);
    expect_same_matrix(m, read_cache(buf));
  }
}

TEST(Cache, RejectsDamagedInput) {
  const MeanMatrix m = build_matrix(parse_model("bond-vl2"), SpaceSpec::plain(5));
  std::stringstream buf;
  write_cache(buf, m);
  const std::string bytes = buf.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream s1(bad_magic);
  EXPECT_THROW(read_cache(s1), Error);

  for (std::size_t cut : {std::size_t{3}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
    std::stringstream s2(bytes.substr(0, cut));
    EXPECT_THROW(read_cache(s2), Error) << cut;
  }
  EXPECT_THROW(read_cache(temp_path("does_not_exist.bin")), Error);
}

TEST(Cache, DumpListsEveryRow) {
  const ModelSpec model = parse_model("bond-vl2");
  const StateSpace space = enumerate(model, SpaceSpec::plain(2));
  std::ostringstream out;
  dump_matrix(out, build_matrix(model, space), space);
  EXPECT_NE(out.str().find("10"), std::string::npos);
  EXPECT_NE(out.str().find("11"), std::string::npos);
}

TEST(Json, BoundRoundTripAtReportedPrecision) {
  BoundResult r{"inhom-2", "14", 0.8, 0.61029912345678, 0.99999899123456789, 27, 1.23456789012345, 8192, 512};
  const BoundResult back = cli::bound_from_json(cli::to_json(r));
  EXPECT_EQ(back, cli::rounded(r));
  EXPECT_EQ(cli::to_json(back), cli::to_json(r));
  r.p2.reset();
  EXPECT_FALSE(cli::bound_from_json(cli::to_json(r)).p2.has_value());
  nlohmann::json wrong = cli::to_json(r);
  wrong["schema"] = "other/2";
  EXPECT_THROW(cli::bound_from_json(wrong), InvalidArgument);
}

TEST(Json, SpectralRoundTrip) {
  const SpectralReport r{0.98765432109876543, 1234, true, 3.3e-13};
  EXPECT_EQ(cli::spectral_from_json(cli::to_json(r)), cli::rounded(r));
}

TEST(Cli, ExactOracle) {
  const CliRun r = run_cli({"oracle", "exact", "--model", "bond-vl2", "--n", "1", "--p", "0.5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j.at("probability").get<double>(), 0.75);
  EXPECT_EQ(j.at("schema"), "perc-bound/1");
}

TEST(Cli, ComputeCsv) {
  const CliRun r = run_cli({"--format", "csv", "compute", "--model", "bond-vl2", "--space", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "model,space,p2,bound,lambda,states,polys,seconds");
  EXPECT_EQ(r.out.find("bond-vl2,4,,"), r.out.find('\n') + 1);
}

TEST(Cli, GlobalFlagsAfterSubcommand) {
  const CliRun r = run_cli({"compute", "--model", "bond-vl2", "--space", "6,2,0", "--format", "json", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("state_count").get<int>(), 38);
  EXPECT_EQ(j.at("space"), "6,2,0");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--model", "bond-vl9", "--space", "4"}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--model", "inhom-1", "--space", "4"}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--model", "bond-vl2", "--space", "11,2,46"}).code, 2);
  EXPECT_EQ(run_cli({"spectral", "--model", "bond-vl2", "--space", "4", "--p", "1.5"}).code, 2);
  EXPECT_EQ(run_cli({"compute", "--model", "bond-vl2", "--space", "4", "--format", "xml"}).code, 2);
  EXPECT_EQ(run_cli({"spectral", "--model", "bond-vl2", "--space", "6", "--p", "0.6", "--max-iter", "2"}).code, 3);
  const CliRun mem = run_cli({"compute", "--model", "bond-vl2", "--space", "12", "--memory-budget", "0.001"});
  EXPECT_EQ(mem.code, 4);
  EXPECT_NE(mem.err.find("memory budget"), std::string::npos);
  EXPECT_EQ(run_cli({"oracle", "exact", "--model", "bond-vl2", "--n", "40", "--p", "0.5"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, TransitionsAndChildrenAgree) {
  const std::vector<std::string> common{"--model", "inhom-3", "--space", "4", "--state", "1011/c", "--p", "0.3",
                                        "--p2", "0.9", "--format", "csv"};
  std::vector<std::string> a{"transitions"}, b{"oracle", "children"};
  a.insert(a.end(), common.begin(), common.end());
  b.insert(b.end(), common.begin(), common.end());
  const CliRun ra = run_cli(a), rb = run_cli(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  ASSERT_EQ(rb.code, 0) << rb.err;
  // same children with the same values; polynomial text may differ in form
  auto values = [](const std::string& csv) {
    std::vector<std::pair<std::string, double>> v;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto c1 = line.find(','), c2 = line.find(',', c1 + 1), c3 = line.rfind(',');
      v.emplace_back(line.substr(c1 + 1, c2 - c1 - 1), std::stod(line.substr(c3 + 1)));
    }
    return v;
  };
  const auto va = values(ra.out), vb = values(rb.out);
  ASSERT_EQ(va.size(), vb.size());
  for (std::size_t n = 0; n < va.size(); ++n) {
    EXPECT_EQ(va[n].first, vb[n].first);
    EXPECT_NEAR(va[n].second, vb[n].second, 1e-11);
  }
}

TEST(Cli, CacheWriteThenRead) {
  const std::string path = temp_path("cache_test.pbm");
  const CliRun w = run_cli({"cache", "write", "--model", "inhom-5", "--space", "5", "--file", path});
  ASSERT_EQ(w.code, 0) << w.err;
  const CliRun r =
      run_cli({"cache", "read", "--file", path, "--p", "0.5", "--p2", "0.5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("model"), "inhom-5");
  EXPECT_EQ(j.at("states").get<int>(), 16);
  EXPECT_TRUE(j.at("converged").get<bool>());
  EXPECT_EQ(run_cli({"cache", "read", "--file", path, "--p", "0.5"}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, OutputFile) {
  const std::string path = temp_path("out.json");
  ASSERT_EQ(run_cli({"spectral", "--model", "site-alt2", "--space", "3", "--p", "0.4", "--format", "json", "-o", path})
                .code,
            0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.at("converged").get<bool>());
  std::remove(path.c_str());
}

TEST(Cli, InhomogeneousTableAtSmallWindow) {
  const CliRun r = run_cli({"tables", "inhomogeneous", "--k", "8", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = nlohmann::json::parse(r.out).at("rows");
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& row : rows) EXPECT_LE(row.at("bound").get<double>(), row.at("reference").get<double>());
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("wall_time");
    return j.dump();
  };
  const CliRun a = run_cli({"--threads", "1", "compute", "--model", "site-vl3", "--space", "4", "--format", "json"});
  const CliRun b = run_cli({"--threads", "4", "compute", "--model", "site-vl3", "--space", "4", "--format", "json"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(strip(a.out), strip(b.out));
}
