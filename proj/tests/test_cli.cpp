#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "cglmp/cli.hpp"
#include "cglmp/io.hpp"

using namespace cglmp;
using Catch::Approx;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("fmt_g17 round-trips doubles exactly") {
  SplitMix64 rng(55);
  for (int i = 0; i < 2000; ++i) {
    double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
    REQUIRE(std::stod(fmt_g17(x)) == x);
  }
  REQUIRE(std::stod(fmt_g17(0.1)) == 0.1);
  REQUIRE(fmt_g17(2) == "2");
}

TEST_CASE("csv emit/parse") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{1.0, 0.30000000000000004}, {-2.5e-13, 3}};
  const std::string text = emit_csv(t);
  CsvTable back = parse_csv(text);
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows == t.rows);
  REQUIRE(emit_csv(back) == text);

  SECTION("malformed input rejected") {
    REQUIRE_THROWS_AS(parse_csv("a,b\n1,notanumber\n"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_csv("a,b\n1\n"), std::invalid_argument);
  }
}

TEST_CASE("verify-analytic command") {
  cli::VerifyAnalyticOptions o;
  o.d = 2;
  o.grid = 12;
  o.seed = 7;
  std::ostringstream out;
  REQUIRE(cli::cmd_verify_analytic(o, out) == cli::kExitOk);
  const std::string text = out.str();
  REQUIRE(text.find("FAIL") == std::string::npos);
  REQUIRE(text.find("2.828427125") != std::string::npos);  // bound at pi/4

  SECTION("json report") {
    o.json = true;
    std::ostringstream jout;
    REQUIRE(cli::cmd_verify_analytic(o, jout) == cli::kExitOk);
    auto j = nlohmann::json::parse(jout.str());
    REQUIRE(j["pass"].get<bool>());
    REQUIRE(j["checks"].size() == 4);
    for (const auto& c : j["checks"]) REQUIRE(c["pass"].get<bool>());
  }
}

TEST_CASE("lhv-bound command") {
  std::ostringstream out;
  REQUIRE(cli::cmd_lhv_bound({2, Functional::Cglmp}, out) == cli::kExitOk);
  REQUIRE(out.str().find("strategies enumerated = 16") != std::string::npos);
  REQUIRE(out.str().find("bound = 2 ") != std::string::npos);

  std::ostringstream out2;
  REQUIRE(cli::cmd_lhv_bound({3, Functional::Gill}, out2) == cli::kExitOk);
  REQUIRE(out2.str().find("bound = 0 ") != std::string::npos);
}

TEST_CASE("gisin-scan command") {
  cli::GisinScanOptions o;
  o.d = 3;
  o.samples = 40;
  o.opt.seed = 21;
  o.threads = 2;
  o.out_path = temp_path("cglmp_test_scan.csv");
  FileGuard guard{o.out_path};

  std::ostringstream out;
  REQUIRE(cli::cmd_gisin_scan(o, out) == cli::kExitOk);
  REQUIRE(out.str().find("PASS") != std::string::npos);

  SECTION("csv file round-trips byte for byte") {
    const std::string text = read_text_file(o.out_path);
    CsvTable t = parse_csv(text);
    REQUIRE(t.header.front() == "sample");
    REQUIRE(t.rows.size() == 40);
    REQUIRE(emit_csv(t) == text);
  }

  SECTION("json report carries config, rows, summary") {
    o.format = "json";
    o.out_path = temp_path("cglmp_test_scan.json");
    FileGuard jguard{o.out_path};
    std::ostringstream jout;
    REQUIRE(cli::cmd_gisin_scan(o, jout) == cli::kExitOk);
    auto j = nlohmann::json::parse(read_text_file(o.out_path));
    REQUIRE(j["config"]["d"] == 3);
    REQUIRE(j["rows"].size() == 40);
    REQUIRE(j["summary"]["all_violated"].get<bool>());
    REQUIRE(j["summary"]["min_margin"].get<double>() > 0.0);
  }

  SECTION("unwritable path reports an io error") {
    o.out_path = "/nonexistent-dir/x.csv";
    std::ostringstream eout;
    REQUIRE(cli::cmd_gisin_scan(o, eout) == cli::kExitIo);
  }
}

TEST_CASE("fig1 command") {
  cli::Fig1Options o;
  o.grid = 4;
  o.opt.seed = 31;
  o.opt.restarts = 4;
  o.threads = 2;
  o.out_path = temp_path("cglmp_test_fig1.csv");
  o.svg_path = temp_path("cglmp_test_fig1.svg");
  FileGuard g1{o.out_path}, g2{o.svg_path};

  std::ostringstream out;
  REQUIRE(cli::cmd_fig1(o, out) == cli::kExitOk);
  REQUIRE(out.str().find("spot check") != std::string::npos);
  REQUIRE(out.str().find("PASS") != std::string::npos);

  const std::string text = read_text_file(o.out_path);
  REQUIRE(text.rfind("beta,xi,kappa0,kappa1,kappa2,i3_full,i3_restricted,"
                     "i3_rough\n", 0) == 0);
  CsvTable t = parse_csv(text);
  REQUIRE(t.rows.size() == 6 * 4);
  REQUIRE(emit_csv(t) == text);

  const std::string svg = read_text_file(o.svg_path);
  REQUIRE(svg.find("<svg") != std::string::npos);
  REQUIRE(svg.find("polyline") != std::string::npos);

  SECTION("json array of row objects") {
    o.format = "json";
    o.out_path = temp_path("cglmp_test_fig1.json");
    o.svg_path.clear();
    FileGuard g3{o.out_path};
    std::ostringstream jout;
    REQUIRE(cli::cmd_fig1(o, jout) == cli::kExitOk);
    auto j = nlohmann::json::parse(read_text_file(o.out_path));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 6 * 4);
    REQUIRE(j[0].contains("i3_full"));
  }
}

TEST_CASE("empirical-check command") {
  cli::EmpiricalCheckOptions o;
  o.grid = 3;
  o.opt.seed = 3;
  o.opt.restarts = 3;
  o.threads = 2;
  std::ostringstream out;
  REQUIRE(cli::cmd_empirical_check(o, out) == cli::kExitOk);
  const std::string text = out.str();
  REQUIRE(text.find(fmt_g17(empirical_i3_rough(1, 0, 0))) !=
          std::string::npos);
  REQUIRE(text.find("spot check") != std::string::npos);
  REQUIRE(text.find("residual") != std::string::npos);
}
