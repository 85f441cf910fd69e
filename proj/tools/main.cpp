// Command-line driver for the CGLMP violation toolkit.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cglmp/cli.hpp"

namespace {

void add_optimizer_flags(CLI::App* cmd, cglmp::OptimizerConfig* opt) {
  cmd->add_option("--restarts", opt->restarts, "search restarts per state")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", opt->max_iters,
                  "simplex iterations per restart")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--opt-tol", opt->tol, "simplex convergence tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--simplex-scale", opt->simplex_scale,
                  "initial simplex edge (radians)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cglmp: restricted and full-unitary CGLMP violation experiments for "
      "two-qudit states"};
  app.require_subcommand(1);

  cglmp::cli::VerifyAnalyticOptions va;
  CLI::App* verify = app.add_subcommand(
      "verify-analytic",
      "check the closed forms against the measurement pipeline");
  verify->add_option("--d", va.d, "local dimension")->check(CLI::Range(2, 5));
  verify->add_option("--grid", va.grid, "eta-grid resolution")
      ->check(CLI::Range(2, 2000));
  verify->add_option("--seed", va.seed, "random seed");
  verify->add_flag("--json", va.json, "machine-readable report");

  cglmp::cli::LhvBoundOptions lb;
  std::string functional = "cglmp";
  CLI::App* lhv = app.add_subcommand(
      "lhv-bound", "enumerate all deterministic strategies for the bound");
  lhv->add_option("--d", lb.d, "local dimension")->check(CLI::Range(2, 10));
  lhv->add_option("--functional", functional, "cglmp | gill")
      ->check(CLI::IsMember({"cglmp", "gill"}));

  cglmp::cli::GisinScanOptions gs;
  CLI::App* scan = app.add_subcommand(
      "gisin-scan", "sample entangled Schmidt states; all must violate");
  scan->add_option("--d", gs.d, "local dimension")->check(CLI::Range(2, 6));
  scan->add_option("--samples", gs.samples, "number of sampled states")
      ->check(CLI::PositiveNumber);
  scan->add_option("--seed", gs.opt.seed, "random seed");
  scan->add_flag("--full", gs.full, "also run the full-unitary search");
  scan->add_option("--out", gs.out_path, "report file path");
  scan->add_option("--format", gs.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  scan->add_option("--threads", gs.threads, "worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  add_optimizer_flags(scan, &gs.opt);

  cglmp::cli::Fig1Options f1;
  CLI::App* fig1 = app.add_subcommand(
      "fig1", "two-qutrit sweep over (beta, xi) with all three I3 columns");
  fig1->add_option("--grid", f1.grid, "xi points per curve")
      ->check(CLI::Range(2, 100000));
  fig1->add_option("--seed", f1.opt.seed, "random seed");
  fig1->add_option("--out", f1.out_path, "data file path");
  fig1->add_option("--format", f1.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  fig1->add_option("--svg", f1.svg_path, "also write a line chart here");
  fig1->add_option("--threads", f1.threads, "worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  add_optimizer_flags(fig1, &f1.opt);

  cglmp::cli::EmpiricalCheckOptions ec;
  CLI::App* emp = app.add_subcommand(
      "empirical-check", "residuals of the power-sum fit vs the full search");
  emp->add_option("--grid", ec.grid, "(beta, xi) grid per axis")
      ->check(CLI::Range(2, 10000));
  emp->add_option("--seed", ec.opt.seed, "random seed");
  emp->add_option("--threads", ec.threads, "worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  add_optimizer_flags(emp, &ec.opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cglmp::cli::kExitOk : cglmp::cli::kExitUsage;
  }

  lb.functional = functional == "gill" ? cglmp::Functional::Gill
                                       : cglmp::Functional::Cglmp;

  try {
    if (verify->parsed()) return cglmp::cli::cmd_verify_analytic(va, std::cout);
    if (lhv->parsed()) return cglmp::cli::cmd_lhv_bound(lb, std::cout);
    if (scan->parsed()) return cglmp::cli::cmd_gisin_scan(gs, std::cout);
    if (fig1->parsed()) return cglmp::cli::cmd_fig1(f1, std::cout);
    if (emp->parsed()) return cglmp::cli::cmd_empirical_check(ec, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return cglmp::cli::kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cglmp::cli::kExitIo;
  }
  return cglmp::cli::kExitUsage;
}
