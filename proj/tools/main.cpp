// opssa CLI — runs verification campaigns and writes line-delimited reports.
//
// Exit status: 0 all checks passed, 1 at least one trial or campaign check
// failed, 2 invalid configuration or I/O error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opssa/opssa.hpp"

namespace {

opssa::DimList parse_dims(const std::string& csv) {
  std::vector<int> dims;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int d = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      dims.push_back(d);
    } catch (const std::exception&) {
      throw opssa::ConfigError("invalid --dims entry: '" + item + "'");
    }
  }
  if (dims.empty()) throw opssa::ConfigError("--dims must list at least one dimension");
  return opssa::DimList(std::move(dims));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification campaigns for the operator form of strong subadditivity"};

  std::string command;
  std::string dims_csv = "2,2,2";
  long trials = 100;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string state_in;
  std::string state_out;
  int restarts = 20;
  int steps = 200;
  int threads = 0;
  opssa::ToleranceConfig tol;

  app.add_option("--command", command,
                 "one of: verify-ssa, verify-convexity, verify-twirl, sweep-projectors, "
                 "witness-nonhermitian, search-extremal, fixtures")
      ->required();
  app.add_option("--dims", dims_csv, "comma-separated subsystem dimensions (default 2,2,2)");
  app.add_option("--trials", trials, "number of randomized trials");
  app.add_option("--seed", seed, "master seed; per-trial seeds are derived from it");
  app.add_option("--tol-psd", tol.psd_tol, "slack for >= 0 verdicts");
  app.add_option("--tol-support", tol.support_cutoff_rel, "relative spectral support cutoff");
  app.add_option("--tol-match", tol.match_tol, "identity / cross-route agreement tolerance");
  app.add_option("--out", out_path, "report file (line-delimited JSON); default stdout");
  app.add_option("--state-in", state_in, "run the campaign on one state loaded from this file");
  app.add_option("--state-out", state_out, "search-extremal: write the argmin state here");
  app.add_option("--restarts", restarts, "search-extremal: random restarts");
  app.add_option("--steps", steps, "search-extremal: descent steps per restart");
  app.add_option("--threads", threads, "worker threads (0 = hardware default)");

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    opssa::CampaignConfig cfg;
    cfg.command = opssa::command_from_string(command);
    cfg.dims = parse_dims(dims_csv);
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.tol = tol;
    cfg.output_path = out_path;
    cfg.state_in = state_in;
    cfg.state_out = state_out;
    cfg.restarts = restarts;
    cfg.steps = steps;
    cfg.threads = threads;

    const opssa::CampaignResult res = opssa::run_campaign(cfg);

    if (!cfg.output_path.empty()) {
      std::ofstream file(cfg.output_path);
      if (!file) throw opssa::ConfigError("cannot open report path: " + cfg.output_path);
      opssa::write_reports(res, file);
      if (!file) throw opssa::ConfigError("failed writing report path: " + cfg.output_path);
    } else {
      opssa::write_reports(res, std::cout);
    }
    std::cout << opssa::summary_line(cfg, res) << "\n";

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "elapsed " << elapsed << "s\n";  // stderr only: reports stay deterministic
    return res.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
