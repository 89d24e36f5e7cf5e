// Command-line front end: run experiments, generate MDPs, re-evaluate stored policies.
#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rax/harness.hpp"
#include "rax/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace rax;

int cmd_run(const fs::path& config_path, std::optional<std::uint64_t> seed, std::optional<fs::path> out,
            int threads) {
  harness::ExperimentConfig config = harness::config_from_json(io::read_json_file(config_path));
  if (seed) config.master_seed = *seed;
  if (out) config.output_dir = *out;
  const harness::ExperimentReport report = harness::run_experiment(config, harness::RunOptions{threads, false});
  harness::write_report(report, config.output_dir);

  const auto summary = harness::report_summary(report);
  const auto& stats = summary.at("by_K").at(std::to_string(config.budget_k));
  std::cout << "wrote " << config.output_dir.string() << ": " << report.rows().size() << " rows";
  if (stats.contains("median")) std::cout << ", median gap " << stats.at("median").get<double>();
  std::cout << '\n';
  return 0;
}

int cmd_gen_mdp(const harness::GeneratorSpec& spec, const std::optional<fs::path>& out) {
  const harness::GeneratedInstance instance = harness::generate_random_mdp(spec);
  const auto doc = io::to_json(instance.mdp, instance.rewards);
  if (out) {
    io::write_json_file(*out, doc);
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_eval(fs::path target, const std::optional<fs::path>& out) {
  if (fs::is_directory(target)) target /= "policies.json";
  const auto rows = harness::evaluate_policies(target);
  std::ostringstream csv;
  csv << std::setprecision(17) << "seed,reward_id,v_star,v_policy,gap\n";
  for (const auto& r : rows) {
    csv << r.seed << ',' << r.reward_id << ',' << r.v_star << ',' << r.v_policy << ',' << r.gap << '\n';
  }
  if (out) {
    std::ofstream file(*out);
    if (!file) throw std::runtime_error("cannot write " + out->string());
    file << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward-agnostic exploration and pessimistic offline planning for tabular MDPs"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> run_out;
  int threads = 1;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed (overrides the config)");
  run->add_option("--out", run_out, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads across seeds")->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-mdp", "Generate a random tabular MDP with uniform rewards");
  harness::GeneratorSpec spec;
  std::optional<fs::path> gen_out;
  gen->add_option("--S", spec.num_states, "Number of states")->capture_default_str();
  gen->add_option("--A", spec.num_actions, "Number of actions")->capture_default_str();
  gen->add_option("--H", spec.horizon, "Horizon")->capture_default_str();
  gen->add_option("--concentration", spec.concentration, "Symmetric Dirichlet concentration")->capture_default_str();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--rewards", spec.num_rewards, "Number of random reward functions")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default: stdout)");

  auto* eval = app.add_subcommand("eval", "Re-evaluate policies stored by a previous run");
  fs::path eval_target;
  std::optional<fs::path> eval_out;
  eval->add_option("--policies", eval_target, "policies.json or the run output directory")
      ->required()
      ->check(CLI::ExistingPath);
  eval->add_option("--out", eval_out, "Output CSV (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, seed, run_out, threads);
    if (*gen) return cmd_gen_mdp(spec, gen_out);
    if (*eval) return cmd_eval(eval_target, eval_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
