#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rax/harness.hpp"
#include "rax/io.hpp"
#include "test_support.hpp"

using namespace rax;
using namespace rax::harness;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rax_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.generator = GeneratorSpec{3, 2, 3, 1.0, 5, 0};
  c.episodes_n = 300;
  c.budget_k = 400;
  c.num_random_rewards = 3;
  c.seeds = {0, 1, 2};
  c.master_seed = 9;
  return c;
}

}  // namespace

TEST_CASE("generate_random_mdp") {
  const GeneratorSpec spec{4, 3, 5, 0.7, 123, 2};
  const auto a = generate_random_mdp(spec);
  const auto b = generate_random_mdp(spec);
  CHECK(std::equal(a.mdp.kernel().begin(), a.mdp.kernel().end(), b.mdp.kernel().begin()));
  CHECK(a.rewards.size() == 2);
  CHECK(std::equal(a.rewards[1].values().begin(), a.rewards[1].values().end(), b.rewards[1].values().begin()));

  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> conc(0.05, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorSpec s{dim(gen), dim(gen), dim(gen), conc(gen), gen(), 1};
    // Construction validates every row and rho.
    CHECK_NOTHROW(generate_random_mdp(s));
  }

  const auto flat = generate_random_mdp(GeneratorSpec{5, 2, 2, 1e6, 8, 0});
  for (double p : flat.mdp.kernel()) CHECK(std::abs(p - 0.2) < 0.01);
  for (double p : flat.mdp.init_dist()) CHECK(std::abs(p - 0.2) < 0.01);

  CHECK_THROWS_AS(generate_random_mdp(GeneratorSpec{0, 2, 2, 1.0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate_random_mdp(GeneratorSpec{2, 2, 2, 0.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("stage 1.1 occupancy estimation") {
  SUBCASE("H = 1 uses only initial states") {
    const auto inst = generate_random_mdp(GeneratorSpec{3, 2, 1, 1.0, 1, 0});
    EpisodeSimulator env(inst.mdp);
    const auto res = run_stage1_1(env, 50, 2.0, 100, RngStream(3));
    CHECK(res.rounds.empty());
    CHECK(res.model.num_kernels() == 0);
    CHECK(res.model.complete());
    CHECK(env.episodes_used() == 50);
  }
  SUBCASE("deterministic single-action dynamics are recovered exactly") {
    const int S = 4, H = 3;
    std::vector<double> kernel;
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s) {
        std::vector<double> row(S, 0.0);
        row[(s + h + 1) % S] = 1.0;
        kernel.insert(kernel.end(), row.begin(), row.end());
      }
    TabularMdp mdp(S, 1, H, kernel, {0.25, 0.25, 0.25, 0.25});
    EpisodeSimulator env(mdp);
    const double xi = practical_threshold(H, S, 1, 0.1);
    const auto res = run_stage1_1(env, 100, xi, 100, RngStream(4));
    CHECK(env.episodes_used() == 100 * H);
    REQUIRE(res.model.num_kernels() == H - 1);
    for (int h = 0; h + 1 < H; ++h)
      for (int s = 0; s < S; ++s) {
        const auto& k = res.model.kernel(h);
        if (k.count(s, 0) <= xi) continue;
        const auto want = mdp.row(h, s, 0);
        CHECK(std::equal(want.begin(), want.end(), k.row(s, 0).begin()));
      }
  }
  SUBCASE("estimated occupancy is sandwiched around the truth") {
    int good = 0, total = 0;
    const double xi = practical_threshold(4, 5, 3, 0.1);
    const std::int64_t N = 20000;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = generate_random_mdp(GeneratorSpec{5, 3, 4, 1.0, 100 + seed, 0});
      EpisodeSimulator env(inst.mdp);
      const auto res = run_stage1_1(env, N, xi, N, RngStream(seed));
      std::mt19937_64 gen(seed);
      const auto pi = testing::random_policy(5, 3, 4, gen);
      const auto est = propagate_occupancy(res.model, pi);
      const auto truth = testing::oracle_occupancy(inst.mdp, pi);
      for (std::size_t i = 0; i < truth.size(); ++i) {
        ++total;
        good += std::abs(est.data()[i] - truth[i]) <= 0.5 * truth[i] + xi / (2.0 * N);
      }
    }
    CHECK(good >= 0.95 * total);
  }
}

TEST_CASE("stage 1.2 behavior design and data collection") {
  SUBCASE("single action") {
    const auto inst = generate_random_mdp(GeneratorSpec{3, 1, 3, 1.0, 2, 0});
    EpisodeSimulator env(inst.mdp);
    const auto res = run_stage1_2(env, OccupancyModel::from_mdp(inst.mdp), 250, RngStream(1));
    CHECK(res.behavior.size() == 1);
    CHECK(res.behavior.atoms()[0].policy == DeterministicPolicy::constant(3, 1, 3));
    CHECK(env.episodes_used() == 250);
    CHECK(res.dataset.size() == 250 * 3);
    for (int h = 0; h < 3; ++h) {
      std::int64_t per_step = 0;
      for (int s = 0; s < 3; ++s) per_step += res.dataset.count(h, s, 0);
      CHECK(per_step == 250);
    }
  }
  SUBCASE("bandit action frequencies follow the design weights") {
    TabularMdp bandit(1, 2, 1, {1.0, 1.0}, {1.0});
    EpisodeSimulator env(bandit);
    const std::int64_t K = 10000;
    const auto res = run_stage1_2(env, OccupancyModel::from_mdp(bandit), K, RngStream(7));
    double w1 = 0.0;
    for (const auto& atom : res.behavior.atoms())
      if (atom.policy(0, 0) == 1) w1 = atom.weight;
    CHECK(std::abs(static_cast<double>(res.dataset.count(0, 0, 1)) / K - w1) < 0.02);
  }
  SUBCASE("incomplete model is rejected") {
    const auto inst = generate_random_mdp(GeneratorSpec{2, 2, 3, 1.0, 2, 0});
    EpisodeSimulator env(inst.mdp);
    OccupancyModel partial(2, 2, 3, {0.5, 0.5}, 1.0);
    CHECK_THROWS_AS(run_stage1_2(env, partial, 10, RngStream(1)), std::invalid_argument);
  }
}

TEST_CASE("stage 2 planning") {
  const auto inst = generate_random_mdp(GeneratorSpec{3, 2, 3, 1.0, 11, 2});
  EpisodeSimulator env(inst.mdp);
  const double xi = practical_threshold(3, 3, 2, 0.1);
  const auto s11 = run_stage1_1(env, 2000, xi, 2000, RngStream(1));
  const auto s12 = run_stage1_2(env, s11.model, 2000, RngStream(2));
  Stage2Config cfg{2000, 2000, xi, 0.1, {}, true};

  CHECK(run_stage2(s11.model, s12.behavior, s12.dataset, {}, cfg, RngStream(3)).empty());

  const std::vector<RewardFunction> one{inst.rewards[0]};
  const auto a = run_stage2(s11.model, s12.behavior, s12.dataset, one, cfg, RngStream(3));
  const auto b = run_stage2(s11.model, s12.behavior, s12.dataset, one, cfg, RngStream(3));
  CHECK(a[0].policy == b[0].policy);
  CHECK(a[0].values.v == b[0].values.v);
  CHECK(std::equal(a[0].penalties.data().begin(), a[0].penalties.data().end(), b[0].penalties.data().begin()));

  // Sharing delta across five rewards widens every unsaturated penalty.
  const std::vector<RewardFunction> five(5, inst.rewards[0]);
  CHECK(penalty_delta(cfg, 5) == doctest::Approx(0.02));
  const auto shared = run_stage2(s11.model, s12.behavior, s12.dataset, five, cfg, RngStream(3));
  Stage2Config unshared = cfg;
  unshared.share_delta = false;
  CHECK(penalty_delta(unshared, 5) == 0.1);
  const auto plain = run_stage2(s11.model, s12.behavior, s12.dataset, five, unshared, RngStream(3));
  int strictly = 0;
  for (std::size_t i = 0; i < plain[0].penalties.data().size(); ++i) {
    const double lo = plain[0].penalties.data()[i];
    const double hi = shared[0].penalties.data()[i];
    CHECK(hi >= lo);
    if (lo < 3.0) {
      CHECK(hi > lo);
      ++strictly;
    }
  }
  CHECK(strictly > 0);
}

TEST_CASE("config documents") {
  const auto doc = nlohmann::json::parse(R"({
    "mdp": {"generator": {"S": 4, "A": 2, "H": 3, "seed": 3, "concentration": 0.5}},
    "N": 100, "K": 200, "xi": {"mode": "fixed", "value": 3.5}, "delta": 0.05, "c_b": 8,
    "penalty": "reward_free", "share_delta": false, "rewards": {"count": 2},
    "seeds": [4, 5], "master_seed": 17, "output_dir": "somewhere", "trace": true})");
  const auto c = config_from_json(doc);
  CHECK(c.generator.num_states == 4);
  CHECK(c.generator.concentration == 0.5);
  CHECK(c.threshold.mode == ThresholdMode::kFixed);
  CHECK(c.threshold.resolve(3, 4, 2, 0.05) == 3.5);
  CHECK(c.penalty == offline::PenaltyKind::kRewardFree);
  CHECK_FALSE(c.share_delta);
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));

  auto bad = doc;
  bad["K"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["delta"] = 1.0;
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["seeds"] = nlohmann::json::array();
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["penalty"] = "optimistic";
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["xi"] = {{"mode", "magic"}};
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["N"] = "many";
  CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
}

TEST_CASE("run_experiment end to end") {
  const auto config = small_config();
  const auto report = run_experiment(config, RunOptions{1, true});
  REQUIRE(report.runs.size() == 3);
  const auto rows = report.rows();
  CHECK(rows.size() == 9);
  for (const auto& run : report.runs) {
    CHECK(run.episodes_used == config.episodes_n * 3 + config.budget_k);
    CHECK(run.stage11_iterations.size() == 2);
    REQUIRE(run.datasets.size() == 1);
    CHECK(run.datasets[0].size() == config.budget_k * 3);
  }
  for (const auto& row : rows) {
    CHECK(row.gap >= -1e-9);
    CHECK(row.gap == doctest::Approx(row.v_star - row.v_hat_policy));
    CHECK(row.n_tot == config.episodes_n * 3 + config.budget_k);
  }

  // Identical output regardless of thread count.
  CHECK(report_csv(run_experiment(config)) == report_csv(report));
  CHECK(report_csv(run_experiment(config, RunOptions{3, false})) == report_csv(report));
  auto other = config;
  other.master_seed = 10;
  CHECK(report_csv(run_experiment(other)) != report_csv(report));

  const auto summary = report_summary(report);
  CHECK(summary["expected_episodes_per_run"] == config.episodes_n * 3 + config.budget_k);
  CHECK(summary["by_K"]["400"]["count"] == 9);
}

TEST_CASE("write_report and evaluate_policies") {
  auto config = small_config();
  config.write_trace = true;
  const auto dir = scratch_dir("report");
  const auto report = run_experiment(config);
  write_report(report, dir);
  for (const char* name : {"report.csv", "summary.json", "timing.csv", "policies.json", "fw_trace.jsonl"})
    CHECK(std::filesystem::exists(dir / name));

  std::ifstream csv(dir / "report.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "seed,reward_id,v_star,v_hat_policy,gap,n_tot,fw_full_iters");

  std::ifstream trace(dir / "fw_trace.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) {
    const auto rec = nlohmann::json::parse(line);
    CHECK(rec.contains("g"));
    ++lines;
  }
  CHECK(lines > 0);

  const auto evaluated = evaluate_policies(dir / "policies.json");
  const auto rows = report.rows();
  REQUIRE(evaluated.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(evaluated[i].seed == rows[i].seed);
    CHECK(evaluated[i].gap == rows[i].gap);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiments on an MDP file") {
  const auto dir = scratch_dir("mdpfile");
  std::filesystem::create_directories(dir);
  const auto inst = generate_random_mdp(GeneratorSpec{2, 2, 2, 1.0, 4, 2});
  io::write_json_file(dir / "mdp.json", io::to_json(inst.mdp, inst.rewards));
  auto config = small_config();
  config.mdp_file = dir / "mdp.json";
  config.seeds = {0};
  const auto report = run_experiment(config);
  REQUIRE(report.rows().size() == 2);
  CHECK(report.runs[0].episodes_used == config.episodes_n * 2 + config.budget_k);
  const double v_star = optimal_policy_dp(inst.mdp, inst.rewards[1]).values.initial_value(inst.mdp.init_dist());
  CHECK(report.rows()[1].v_star == v_star);
  std::filesystem::remove_all(dir);
}
