#include "rax/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rax/io.hpp"

namespace rax::harness {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Sub-stream indices of a seed's stream.
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kStage11Stream = 1;
constexpr std::uint64_t kStage12Stream = 2;
constexpr std::uint64_t kStage2Stream = 3;

std::vector<double> dirichlet(int n, double concentration, RngStream& rng) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& x : out) {
    x = gamma(rng.engine());
    total += x;
  }
  if (!(total > 0.0)) {
    // Every draw underflowed (tiny concentration): fall back to a vertex.
    std::fill(out.begin(), out.end(), 0.0);
    out[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng.engine()))] = 1.0;
    return out;
  }
  for (double& x : out) x /= total;
  return out;
}

/// Type-7 quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string penalty_name(offline::PenaltyKind kind) {
  switch (kind) {
    case offline::PenaltyKind::kRewardAgnostic: return "reward_agnostic";
    case offline::PenaltyKind::kRewardFree: return "reward_free";
    case offline::PenaltyKind::kNone: return "none";
  }
  return "unknown";
}

offline::PenaltyKind parse_penalty(const std::string& name) {
  if (name == "reward_agnostic") return offline::PenaltyKind::kRewardAgnostic;
  if (name == "reward_free") return offline::PenaltyKind::kRewardFree;
  if (name == "none") return offline::PenaltyKind::kNone;
  throw std::invalid_argument("unknown penalty mode '" + name + "'");
}

json policy_to_json(const DeterministicPolicy& policy) {
  json layers = json::array();
  for (int h = 0; h < policy.horizon(); ++h) {
    json row = json::array();
    for (int s = 0; s < policy.num_states(); ++s) row.push_back(policy(h, s));
    layers.push_back(std::move(row));
  }
  return layers;
}

DeterministicPolicy policy_from_json(const json& layers, int S, int A, int H) {
  require(layers.is_array() && layers.size() == static_cast<std::size_t>(H), "policy: expected H rows");
  std::vector<int> actions;
  for (const auto& row : layers) {
    require(row.is_array() && row.size() == static_cast<std::size_t>(S), "policy: expected S actions per row");
    for (const auto& a : row) actions.push_back(a.get<int>());
  }
  return DeterministicPolicy(S, A, H, std::move(actions));
}

GeneratedInstance load_instance(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.mdp_file) {
    io::MdpDocument doc = io::mdp_from_json(io::read_json_file(*config.mdp_file));
    std::vector<RewardFunction> rewards = std::move(doc.rewards);
    if (config.rewards_file) {
      rewards = io::mdp_from_json(io::read_json_file(*config.rewards_file)).rewards;
    }
    if (rewards.empty() && config.num_random_rewards > 0) {
      GeneratorSpec spec{doc.mdp.num_states(), doc.mdp.num_actions(), doc.mdp.horizon(), 1.0,
                         RngStream(config.master_seed).split(seed).split(kInstanceStream).seed(),
                         config.num_random_rewards};
      rewards = generate_random_mdp(spec).rewards;
    }
    return GeneratedInstance{std::move(doc.mdp), std::move(rewards)};
  }
  GeneratorSpec spec = config.generator;
  spec.seed = RngStream(config.generator.seed).split(seed).seed();
  spec.num_rewards = config.num_random_rewards;
  GeneratedInstance instance = generate_random_mdp(spec);
  if (config.rewards_file) {
    instance.rewards = io::mdp_from_json(io::read_json_file(*config.rewards_file)).rewards;
  }
  return instance;
}

SeedRun run_seed(const ExperimentConfig& config, std::uint64_t seed, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const RngStream stream = RngStream(config.master_seed).split(seed);
  GeneratedInstance instance = load_instance(config, seed);
  const TabularMdp& mdp = instance.mdp;
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  const double xi = config.threshold.resolve(H, S, A, config.delta);

  SeedRun run;
  run.seed = seed;
  EpisodeSimulator env(mdp);
  // Exploration sees the simulator only; rewards enter at planning time.
  Stage11Result s11 =
      run_stage1_1(env, config.episodes_n, xi, config.budget_k, stream.split(kStage11Stream), config.write_trace);
  Stage12Result s12 =
      run_stage1_2(env, s11.model, config.budget_k, stream.split(kStage12Stream), config.write_trace);
  run.episodes_used = env.episodes_used();

  for (auto& round : s11.rounds) {
    run.stage11_converged = run.stage11_converged && round.converged;
    run.stage11_iterations.push_back(round.iterations);
    if (config.write_trace) run.traces.push_back(std::move(round.trace));
  }
  run.stage12_converged = s12.design.converged;
  run.stage12_iterations = s12.design.iterations;
  if (config.write_trace) run.traces.push_back(std::move(s12.design.trace));

  Stage2Config stage2{config.budget_k, config.episodes_n, xi, config.delta,
                      offline::PenaltyMode{config.penalty, config.c_b}, config.share_delta};
  const auto plans =
      run_stage2(s11.model, s12.behavior, s12.dataset, instance.rewards, stage2, stream.split(kStage2Stream));

  if (options.keep_datasets) {
    run.lower_bounds.push_back(offline::visit_lower_bounds(s11.model, s12.behavior, config.budget_k,
                                                           config.episodes_n, xi, config.delta));
    run.datasets.push_back(s12.dataset);
  }

  for (std::size_t r = 0; r < instance.rewards.size(); ++r) {
    const RewardFunction& reward = instance.rewards[r];
    const DpSolution best = optimal_policy_dp(mdp, reward);
    const double v_star = best.values.initial_value(mdp.init_dist());
    const double v_hat = policy_value(mdp, reward, plans[r].policy).initial_value(mdp.init_dist());
    run.rows.push_back(ReportRow{seed, static_cast<int>(r), v_star, v_hat, v_star - v_hat, run.episodes_used,
                                 run.stage12_iterations});
    run.policies.push_back(plans[r].policy);
  }
  run.instance = io::to_json(mdp, instance.rewards);
  run.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return run;
}

}  // namespace

GeneratedInstance generate_random_mdp(const GeneratorSpec& spec) {
  require(spec.num_states >= 1 && spec.num_actions >= 1 && spec.horizon >= 1,
          "generate_random_mdp: S, A and H must be positive");
  require(spec.concentration > 0.0 && std::isfinite(spec.concentration),
          "generate_random_mdp: concentration must be positive");
  require(spec.num_rewards >= 0, "generate_random_mdp: reward count must be nonnegative");
  const int S = spec.num_states;
  const int A = spec.num_actions;
  const int H = spec.horizon;
  RngStream rng(spec.seed);
  std::vector<double> kernel;
  kernel.reserve(static_cast<std::size_t>(H) * S * A * S);
  for (int i = 0; i < H * S * A; ++i) {
    const auto row = dirichlet(S, spec.concentration, rng);
    kernel.insert(kernel.end(), row.begin(), row.end());
  }
  std::vector<double> rho = dirichlet(S, spec.concentration, rng);
  std::vector<RewardFunction> rewards;
  for (int m = 0; m < spec.num_rewards; ++m) {
    std::vector<double> values(static_cast<std::size_t>(H) * S * A);
    for (double& v : values) v = rng.uniform();
    rewards.emplace_back(S, A, H, std::move(values));
  }
  return GeneratedInstance{TabularMdp(S, A, H, std::move(kernel), std::move(rho)), std::move(rewards)};
}

Trajectory EpisodeSimulator::run(const MixturePolicy& policy, int length, RngStream& rng) {
  Trajectory t = sample_episode(*env_, policy, length, rng);
  ++episodes_;
  return t;
}

int EpisodeSimulator::initial_state(RngStream& rng) {
  ++episodes_;
  return sample_categorical(env_->init_dist(), rng.uniform());
}

Stage11Result run_stage1_1(EpisodeSimulator& env, std::int64_t episodes_n, double threshold, std::int64_t budget_k,
                           const RngStream& rng, bool record_trace) {
  require(episodes_n >= 1, "run_stage1_1: N must be positive");
  const int S = env.num_states();
  const int A = env.num_actions();
  const int H = env.horizon();

  const RngStream init_stream = rng.split(0);
  std::vector<int> initial(static_cast<std::size_t>(episodes_n));
  for (std::int64_t n = 0; n < episodes_n; ++n) {
    RngStream episode = init_stream.split(static_cast<std::uint64_t>(n));
    initial[static_cast<std::size_t>(n)] = env.initial_state(episode);
  }
  Stage11Result result{OccupancyModel(S, A, H, estimate_initial_distribution(initial, S), threshold), {}};

  std::vector<Transition> transitions(static_cast<std::size_t>(episodes_n));
  for (int h = 0; h + 1 < H; ++h) {
    design::DesignConfig config;
    config.budget_k = budget_k;
    config.record_trace = record_trace;
    design::FrankWolfeResult fw = design::frank_wolfe(result.model, design::DesignScope::single_step(h), config);

    // Episodes s_0, a_0, ..., s_h, a_h, s_{h+1}; only the last transition is used.
    const RngStream round_stream = rng.split(static_cast<std::uint64_t>(h) + 1);
    for (std::int64_t n = 0; n < episodes_n; ++n) {
      RngStream episode = round_stream.split(static_cast<std::uint64_t>(n));
      const Trajectory t = env.run(fw.mixture, h + 1, episode);
      transitions[static_cast<std::size_t>(n)] =
          Transition{t.steps[static_cast<std::size_t>(h)].state, t.steps[static_cast<std::size_t>(h)].action,
                     *t.final_state};
    }
    result.model = result.model.extended(build_thresholded_kernel(transitions, S, A, threshold));
    result.rounds.push_back(std::move(fw));
  }
  return result;
}

Stage12Result run_stage1_2(EpisodeSimulator& env, const OccupancyModel& model, std::int64_t budget_k,
                           const RngStream& rng, bool record_trace) {
  require(model.complete(), "run_stage1_2: occupancy model must cover every step");
  design::DesignConfig config;
  config.budget_k = budget_k;
  config.record_trace = record_trace;
  design::FrankWolfeResult fw = design::frank_wolfe(model, design::DesignScope::full_horizon(), config);

  const int H = env.horizon();
  offline::TransitionDataset dataset(env.num_states(), env.num_actions(), H);
  for (std::int64_t n = 0; n < budget_k; ++n) {
    RngStream episode = rng.split(static_cast<std::uint64_t>(n));
    const Trajectory t = env.run(fw.mixture, H, episode);
    for (int h = 0; h < H; ++h) {
      const auto& step = t.steps[static_cast<std::size_t>(h)];
      const int next = h + 1 < H ? t.steps[static_cast<std::size_t>(h) + 1].state : offline::kNoSuccessor;
      dataset.add(h, step.state, step.action, next);
    }
  }
  MixturePolicy behavior = fw.mixture;
  return Stage12Result{std::move(behavior), std::move(dataset), std::move(fw)};
}

double penalty_delta(const Stage2Config& config, std::size_t num_rewards) {
  if (config.share_delta && num_rewards > 1) return config.delta / static_cast<double>(num_rewards);
  return config.delta;
}

std::vector<offline::PlanResult> run_stage2(const OccupancyModel& model, const MixturePolicy& behavior,
                                            const offline::TransitionDataset& dataset,
                                            const std::vector<RewardFunction>& rewards, const Stage2Config& config,
                                            const RngStream& rng) {
  std::vector<offline::PlanResult> plans;
  if (rewards.empty()) return plans;
  const offline::VisitLowerBound bounds = offline::visit_lower_bounds(
      model, behavior, config.budget_k, config.episodes_n, config.threshold, config.delta);
  const StepTable counts = offline::effective_counts(bounds, dataset);
  const double delta = penalty_delta(config, rewards.size());
  plans.reserve(rewards.size());
  for (std::size_t r = 0; r < rewards.size(); ++r) {
    RngStream sub = rng.split(r);
    offline::EmpiricalModel empirical = offline::empirical_kernel(offline::subsample(dataset, bounds, sub));
    empirical.counts = counts;
    plans.push_back(offline::pessimistic_vi(empirical, rewards[r], config.penalty, delta));
  }
  return plans;
}

double ThresholdSetting::resolve(int horizon, int num_states, int num_actions, double delta) const {
  switch (mode) {
    case ThresholdMode::kPractical: return practical_threshold(horizon, num_states, num_actions, delta);
    case ThresholdMode::kTheoretical: return theoretical_threshold(horizon, num_states, num_actions, delta, c_xi);
    case ThresholdMode::kFixed:
      require(value >= 0.0, "threshold: fixed value must be nonnegative");
      return value;
  }
  throw std::invalid_argument("threshold: unknown mode");
}

void ExperimentConfig::validate() const {
  require(episodes_n >= 1, "config: N must be at least 1");
  require(budget_k >= 2, "config: K must be at least 2");
  require(delta > 0.0 && delta < 1.0, "config: delta must lie in (0,1)");
  require(c_b > 0.0, "config: c_b must be positive");
  require(!seeds.empty(), "config: at least one seed is required");
  require(num_random_rewards >= 0, "config: reward count must be nonnegative");
  if (!mdp_file) {
    require(generator.num_states >= 1 && generator.num_actions >= 1 && generator.horizon >= 1,
            "config: generator S, A and H must be positive");
    require(generator.concentration > 0.0, "config: generator concentration must be positive");
  }
  if (threshold.mode == ThresholdMode::kFixed) require(threshold.value >= 0.0, "config: xi must be nonnegative");
}

ExperimentConfig config_from_json(const json& doc) {
  try {
    ExperimentConfig c;
    if (doc.contains("mdp")) {
      const auto& mdp = doc.at("mdp");
      if (mdp.contains("file")) {
        c.mdp_file = mdp.at("file").get<std::string>();
      } else {
        const auto& g = mdp.at("generator");
        c.generator.num_states = g.value("S", c.generator.num_states);
        c.generator.num_actions = g.value("A", c.generator.num_actions);
        c.generator.horizon = g.value("H", c.generator.horizon);
        c.generator.concentration = g.value("concentration", c.generator.concentration);
        c.generator.seed = g.value("seed", c.generator.seed);
      }
    }
    c.episodes_n = doc.value("N", c.episodes_n);
    c.budget_k = doc.value("K", c.budget_k);
    if (doc.contains("xi")) {
      const auto& xi = doc.at("xi");
      const std::string mode = xi.value("mode", std::string("practical"));
      if (mode == "practical") {
        c.threshold.mode = ThresholdMode::kPractical;
      } else if (mode == "theoretical") {
        c.threshold.mode = ThresholdMode::kTheoretical;
        c.threshold.c_xi = xi.value("c_xi", 1.0);
      } else if (mode == "fixed") {
        c.threshold.mode = ThresholdMode::kFixed;
        c.threshold.value = xi.at("value").get<double>();
      } else {
        throw std::invalid_argument("config: unknown xi mode '" + mode + "'");
      }
    }
    c.delta = doc.value("delta", c.delta);
    c.c_b = doc.value("c_b", c.c_b);
    if (doc.contains("penalty")) c.penalty = parse_penalty(doc.at("penalty").get<std::string>());
    c.share_delta = doc.value("share_delta", c.share_delta);
    if (doc.contains("rewards")) {
      const auto& r = doc.at("rewards");
      if (r.contains("file")) c.rewards_file = r.at("file").get<std::string>();
      c.num_random_rewards = r.value("count", c.num_random_rewards);
    }
    if (doc.contains("seeds")) c.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    c.master_seed = doc.value("master_seed", c.master_seed);
    if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
    c.write_trace = doc.value("trace", c.write_trace);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  if (c.mdp_file) {
    doc["mdp"] = {{"file", c.mdp_file->string()}};
  } else {
    doc["mdp"] = {{"generator",
                   {{"S", c.generator.num_states},
                    {"A", c.generator.num_actions},
                    {"H", c.generator.horizon},
                    {"concentration", c.generator.concentration},
                    {"seed", c.generator.seed}}}};
  }
  doc["N"] = c.episodes_n;
  doc["K"] = c.budget_k;
  switch (c.threshold.mode) {
    case ThresholdMode::kPractical: doc["xi"] = {{"mode", "practical"}}; break;
    case ThresholdMode::kTheoretical: doc["xi"] = {{"mode", "theoretical"}, {"c_xi", c.threshold.c_xi}}; break;
    case ThresholdMode::kFixed: doc["xi"] = {{"mode", "fixed"}, {"value", c.threshold.value}}; break;
  }
  doc["delta"] = c.delta;
  doc["c_b"] = c.c_b;
  doc["penalty"] = penalty_name(c.penalty);
  doc["share_delta"] = c.share_delta;
  doc["rewards"] = {{"count", c.num_random_rewards}};
  if (c.rewards_file) doc["rewards"]["file"] = c.rewards_file->string();
  doc["seeds"] = c.seeds;
  doc["master_seed"] = c.master_seed;
  doc["output_dir"] = c.output_dir.string();
  doc["trace"] = c.write_trace;
  return doc;
}

std::vector<ReportRow> ExperimentReport::rows() const {
  std::vector<ReportRow> out;
  for (const auto& run : runs) out.insert(out.end(), run.rows.begin(), run.rows.end());
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  ExperimentReport report{config, std::vector<SeedRun>(config.seeds.size())};
  const int workers = std::clamp(options.threads, 1, static_cast<int>(config.seeds.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++) {
      try {
        report.runs[i] = run_seed(config, config.seeds[i], options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "seed,reward_id,v_star,v_hat_policy,gap,n_tot,fw_full_iters\n";
  for (const auto& row : report.rows()) {
    out << row.seed << ',' << row.reward_id << ',' << row.v_star << ',' << row.v_hat_policy << ',' << row.gap << ','
        << row.n_tot << ',' << row.fw_full_iters << '\n';
  }
  return out.str();
}

json report_summary(const ExperimentReport& report) {
  std::vector<double> gaps;
  for (const auto& row : report.rows()) gaps.push_back(row.gap);
  std::sort(gaps.begin(), gaps.end());
  double mean = 0.0;
  for (double g : gaps) mean += g;
  if (!gaps.empty()) mean /= static_cast<double>(gaps.size());

  bool s11 = true;
  bool s12 = true;
  std::vector<std::int64_t> episodes;
  for (const auto& run : report.runs) {
    s11 = s11 && run.stage11_converged;
    s12 = s12 && run.stage12_converged;
    episodes.push_back(run.episodes_used);
  }
  const auto& c = report.config;
  json gap_stats = {{"count", gaps.size()}};
  if (!gaps.empty()) {
    gap_stats["median"] = quantile(gaps, 0.5);
    gap_stats["q1"] = quantile(gaps, 0.25);
    gap_stats["q3"] = quantile(gaps, 0.75);
    gap_stats["mean"] = mean;
    gap_stats["min"] = gaps.front();
    gap_stats["max"] = gaps.back();
  }
  json summary;
  summary["config"] = config_to_json(c);
  summary["by_K"][std::to_string(c.budget_k)] = gap_stats;
  summary["episodes_per_run"] = episodes;
  summary["expected_episodes_per_run"] = nullptr;
  if (!report.runs.empty() && !report.runs.front().instance.is_null()) {
    const int H = report.runs.front().instance.at("H").get<int>();
    summary["expected_episodes_per_run"] = c.episodes_n * H + c.budget_k;
  }
  summary["frank_wolfe"] = {{"stage1_1_all_converged", s11}, {"stage1_2_all_converged", s12}};
  return summary;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "instances");
  {
    std::ofstream csv(dir / "report.csv");
    if (!csv) throw std::runtime_error("cannot write " + (dir / "report.csv").string());
    csv << report_csv(report);
  }
  io::write_json_file(dir / "summary.json", report_summary(report));
  {
    std::ofstream timing(dir / "timing.csv");
    timing << "seed,wall_ms\n" << std::fixed << std::setprecision(3);
    for (const auto& run : report.runs) timing << run.seed << ',' << run.wall_ms << '\n';
  }
  json entries = json::array();
  for (const auto& run : report.runs) {
    const std::string instance = "instances/seed_" + std::to_string(run.seed) + ".json";
    io::write_json_file(dir / instance, run.instance);
    for (std::size_t r = 0; r < run.policies.size(); ++r) {
      entries.push_back(
          {{"seed", run.seed}, {"reward_id", r}, {"instance", instance}, {"actions", policy_to_json(run.policies[r])}});
    }
  }
  io::write_json_file(dir / "policies.json", json{{"entries", entries}});

  if (report.config.write_trace) {
    std::ofstream trace(dir / "fw_trace.jsonl");
    for (const auto& run : report.runs) {
      for (std::size_t round = 0; round < run.traces.size(); ++round) {
        const bool behavior = round + 1 == run.traces.size();
        for (const auto& rec : run.traces[round]) {
          json line = {{"seed", run.seed},
                       {"stage", behavior ? "1.2" : "1.1"},
                       {"t", rec.iteration},
                       {"g", rec.g},
                       {"f", rec.objective},
                       {"alpha", rec.step ? json(*rec.step) : json(nullptr)},
                       {"support", rec.support}};
          if (!behavior) line["step"] = round;
          trace << line.dump() << '\n';
        }
      }
    }
  }
}

std::vector<EvaluationRow> evaluate_policies(const std::filesystem::path& policies_file) {
  const json doc = io::read_json_file(policies_file);
  const auto base = policies_file.parent_path();
  std::vector<EvaluationRow> rows;
  try {
    for (const auto& entry : doc.at("entries")) {
      const io::MdpDocument instance = io::mdp_from_json(io::read_json_file(base / entry.at("instance").get<std::string>()));
      const auto& mdp = instance.mdp;
      const int reward_id = entry.at("reward_id").get<int>();
      require(reward_id >= 0 && static_cast<std::size_t>(reward_id) < instance.rewards.size(),
              "evaluate_policies: reward_id out of range");
      const RewardFunction& reward = instance.rewards[static_cast<std::size_t>(reward_id)];
      const DeterministicPolicy policy =
          policy_from_json(entry.at("actions"), mdp.num_states(), mdp.num_actions(), mdp.horizon());
      const double v_star = optimal_policy_dp(mdp, reward).values.initial_value(mdp.init_dist());
      const double v_policy = policy_value(mdp, reward, policy).initial_value(mdp.init_dist());
      rows.push_back({entry.at("seed").get<std::uint64_t>(), reward_id, v_star, v_policy, v_star - v_policy});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed policies file: ") + e.what());
  }
  return rows;
}

}  // namespace rax::harness
