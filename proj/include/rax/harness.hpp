#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rax/design.hpp"
#include "rax/estimation.hpp"
#include "rax/mdp.hpp"
#include "rax/offline.hpp"
#include "rax/rng.hpp"

// End-to-end pipeline: exploration without rewards (occupancy estimation,
// then behavior-policy design and data collection), followed by offline
// planning for each reward, evaluated exactly against the true MDP.
namespace rax::harness {

struct GeneratorSpec {
  int num_states = 5;
  int num_actions = 3;
  int horizon = 4;
  double concentration = 1.0;
  std::uint64_t seed = 0;
  int num_rewards = 0;
};

struct GeneratedInstance {
  TabularMdp mdp;
  std::vector<RewardFunction> rewards;
};

/// Symmetric-Dirichlet kernel rows and initial distribution, i.i.d. uniform rewards.
GeneratedInstance generate_random_mdp(const GeneratorSpec& spec);

/// The only way pipeline stages touch the environment. Counts every episode.
class EpisodeSimulator {
 public:
  explicit EpisodeSimulator(const TabularMdp& env) : env_(&env) {}

  Trajectory run(const MixturePolicy& policy, int length, RngStream& rng);
  int initial_state(RngStream& rng);

  int num_states() const { return env_->num_states(); }
  int num_actions() const { return env_->num_actions(); }
  int horizon() const { return env_->horizon(); }
  std::int64_t episodes_used() const { return episodes_; }

 private:
  const TabularMdp* env_;
  std::int64_t episodes_ = 0;
};

struct Stage11Result {
  OccupancyModel model;
  std::vector<design::FrankWolfeResult> rounds;  // one per estimated step
};

/// N initial states, then per step h in [0, H-1) one Frank-Wolfe exploration
/// round and N episodes s_0, a_0, ..., s_h, a_h, s_{h+1}. Consumes N*H episodes.
Stage11Result run_stage1_1(EpisodeSimulator& env, std::int64_t episodes_n, double threshold, std::int64_t budget_k,
                           const RngStream& rng, bool record_trace = false);

struct Stage12Result {
  MixturePolicy behavior;
  offline::TransitionDataset dataset;
  design::FrankWolfeResult design;
};

/// Full-horizon design, then K episodes of length H under the mixture.
Stage12Result run_stage1_2(EpisodeSimulator& env, const OccupancyModel& model, std::int64_t budget_k,
                           const RngStream& rng, bool record_trace = false);

struct Stage2Config {
  std::int64_t budget_k = 2;
  std::int64_t episodes_n = 1;
  double threshold = 1.0;
  double delta = 0.1;
  offline::PenaltyMode penalty{};
  bool share_delta = true;  // use delta / m_reward in the penalties
};

/// Penalty confidence level after optional sharing across rewards.
double penalty_delta(const Stage2Config& config, std::size_t num_rewards);

std::vector<offline::PlanResult> run_stage2(const OccupancyModel& model, const MixturePolicy& behavior,
                                            const offline::TransitionDataset& dataset,
                                            const std::vector<RewardFunction>& rewards, const Stage2Config& config,
                                            const RngStream& rng);

enum class ThresholdMode { kPractical, kTheoretical, kFixed };

struct ThresholdSetting {
  ThresholdMode mode = ThresholdMode::kPractical;
  double c_xi = 1.0;
  double value = 0.0;  // kFixed only

  double resolve(int horizon, int num_states, int num_actions, double delta) const;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> mdp_file;  // else generated
  GeneratorSpec generator{};
  std::int64_t episodes_n = 1000;  // N
  std::int64_t budget_k = 1000;    // K
  ThresholdSetting threshold{};
  double delta = 0.1;
  double c_b = 16.0;
  offline::PenaltyKind penalty = offline::PenaltyKind::kRewardAgnostic;
  bool share_delta = true;
  std::optional<std::filesystem::path> rewards_file;
  int num_random_rewards = 5;
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "out";
  bool write_trace = false;

  /// Throws std::invalid_argument on N < 1, K < 2, delta outside (0,1), empty seeds.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

struct ReportRow {
  std::uint64_t seed;
  int reward_id;
  double v_star;
  double v_hat_policy;
  double gap;
  std::int64_t n_tot;
  int fw_full_iters;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::int64_t episodes_used = 0;
  double wall_ms = 0.0;
  bool stage11_converged = true;
  bool stage12_converged = true;
  std::vector<int> stage11_iterations;
  int stage12_iterations = 0;
  std::vector<std::vector<design::TraceRecord>> traces;  // stage 1.1 rounds, then stage 1.2
  std::vector<DeterministicPolicy> policies;             // one per reward
  std::vector<ReportRow> rows;
  nlohmann::json instance;                               // MDP document incl. rewards
  std::vector<offline::VisitLowerBound> lower_bounds;    // kept when requested
  std::vector<offline::TransitionDataset> datasets;      // kept when requested
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedRun> runs;

  std::vector<ReportRow> rows() const;
};

struct RunOptions {
  int threads = 1;
  bool keep_datasets = false;
};

ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// CSV header: seed,reward_id,v_star,v_hat_policy,gap,n_tot,fw_full_iters
std::string report_csv(const ExperimentReport& report);
nlohmann::json report_summary(const ExperimentReport& report);

/// report.csv, summary.json, timing.csv, policies.json, instances/, and fw_trace.jsonl when enabled.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

struct EvaluationRow {
  std::uint64_t seed;
  int reward_id;
  double v_star;
  double v_policy;
  double gap;
};

/// Re-evaluates policies recorded in a policies.json written by write_report.
std::vector<EvaluationRow> evaluate_policies(const std::filesystem::path& policies_file);

}  // namespace rax::harness
