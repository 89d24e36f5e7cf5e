#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rax/estimation.hpp"
#include "rax/mdp.hpp"
#include "rax/rng.hpp"

// Pessimistic model-based offline planning: data-independent visit-count
// lower bounds, subsampling to those counts, the empirical kernel, Bernstein
// penalties and LCB value iteration.
namespace rax::offline {

inline constexpr int kNoSuccessor = -1;

/// Transitions grouped by (h, s, a). Records at the last step carry no
/// successor (stored as kNoSuccessor).
class TransitionDataset {
 public:
  TransitionDataset(int num_states, int num_actions, int horizon);

  static TransitionDataset from_trajectories(int num_states, int num_actions, int horizon,
                                             std::span<const Trajectory> episodes);

  void add(int h, int s, int a, int next_state);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  std::span<const int> successors(int h, int s, int a) const { return cells_[cell(h, s, a)]; }
  std::int64_t count(int h, int s, int a) const {
    return static_cast<std::int64_t>(cells_[cell(h, s, a)].size());
  }
  std::int64_t size() const;

 private:
  std::size_t cell(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + a;
  }

  int num_states_;
  int num_actions_;
  int horizon_;
  std::vector<std::vector<int>> cells_;
};

/// Real-valued lower bounds N_hat_h(s,a) on behavior-data visit counts.
struct VisitLowerBound {
  StepTable values;
};

enum class PenaltyKind {
  kRewardAgnostic,
  kRewardFree,
  kNone,  // zero penalty; reduces pessimistic VI to plain DP on the empirical model
};

struct PenaltyMode {
  PenaltyKind kind = PenaltyKind::kRewardAgnostic;
  double c_b = 16.0;
};

/// Empirical kernel over steps 0..H-1 plus the counts used in the penalty.
struct EmpiricalModel {
  int num_states;
  int num_actions;
  int horizon;
  std::vector<double> kernel;  // [h][s][a][s']; rows sum to 1 or 0
  StepTable counts;            // m_h(s,a)

  std::span<const double> row(int h, int s, int a) const {
    const auto S = static_cast<std::size_t>(num_states);
    return {kernel.data() + ((static_cast<std::size_t>(h) * S + s) * num_actions + a) * S, S};
  }
};

struct PlanResult {
  ValueTables values;          // V_hat, Q_hat
  DeterministicPolicy policy;  // greedy in Q_hat, lowest index on ties
  StepTable counts;            // effective counts m_h(s,a)
  StepTable penalties;         // b_h(s,a)
};

/// [K/4 E_mu[d_hat_h(s,a)] - K xi / (8N) - 3 log(HSA/delta)]_+
VisitLowerBound visit_lower_bounds(const OccupancyModel& model, const MixturePolicy& mixture, std::int64_t budget_k,
                                   std::int64_t episodes_n, double threshold, double delta);

/// Keeps min(floor(N_hat), N_h) records per cell, uniformly without replacement.
TransitionDataset subsample(const TransitionDataset& dataset, const VisitLowerBound& bounds, RngStream& rng);

/// Frequencies over the records of each cell; counts are record counts.
EmpiricalModel empirical_kernel(const TransitionDataset& dataset);

/// min(N_hat_h(s,a), N_h(s,a)) per cell, kept real-valued.
StepTable effective_counts(const VisitLowerBound& bounds, const TransitionDataset& dataset);

double bernstein_penalty(const PenaltyMode& mode, double count, std::span<const double> row,
                         std::span<const double> v_next, double delta, int horizon, int num_states,
                         int num_actions);

PlanResult pessimistic_vi(const EmpiricalModel& model, const RewardFunction& reward, const PenaltyMode& mode,
                          double delta);

}  // namespace rax::offline
