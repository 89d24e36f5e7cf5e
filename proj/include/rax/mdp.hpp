#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rax/rng.hpp"

// Tabular non-stationary finite-horizon MDPs, policies over them, episode
// simulation and the exact dynamic-programming oracles.
//
// All indices are 0-based: steps h in [0, H), states in [0, S), actions in
// [0, A). Tables are flat row-major arrays; a kernel is laid out
// [h][s][a][s'] and per-step tables [h][s][a].
namespace rax {

inline constexpr double kRowTolerance = 1e-12;
inline constexpr double kMixtureTolerance = 1e-9;

/// Ground-truth MDP: per-step transition kernel and initial distribution.
class TabularMdp {
 public:
  TabularMdp(int num_states, int num_actions, int horizon, std::vector<double> kernel,
             std::vector<double> init_dist);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  std::span<const double> row(int h, int s, int a) const;
  std::span<const double> kernel() const { return kernel_; }
  std::span<const double> init_dist() const { return init_dist_; }

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  std::vector<double> kernel_;
  std::vector<double> init_dist_;
};

/// Reward table r_h(s,a) with entries in [0,1].
class RewardFunction {
 public:
  RewardFunction(int num_states, int num_actions, int horizon, std::vector<double> values);

  static RewardFunction constant(int num_states, int num_actions, int horizon, double value);

  double operator()(int h, int s, int a) const {
    return values_[(static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + a];
  }
  std::span<const double> values() const { return values_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  std::vector<double> values_;
};

/// Deterministic Markov policy: one action per (h, s).
class DeterministicPolicy {
 public:
  DeterministicPolicy(int num_states, int num_actions, int horizon, std::vector<int> actions);

  /// Policy that plays `action` everywhere.
  static DeterministicPolicy constant(int num_states, int num_actions, int horizon, int action = 0);

  int operator()(int h, int s) const { return actions_[static_cast<std::size_t>(h) * num_states_ + s]; }
  std::span<const int> actions() const { return actions_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  std::vector<int> actions_;
};

/// Finitely supported distribution over deterministic policies. Executed by
/// drawing one atom per episode.
class MixturePolicy {
 public:
  struct Atom {
    double weight;
    DeterministicPolicy policy;
  };

  /// Merges duplicate policies; weights must be positive and sum to 1 within 1e-9.
  explicit MixturePolicy(std::vector<Atom> atoms);

  static MixturePolicy dirac(DeterministicPolicy policy);

  /// (1 - alpha) * this + alpha * delta_policy. Atoms whose weight falls
  /// below `prune_below` are dropped and the rest renormalized.
  [[nodiscard]] MixturePolicy blended(double alpha, const DeterministicPolicy& policy,
                                      double prune_below = 1e-12) const;

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// Atom selected by a uniform draw u in [0,1).
  std::size_t select(double u) const;

 private:
  MixturePolicy() = default;
  std::vector<Atom> atoms_;
};

struct StateAction {
  int state;
  int action;
};

/// Episode prefix (s_0, a_0), ..., (s_{L-1}, a_{L-1}); when L < H the state
/// reached after the last action is kept in `final_state`.
struct Trajectory {
  std::vector<StateAction> steps;
  std::optional<int> final_state;
};

/// Per-step state-action table, e.g. an occupancy distribution d_h(s,a).
class StepTable {
 public:
  StepTable(int steps, int num_states, int num_actions)
      : steps_(steps),
        num_states_(num_states),
        num_actions_(num_actions),
        data_(static_cast<std::size_t>(steps) * num_states * num_actions, 0.0) {}

  int steps() const { return steps_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& operator()(int h, int s, int a) { return data_[index(h, s, a)]; }
  double operator()(int h, int s, int a) const { return data_[index(h, s, a)]; }

  std::span<double> step(int h) { return {data_.data() + layer_offset(h), layer_size()}; }
  std::span<const double> step(int h) const { return {data_.data() + layer_offset(h), layer_size()}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Total mass at step h.
  double mass(int h) const;

 private:
  std::size_t layer_size() const { return static_cast<std::size_t>(num_states_) * num_actions_; }
  std::size_t layer_offset(int h) const { return static_cast<std::size_t>(h) * layer_size(); }
  std::size_t index(int h, int s, int a) const {
    return layer_offset(h) + static_cast<std::size_t>(s) * num_actions_ + a;
  }

  int steps_;
  int num_states_;
  int num_actions_;
  std::vector<double> data_;
};

using OccupancyTable = StepTable;

/// V has H+1 layers (V_H = 0); Q has H layers.
struct ValueTables {
  int horizon;
  int num_states;
  int num_actions;
  std::vector<double> v;
  std::vector<double> q;

  ValueTables(int horizon, int num_states, int num_actions);

  double value(int h, int s) const { return v[static_cast<std::size_t>(h) * num_states + s]; }
  double q_value(int h, int s, int a) const {
    return q[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
  }
  std::span<const double> values_at(int h) const {
    return {v.data() + static_cast<std::size_t>(h) * num_states, static_cast<std::size_t>(num_states)};
  }

  /// V_0(rho) = sum_s rho(s) V_0(s).
  double initial_value(std::span<const double> rho) const;
};

struct DpSolution {
  DeterministicPolicy policy;
  ValueTables values;
};

OccupancyTable exact_occupancy(const TabularMdp& mdp, const DeterministicPolicy& policy);

/// Draws one atom, then rolls it out for `length` steps from s_0 ~ rho.
Trajectory sample_episode(const TabularMdp& mdp, const MixturePolicy& policy, int length,
                          RngStream& rng);

/// Backward induction, ties broken toward the lowest action index.
DpSolution optimal_policy_dp(const TabularMdp& mdp, const RewardFunction& reward);

/// Same recursion for reward tables outside [0,1] (e.g. design rewards).
DpSolution optimal_policy_dp(const TabularMdp& mdp, std::span<const double> reward);

ValueTables policy_value(const TabularMdp& mdp, const RewardFunction& reward,
                         const DeterministicPolicy& policy);

}  // namespace rax
