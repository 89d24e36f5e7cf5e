#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rax/mdp.hpp"

namespace rax {

struct Transition {
  int state;
  int action;
  int next_state;
};

/// Empirical kernel for one step, with rows zeroed unless their visit count
/// strictly exceeds the threshold. Rows are not renormalized.
struct ThresholdedKernel {
  int num_states = 0;
  int num_actions = 0;
  double threshold = 0.0;
  std::vector<double> probs;          // [s][a][s']
  std::vector<std::int64_t> counts;   // [s][a]; empty for kernels copied from a known MDP

  std::span<const double> row(int s, int a) const {
    const auto S = static_cast<std::size_t>(num_states);
    return {probs.data() + (static_cast<std::size_t>(s) * num_actions + a) * S, S};
  }
  std::int64_t count(int s, int a) const {
    return counts[static_cast<std::size_t>(s) * num_actions + a];
  }
};

/// rho_hat plus thresholded kernels for steps 0..k-1 (k <= H-1). Estimated
/// occupancies d_hat_h are defined for steps 0..k.
class OccupancyModel {
 public:
  OccupancyModel(int num_states, int num_actions, int horizon, std::vector<double> rho_hat, double threshold);

  /// Model whose kernels and initial distribution equal the MDP's own.
  static OccupancyModel from_mdp(const TabularMdp& mdp);

  /// Copy with one more step's kernel appended.
  [[nodiscard]] OccupancyModel extended(ThresholdedKernel kernel) const;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  double threshold() const { return threshold_; }
  std::span<const double> rho_hat() const { return rho_hat_; }
  const ThresholdedKernel& kernel(int h) const { return kernels_.at(static_cast<std::size_t>(h)); }
  int num_kernels() const { return static_cast<int>(kernels_.size()); }

  /// Number of leading steps whose estimated occupancy is defined.
  int known_steps() const { return num_kernels() + 1; }
  bool complete() const { return known_steps() == horizon_; }

 private:
  int num_states_;
  int num_actions_;
  int horizon_;
  double threshold_;
  std::vector<double> rho_hat_;
  std::vector<ThresholdedKernel> kernels_;
};

/// Practical default threshold max(1, 2 log(HSA/delta)).
double practical_threshold(int horizon, int num_states, int num_actions, double delta);

/// c_xi * H^3 S^3 A^3 log(HSA/delta).
double theoretical_threshold(int horizon, int num_states, int num_actions, double delta, double c_xi = 1.0);

std::vector<double> estimate_initial_distribution(std::span<const int> initial_states, int num_states);

ThresholdedKernel build_thresholded_kernel(std::span<const Transition> transitions, int num_states,
                                           int num_actions, double threshold);

/// Forward recursion through the thresholded kernels; one layer per known step.
OccupancyTable propagate_occupancy(const OccupancyModel& model, const DeterministicPolicy& policy);

/// Weighted sum of per-atom estimated occupancies.
OccupancyTable mixture_occupancy(const OccupancyModel& model, const MixturePolicy& mixture);

}  // namespace rax
