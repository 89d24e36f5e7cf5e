#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rax/estimation.hpp"
#include "rax/mdp.hpp"

// Frank-Wolfe optimal design over mixtures of deterministic policies.
//
// The objective is the log-barrier f(mu) = sum log(1/KH + E_mu[d_hat_h(s,a)])
// over either every step (behavior-policy design) or a single step
// (exploration for one round of kernel estimation). The linear subproblem is
// an ordinary DP on an MDP augmented with an absorbing state that soaks up the
// mass the thresholded kernels leak.
namespace rax::design {

class DesignScope {
 public:
  static DesignScope full_horizon() { return DesignScope(-1); }
  static DesignScope single_step(int h) { return DesignScope(h); }

  bool is_full_horizon() const { return step_ < 0; }
  /// Valid only for single-step scopes.
  int step() const { return step_; }

  /// Number of (h,s,a) terms in the objective: SAH or SA.
  int num_terms(int num_states, int num_actions, int horizon) const {
    return num_states * num_actions * (is_full_horizon() ? horizon : 1);
  }

  bool covers(int h) const { return is_full_horizon() || h == step_; }

 private:
  explicit DesignScope(int step) : step_(step) {}
  int step_;
};

/// (S+1)-state MDP; the last state is absorbing with zero reward.
struct AugmentedMdp {
  TabularMdp mdp;
  std::vector<double> reward;  // [h][s][a] over the augmented state space
  int absorbing_state;
};

struct BestResponse {
  DeterministicPolicy policy;  // restricted to the real states
  double g;                    // g(policy, d_hat, mu)
  double augmented_value;      // optimal value of the augmented MDP at rho_hat
};

struct TraceRecord {
  int iteration;
  double g;
  double objective;
  std::optional<double> step;  // absent when g <= 1
  std::size_t support;
};

struct DesignConfig {
  std::int64_t budget_k = 2;                       // K
  std::optional<DeterministicPolicy> initial_policy;  // default: all-zero policy
  double prune_below = 1e-12;
  bool record_trace = false;
};

struct FrankWolfeResult {
  MixturePolicy mixture;
  int iterations = 0;        // number of Frank-Wolfe updates applied
  int max_iterations = 0;    // T_max
  bool converged = false;    // stop rule fired
  double final_g = 0.0;      // g of the last best response
  std::vector<TraceRecord> trace;
};

/// floor(50 * M * log(KH)), M = SAH or SA.
int max_iterations(const DesignScope& scope, int num_states, int num_actions, int horizon, std::int64_t budget_k);

double objective_f(const OccupancyModel& model, const MixturePolicy& mixture, const DesignScope& scope,
                   std::int64_t budget_k);

/// Objective from a precomputed mixture occupancy E_mu[d_hat].
double objective_from_occupancy(const OccupancyTable& mixture_occ, const DesignScope& scope, int horizon,
                                std::int64_t budget_k);

double g_value(const OccupancyModel& model, const DeterministicPolicy& candidate, const MixturePolicy& mixture,
               const DesignScope& scope, std::int64_t budget_k);

AugmentedMdp build_augmented_mdp(const OccupancyModel& model, const MixturePolicy& mixture,
                                 const DesignScope& scope, std::int64_t budget_k);
AugmentedMdp build_augmented_mdp(const OccupancyModel& model, const OccupancyTable& mixture_occ,
                                 const DesignScope& scope, std::int64_t budget_k);

/// Maximizer of g over deterministic policies, via DP on the augmented MDP.
BestResponse best_response(const OccupancyModel& model, const MixturePolicy& mixture, const DesignScope& scope,
                           std::int64_t budget_k);
BestResponse best_response(const OccupancyModel& model, const OccupancyTable& mixture_occ,
                           const DesignScope& scope, std::int64_t budget_k);

/// alpha = (g/M - 1) / (g - 1), M = num_terms. Throws for g <= 1.
double step_size(double g, int num_terms);

FrankWolfeResult frank_wolfe(const OccupancyModel& model, const DesignScope& scope, const DesignConfig& config);

}  // namespace rax::design
