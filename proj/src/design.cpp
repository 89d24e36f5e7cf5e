#include "rax/design.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rax/simd.hpp"

namespace rax::design {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double floor_term(int horizon, std::int64_t budget_k) {
  require(budget_k >= 2, "design: K must be at least 2");
  return 1.0 / (static_cast<double>(budget_k) * horizon);
}

/// Steps whose estimated occupancy the scope needs.
int required_steps(const DesignScope& scope, int horizon) {
  return scope.is_full_horizon() ? horizon : scope.step() + 1;
}

void check_scope(const DesignScope& scope, int horizon, int known_steps, const char* who) {
  if (!scope.is_full_horizon()) {
    require(scope.step() >= 0 && scope.step() < horizon, std::string(who) + ": step outside [0, H)");
  }
  require(known_steps >= required_steps(scope, horizon),
          std::string(who) + ": occupancy model does not cover the scope");
}

/// Whether real states follow the estimated kernel at step h of the augmented MDP.
bool follows_estimate(const DesignScope& scope, int h, int horizon) {
  return scope.is_full_horizon() ? h + 1 < horizon : h < scope.step();
}

}  // namespace

int max_iterations(const DesignScope& scope, int num_states, int num_actions, int horizon, std::int64_t budget_k) {
  require(budget_k >= 2, "max_iterations: K must be at least 2");
  const double m = scope.num_terms(num_states, num_actions, horizon);
  return static_cast<int>(std::floor(50.0 * m * std::log(static_cast<double>(budget_k) * horizon)));
}

double objective_from_occupancy(const OccupancyTable& mixture_occ, const DesignScope& scope, int horizon,
                                std::int64_t budget_k) {
  const double c = floor_term(horizon, budget_k);
  check_scope(scope, horizon, mixture_occ.steps(), "objective_f");
  double total = 0.0;
  for (int h = 0; h < mixture_occ.steps(); ++h) {
    if (!scope.covers(h)) continue;
    for (double x : mixture_occ.step(h)) total += std::log(c + x);
  }
  return total;
}

double objective_f(const OccupancyModel& model, const MixturePolicy& mixture, const DesignScope& scope,
                   std::int64_t budget_k) {
  return objective_from_occupancy(mixture_occupancy(model, mixture), scope, model.horizon(), budget_k);
}

double g_value(const OccupancyModel& model, const DeterministicPolicy& candidate, const MixturePolicy& mixture,
               const DesignScope& scope, std::int64_t budget_k) {
  const double c = floor_term(model.horizon(), budget_k);
  check_scope(scope, model.horizon(), model.known_steps(), "g_value");
  const OccupancyTable d = propagate_occupancy(model, candidate);
  const OccupancyTable mix = mixture_occupancy(model, mixture);
  double total = 0.0;
  for (int h = 0; h < d.steps(); ++h) {
    if (scope.covers(h)) total += simd::ratio_sum(c, d.step(h), mix.step(h));
  }
  return total;
}

AugmentedMdp build_augmented_mdp(const OccupancyModel& model, const OccupancyTable& mixture_occ,
                                 const DesignScope& scope, std::int64_t budget_k) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int H = model.horizon();
  const double c = floor_term(H, budget_k);
  check_scope(scope, H, std::min(model.known_steps(), mixture_occ.steps()), "build_augmented_mdp");

  const int aug = S;
  const auto SA = static_cast<std::size_t>(S + 1);
  std::vector<double> kernel(static_cast<std::size_t>(H) * SA * A * SA, 0.0);
  auto row_of = [&](int h, int s, int a) {
    return kernel.data() + ((static_cast<std::size_t>(h) * SA + s) * A + a) * SA;
  };
  for (int h = 0; h < H; ++h) {
    const bool estimated = follows_estimate(scope, h, H);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double* out = row_of(h, s, a);
        double kept = 0.0;
        if (estimated) {
          const auto row = model.kernel(h).row(s, a);
          std::copy(row.begin(), row.end(), out);
          for (double p : row) kept += p;
        }
        out[aug] = std::max(0.0, 1.0 - kept);
      }
    }
    for (int a = 0; a < A; ++a) row_of(h, aug, a)[aug] = 1.0;
  }

  std::vector<double> init(SA, 0.0);
  std::copy(model.rho_hat().begin(), model.rho_hat().end(), init.begin());

  std::vector<double> reward(static_cast<std::size_t>(H) * SA * A, 0.0);
  for (int h = 0; h < H; ++h) {
    if (!scope.covers(h)) continue;
    // Real states occupy the first S*A entries of the augmented layer.
    std::span<double> layer(reward.data() + static_cast<std::size_t>(h) * SA * A, static_cast<std::size_t>(S) * A);
    simd::offset_reciprocal(c, mixture_occ.step(h), layer);
  }

  return AugmentedMdp{TabularMdp(S + 1, A, H, std::move(kernel), std::move(init)), std::move(reward), aug};
}

AugmentedMdp build_augmented_mdp(const OccupancyModel& model, const MixturePolicy& mixture,
                                 const DesignScope& scope, std::int64_t budget_k) {
  return build_augmented_mdp(model, mixture_occupancy(model, mixture), scope, budget_k);
}

BestResponse best_response(const OccupancyModel& model, const OccupancyTable& mixture_occ,
                           const DesignScope& scope, std::int64_t budget_k) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int H = model.horizon();
  const AugmentedMdp aug = build_augmented_mdp(model, mixture_occ, scope, budget_k);
  const DpSolution solution = optimal_policy_dp(aug.mdp, aug.reward);

  const double value = solution.values.initial_value(aug.mdp.init_dist());
  // g = sum d^pi * r_b + sum (1/KH) * r_b over the scope.
  const double c = floor_term(H, budget_k);
  double constant = 0.0;
  const auto SA = static_cast<std::size_t>(S + 1) * A;
  for (int h = 0; h < H; ++h) {
    if (!scope.covers(h)) continue;
    for (std::size_t i = 0; i < static_cast<std::size_t>(S) * A; ++i) {
      constant += c * aug.reward[static_cast<std::size_t>(h) * SA + i];
    }
  }

  std::vector<int> actions(static_cast<std::size_t>(H) * S);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) actions[static_cast<std::size_t>(h) * S + s] = solution.policy(h, s);
  }
  return BestResponse{DeterministicPolicy(S, A, H, std::move(actions)), value + constant, value};
}

BestResponse best_response(const OccupancyModel& model, const MixturePolicy& mixture, const DesignScope& scope,
                           std::int64_t budget_k) {
  return best_response(model, mixture_occupancy(model, mixture), scope, budget_k);
}

double step_size(double g, int num_terms) {
  require(num_terms >= 1, "step_size: number of terms must be positive");
  require(g > 1.0, "step_size: g must exceed 1");
  return (g / num_terms - 1.0) / (g - 1.0);
}

FrankWolfeResult frank_wolfe(const OccupancyModel& model, const DesignScope& scope, const DesignConfig& config) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int H = model.horizon();
  check_scope(scope, H, model.known_steps(), "frank_wolfe");
  const int terms = scope.num_terms(S, A, H);
  const double stop_at = 2.0 * terms;

  DeterministicPolicy init = config.initial_policy.value_or(DeterministicPolicy::constant(S, A, H));
  OccupancyTable occ = propagate_occupancy(model, init);
  FrankWolfeResult result{MixturePolicy::dirac(std::move(init)), 0,
                          max_iterations(scope, S, A, H, config.budget_k), false, 0.0, {}};

  for (int t = 0;; ++t) {
    BestResponse br = best_response(model, occ, scope, config.budget_k);
    result.final_g = br.g;
    std::optional<double> alpha;
    if (br.g > 1.0) alpha = step_size(br.g, terms);
    if (config.record_trace) {
      result.trace.push_back(TraceRecord{t, br.g, objective_from_occupancy(occ, scope, H, config.budget_k), alpha,
                                         result.mixture.size()});
    }
    if (br.g <= stop_at) {
      result.converged = true;
      break;
    }
    if (t >= result.max_iterations) break;

    const auto& atoms = result.mixture.atoms();
    const bool present = std::any_of(atoms.begin(), atoms.end(),
                                     [&](const MixturePolicy::Atom& atom) { return atom.policy == br.policy; });
    const std::size_t expected = result.mixture.size() + (present ? 0 : 1);
    MixturePolicy next = result.mixture.blended(*alpha, br.policy, config.prune_below);
    if (next.size() == expected) {
      simd::lerp(*alpha, propagate_occupancy(model, br.policy).data(), occ.data());
    } else {
      occ = mixture_occupancy(model, next);
    }
    result.mixture = std::move(next);
    ++result.iterations;
  }
  return result;
}

}  // namespace rax::design
