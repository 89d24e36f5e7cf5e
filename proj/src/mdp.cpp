#include "rax/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rax/simd.hpp"

namespace rax {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_dims(int num_states, int num_actions, int horizon, const char* who) {
  require(num_states > 0 && num_actions > 0 && horizon > 0,
          std::string(who) + ": S, A and H must be positive");
}

void check_distribution(std::span<const double> p, const std::string& what) {
  double total = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x >= 0.0, what + " has a negative or non-finite entry");
    total += x;
  }
  require(std::abs(total - 1.0) <= kRowTolerance, what + " does not sum to 1");
}

}  // namespace

TabularMdp::TabularMdp(int num_states, int num_actions, int horizon, std::vector<double> kernel,
                       std::vector<double> init_dist)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      kernel_(std::move(kernel)),
      init_dist_(std::move(init_dist)) {
  check_dims(num_states, num_actions, horizon, "TabularMdp");
  const auto S = static_cast<std::size_t>(num_states);
  require(kernel_.size() == static_cast<std::size_t>(horizon) * S * num_actions * S,
          "TabularMdp: kernel size must be H*S*A*S");
  require(init_dist_.size() == S, "TabularMdp: initial distribution size must be S");
  check_distribution(init_dist_, "TabularMdp: initial distribution");
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        check_distribution(row(h, s, a), "TabularMdp: kernel row (h=" + std::to_string(h) +
                                             ", s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                                             ")");
      }
    }
  }
}

std::span<const double> TabularMdp::row(int h, int s, int a) const {
  const auto S = static_cast<std::size_t>(num_states_);
  const std::size_t offset = ((static_cast<std::size_t>(h) * S + s) * num_actions_ + a) * S;
  return {kernel_.data() + offset, S};
}

RewardFunction::RewardFunction(int num_states, int num_actions, int horizon, std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), horizon_(horizon), values_(std::move(values)) {
  check_dims(num_states, num_actions, horizon, "RewardFunction");
  require(values_.size() == static_cast<std::size_t>(horizon) * num_states * num_actions,
          "RewardFunction: table size must be H*S*A");
  for (double r : values_) {
    require(r >= 0.0 && r <= 1.0, "RewardFunction: rewards must lie in [0,1]");
  }
}

RewardFunction RewardFunction::constant(int num_states, int num_actions, int horizon, double value) {
  return RewardFunction(num_states, num_actions, horizon,
                        std::vector<double>(static_cast<std::size_t>(horizon) * num_states * num_actions, value));
}

DeterministicPolicy::DeterministicPolicy(int num_states, int num_actions, int horizon, std::vector<int> actions)
    : num_states_(num_states), num_actions_(num_actions), horizon_(horizon), actions_(std::move(actions)) {
  check_dims(num_states, num_actions, horizon, "DeterministicPolicy");
  require(actions_.size() == static_cast<std::size_t>(horizon) * num_states,
          "DeterministicPolicy: table size must be H*S");
  for (int a : actions_) {
    require(a >= 0 && a < num_actions, "DeterministicPolicy: action index out of range");
  }
}

DeterministicPolicy DeterministicPolicy::constant(int num_states, int num_actions, int horizon, int action) {
  return DeterministicPolicy(num_states, num_actions, horizon,
                             std::vector<int>(static_cast<std::size_t>(horizon) * num_states, action));
}

MixturePolicy::MixturePolicy(std::vector<Atom> atoms) {
  require(!atoms.empty(), "MixturePolicy: empty support");
  double total = 0.0;
  for (auto& atom : atoms) {
    require(atom.weight > 0.0 && atom.weight <= 1.0 + kMixtureTolerance,
            "MixturePolicy: weights must lie in (0,1]");
    total += atom.weight;
    auto same = std::find_if(atoms_.begin(), atoms_.end(),
                             [&](const Atom& existing) { return existing.policy == atom.policy; });
    if (same != atoms_.end()) {
      same->weight += atom.weight;
    } else {
      atoms_.push_back(std::move(atom));
    }
  }
  require(std::abs(total - 1.0) <= kMixtureTolerance, "MixturePolicy: weights must sum to 1");
}

MixturePolicy MixturePolicy::dirac(DeterministicPolicy policy) {
  MixturePolicy out;
  out.atoms_.push_back(Atom{1.0, std::move(policy)});
  return out;
}

MixturePolicy MixturePolicy::blended(double alpha, const DeterministicPolicy& policy, double prune_below) const {
  require(alpha >= 0.0 && alpha <= 1.0, "MixturePolicy::blended: alpha must lie in [0,1]");
  MixturePolicy out;
  out.atoms_.reserve(atoms_.size() + 1);
  bool merged = false;
  for (const Atom& atom : atoms_) {
    double w = (1.0 - alpha) * atom.weight;
    if (atom.policy == policy) {
      w += alpha;
      merged = true;
    }
    out.atoms_.push_back(Atom{w, atom.policy});
  }
  if (!merged) out.atoms_.push_back(Atom{alpha, policy});

  std::erase_if(out.atoms_, [&](const Atom& atom) { return atom.weight < prune_below; });
  require(!out.atoms_.empty(), "MixturePolicy::blended: every atom was pruned");
  double total = 0.0;
  for (const Atom& atom : out.atoms_) total += atom.weight;
  for (Atom& atom : out.atoms_) atom.weight /= total;
  return out;
}

std::size_t MixturePolicy::select(double u) const {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    cumulative += atoms_[i].weight;
    if (u < cumulative) return i;
  }
  return atoms_.size() - 1;
}

double StepTable::mass(int h) const {
  const auto layer = step(h);
  return std::accumulate(layer.begin(), layer.end(), 0.0);
}

ValueTables::ValueTables(int horizon, int num_states, int num_actions)
    : horizon(horizon),
      num_states(num_states),
      num_actions(num_actions),
      v(static_cast<std::size_t>(horizon + 1) * num_states, 0.0),
      q(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0) {}

double ValueTables::initial_value(std::span<const double> rho) const {
  double total = 0.0;
  for (int s = 0; s < num_states; ++s) total += rho[s] * value(0, s);
  return total;
}

OccupancyTable exact_occupancy(const TabularMdp& mdp, const DeterministicPolicy& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  OccupancyTable d(H, S, A);
  for (int s = 0; s < S; ++s) d(0, s, policy(0, s)) = mdp.init_dist()[s];
  // Pull form: d_{h+1}(s') = sum_{s,a} P_h(s'|s,a) d_h(s,a).
  for (int h = 0; h + 1 < H; ++h) {
    for (int next = 0; next < S; ++next) {
      double mass = 0.0;
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) mass += mdp.row(h, s, a)[next] * d(h, s, a);
      }
      d(h + 1, next, policy(h + 1, next)) = mass;
    }
  }
  return d;
}

Trajectory sample_episode(const TabularMdp& mdp, const MixturePolicy& policy, int length, RngStream& rng) {
  require(length >= 1 && length <= mdp.horizon(), "sample_episode: length must lie in [1, H]");
  const DeterministicPolicy& atom = policy.atoms()[policy.select(rng.uniform())].policy;
  Trajectory out;
  out.steps.reserve(static_cast<std::size_t>(length));
  int state = sample_categorical(mdp.init_dist(), rng.uniform());
  for (int h = 0; h < length; ++h) {
    const int action = atom(h, state);
    out.steps.push_back({state, action});
    if (h + 1 < length || length < mdp.horizon()) {
      state = sample_categorical(mdp.row(h, state, action), rng.uniform());
    }
  }
  if (length < mdp.horizon()) out.final_state = state;
  return out;
}

DpSolution optimal_policy_dp(const TabularMdp& mdp, std::span<const double> reward) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  require(reward.size() == static_cast<std::size_t>(H) * S * A, "optimal_policy_dp: reward size must be H*S*A");
  ValueTables values(H, S, A);
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    const auto next = values.values_at(h + 1);
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      int best_action = 0;
      for (int a = 0; a < A; ++a) {
        const std::size_t idx = (static_cast<std::size_t>(h) * S + s) * A + a;
        const double q = reward[idx] + simd::dot(mdp.row(h, s, a), next);
        values.q[idx] = q;
        if (a == 0 || q > best) {
          best = q;
          best_action = a;
        }
      }
      values.v[static_cast<std::size_t>(h) * S + s] = best;
      actions[static_cast<std::size_t>(h) * S + s] = best_action;
    }
  }
  return {DeterministicPolicy(S, A, H, std::move(actions)), std::move(values)};
}

DpSolution optimal_policy_dp(const TabularMdp& mdp, const RewardFunction& reward) {
  require(reward.num_states() == mdp.num_states() && reward.num_actions() == mdp.num_actions() &&
              reward.horizon() == mdp.horizon(),
          "optimal_policy_dp: reward shape does not match the MDP");
  return optimal_policy_dp(mdp, reward.values());
}

ValueTables policy_value(const TabularMdp& mdp, const RewardFunction& reward, const DeterministicPolicy& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  require(policy.num_states() == S && policy.num_actions() == A && policy.horizon() == H,
          "policy_value: policy shape does not match the MDP");
  ValueTables values(H, S, A);
  for (int h = H - 1; h >= 0; --h) {
    const auto next = values.values_at(h + 1);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::size_t idx = (static_cast<std::size_t>(h) * S + s) * A + a;
        values.q[idx] = reward(h, s, a) + simd::dot(mdp.row(h, s, a), next);
      }
      values.v[static_cast<std::size_t>(h) * S + s] = values.q_value(h, s, policy(h, s));
    }
  }
  return values;
}

}  // namespace rax
