#include "rax/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rax/simd.hpp"

namespace rax {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_kernel(const ThresholdedKernel& k, int num_states, int num_actions) {
  require(k.num_states == num_states && k.num_actions == num_actions,
          "OccupancyModel: kernel shape does not match the model");
  const auto cells = static_cast<std::size_t>(num_states) * num_actions;
  require(k.probs.size() == cells * num_states, "OccupancyModel: kernel size must be S*A*S");
  require(k.counts.empty() || k.counts.size() == cells, "OccupancyModel: counts size must be S*A");
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      double total = 0.0;
      for (double p : k.row(s, a)) {
        require(p >= 0.0, "OccupancyModel: negative kernel entry");
        total += p;
      }
      require(total <= 1.0 + kRowTolerance, "OccupancyModel: kernel row sums above 1");
      if (!k.counts.empty() && total > 0.0) {
        require(static_cast<double>(k.count(s, a)) > k.threshold,
                "OccupancyModel: nonzero row whose count does not exceed the threshold");
      }
    }
  }
}

}  // namespace

OccupancyModel::OccupancyModel(int num_states, int num_actions, int horizon, std::vector<double> rho_hat,
                               double threshold)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      threshold_(threshold),
      rho_hat_(std::move(rho_hat)) {
  require(num_states > 0 && num_actions > 0 && horizon > 0, "OccupancyModel: S, A and H must be positive");
  require(threshold >= 0.0, "OccupancyModel: threshold must be nonnegative");
  require(rho_hat_.size() == static_cast<std::size_t>(num_states), "OccupancyModel: rho_hat size must be S");
  double total = 0.0;
  for (double p : rho_hat_) {
    require(p >= 0.0, "OccupancyModel: negative rho_hat entry");
    total += p;
  }
  require(std::abs(total - 1.0) <= kRowTolerance, "OccupancyModel: rho_hat must sum to 1");
}

OccupancyModel OccupancyModel::from_mdp(const TabularMdp& mdp) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  OccupancyModel model(S, A, mdp.horizon(), std::vector<double>(mdp.init_dist().begin(), mdp.init_dist().end()),
                       0.0);
  const auto layer = static_cast<std::size_t>(S) * A * S;
  for (int h = 0; h + 1 < mdp.horizon(); ++h) {
    ThresholdedKernel k;
    k.num_states = S;
    k.num_actions = A;
    const auto first = mdp.kernel().begin() + static_cast<std::ptrdiff_t>(h * layer);
    k.probs.assign(first, first + static_cast<std::ptrdiff_t>(layer));
    model.kernels_.push_back(std::move(k));
  }
  return model;
}

OccupancyModel OccupancyModel::extended(ThresholdedKernel kernel) const {
  require(known_steps() < horizon_, "OccupancyModel::extended: model already covers every step");
  check_kernel(kernel, num_states_, num_actions_);
  OccupancyModel out = *this;
  out.kernels_.push_back(std::move(kernel));
  return out;
}

double practical_threshold(int horizon, int num_states, int num_actions, double delta) {
  return std::max(1.0, 2.0 * std::log(static_cast<double>(horizon) * num_states * num_actions / delta));
}

double theoretical_threshold(int horizon, int num_states, int num_actions, double delta, double c_xi) {
  const double hsa = static_cast<double>(horizon) * num_states * num_actions;
  return c_xi * hsa * hsa * hsa * std::log(hsa / delta);
}

std::vector<double> estimate_initial_distribution(std::span<const int> initial_states, int num_states) {
  require(!initial_states.empty(), "estimate_initial_distribution: no samples");
  require(num_states > 0, "estimate_initial_distribution: S must be positive");
  std::vector<double> counts(static_cast<std::size_t>(num_states), 0.0);
  for (int s : initial_states) {
    require(s >= 0 && s < num_states, "estimate_initial_distribution: state index out of range");
    counts[static_cast<std::size_t>(s)] += 1.0;
  }
  const double n = static_cast<double>(initial_states.size());
  for (double& c : counts) c /= n;
  return counts;
}

ThresholdedKernel build_thresholded_kernel(std::span<const Transition> transitions, int num_states,
                                           int num_actions, double threshold) {
  require(threshold >= 0.0, "build_thresholded_kernel: threshold must be nonnegative");
  ThresholdedKernel k;
  k.num_states = num_states;
  k.num_actions = num_actions;
  k.threshold = threshold;
  const auto S = static_cast<std::size_t>(num_states);
  k.counts.assign(S * num_actions, 0);
  k.probs.assign(S * num_actions * S, 0.0);
  for (const Transition& t : transitions) {
    require(t.state >= 0 && t.state < num_states && t.action >= 0 && t.action < num_actions &&
                t.next_state >= 0 && t.next_state < num_states,
            "build_thresholded_kernel: index out of range");
    const std::size_t cell = static_cast<std::size_t>(t.state) * num_actions + t.action;
    ++k.counts[cell];
    k.probs[cell * S + static_cast<std::size_t>(t.next_state)] += 1.0;
  }
  for (std::size_t cell = 0; cell < k.counts.size(); ++cell) {
    const auto n = static_cast<double>(k.counts[cell]);
    const double scale = n > threshold ? 1.0 / n : 0.0;
    for (std::size_t next = 0; next < S; ++next) k.probs[cell * S + next] *= scale;
  }
  return k;
}

OccupancyTable propagate_occupancy(const OccupancyModel& model, const DeterministicPolicy& policy) {
  const int S = model.num_states();
  const int A = model.num_actions();
  require(policy.num_states() == S && policy.num_actions() == A && policy.horizon() == model.horizon(),
          "propagate_occupancy: policy shape does not match the model");
  const int steps = model.known_steps();
  OccupancyTable d(steps, S, A);
  for (int s = 0; s < S; ++s) d(0, s, policy(0, s)) = model.rho_hat()[s];
  std::vector<double> next(static_cast<std::size_t>(S));
  for (int h = 0; h + 1 < steps; ++h) {
    std::fill(next.begin(), next.end(), 0.0);
    const ThresholdedKernel& kernel = model.kernel(h);
    for (int s = 0; s < S; ++s) {
      const int a = policy(h, s);
      const double mass = d(h, s, a);
      if (mass != 0.0) simd::axpy(mass, kernel.row(s, a), next);
    }
    for (int s = 0; s < S; ++s) d(h + 1, s, policy(h + 1, s)) = next[static_cast<std::size_t>(s)];
  }
  return d;
}

OccupancyTable mixture_occupancy(const OccupancyModel& model, const MixturePolicy& mixture) {
  OccupancyTable total(model.known_steps(), model.num_states(), model.num_actions());
  for (const auto& atom : mixture.atoms()) {
    const OccupancyTable d = propagate_occupancy(model, atom.policy);
    simd::axpy(atom.weight, d.data(), total.data());
  }
  return total;
}

}  // namespace rax
