#include "rax/offline.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <iterator>
#include <stdexcept>
#include <string>

#include "rax/simd.hpp"

namespace rax::offline {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

TransitionDataset::TransitionDataset(int num_states, int num_actions, int horizon)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      cells_(static_cast<std::size_t>(horizon) * num_states * num_actions) {
  require(num_states > 0 && num_actions > 0 && horizon > 0, "TransitionDataset: S, A and H must be positive");
}

TransitionDataset TransitionDataset::from_trajectories(int num_states, int num_actions, int horizon,
                                                       std::span<const Trajectory> episodes) {
  TransitionDataset out(num_states, num_actions, horizon);
  for (const Trajectory& episode : episodes) {
    const auto& steps = episode.steps;
    for (std::size_t h = 0; h < steps.size(); ++h) {
      int next = kNoSuccessor;
      if (h + 1 < steps.size()) {
        next = steps[h + 1].state;
      } else if (episode.final_state) {
        next = *episode.final_state;
      }
      out.add(static_cast<int>(h), steps[h].state, steps[h].action, next);
    }
  }
  return out;
}

void TransitionDataset::add(int h, int s, int a, int next_state) {
  require(h >= 0 && h < horizon_ && s >= 0 && s < num_states_ && a >= 0 && a < num_actions_,
          "TransitionDataset::add: index out of range");
  if (next_state == kNoSuccessor) {
    require(h == horizon_ - 1, "TransitionDataset::add: only last-step records may omit the successor");
  } else {
    require(next_state >= 0 && next_state < num_states_, "TransitionDataset::add: successor out of range");
  }
  cells_[cell(h, s, a)].push_back(next_state);
}

std::int64_t TransitionDataset::size() const {
  std::int64_t total = 0;
  for (const auto& c : cells_) total += static_cast<std::int64_t>(c.size());
  return total;
}

VisitLowerBound visit_lower_bounds(const OccupancyModel& model, const MixturePolicy& mixture, std::int64_t budget_k,
                                   std::int64_t episodes_n, double threshold, double delta) {
  require(budget_k >= 1 && episodes_n >= 1, "visit_lower_bounds: K and N must be positive");
  require(delta > 0.0 && delta < 1.0, "visit_lower_bounds: delta must lie in (0,1)");
  const OccupancyTable occ = mixture_occupancy(model, mixture);
  const double k = static_cast<double>(budget_k);
  const double hsa = static_cast<double>(model.horizon()) * model.num_states() * model.num_actions();
  const double shift = k * threshold / (8.0 * static_cast<double>(episodes_n)) + 3.0 * std::log(hsa / delta);
  VisitLowerBound out{StepTable(occ.steps(), model.num_states(), model.num_actions())};
  auto dst = out.values.data();
  auto src = occ.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::max(0.0, k / 4.0 * src[i] - shift);
  return out;
}

TransitionDataset subsample(const TransitionDataset& dataset, const VisitLowerBound& bounds, RngStream& rng) {
  const int S = dataset.num_states();
  const int A = dataset.num_actions();
  const int H = dataset.horizon();
  require(bounds.values.steps() == H && bounds.values.num_states() == S && bounds.values.num_actions() == A,
          "subsample: bound table shape does not match the dataset");
  TransitionDataset out(S, A, H);
  std::vector<int> kept;
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const auto records = dataset.successors(h, s, a);
        const auto target = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(bounds.values(h, s, a))),
                                                   static_cast<std::int64_t>(records.size()));
        kept.clear();
        std::sample(records.begin(), records.end(), std::back_inserter(kept), target, rng.engine());
        for (int next : kept) out.add(h, s, a, next);
      }
    }
  }
  return out;
}

EmpiricalModel empirical_kernel(const TransitionDataset& dataset) {
  const int S = dataset.num_states();
  const int A = dataset.num_actions();
  const int H = dataset.horizon();
  EmpiricalModel out{S, A, H, std::vector<double>(static_cast<std::size_t>(H) * S * A * S, 0.0), StepTable(H, S, A)};
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const auto records = dataset.successors(h, s, a);
        out.counts(h, s, a) = static_cast<double>(records.size());
        if (records.empty()) continue;
        double* row = out.kernel.data() + ((static_cast<std::size_t>(h) * S + s) * A + a) * S;
        std::int64_t with_successor = 0;
        for (int next : records) {
          if (next == kNoSuccessor) continue;
          row[next] += 1.0;
          ++with_successor;
        }
        if (with_successor == 0) continue;
        const double inv = 1.0 / static_cast<double>(with_successor);
        for (int next = 0; next < S; ++next) row[next] *= inv;
      }
    }
  }
  return out;
}

StepTable effective_counts(const VisitLowerBound& bounds, const TransitionDataset& dataset) {
  const int S = dataset.num_states();
  const int A = dataset.num_actions();
  const int H = dataset.horizon();
  StepTable out(H, S, A);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        out(h, s, a) = std::min(bounds.values(h, s, a), static_cast<double>(dataset.count(h, s, a)));
      }
    }
  }
  return out;
}

double bernstein_penalty(const PenaltyMode& mode, double count, std::span<const double> row,
                         std::span<const double> v_next, double delta, int horizon, int num_states,
                         int num_actions) {
  if (mode.kind == PenaltyKind::kNone) return 0.0;
  require(mode.c_b > 0.0, "bernstein_penalty: c_b must be positive");
  require(delta > 0.0 && delta < 1.0, "bernstein_penalty: delta must lie in (0,1)");
  const double cap = static_cast<double>(horizon);
  if (count <= 0.0) return cap;
  const double log_term = std::log(static_cast<double>(horizon) * num_states * num_actions / delta);
  const double scale = mode.c_b * log_term * (mode.kind == PenaltyKind::kRewardFree ? num_states : 1) / count;
  const double variance = simd::weighted_variance(row, v_next);
  return std::min(std::sqrt(scale * std::max(variance, 0.0)) + scale * cap, cap);
}

PlanResult pessimistic_vi(const EmpiricalModel& model, const RewardFunction& reward, const PenaltyMode& mode,
                          double delta) {
  const int S = model.num_states;
  const int A = model.num_actions;
  const int H = model.horizon;
  require(reward.num_states() == S && reward.num_actions() == A && reward.horizon() == H,
          "pessimistic_vi: reward shape does not match the model");
  ValueTables values(H, S, A);
  StepTable penalties(H, S, A);
  std::vector<int> actions(static_cast<std::size_t>(H) * S, 0);
  for (int h = H - 1; h >= 0; --h) {
    const auto next = values.values_at(h + 1);
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      int best_action = 0;
      for (int a = 0; a < A; ++a) {
        const auto row = model.row(h, s, a);
        const double b = bernstein_penalty(mode, model.counts(h, s, a), row, next, delta, H, S, A);
        penalties(h, s, a) = b;
        const double q = std::max(reward(h, s, a) + simd::dot(row, next) - b, 0.0);
        assert(q <= static_cast<double>(H - h) + 1e-9);
        values.q[(static_cast<std::size_t>(h) * S + s) * A + a] = q;
        if (a == 0 || q > best) {
          best = q;
          best_action = a;
        }
      }
      values.v[static_cast<std::size_t>(h) * S + s] = best;
      actions[static_cast<std::size_t>(h) * S + s] = best_action;
    }
  }
  return PlanResult{std::move(values), DeterministicPolicy(S, A, H, std::move(actions)), model.counts,
                    std::move(penalties)};
}

}  // namespace rax::offline
