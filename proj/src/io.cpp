#include "rax/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rax::io {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

int positive_int(const json& doc, const char* key) {
  require(doc.contains(key) && doc.at(key).is_number_integer(), std::string("missing integer field '") + key + "'");
  const int v = doc.at(key).get<int>();
  require(v > 0, std::string("field '") + key + "' must be positive");
  return v;
}

/// Flattens a nested array, checking the extent of every level.
template <typename T>
void flatten(const json& node, std::span<const int> shape, std::vector<T>& out, const std::string& what) {
  if (shape.empty()) {
    require(node.is_number(), what + ": expected a number");
    out.push_back(node.get<T>());
    return;
  }
  require(node.is_array() && node.size() == static_cast<std::size_t>(shape.front()),
          what + ": expected an array of length " + std::to_string(shape.front()));
  for (const auto& child : node) flatten(child, shape.subspan(1), out, what);
}

template <typename T>
std::vector<T> read_tensor(const json& doc, const char* key, std::vector<int> shape) {
  require(doc.contains(key), std::string("missing field '") + key + "'");
  std::vector<T> out;
  flatten(doc.at(key), std::span<const int>(shape), out, key);
  return out;
}

json kernel_to_json(std::span<const double> flat, int steps, int S, int A) {
  json layers = json::array();
  std::size_t i = 0;
  for (int h = 0; h < steps; ++h) {
    json states = json::array();
    for (int s = 0; s < S; ++s) {
      json actions = json::array();
      for (int a = 0; a < A; ++a) {
        json row = json::array();
        for (int next = 0; next < S; ++next) row.push_back(flat[i++]);
        actions.push_back(std::move(row));
      }
      states.push_back(std::move(actions));
    }
    layers.push_back(std::move(states));
  }
  return layers;
}

json step_table_to_json(std::span<const double> flat, int steps, int S, int A) {
  json layers = json::array();
  std::size_t i = 0;
  for (int h = 0; h < steps; ++h) {
    json states = json::array();
    for (int s = 0; s < S; ++s) {
      json actions = json::array();
      for (int a = 0; a < A; ++a) actions.push_back(flat[i++]);
      states.push_back(std::move(actions));
    }
    layers.push_back(std::move(states));
  }
  return layers;
}

}  // namespace

json to_json(const TabularMdp& mdp, const std::vector<RewardFunction>& rewards) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  const int H = mdp.horizon();
  json doc;
  doc["S"] = S;
  doc["A"] = A;
  doc["H"] = H;
  doc["rho"] = std::vector<double>(mdp.init_dist().begin(), mdp.init_dist().end());
  doc["P"] = kernel_to_json(mdp.kernel(), H, S, A);
  json rs = json::array();
  for (const auto& r : rewards) rs.push_back(step_table_to_json(r.values(), H, S, A));
  doc["rewards"] = std::move(rs);
  return doc;
}

MdpDocument mdp_from_json(const json& doc) {
  try {
    const int S = positive_int(doc, "S");
    const int A = positive_int(doc, "A");
    const int H = positive_int(doc, "H");
    auto rho = read_tensor<double>(doc, "rho", {S});
    auto kernel = read_tensor<double>(doc, "P", {H, S, A, S});
    TabularMdp mdp(S, A, H, std::move(kernel), std::move(rho));
    std::vector<RewardFunction> rewards;
    if (doc.contains("rewards")) {
      const auto& rs = doc.at("rewards");
      require(rs.is_array(), "rewards: expected an array");
      for (const auto& r : rs) {
        std::vector<double> flat;
        const std::vector<int> shape{H, S, A};
        flatten(r, std::span<const int>(shape), flat, "rewards");
        rewards.emplace_back(S, A, H, std::move(flat));
      }
    }
    return MdpDocument{std::move(mdp), std::move(rewards)};
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed MDP document: ") + e.what());
  }
}

json to_json(const OccupancyModel& model) {
  const int S = model.num_states();
  const int A = model.num_actions();
  const int k = model.num_kernels();
  json doc;
  doc["S"] = S;
  doc["A"] = A;
  doc["H"] = model.horizon();
  doc["rho"] = std::vector<double>(model.rho_hat().begin(), model.rho_hat().end());
  doc["xi"] = model.threshold();
  std::vector<double> probs;
  std::vector<double> counts;
  bool has_counts = true;
  for (int h = 0; h < k; ++h) {
    const auto& kernel = model.kernel(h);
    probs.insert(probs.end(), kernel.probs.begin(), kernel.probs.end());
    has_counts = has_counts && !kernel.counts.empty();
    if (has_counts) counts.insert(counts.end(), kernel.counts.begin(), kernel.counts.end());
  }
  doc["P"] = kernel_to_json(probs, k, S, A);
  // Kernels copied from a known MDP carry no counts.
  if (has_counts) doc["counts"] = step_table_to_json(counts, k, S, A);
  return doc;
}

OccupancyModel occupancy_model_from_json(const json& doc) {
  try {
    const int S = positive_int(doc, "S");
    const int A = positive_int(doc, "A");
    const int H = positive_int(doc, "H");
    require(doc.contains("xi") && doc.at("xi").is_number(), "missing numeric field 'xi'");
    const double xi = doc.at("xi").get<double>();
    require(doc.contains("P") && doc.at("P").is_array(), "missing field 'P'");
    const int k = static_cast<int>(doc.at("P").size());
    require(k <= H - 1, "P: at most H-1 estimated steps");
    OccupancyModel model(S, A, H, read_tensor<double>(doc, "rho", {S}), xi);
    auto probs = read_tensor<double>(doc, "P", {k, S, A, S});
    std::vector<std::int64_t> counts;
    if (doc.contains("counts")) counts = read_tensor<std::int64_t>(doc, "counts", {k, S, A});
    const auto layer = static_cast<std::size_t>(S) * A;
    for (int h = 0; h < k; ++h) {
      ThresholdedKernel kernel;
      kernel.num_states = S;
      kernel.num_actions = A;
      kernel.threshold = xi;
      const auto p0 = probs.begin() + static_cast<std::ptrdiff_t>(h * layer * S);
      kernel.probs.assign(p0, p0 + static_cast<std::ptrdiff_t>(layer * S));
      if (!counts.empty()) {
        const auto c0 = counts.begin() + static_cast<std::ptrdiff_t>(h * layer);
        kernel.counts.assign(c0, c0 + static_cast<std::ptrdiff_t>(layer));
      }
      model = model.extended(std::move(kernel));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed occupancy-model document: ") + e.what());
  }
}

void write_dataset(std::ostream& out, const offline::TransitionDataset& dataset) {
  for (int h = 0; h < dataset.horizon(); ++h) {
    for (int s = 0; s < dataset.num_states(); ++s) {
      for (int a = 0; a < dataset.num_actions(); ++a) {
        for (int next : dataset.successors(h, s, a)) out << h << ' ' << s << ' ' << a << ' ' << next << '\n';
      }
    }
  }
}

offline::TransitionDataset read_dataset(std::istream& in, int num_states, int num_actions, int horizon) {
  offline::TransitionDataset dataset(num_states, num_actions, horizon);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    int h = 0, s = 0, a = 0, next = 0;
    require(static_cast<bool>(fields >> h >> s >> a >> next),
            "dataset line " + std::to_string(line_no) + ": expected 'h s a s_next'");
    dataset.add(h, s, a, next);
  }
  return dataset;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace rax::io
