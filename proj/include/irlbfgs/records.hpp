#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace irlbfgs {

// Ordered flat key-value map; the config snapshot and sidecar format.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

const std::string* kv_find(const KeyValues& kv, const std::string& key);
void kv_set(KeyValues& kv, const std::string& key, std::string value);

// Telemetry for one logged iteration. gamma/mu always match the schedule
// functions for the same plan and k.
struct IterationRecord {
  long k = 0;
  double gamma = 0.0;
  double mu = 0.0;
  double f = 0.0;                // full objective at x_k, evaluated exactly
  std::optional<double> f_reg;   // anchored/regularized objective, when defined
  double dir_norm = 0.0;
  int resampled = 0;             // zero-direction redraws during this step
};

struct RunRecord {
  KeyValues config;  // full effective-config snapshot, defaults included
  std::uint64_t seed = 0;
  std::string algorithm;
  std::vector<IterationRecord> records;  // sorted by k
  double wall_time_seconds = 0.0;
};

}  // namespace irlbfgs
