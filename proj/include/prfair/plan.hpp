#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prfair/graph.hpp"
#include "prfair/types.hpp"

namespace prfair {

struct PlanStep {
  Rewiring rewiring;
  double gain = 0.0;
  double fairness_after = 0.0;
  Index candidate_size = 0;  // ranked-prefix size used (fast paths only)
};

/// Ordered result of a rewiring run: b steps with per-step gains and the
/// fairness trajectory, plus the parameters needed to reproduce it.
/// For exact/fast the fairness column is pi(S); for exactv/fastv it is the
/// raw pi_v(S), whose increments equal the recorded gains (the organic
/// ratio differs only by the affine (x - alpha 1_{v in S})/(1 - alpha)).
struct RewiringPlan {
  std::string algorithm;
  double alpha = 0.15;
  int budget = 0;
  std::optional<std::int64_t> psi;
  std::optional<std::uint64_t> seed;
  std::optional<NodeId> source;
  int workers = 1;
  double initial_fairness = 0.0;
  std::vector<PlanStep> steps;
  std::vector<int> nonpositive_rounds;  // 1-based rounds whose best gain was <= 0
  bool fairness_estimated = false;      // trajectory sampled instead of solved
  std::optional<double> organic_initial;  // PPR variants only
  std::optional<double> organic_final;

  double final_fairness() const {
    return steps.empty() ? initial_fairness : steps.back().fairness_after;
  }

  /// CSV body "step,i,j,k,gain,fairness_after" (plus ",psi,seed,k_size"
  /// when psi is set). Byte-identical for identical runs.
  void write_csv(std::ostream& out) const;

  nlohmann::json summary() const;
};

}  // namespace prfair
