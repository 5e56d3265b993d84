#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prfair/pagerank.hpp"
#include "prfair/plan.hpp"
#include "prfair/rng.hpp"

namespace prfair {

/// Fairness audit of a graph against a group: PageRank mass pi(S), the
/// unfair flag pi(S) < phi, and the organic per-node PPR ratios
/// pi-bar_v(S) for every v.
struct AuditReport {
  double pi_group = 0.0;
  double ratio = 0.0;
  double phi = 0.0;
  bool unfair = false;
  Vector organic_per_node;
  double alpha = 0.15;
  bool estimated = false;
  std::optional<std::int64_t> psi;
  std::optional<std::uint64_t> seed;
};

struct AuditOptions {
  Index dense_cap = kDefaultDenseCap;
  /// Sampling fallback above the dense cap; required there.
  std::optional<std::int64_t> psi;
  std::uint64_t seed = 0;
  int workers = 1;
};

AuditReport fairness_audit(const DirectedGraph& g, const GroupPartition& group, double alpha,
                           const AuditOptions& options = {});

/// Exact first Wasserstein distance between the empirical distributions of
/// two non-empty real multisets (integral of |F_a - F_b|); handles unequal
/// sizes.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

/// |approx - exact| / exact, in percent. Requires exact > 0.
double relative_error(double approx_fairness, double exact_fairness);

struct RandomBaselineOptions {
  Index dense_cap = kDefaultDenseCap;
  /// Trajectory estimation sample count when n exceeds the dense cap.
  std::optional<std::int64_t> psi;
  int workers = 1;
};

/// Baseline plan of b uniformly random legal rewirings; the gain column
/// holds the realized fairness change per round.
RewiringPlan random_baseline(const DirectedGraph& g, const GroupPartition& group, int budget,
                             double alpha, std::uint64_t seed,
                             const RandomBaselineOptions& options = {});

double pearson_correlation(std::span<const double> x, std::span<const double> y);
/// Spearman rank correlation with average ranks on ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
  double pearson = 0.0;
  double spearman = 0.0;
  std::vector<double> exact_gains;    // Delta
  std::vector<double> approx_gains;   // Delta-hat = Delta * tau
};

/// Samples legal rewirings uniformly and correlates the exact gain Delta
/// with the tau-free surrogate Delta-hat = Delta * tau.
CorrelationReport gain_correlation(const DirectedGraph& g, const GroupPartition& group,
                                   double alpha, Index sample_size, std::uint64_t seed,
                                   Index dense_cap = kDefaultDenseCap);

/// Uniform random legal rewiring of g, or nullopt when none exists.
std::optional<Rewiring> sample_legal_rewiring(const DirectedGraph& g, RandomStream& rng);

/// Number of legal rewiring triples of g.
std::int64_t count_legal_rewirings(const DirectedGraph& g);

}  // namespace prfair
