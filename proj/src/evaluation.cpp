#include "prfair/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prfair/errors.hpp"
#include "prfair/forest.hpp"

namespace prfair {

AuditReport fairness_audit(const DirectedGraph& g, const GroupPartition& group, double alpha,
                           const AuditOptions& options) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const Index n = g.node_count();
  AuditReport report;
  report.ratio = group.ratio();
  report.phi = group.phi();
  report.alpha = alpha;

  Vector eta;
  if (n <= options.dense_cap) {
    Matrix system = (-(1.0 - alpha)) * transition_matrix(g);
    system.diagonal().array() += 1.0;
    Vector rhs = Vector::Zero(n);
    for (NodeId s : group.members()) rhs(s) = alpha;
    eta = system.partialPivLu().solve(rhs);
    const Vector jump = Vector::Constant(n, alpha / static_cast<double>(n));
    const Vector pr = system.transpose().partialPivLu().solve(jump);
    report.pi_group = group_mass(pr, group);
  } else {
    if (!options.psi)
      throw ConfigError("graph above the dense cap; provide psi (or eps/delta) to audit "
                        "with the sampling fallback");
    const EstimatorSet est = estimate_aux(ForestSampler(g, alpha), *options.psi, group,
                                          std::nullopt, options.seed,
                                          EstimatorOptions{options.workers});
    eta = est.eta;
    report.pi_group = group_mass(est.sigma, group);
    report.estimated = true;
    report.psi = *options.psi;
    report.seed = options.seed;
  }

  // Dead zone of 1e-13 absorbs dense-solver rounding so that exact
  // symmetry (pi(S) mathematically equal to phi) does not flag as unfair,
  // while genuine gaps at the 1e-12 scale still flip the flag.
  report.unfair = report.pi_group < report.phi - 1e-13;
  report.organic_per_node = Vector::Zero(n);
  for (Index v = 0; v < n; ++v) {
    const double self = group.contains(static_cast<NodeId>(v)) ? alpha : 0.0;
    report.organic_per_node(v) = (eta(v) - self) / (1.0 - alpha);
  }
  return report;
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw ConfigError("wasserstein_1d requires non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  // Sweep the merged support, integrating |F_a(x) - F_b(x)| dx.
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0, ib = 0;
  double distance = 0.0;
  double prev = std::min(sa.front(), sb.front());
  while (ia < sa.size() || ib < sb.size()) {
    const double x = [&] {
      if (ia == sa.size()) return sb[ib];
      if (ib == sb.size()) return sa[ia];
      return std::min(sa[ia], sb[ib]);
    }();
    distance += std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb) *
                (x - prev);
    prev = x;
    while (ia < sa.size() && sa[ia] == x) ++ia;
    while (ib < sb.size() && sb[ib] == x) ++ib;
  }
  return distance;
}

double relative_error(double approx_fairness, double exact_fairness) {
  if (!(exact_fairness > 0.0))
    throw ConfigError("relative_error requires a positive exact value");
  return std::abs(approx_fairness - exact_fairness) / exact_fairness * 100.0;
}

std::int64_t count_legal_rewirings(const DirectedGraph& g) {
  const Index n = g.node_count();
  std::int64_t total = 0;
  for (NodeId i = 0; i < n; ++i)
    total += static_cast<std::int64_t>(g.out_count(i)) *
             static_cast<std::int64_t>(n - 1 - g.out_count(i));
  return total;
}

std::optional<Rewiring> sample_legal_rewiring(const DirectedGraph& g, RandomStream& rng) {
  const Index n = g.node_count();
  // Per-source pair counts deg_i * (n - 1 - deg_i); both factors are
  // invariant under rewiring.
  std::vector<std::uint64_t> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (Index i = 0; i < n; ++i) {
    const auto deg = static_cast<std::uint64_t>(g.out_count(static_cast<NodeId>(i)));
    const auto legal = static_cast<std::uint64_t>(n - 1 - g.out_count(static_cast<NodeId>(i)));
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + deg * legal;
  }
  const std::uint64_t total = prefix.back();
  if (total == 0) return std::nullopt;

  const std::uint64_t draw = rng.bounded(total);
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), draw);
  const NodeId i = static_cast<NodeId>(std::distance(prefix.begin(), it) - 1);
  const std::uint64_t pair_index = draw - prefix[static_cast<std::size_t>(i)];
  const auto legal = static_cast<std::uint64_t>(n - 1 - g.out_count(i));
  const auto arcs = g.out(i);
  const NodeId j = arcs[static_cast<std::size_t>(pair_index / legal)].target;
  std::uint64_t rank = pair_index % legal;

  // Map rank to the rank-th node id outside N(i) u {i} by walking the
  // sorted adjacency gaps.
  NodeId next_free = 0;
  for (std::size_t t = 0; t <= arcs.size(); ++t) {
    const NodeId bound = t < arcs.size() ? arcs[t].target : static_cast<NodeId>(n);
    while (next_free < bound) {
      if (next_free != i) {
        if (rank == 0) return Rewiring{i, j, next_free};
        --rank;
      }
      ++next_free;
    }
    ++next_free;  // skip the neighbor itself
  }
  throw InternalError("legal rewiring rank mapping walked off the node range");
}

RewiringPlan random_baseline(const DirectedGraph& g, const GroupPartition& group, int budget,
                             double alpha, std::uint64_t seed,
                             const RandomBaselineOptions& options) {
  if (budget < 1) throw ConfigError("budget must be at least 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");

  DirectedGraph graph = g;
  const Index n = graph.node_count();
  const bool exact_trajectory = n <= options.dense_cap;
  if (!exact_trajectory && !options.psi)
    throw ConfigError("graph above the dense cap; provide psi for the estimated trajectory");

  RewiringPlan plan;
  plan.algorithm = "random";
  plan.alpha = alpha;
  plan.budget = budget;
  plan.seed = seed;
  plan.workers = std::max(1, options.workers);
  plan.fairness_estimated = !exact_trajectory;
  if (!exact_trajectory) plan.psi = options.psi;

  auto fairness = [&](std::uint64_t salt) {
    if (exact_trajectory) return exact_fairness(graph, group, alpha, std::nullopt, options.dense_cap);
    const EstimatorSet est =
        estimate_aux(ForestSampler(graph, alpha), *options.psi, group, std::nullopt,
                     derive_seed(seed, 1000003 + salt), EstimatorOptions{plan.workers});
    return group_mass(est.sigma, group);
  };

  plan.initial_fairness = fairness(0);
  double previous = plan.initial_fairness;
  RandomStream rng(derive_seed(seed, 0));
  for (int round = 1; round <= budget; ++round) {
    const auto r = sample_legal_rewiring(graph, rng);
    if (!r)
      throw AlgorithmError("no legal rewiring exists at round " + std::to_string(round) +
                           "; completed " + std::to_string(round - 1) + " steps");
    apply_rewiring(graph, *r);
    const double after = fairness(static_cast<std::uint64_t>(round));
    plan.steps.push_back({*r, after - previous, after, 0});
    if (!(after - previous > 0.0)) plan.nonpositive_rounds.push_back(round);
    previous = after;
  }
  return plan;
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("pearson_correlation requires two equally sized samples (n >= 2)");
  const auto n = static_cast<long double>(x.size());
  long double mx = 0.0L, my = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double dx = x[i] - mx;
    const long double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0L || syy == 0.0L)
    throw AlgorithmError("pearson_correlation undefined for a constant sample");
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_correlation(rx, ry);
}

CorrelationReport gain_correlation(const DirectedGraph& g, const GroupPartition& group,
                                   double alpha, Index sample_size, std::uint64_t seed,
                                   Index dense_cap) {
  if (sample_size < 3) throw ConfigError("sample_size must be at least 3");
  if (count_legal_rewirings(g) < 3)
    throw AlgorithmError("fewer than 3 legal rewirings; not enough data to correlate");

  const PiMatrix pi = compute_pi(g, alpha, std::nullopt, dense_cap);
  const AuxVectors aux = aux_vectors(pi, group);

  CorrelationReport report;
  report.exact_gains.reserve(static_cast<std::size_t>(sample_size));
  report.approx_gains.reserve(static_cast<std::size_t>(sample_size));
  RandomStream rng(derive_seed(seed, 0));
  for (Index s = 0; s < sample_size; ++s) {
    const auto r = sample_legal_rewiring(g, rng);
    if (!r) throw AlgorithmError("no legal rewiring available");
    const double delta = gain_pr(aux, pi, g, *r);
    const double t = tau(pi, g, *r);
    report.exact_gains.push_back(delta);
    report.approx_gains.push_back(delta * t);
  }
  report.pearson = pearson_correlation(report.exact_gains, report.approx_gains);
  report.spearman = spearman_correlation(report.exact_gains, report.approx_gains);
  return report;
}

}  // namespace prfair
