#include "prfair/forest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "prfair/errors.hpp"

namespace prfair {

std::int64_t required_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  return static_cast<std::int64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

template <typename OutOf>
void ForestSampler::build(Index n, Index arc_total, OutOf&& out_of) {
  if (arc_total > std::numeric_limits<std::int32_t>::max())
    throw ConfigError("sampler supports at most 2^31 - 1 arcs");
  n_ = n;
  offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
  uniform_.assign(static_cast<std::size_t>(n_), 1);
  target_.reserve(static_cast<std::size_t>(arc_total));

  bool any_weighted = false;
  for (Index i = 0; i < n; ++i) {
    const std::span<const Arc> arcs = out_of(static_cast<NodeId>(i));
    for (const Arc& a : arcs) target_.push_back(a.target);
    offset_[static_cast<std::size_t>(i) + 1] =
        offset_[static_cast<std::size_t>(i)] + static_cast<std::int32_t>(arcs.size());
    for (std::size_t t = 1; t < arcs.size(); ++t) {
      if (arcs[t].weight != arcs[0].weight) {
        uniform_[static_cast<std::size_t>(i)] = 0;
        any_weighted = true;
        break;
      }
    }
  }
  if (any_weighted) {
    cdf_.assign(static_cast<std::size_t>(arc_total), 0.0);
    for (Index i = 0; i < n; ++i) {
      const std::span<const Arc> arcs = out_of(static_cast<NodeId>(i));
      if (arcs.empty()) continue;
      double total = 0.0;
      for (const Arc& a : arcs) total += a.weight;
      double acc = 0.0;
      const auto base = static_cast<std::size_t>(offset_[static_cast<std::size_t>(i)]);
      for (std::size_t t = 0; t < arcs.size(); ++t) {
        acc += arcs[t].weight / total;
        cdf_[base + t] = acc;
      }
      cdf_[base + arcs.size() - 1] = 1.0;
    }
  }
}

ForestSampler::ForestSampler(const DirectedGraph& g, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  alpha_ = alpha;
  build(g.node_count(), g.arc_count(), [&](NodeId i) { return g.out(i); });
}

ForestSampler::ForestSampler(const ReweightedGraph& gr) {
  alpha_ = gr.alpha;
  Index arc_total = 0;
  for (Index i = 0; i < gr.node_count(); ++i)
    arc_total += static_cast<Index>(gr.out(static_cast<NodeId>(i)).size());
  build(gr.node_count(), arc_total, [&](NodeId i) { return gr.out(i); });
}

NodeId ForestSampler::step(NodeId u, RandomStream& rng) const {
  const std::int32_t begin = offset_[static_cast<std::size_t>(u)];
  const std::int32_t degree = offset_[static_cast<std::size_t>(u) + 1] - begin;
  if (uniform_[static_cast<std::size_t>(u)]) {
    return target_[static_cast<std::size_t>(begin) +
                   rng.bounded(static_cast<std::uint64_t>(degree))];
  }
  const double x = rng.uniform01();
  const double* first = cdf_.data() + begin;
  const double* last = first + degree;
  const double* it = std::lower_bound(first, last, x);
  if (it == last) --it;
  return target_[static_cast<std::size_t>(begin + (it - first))];
}

ForestSample ForestSampler::sample(RandomStream& rng) const {
  ForestWorkspace ws;
  sample_into(rng, ws);
  return ForestSample{std::move(ws.root), std::move(ws.parent)};
}

namespace {

struct Tally {
  std::vector<std::int64_t> sigma;
  std::vector<std::int64_t> eta;
  std::vector<std::int64_t> sigma_tilde;
  std::uint64_t steps = 0;
};

void run_worker(const ForestSampler& sampler, std::int64_t quota,
                const std::vector<std::uint8_t>& in_group, std::optional<NodeId> source,
                std::uint64_t stream_seed, Tally& tally) {
  const std::size_t n = static_cast<std::size_t>(sampler.node_count());
  tally.sigma.assign(n, 0);
  tally.eta.assign(n, 0);
  if (source) tally.sigma_tilde.assign(n, 0);

  RandomStream rng(stream_seed);
  ForestWorkspace ws;
  std::int64_t* const sigma = tally.sigma.data();
  std::int64_t* const eta = tally.eta.data();
  const std::uint8_t* const group = in_group.data();
  for (std::int64_t s = 0; s < quota; ++s) {
    // Tallies ride along with the walk: sigma counts flush once per
    // branch, eta writes hit nodes whose lines the retrace just touched.
    NodeId branch_root = kNoNode;
    std::int64_t branch_size = 0;
    std::int64_t rooted_in_group = 0;
    tally.steps += sampler.sample_visit(rng, ws, [&](NodeId u, NodeId r) {
      if (r != branch_root) {
        if (branch_size) sigma[branch_root] += branch_size;
        branch_root = r;
        branch_size = 0;
        rooted_in_group = group[static_cast<std::size_t>(r)];
      }
      ++branch_size;
      eta[u] += rooted_in_group;
    });
    if (branch_size) sigma[branch_root] += branch_size;
    if (source)
      ++tally.sigma_tilde[static_cast<std::size_t>(ws.root[static_cast<std::size_t>(*source)])];
  }
}

}  // namespace

EstimatorSet estimate_aux(const ForestSampler& sampler, std::int64_t psi,
                          const GroupPartition& group, std::optional<NodeId> source,
                          std::uint64_t seed, const EstimatorOptions& options) {
  if (psi < 1) throw ConfigError("psi must be at least 1");
  const int workers = std::max(1, options.workers);
  const std::size_t n = static_cast<std::size_t>(sampler.node_count());
  const auto& in_group = group.membership();

  std::vector<Tally> tallies(static_cast<std::size_t>(workers));
  if (workers == 1) {
    run_worker(sampler, psi, in_group, source, derive_seed(seed, 0), tallies[0]);
  } else {
    const std::int64_t base = psi / workers;
    const std::int64_t remainder = psi % workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const std::int64_t quota = base + (w < remainder ? 1 : 0);
      threads.emplace_back([&, w, quota] {
        try {
          run_worker(sampler, quota, in_group, source,
                     derive_seed(seed, static_cast<std::uint64_t>(w)),
                     tallies[static_cast<std::size_t>(w)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  EstimatorSet est;
  est.psi = psi;
  est.seed = seed;
  est.sigma = Vector::Zero(static_cast<Index>(n));
  est.eta = Vector::Zero(static_cast<Index>(n));
  if (source) est.sigma_tilde = Vector::Zero(static_cast<Index>(n));
  for (const Tally& tally : tallies) {
    est.total_steps += tally.steps;
    for (std::size_t j = 0; j < n; ++j) {
      est.sigma(static_cast<Index>(j)) += static_cast<double>(tally.sigma[j]);
      est.eta(static_cast<Index>(j)) += static_cast<double>(tally.eta[j]);
    }
    if (source)
      for (std::size_t j = 0; j < n; ++j)
        (*est.sigma_tilde)(static_cast<Index>(j)) += static_cast<double>(tally.sigma_tilde[j]);
  }
  const double inv_psi = 1.0 / static_cast<double>(psi);
  est.sigma *= inv_psi / static_cast<double>(n);
  est.eta *= inv_psi;
  if (source) *est.sigma_tilde *= inv_psi;
  return est;
}

EstimatorSet estimate_aux(const ReweightedGraph& gr, std::int64_t psi,
                          const GroupPartition& group, std::optional<NodeId> source,
                          std::uint64_t seed, const EstimatorOptions& options) {
  return estimate_aux(ForestSampler(gr), psi, group, source, seed, options);
}

ForestSample sample_forest(const ReweightedGraph& gr, RandomStream& rng) {
  return ForestSampler(gr).sample(rng);
}

}  // namespace prfair
