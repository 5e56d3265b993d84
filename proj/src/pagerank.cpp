#include "prfair/pagerank.hpp"

#include <cmath>
#include <string>

#include "prfair/errors.hpp"

namespace prfair {

Matrix transition_matrix(const DirectedGraph& g) {
  const Index n = g.node_count();
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double d = g.out_degree(static_cast<NodeId>(i));
    if (!(d > 0.0))
      throw DataError("node '" + g.label(static_cast<NodeId>(i)) +
                      "' has out-degree 0; transition matrix undefined");
    for (const Arc& a : g.out(static_cast<NodeId>(i))) p(i, a.target) = a.weight / d;
  }
  return p;
}

PiMatrix compute_pi(const DirectedGraph& g, double alpha, std::optional<Vector> jump,
                    Index dense_cap) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const Index n = g.node_count();
  if (n > dense_cap)
    throw ConfigError("graph has " + std::to_string(n) + " nodes, above the dense cap of " +
                      std::to_string(dense_cap) +
                      "; use the sampling path (fast/fastv) or raise the cap");
  PiMatrix result;
  result.alpha = alpha;
  if (jump) {
    if (jump->size() != n) throw ConfigError("jump vector length does not match node count");
    const double total = jump->sum();
    if (!(std::abs(total - 1.0) < 1e-9) || (jump->array() < 0.0).any())
      throw ConfigError("jump vector must be a probability distribution");
    result.jump = std::move(*jump);
  } else {
    result.jump = Vector::Constant(n, 1.0 / static_cast<double>(n));
  }
  result.pi = resolvent_from_transition(transition_matrix(g), alpha);
  return result;
}

Matrix forest_matrix(const ReweightedGraph& gr) {
  const Index n = gr.node_count();
  Matrix system = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double row_weight = 0.0;
    for (const Arc& a : gr.out(static_cast<NodeId>(i))) {
      system(i, a.target) -= a.weight;
      row_weight += a.weight;
    }
    system(i, i) += row_weight + 1.0;  // L + I
  }
  return system.partialPivLu().solve(Matrix::Identity(n, n));
}

Vector pagerank_vector(const PiMatrix& pi) {
  return (pi.jump.transpose() * pi.pi).transpose();
}

double normalized_ppr_mass(const PiMatrix& pi, NodeId source, const GroupPartition& group) {
  const double mass = group_mass(pi.pi.row(source).transpose(), group);
  const double self = group.contains(source) ? pi.alpha : 0.0;
  return (mass - self) / (1.0 - pi.alpha);
}

AuxVectors aux_vectors(const PiMatrix& pi, const GroupPartition& group,
                       std::optional<NodeId> source) {
  AuxVectors aux;
  aux.sigma = (pi.jump.transpose() * pi.pi).transpose();
  aux.eta = Vector::Zero(pi.size());
  for (NodeId s : group.members()) aux.eta += pi.pi.col(s);
  if (source) {
    aux.sigma_tilde = pi.pi.row(*source).transpose();
    aux.source = source;
  }
  return aux;
}

namespace {

double transition_prob_checked(const DirectedGraph& g, const Rewiring& r) {
  auto w = g.arc_weight(r.source, r.removed_target);
  if (!w) throw DataError("rewiring rejected: arc (i, j) not present");
  if (g.has_arc(r.source, r.added_target))
    throw DataError("rewiring rejected: arc (i, k) already present");
  if (r.source == r.added_target) throw DataError("rewiring rejected: k must differ from i");
  return *w / g.out_degree(r.source);
}

}  // namespace

double tau(const PiMatrix& pi, const DirectedGraph& g, const Rewiring& r) {
  const double p_ij = transition_prob_checked(g, r);
  const double value = pi.alpha + (1.0 - pi.alpha) * p_ij *
                                      (pi.pi(r.removed_target, r.source) -
                                       pi.pi(r.added_target, r.source));
  if (!(value > 0.0))
    throw InternalError("tau = " + std::to_string(value) +
                        " is not positive; numerical invariant violated");
  return value;
}

double gain_pr(const AuxVectors& aux, const PiMatrix& pi, const DirectedGraph& g,
               const Rewiring& r) {
  const double p_ij = transition_prob_checked(g, r);
  const double t = tau(pi, g, r);
  return (1.0 - pi.alpha) * p_ij * aux.sigma(r.source) *
         (aux.eta(r.added_target) - aux.eta(r.removed_target)) / t;
}

double gain_ppr(const AuxVectors& aux, const PiMatrix& pi, const DirectedGraph& g,
                const Rewiring& r) {
  if (!aux.sigma_tilde)
    throw InternalError("gain_ppr requires aux vectors built with a source node");
  const double p_ij = transition_prob_checked(g, r);
  const double t = tau(pi, g, r);
  return (1.0 - pi.alpha) * p_ij * (*aux.sigma_tilde)(r.source) *
         (aux.eta(r.added_target) - aux.eta(r.removed_target)) / t;
}

void sherman_morrison_update(PiMatrix& pi, const DirectedGraph& g, const Rewiring& r) {
  const double p_ij = transition_prob_checked(g, r);
  const double t = tau(pi, g, r);
  // Materialize both factors before touching pi: the update reads a column
  // and two rows of the matrix it overwrites.
  const Vector column = pi.pi.col(r.source) * p_ij;
  const RowVector row_diff = pi.pi.row(r.removed_target) - pi.pi.row(r.added_target);
  pi.pi.noalias() -= ((1.0 - pi.alpha) / t) * column * row_diff;
}

double row_sum_drift(const PiMatrix& pi) {
  return (pi.pi.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double exact_fairness(const DirectedGraph& g, const GroupPartition& group, double alpha,
                      std::optional<NodeId> source, Index dense_cap) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const Index n = g.node_count();
  if (n > dense_cap)
    throw ConfigError("graph above the dense cap; use the sampled fairness estimate");
  Matrix system = (-(1.0 - alpha)) * transition_matrix(g);
  system.diagonal().array() += 1.0;
  if (source) {
    Vector rhs = Vector::Zero(n);
    for (NodeId s : group.members()) rhs(s) = alpha;
    const Vector eta = system.partialPivLu().solve(rhs);  // eta_v = pi_v(S)
    return eta(*source);
  }
  const Vector jump = Vector::Constant(n, alpha / static_cast<double>(n));
  const Vector pr = system.transpose().partialPivLu().solve(jump);
  return group_mass(pr, group);
}

}  // namespace prfair
