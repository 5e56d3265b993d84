#pragma once

#include <optional>

#include "prfair/graph.hpp"
#include "prfair/types.hpp"

namespace prfair {

inline constexpr Index kDefaultDenseCap = 20000;

/// Dense PageRank matrix Pi = alpha * (I - (1-alpha) P)^-1 together with
/// the restart probability and the jump vector. Row i of Pi is the
/// personalized PageRank vector of node i; every row sums to 1.
struct PiMatrix {
  Matrix pi;
  double alpha = 0.15;
  Vector jump;  // probability vector v, uniform by default

  Index size() const { return pi.rows(); }
};

/// Auxiliary vectors entering the closed-form gains:
///   sigma = v^T Pi  (column averages for the uniform jump vector),
///   eta   = Pi 1_S  (proximity of each node to the group),
///   sigma_tilde = row `source` of Pi when a PPR source is given.
struct AuxVectors {
  Vector sigma;
  Vector eta;
  std::optional<Vector> sigma_tilde;
  std::optional<NodeId> source;
};

/// Dense row-stochastic transition matrix P = D^-1 A. Requires every node
/// to have positive out-degree.
Matrix transition_matrix(const DirectedGraph& g);

/// alpha * (I - (1-alpha) P)^-1 via LU solve; scalar-generic over the
/// expression's own scalar type.
template <typename DerivedP>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic>
resolvent_from_transition(const Eigen::MatrixBase<DerivedP>& transition,
                          typename DerivedP::Scalar restart) {
  using Scalar = typename DerivedP::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = transition.rows();
  Mat system = (-(Scalar(1) - restart)) * transition;
  system.diagonal().array() += Scalar(1);
  Mat rhs = Mat::Identity(n, n) * restart;
  return system.partialPivLu().solve(rhs);
}

/// Computes Pi for the graph. Throws ConfigError when n exceeds dense_cap
/// (the sampling path is the intended fallback at that size).
PiMatrix compute_pi(const DirectedGraph& g, double alpha,
                    std::optional<Vector> jump = std::nullopt,
                    Index dense_cap = kDefaultDenseCap);

/// Forest matrix (L + I)^-1 of the reweighted graph, built from its stored
/// arc weights; equals compute_pi(g, alpha).pi up to solver tolerance.
Matrix forest_matrix(const ReweightedGraph& gr);

/// PageRank vector pi^T = v^T Pi.
Vector pagerank_vector(const PiMatrix& pi);

/// Total mass sum_{i in S} x_i of any score vector over the group.
template <typename DerivedV>
typename DerivedV::Scalar group_mass(const Eigen::MatrixBase<DerivedV>& scores,
                                     const GroupPartition& group) {
  typename DerivedV::Scalar total(0);
  for (NodeId s : group.members()) total += scores(s);
  return total;
}

/// Organic PPR ratio of source v for group S:
/// (pi_v(S) - alpha * 1_{v in S}) / (1 - alpha).
double normalized_ppr_mass(const PiMatrix& pi, NodeId source, const GroupPartition& group);

AuxVectors aux_vectors(const PiMatrix& pi, const GroupPartition& group,
                       std::optional<NodeId> source = std::nullopt);

/// Sherman-Morrison denominator tau = alpha + (1-alpha) p_ij (Pi_ji - Pi_ki);
/// positive for every legal rewiring.
double tau(const PiMatrix& pi, const DirectedGraph& g, const Rewiring& r);

/// Exact PR fairness gain of a rewiring:
/// Delta = (1-alpha) p_ij sigma_i (eta_k - eta_j) / tau.
double gain_pr(const AuxVectors& aux, const PiMatrix& pi, const DirectedGraph& g,
               const Rewiring& r);

/// Exact PPR fairness gain for the aux source node, using sigma_tilde.
double gain_ppr(const AuxVectors& aux, const PiMatrix& pi, const DirectedGraph& g,
                const Rewiring& r);

/// Rank-one update of Pi for the rewiring, in place:
/// Pi' = Pi - (1-alpha)/tau * (p_ij Pi[:,i]) (Pi[j,:] - Pi[k,:]).
/// `g` must still be in its pre-rewiring state.
void sherman_morrison_update(PiMatrix& pi, const DirectedGraph& g, const Rewiring& r);

/// Max row-sum deviation from 1; used to detect drift after chained
/// rank-one updates.
double row_sum_drift(const PiMatrix& pi);

/// Fairness objective from a single dense solve, without forming Pi:
/// pi(S) under the uniform jump vector, or pi_v(S) when a source is given.
double exact_fairness(const DirectedGraph& g, const GroupPartition& group, double alpha,
                      std::optional<NodeId> source = std::nullopt,
                      Index dense_cap = kDefaultDenseCap);

}  // namespace prfair
