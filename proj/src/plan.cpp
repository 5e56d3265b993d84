#include "prfair/plan.hpp"

#include <cstdio>

#include "prfair/io.hpp"

namespace prfair {

std::string fmt_g(double value, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt_g(m(i, j), 17);
    }
    out << '\n';
  }
}

void write_vector_csv(std::ostream& out, const Vector& v, const std::string& header) {
  out << "node," << header << '\n';
  for (Index i = 0; i < v.size(); ++i) out << i << ',' << fmt_g(v(i), 17) << '\n';
}

void RewiringPlan::write_csv(std::ostream& out) const {
  const bool sampled = psi.has_value();
  out << "step,i,j,k,gain,fairness_after";
  if (sampled) out << ",psi,seed,k_size";
  out << '\n';
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const PlanStep& s = steps[t];
    out << (t + 1) << ',' << s.rewiring.source << ',' << s.rewiring.removed_target << ','
        << s.rewiring.added_target << ',' << fmt_g(s.gain) << ',' << fmt_g(s.fairness_after);
    if (sampled) out << ',' << *psi << ',' << (seed ? *seed : 0) << ',' << s.candidate_size;
    out << '\n';
  }
}

nlohmann::json RewiringPlan::summary() const {
  nlohmann::json params{{"alpha", alpha}, {"budget", budget}, {"workers", workers}};
  if (psi) params["psi"] = *psi;
  if (seed) params["seed"] = *seed;
  if (source) params["source"] = *source;

  nlohmann::json j{{"algorithm", algorithm},
                   {"params", params},
                   {"initial_fairness", initial_fairness},
                   {"final_fairness", final_fairness()},
                   {"fairness_estimated", fairness_estimated},
                   {"nonpositive_rounds", nonpositive_rounds}};
  auto& gains = j["per_round_gains"] = nlohmann::json::array();
  for (const PlanStep& s : steps) gains.push_back(s.gain);
  if (psi) {
    auto& ks = j["k_sizes"] = nlohmann::json::array();
    for (const PlanStep& s : steps) ks.push_back(s.candidate_size);
  }
  if (organic_initial) j["organic_initial"] = *organic_initial;
  if (organic_final) j["organic_final"] = *organic_final;
  return j;
}

}  // namespace prfair
