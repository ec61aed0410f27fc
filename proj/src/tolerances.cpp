#include "mml/tolerances.hpp"

#include <stdexcept>

namespace mml::report {

const std::map<std::string, Tolerance>& tolerance_registry() {
  static const std::map<std::string, Tolerance> reg = {
      // exact structural identities
      {"trace_zero", {0.0, Scaling::Constant}},
      {"hamiltonian_anomaly", {0.0, Scaling::Constant}},
      // golden level-3 fixtures
      {"golden_q3", {1e-12, Scaling::Constant}},
      {"golden_p3", {1e-12, Scaling::Constant}},
      {"golden_d3", {1e-12, Scaling::Constant}},
      {"golden_h3", {1e-12, Scaling::Constant}},
      {"golden_dq3", {1e-12, Scaling::Constant}},
      // modal structure
      {"last_row_constant", {1e-10, Scaling::Constant}},
      {"kocher_orthogonality", {1e-13, Scaling::Constant}},
      {"kocher_diagonal_map", {1e-13, Scaling::Constant}},
      {"block_structure", {1e-9, Scaling::Constant}},
      {"block_orthogonality", {1e-9, Scaling::Constant}},
      // transformed operators
      {"action_position_identity", {1e-9, Scaling::LinearInDim}},
      {"momentum_basis_structure", {1e-9, Scaling::LinearInDim}},
      {"kernel_match", {1e-8, Scaling::LinearInDim}},
      {"kernel_diagonal", {1e-12, Scaling::Constant}},
      {"commutator_reconstruction", {1e-9, Scaling::LinearInDim}},
      // spectra
      {"eig_oracle_agreement", {1e-12, Scaling::Constant}},
      {"gap_monotonicity", {1e-12, Scaling::Constant}},
      {"resolvent_cauchy_trend", {0.0, Scaling::Constant}},
      // states
      {"uncertainty_margin", {1e-10, Scaling::Constant}},
      {"coherent_saturation", {1e-8, Scaling::Constant}},
      {"action_mean_unity", {1e-12, Scaling::Constant}},
      // tool-level determinism
      {"report_determinism", {0.0, Scaling::Constant}},
      {"export_roundtrip", {0.0, Scaling::Constant}},
  };
  return reg;
}

double tolerance_for(const std::string& name, int dim) {
  return tolerance_registry().at(name).at(dim);
}

bool known_check(const std::string& name) {
  return tolerance_registry().count(name) != 0;
}

}  // namespace mml::report
