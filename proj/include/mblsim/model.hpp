#pragma once

#include "mblsim/couplings.hpp"
#include "mblsim/disorder.hpp"

namespace mblsim {

// Complete Hamiltonian specification: couplings J_ij, transverse field B and
// on-site disorder D_i. Energies are in units of the coupling scale
// (j_max = 1, or the Kac-normalized J = 1) unless physical units were
// requested from the normal-mode path.
struct ModelSpec {
  CouplingMatrix couplings;
  double field_b = 0.0;
  DisorderRealization disorder;

  int n() const { return couplings.n(); }
  void validate() const;  // dimensions agree
};

ModelSpec make_model(CouplingMatrix couplings, double field_b, DisorderRealization disorder);

// Convenience: disorder sampled from (w, seed) at the coupling dimension.
ModelSpec make_model(CouplingMatrix couplings, double field_b, double w, std::uint64_t seed);

}  // namespace mblsim
