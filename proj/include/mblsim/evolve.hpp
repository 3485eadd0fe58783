#pragma once

#include <functional>
#include <vector>

#include "mblsim/hamiltonian.hpp"

namespace mblsim {

enum class EvolutionMethod { Auto, Spectral, Krylov };

// Auto switches from the amortized full diagonalization to Krylov stepping
// above this site count.
inline constexpr int kSpectralKrylovSwitch = 12;

struct KrylovOptions {
  int max_dim = 30;
  double tolerance = 1e-9;
  int max_step_halvings = 40;
};

// psi(t) = exp(-i H t) psi0.
StateVector evolve(const StateVector& psi0, const HamiltonianOperator& h, double t,
                   EvolutionMethod method = EvolutionMethod::Auto,
                   const KrylovOptions& opts = {});

// Visits psi(t_k) for an ascending time grid. The spectral path reuses the
// cached diagonalization across the grid; the Krylov path steps from point
// to point.
void evolve_grid(const StateVector& psi0, const HamiltonianOperator& h,
                 const std::vector<double>& times,
                 const std::function<void(int, const StateVector&)>& visit,
                 EvolutionMethod method = EvolutionMethod::Auto,
                 const KrylovOptions& opts = {});

// 50 log-spaced points in J_max t over [0.01, 10] plus t = 0.
std::vector<double> default_time_grid();

}  // namespace mblsim
