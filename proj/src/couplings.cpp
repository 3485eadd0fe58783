#include "mblsim/couplings.hpp"

#include <cmath>
#include <string>

#include "mblsim/errors.hpp"

namespace mblsim {

void TrapSpec::validate() const {
  if (ion_count < 2) throw ConfigError("trap needs at least 2 ions");
  if (anisotropy <= 0) throw ConfigError("anisotropy must be positive");
  if (rabi_frequency <= 0) throw ConfigError("Rabi frequency must be positive");
  if (recoil_frequency <= 0) throw ConfigError("recoil frequency must be positive");
  if (resonance_margin <= 0) throw ConfigError("resonance margin must be positive");
  const NormalModes modes =
      transverse_modes(equilibrium_positions(ion_count), anisotropy);  // throws on zig-zag
  for (int m = 0; m < ion_count; ++m) {
    const double w = modes.frequencies(m);
    if (std::abs(beatnote_detuning - w) <= resonance_margin * w) {
      throw ResonanceError("beatnote detuning " + std::to_string(beatnote_detuning) +
                           " within margin of mode " + std::to_string(m + 1) +
                           " at frequency " + std::to_string(w));
    }
  }
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd values, CouplingProvenance provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.rows() != values_.cols()) throw ConfigError("coupling matrix must be square");
  const int n = static_cast<int>(values_.rows());
  for (int i = 0; i < n; ++i) {
    if (values_(i, i) != 0.0) throw ConfigError("coupling matrix diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      if (values_(i, j) != values_(j, i)) {
        throw ConfigError("coupling matrix must be exactly symmetric");
      }
    }
  }
}

double CouplingMatrix::max_abs() const {
  if (n() < 2) return 0.0;
  return values_.cwiseAbs().maxCoeff();
}

CouplingMatrix power_law_couplings(int n, double j_max, double alpha) {
  if (n < 1) throw ConfigError("need at least one site");
  if (j_max <= 0) throw ConfigError("j_max must be positive");
  if (alpha < 0) throw ConfigError("alpha must be nonnegative");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double v = j_max / std::pow(static_cast<double>(b - a), alpha);
      j(a, b) = v;
      j(b, a) = v;
    }
  }
  return CouplingMatrix(std::move(j), PowerLawRecipe{j_max, alpha});
}

double kac_norm(int n, double alpha) {
  if (n < 2) throw ConfigError("Kac normalization needs at least 2 sites");
  double sum = 0.0;
  for (int d = 1; d < n; ++d) {
    sum += (n - d) * std::pow(static_cast<double>(d), -alpha);
  }
  return sum / (n - 1);
}

CouplingMatrix kac_normalized_couplings(int n, double j, double alpha) {
  const double norm = kac_norm(n, alpha);
  const CouplingMatrix plain = power_law_couplings(n, j, alpha);
  return CouplingMatrix(plain.values() / norm, KacPowerLawRecipe{j, alpha});
}

CouplingMatrix coupling_from_modes(const TrapSpec& trap) {
  trap.validate();
  const NormalModes modes =
      transverse_modes(equilibrium_positions(trap.ion_count), trap.anisotropy);
  return coupling_from_modes(trap, modes);
}

CouplingMatrix coupling_from_modes(const TrapSpec& trap, const NormalModes& modes) {
  const int n = trap.ion_count;
  const double mu2 = trap.beatnote_detuning * trap.beatnote_detuning;
  const double prefactor = trap.rabi_frequency * trap.rabi_frequency * trap.recoil_frequency;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      double sum = 0.0;
      for (int m = 0; m < n; ++m) {
        const double wm = modes.frequencies(m);
        sum += modes.mode_matrix(a, m) * modes.mode_matrix(b, m) / (mu2 - wm * wm);
      }
      const double v = prefactor * sum;
      j(a, b) = v;
      j(b, a) = v;
    }
  }
  return CouplingMatrix(std::move(j), NormalModeRecipe{trap, 1.0});
}

CouplingMatrix coupling_from_matrix(Eigen::MatrixXd values) {
  Eigen::MatrixXd copy = values;
  return CouplingMatrix(std::move(copy), InlineCouplings{std::move(values)});
}

CouplingMatrix build_couplings(const CouplingProvenance& provenance, int n) {
  return std::visit(
      [n](const auto& recipe) -> CouplingMatrix {
        using T = std::decay_t<decltype(recipe)>;
        if constexpr (std::is_same_v<T, PowerLawRecipe>) {
          return power_law_couplings(n, recipe.j_max, recipe.alpha);
        } else if constexpr (std::is_same_v<T, KacPowerLawRecipe>) {
          return kac_normalized_couplings(n, recipe.j, recipe.alpha);
        } else if constexpr (std::is_same_v<T, NormalModeRecipe>) {
          if (recipe.trap.ion_count != n) {
            throw ConfigError("trap ion count does not match the requested size");
          }
          CouplingMatrix j = coupling_from_modes(recipe.trap);
          return CouplingMatrix(j.values() * recipe.scale,
                                NormalModeRecipe{recipe.trap, recipe.scale});
        } else {
          if (recipe.values.rows() != n) {
            throw ConfigError("inline coupling matrix does not match the requested size");
          }
          return CouplingMatrix(recipe.values, recipe);
        }
      },
      provenance);
}

AlphaFit fit_alpha(const CouplingMatrix& couplings, bool drop_edge_ions) {
  const int n_full = couplings.n();
  const int lo = drop_edge_ions ? 1 : 0;
  const int hi = drop_edge_ions ? n_full - 1 : n_full;
  const int n = hi - lo;
  if (n < 3) throw ConfigError("alpha fit needs at least 3 ions");

  // Average couplings over equal-distance pairs, one regression point per
  // distance, all distances weighted equally.
  std::vector<double> mean_j(n, 0.0);
  for (int d = 1; d < n; ++d) {
    double sum = 0.0;
    for (int a = lo; a + d < hi; ++a) {
      const double v = couplings.values()(a, a + d);
      if (v <= 0.0) throw ConfigError("alpha fit requires positive off-diagonal couplings");
      sum += v;
    }
    mean_j[d] = sum / (n - d);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int points = n - 1;
  for (int d = 1; d < n; ++d) {
    const double x = std::log(static_cast<double>(d));
    const double y = std::log(mean_j[d]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = points * sxx - sx * sx;
  const double slope = (points * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / points;
  return AlphaFit{std::exp(intercept), -slope};
}

}  // namespace mblsim
