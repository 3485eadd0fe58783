#include "mblsim/model.hpp"

#include "mblsim/errors.hpp"

namespace mblsim {

void ModelSpec::validate() const {
  if (disorder.n() != couplings.n()) {
    throw ConfigError("disorder vector length does not match the coupling matrix");
  }
  for (double d : disorder.values) {
    if (std::abs(d) > disorder.w) throw ConfigError("disorder value exceeds its half-width");
  }
}

ModelSpec make_model(CouplingMatrix couplings, double field_b, DisorderRealization disorder) {
  ModelSpec spec{std::move(couplings), field_b, std::move(disorder)};
  spec.validate();
  return spec;
}

ModelSpec make_model(CouplingMatrix couplings, double field_b, double w, std::uint64_t seed) {
  const int n = couplings.n();
  return make_model(std::move(couplings), field_b, sample_disorder(w, seed, n));
}

}  // namespace mblsim
