#include "mblsim/disorder.hpp"

#include "mblsim/errors.hpp"
#include "mblsim/rng.hpp"

namespace mblsim {

DisorderRealization sample_disorder(double w, std::uint64_t seed, int n) {
  if (w < 0.0) throw ConfigError("disorder half-width must be nonnegative");
  if (n < 0) throw ConfigError("site count must be nonnegative");
  DisorderRealization d;
  d.w = w;
  d.seed = seed;
  d.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(counter_rng(seed, static_cast<std::uint64_t>(i)));
    d.values[i] = w * (2.0 * u - 1.0);
  }
  return d;
}

}  // namespace mblsim
