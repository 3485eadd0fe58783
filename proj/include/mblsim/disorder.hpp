#pragma once

#include <cstdint>
#include <vector>

namespace mblsim {

// Site-dependent disorder D_i, each drawn uniformly from [-w, w].
struct DisorderRealization {
  double w = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  int n() const { return static_cast<int>(values.size()); }
};

// Pure function of (w, seed, n); bit-identical on regeneration.
DisorderRealization sample_disorder(double w, std::uint64_t seed, int n);

}  // namespace mblsim
