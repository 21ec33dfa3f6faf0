#pragma once

#include <cstdint>

#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so samples do not depend on evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on (0, 1).
  double uniform(std::uint64_t counter) const;
  /// Standard normal via Box-Muller on counters 2c, 2c+1.
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

enum class SpectrumShape {
  flat,     // i.i.d. standard complex Gaussian coefficients
  decaying  // same, scaled by <k>^{-s-1}
};

/// Random real trig polynomial on |k| <= degree stored with max_mode >=
/// degree. Coefficient k depends only on (seed, stream, k), so raising the
/// degree extends a sample without changing its lower modes. Mean is zero.
SpectralField random_trig_polynomial(std::uint64_t seed, std::uint64_t stream, int degree,
                                     int max_mode, SpectrumShape shape, double s = 0.0);

/// Data just inside H^s: |f^(k)| = <k>^{-(s+1/2)} / (1 + log <k>) for
/// 1 <= k <= max_mode, with phases uniform from (seed, stream).
SpectralField rough_field(std::uint64_t seed, std::uint64_t stream, double s, int max_mode);

}  // namespace kdvbbm
