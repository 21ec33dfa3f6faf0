#include "kdvbbm/random.hpp"

#include <cmath>
#include <numbers>

namespace kdvbbm {
namespace {

std::uint64_t mix(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix(mix(mix(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  const double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SpectralField random_trig_polynomial(std::uint64_t seed, std::uint64_t stream, int degree,
                                     int max_mode, SpectrumShape shape, double s) {
  const CounterRng rng(seed, stream);
  SpectralField f(max_mode);
  for (int k = 1; k <= degree && k <= max_mode; ++k) {
    const auto c = static_cast<std::uint64_t>(k);
    double scale = std::numbers::sqrt2 / 2.0;  // unit complex variance
    if (shape == SpectrumShape::decaying) scale *= std::pow(1.0 + double(k) * k, -(s + 1.0) / 2.0);
    f.set(k, scale * Complex(rng.normal(2 * c), rng.normal(2 * c + 1)));
  }
  return f;
}

SpectralField rough_field(std::uint64_t seed, std::uint64_t stream, double s, int max_mode) {
  const CounterRng rng(seed, stream);
  SpectralField f(max_mode);
  for (int k = 1; k <= max_mode; ++k) {
    const double b = std::sqrt(1.0 + double(k) * k);
    const double amp = std::pow(b, -(s + 0.5)) / (1.0 + std::log(b));
    f.set(k, std::polar(amp, 2.0 * std::numbers::pi * rng.uniform(static_cast<std::uint64_t>(k))));
  }
  return f;
}

}  // namespace kdvbbm
