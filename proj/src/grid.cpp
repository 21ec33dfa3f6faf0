#include "grid.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace kdvbbm::detail {
namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex plan_mutex;

const Plans* plans_for(int n) {
  static std::map<int, std::unique_ptr<Plans>> cache;
  std::lock_guard lock(plan_mutex);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<Plans>();
    std::vector<double> re(static_cast<std::size_t>(n));
    std::vector<Complex> c(static_cast<std::size_t>(n / 2 + 1));
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->r2c = fftw_plan_dft_r2c_1d(n, re.data(), cp, flags);
    slot->c2r = fftw_plan_dft_c2r_1d(n, cp, re.data(), flags);
  }
  return slot.get();
}

}  // namespace

RealFft::RealFft(int n) : n_(n), plans_(plans_for(n)) {}

void RealFft::forward(const double* in, Complex* out) const {
  const auto* p = static_cast<const Plans*>(plans_);
  fftw_execute_dft_r2c(p->r2c, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void RealFft::backward(const Complex* in, double* out) const {
  const auto* p = static_cast<const Plans*>(plans_);
  // c2r overwrites its input.
  thread_local std::vector<Complex> scratch;
  scratch.assign(in, in + n_ / 2 + 1);
  fftw_execute_dft_c2r(p->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

void to_grid(const SpectralField& f, int grid_size, std::vector<double>& out,
             bool differentiate) {
  const RealFft fft(grid_size);
  std::vector<Complex> half(static_cast<std::size_t>(grid_size / 2 + 1));
  const int top = std::min(f.max_mode(), grid_size / 2);
  for (int k = 0; k <= top; ++k) {
    Complex c = f[k];
    if (differentiate) c *= Complex(0.0, static_cast<double>(k));
    half[static_cast<std::size_t>(k)] = c;
  }
  out.resize(static_cast<std::size_t>(grid_size));
  fft.backward(half.data(), out.data());
}

SpectralField from_grid(const std::vector<double>& samples, int max_mode) {
  const int m = static_cast<int>(samples.size());
  const RealFft fft(m);
  std::vector<Complex> half(static_cast<std::size_t>(m / 2 + 1));
  fft.forward(samples.data(), half.data());
  SpectralField f(max_mode);
  const double inv = 1.0 / m;
  for (int k = 0; k <= max_mode; ++k) f.set(k, half[static_cast<std::size_t>(k)] * inv);
  return f;
}

}  // namespace kdvbbm::detail
