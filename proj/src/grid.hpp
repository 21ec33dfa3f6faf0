#pragma once

// Physical-grid helpers shared by the spectral core and the solvers.

#include <vector>

#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm::detail {

/// Real DFT of fixed length backed by cached FFTW plans. Plan creation is
/// serialized; execution is reentrant.
class RealFft {
 public:
  explicit RealFft(int n);

  int size() const { return n_; }

  /// out[k] = sum_j in[j] e^{-2 pi i jk/n}, k = 0..n/2.
  void forward(const double* in, Complex* out) const;
  /// out[j] = sum_k in[k] e^{+2 pi i jk/n} over the full Hermitian spectrum
  /// described by in[0..n/2]. `in` is preserved.
  void backward(const Complex* in, double* out) const;

 private:
  int n_;
  const void* plans_;
};

/// Samples of f (or of f_x when `differentiate`) on the M-point grid.
void to_grid(const SpectralField& f, int grid_size, std::vector<double>& out,
             bool differentiate = false);

/// Fourier coefficients |k| <= N of grid samples.
SpectralField from_grid(const std::vector<double>& samples, int max_mode);

}  // namespace kdvbbm::detail
