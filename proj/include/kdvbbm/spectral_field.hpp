#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kdvbbm {

using Complex = std::complex<double>;

/// Real 2pi-periodic function stored by its Fourier coefficients
/// f^(k) = (1/2pi) int_0^{2pi} f(x) e^{-ikx} dx for k in {-N, ..., N}.
///
/// Coefficients are stored contiguously, index k + N. The pair (k, -k) is
/// always kept exactly conjugate and the k = 0 entry exactly real; every
/// mutator writes both halves.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int max_mode);

  /// Builds a field from a full coefficient array of length 2N+1. Throws
  /// CorruptedFieldError if coeffs(-k) differs from conj(coeffs(k)) by more
  /// than `tol` relative to the largest coefficient.
  static SpectralField from_coeffs(int max_mode, std::span<const Complex> coeffs,
                                   double tol = 1e-12);

  int max_mode() const { return max_mode_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex operator[](int k) const { return coeffs_[index(k)]; }
  Complex at(int k) const;

  /// Sets coeffs(k) = c and coeffs(-k) = conj(c). For k = 0 only Re(c) is kept.
  void set(int k, Complex c);
  void add(int k, Complex c);

  std::span<const Complex> coeffs() const { return coeffs_; }

  /// Largest |coeffs(-k) - conj(coeffs(k))|; zero unless the storage was
  /// tampered with through from_coeffs(tol = inf) or similar.
  double reality_defect() const;
  bool is_finite() const;

  /// Truncates (smaller N) or zero-extends (larger N).
  SpectralField resized(int max_mode) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double a, SpectralField f) { return f *= a; }
  friend SpectralField operator*(SpectralField f, double a) { return f *= a; }
  friend SpectralField operator-(SpectralField f) { return f *= -1.0; }

 private:
  std::size_t index(int k) const { return static_cast<std::size_t>(k + max_mode_); }

  int max_mode_ = 0;
  std::vector<Complex> coeffs_{Complex{}};
};

/// Regularity exponent of H^s(T); negative values allowed.
struct SobolevIndex {
  double s = 0.0;
  constexpr SobolevIndex() = default;
  constexpr SobolevIndex(double value) : s(value) {}  // NOLINT(implicit)
};

// Transforms ---------------------------------------------------------------

/// Samples on x_j = 2 pi j / M, M >= 2N+1.
SpectralField from_physical(std::span<const double> samples, int max_mode);
std::vector<double> to_physical(const SpectralField& f, int grid_size);

/// Smallest grid size >= n whose only prime factors are 2, 3, 5.
int fft_friendly_size(int n);
/// Grid that resolves products up to cubic order exactly on |k| <= N.
int dealiased_grid_size(int max_mode);

// Norms --------------------------------------------------------------------

/// (2pi)^{1/2} ( sum_k <k>^{2s} |f^(k)|^2 )^{1/2}, <k> = (1 + k^2)^{1/2}.
double sobolev_norm(const SpectralField& f, SobolevIndex s);
/// Homogeneous seminorm, weight |k|^{2s}, k = 0 excluded.
double sobolev_seminorm(const SpectralField& f, SobolevIndex s);
/// 2 pi sum_k conj(f^(k)) g^(k) = int_0^{2pi} f g dx.
double l2_inner(const SpectralField& f, const SpectralField& g);

// Products and derivatives -------------------------------------------------

/// Exact convolution truncated to |k| <= N; both fields must share N.
SpectralField product(const SpectralField& f, const SpectralField& g);
SpectralField product(const SpectralField& f, const SpectralField& g,
                      const SpectralField& h);
/// Untruncated product, max mode N_f + N_g.
SpectralField product_widened(const SpectralField& f, const SpectralField& g);

SpectralField derivative(const SpectralField& f);

/// int_0^{2pi} of f(x)^p, p in {1, 2, 3}, evaluated without aliasing.
double integral_of_power(const SpectralField& f, int power);

// Snapshot I/O: CSV header `k,re,im`, one row per k in {-N..N}, 17 sig. digits.

void write_snapshot(std::ostream& os, const SpectralField& f);
SpectralField read_snapshot(std::istream& is, double tol = 1e-12);

}  // namespace kdvbbm
