#pragma once

// Slow reference implementations used to check the fast paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kdvbbm/model.hpp"
#include "kdvbbm/spectral_field.hpp"

namespace oracle {

using kdvbbm::Complex;
using kdvbbm::SpectralField;
constexpr double pi = std::numbers::pi;

inline std::vector<Complex> dft(const std::vector<double>& x, int n_modes) {
  const int m = static_cast<int>(x.size());
  std::vector<Complex> c(static_cast<std::size_t>(2 * n_modes + 1));
  for (int k = -n_modes; k <= n_modes; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < m; ++j) acc += x[j] * std::polar(1.0, -2.0 * pi * k * j / m);
    c[static_cast<std::size_t>(k + n_modes)] = acc / double(m);
  }
  return c;
}

inline double evaluate(const SpectralField& f, double x) {
  Complex acc = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) acc += f[k] * std::polar(1.0, k * x);
  return acc.real();
}

inline std::vector<double> samples(const SpectralField& f, int m) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) v[j] = evaluate(f, 2.0 * pi * j / m);
  return v;
}

template <class F>
std::vector<double> sample_fn(F fn, int m) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) v[j] = fn(2.0 * pi * j / m);
  return v;
}

// Exact convolution truncated to |k| <= N.
inline SpectralField convolve(const SpectralField& f, const SpectralField& g) {
  const int n = f.max_mode();
  SpectralField out(n);
  for (int k = 0; k <= n; ++k) {
    Complex acc = 0.0;
    for (int j = -n; j <= n; ++j) {
      const int r = k - j;
      if (r < -g.max_mode() || r > g.max_mode()) continue;
      acc += f[j] * g[r];
    }
    out.set(k, acc);
  }
  return out;
}

inline SpectralField ddx(const SpectralField& f) {
  SpectralField out(f.max_mode());
  for (int k = 0; k <= f.max_mode(); ++k) out.set(k, Complex(0, k) * f[k]);
  return out;
}

// Symbols from their defining formulas.
inline double varphi(const kdvbbm::ModelParams& p, double k) {
  return 1 + p.gamma1 * k * k + p.delta1 * k * k * k * k;
}
inline double phi(const kdvbbm::ModelParams& p, double k) {
  return k * (1 - p.gamma2 * k * k + p.delta2 * k * k * k * k) / varphi(p, k);
}
inline double psi(const kdvbbm::ModelParams& p, double k) { return k / varphi(p, k); }
inline double tau(const kdvbbm::ModelParams& p, double k) {
  return k * (3 - 4 * p.gamma * k * k) / (4 * varphi(p, k));
}

// -i (tau eta^2 - 1/8 psi eta^3 - 7/48 psi eta_x^2) via direct convolutions.
inline SpectralField rhs(const SpectralField& eta, const kdvbbm::ModelParams& p) {
  const int n = eta.max_mode();
  const SpectralField wide = eta.resized(2 * n);
  const SpectralField sq = convolve(eta, eta);
  const SpectralField cube = convolve(convolve(wide, wide), wide).resized(n);
  const SpectralField ex = ddx(eta);
  const SpectralField exsq = convolve(ex, ex);
  SpectralField out(eta.max_mode());
  for (int k = 0; k <= eta.max_mode(); ++k) {
    const Complex F = tau(p, k) * sq[k] - psi(p, k) * (cube[k] / 8.0 + 7.0 / 48.0 * exsq[k]);
    out.set(k, Complex(0, -1) * F);
  }
  return out;
}

inline double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0;
  for (int k = -a.max_mode(); k <= a.max_mode(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline SpectralField mode(int n, int k, Complex c) {
  SpectralField f(n);
  f.set(k, c);
  return f;
}

// sin(kx) as a field.
inline SpectralField sine(int n, int k, double amp = 1.0) {
  return mode(n, k, Complex(0, -amp / 2));
}
inline SpectralField cosine(int n, int k, double amp = 1.0) {
  return mode(n, k, Complex(amp / 2, 0));
}

}  // namespace oracle
