#include "kdvbbm/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "grid.hpp"
#include "kdvbbm/errors.hpp"

namespace kdvbbm {

SpectralField::SpectralField(int max_mode)
    : max_mode_(max_mode), coeffs_(static_cast<std::size_t>(2 * max_mode + 1)) {
  if (max_mode < 0) throw RangeError("max_mode must be non-negative");
}

SpectralField SpectralField::from_coeffs(int max_mode, std::span<const Complex> coeffs,
                                         double tol) {
  if (coeffs.size() != static_cast<std::size_t>(2 * max_mode + 1))
    throw RangeError("coefficient array length must be 2N+1");
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  SpectralField f(max_mode);
  for (int k = 0; k <= max_mode; ++k) {
    const Complex pos = coeffs[static_cast<std::size_t>(k + max_mode)];
    const Complex neg = coeffs[static_cast<std::size_t>(max_mode - k)];
    const double defect = k == 0 ? std::abs(pos.imag()) : std::abs(neg - std::conj(pos));
    if (defect > tol * std::max(scale, 1.0) || !std::isfinite(defect)) {
      std::ostringstream msg;
      msg << "reality violated at k=" << k << " (defect " << defect << ")";
      throw CorruptedFieldError(msg.str());
    }
    f.set(k, k == 0 ? pos : 0.5 * (pos + std::conj(neg)));
  }
  return f;
}

Complex SpectralField::at(int k) const {
  if (k < -max_mode_ || k > max_mode_) throw RangeError("mode outside field range");
  return (*this)[k];
}

void SpectralField::set(int k, Complex c) {
  if (k < -max_mode_ || k > max_mode_) throw RangeError("mode outside field range");
  if (k == 0) {
    coeffs_[index(0)] = Complex(c.real(), 0.0);
    return;
  }
  if (k < 0) {
    k = -k;
    c = std::conj(c);
  }
  coeffs_[index(k)] = c;
  coeffs_[index(-k)] = std::conj(c);
}

void SpectralField::add(int k, Complex c) { set(k, at(k) + c); }

double SpectralField::reality_defect() const {
  double d = std::abs(coeffs_[index(0)].imag());
  for (int k = 1; k <= max_mode_; ++k)
    d = std::max(d, std::abs(coeffs_[index(-k)] - std::conj(coeffs_[index(k)])));
  return d;
}

bool SpectralField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField SpectralField::resized(int max_mode) const {
  SpectralField out(max_mode);
  const int top = std::min(max_mode, max_mode_);
  for (int k = 0; k <= top; ++k) out.set(k, (*this)[k]);
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (o.max_mode_ != max_mode_) throw RangeError("max_mode mismatch in addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (o.max_mode_ != max_mode_) throw RangeError("max_mode mismatch in subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

// ---------------------------------------------------------------------------

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int dealiased_grid_size(int max_mode) { return fft_friendly_size(4 * max_mode + 1); }

SpectralField from_physical(std::span<const double> samples, int max_mode) {
  const int m = static_cast<int>(samples.size());
  if (max_mode < 0) throw RangeError("max_mode must be non-negative");
  if (m < 2 * max_mode + 1) throw ResolutionError("from_physical needs M >= 2N+1 samples");
  return detail::from_grid(std::vector<double>(samples.begin(), samples.end()), max_mode);
}

std::vector<double> to_physical(const SpectralField& f, int grid_size) {
  if (grid_size < 2 * f.max_mode() + 1)
    throw ResolutionError("to_physical needs M >= 2N+1 grid points");
  double scale = 1.0;
  for (const auto& c : f.coeffs()) scale = std::max(scale, std::abs(c));
  if (!(f.reality_defect() <= 1e-12 * scale))
    throw CorruptedFieldError("field is not real to 1e-12");
  std::vector<double> out;
  detail::to_grid(f, grid_size, out);
  return out;
}

double sobolev_norm(const SpectralField& f, SobolevIndex s) {
  double sum = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    const double w = std::pow(1.0 + static_cast<double>(k) * k, s.s);
    sum += w * std::norm(f[k]);
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

double sobolev_seminorm(const SpectralField& f, SobolevIndex s) {
  double sum = 0.0;
  for (int k = 1; k <= f.max_mode(); ++k)
    sum += 2.0 * std::pow(static_cast<double>(k), 2.0 * s.s) * std::norm(f[k]);
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
  if (f.max_mode() != g.max_mode()) throw RangeError("max_mode mismatch in l2_inner");
  double sum = (f[0] * g[0]).real();
  for (int k = 1; k <= f.max_mode(); ++k) sum += 2.0 * (std::conj(f[k]) * g[k]).real();
  return 2.0 * std::numbers::pi * sum;
}

namespace {

SpectralField grid_product(std::initializer_list<const SpectralField*> fields,
                           int out_mode, int grid_size) {
  std::vector<double> acc(static_cast<std::size_t>(grid_size), 1.0);
  std::vector<double> tmp;
  for (const auto* f : fields) {
    detail::to_grid(*f, grid_size, tmp);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] *= tmp[j];
  }
  return detail::from_grid(acc, out_mode);
}

}  // namespace

SpectralField product(const SpectralField& f, const SpectralField& g) {
  if (f.max_mode() != g.max_mode()) throw RangeError("product needs equal max_mode");
  return grid_product({&f, &g}, f.max_mode(), dealiased_grid_size(f.max_mode()));
}

SpectralField product(const SpectralField& f, const SpectralField& g,
                      const SpectralField& h) {
  if (f.max_mode() != g.max_mode() || f.max_mode() != h.max_mode())
    throw RangeError("product needs equal max_mode");
  return grid_product({&f, &g, &h}, f.max_mode(), dealiased_grid_size(f.max_mode()));
}

SpectralField product_widened(const SpectralField& f, const SpectralField& g) {
  const int out = f.max_mode() + g.max_mode();
  return grid_product({&f, &g}, out, fft_friendly_size(2 * out + 1));
}

SpectralField derivative(const SpectralField& f) {
  SpectralField d(f.max_mode());
  for (int k = 1; k <= f.max_mode(); ++k) d.set(k, Complex(0.0, k) * f[k]);
  return d;
}

double integral_of_power(const SpectralField& f, int power) {
  if (power < 1 || power > 3) throw DomainError("integral_of_power supports p = 1, 2, 3");
  const int m = dealiased_grid_size(f.max_mode());
  std::vector<double> v;
  detail::to_grid(f, m, v);
  double sum = 0.0;
  for (double x : v) sum += power == 1 ? x : power == 2 ? x * x : x * x * x;
  return 2.0 * std::numbers::pi * sum / m;
}

void write_snapshot(std::ostream& os, const SpectralField& f) {
  os << "k,re,im\n";
  char buf[96];
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", k, f[k].real(), f[k].imag());
    os << buf;
  }
}

SpectralField read_snapshot(std::istream& is, double tol) {
  std::string line;
  if (!std::getline(is, line) || line != "k,re,im")
    throw CorruptedFieldError("snapshot header must be `k,re,im`");
  std::vector<int> ks;
  std::vector<Complex> cs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw CorruptedFieldError("malformed snapshot row: " + line);
    ks.push_back(std::stoi(a));
    cs.emplace_back(std::stod(b), std::stod(c));
  }
  if (ks.empty() || ks.size() % 2 == 0) throw CorruptedFieldError("snapshot needs 2N+1 rows");
  const int n = static_cast<int>(ks.size() / 2);
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (ks[i] != static_cast<int>(i) - n) throw CorruptedFieldError("snapshot rows out of order");
  return SpectralField::from_coeffs(n, cs, tol);
}

}  // namespace kdvbbm
