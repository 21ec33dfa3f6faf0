#include "kdvbbm/estimates.hpp"

#include <cmath>

#include "kdvbbm/errors.hpp"

namespace kdvbbm {
namespace {

double bracket(double k) { return std::sqrt(1.0 + k * k); }

double checked_denominator(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("estimate ratio with zero denominator");
  return d;
}

// Norm of m(D) f with m(k) given as a callable; odd or even does not matter.
template <class M>
double multiplier_norm(const SpectralField& f, M&& m, double s) {
  SpectralField g(f.max_mode());
  for (int k = 0; k <= f.max_mode(); ++k) g.set(k, m(static_cast<double>(k)) * f[k]);
  return sobolev_norm(g, s);
}

double tau_symbol(const ModelParams& p, double k) {
  return k * (3.0 - 4.0 * p.gamma * k * k) / (4.0 * (1.0 + p.gamma1 * k * k + p.delta1 * k * k * k * k));
}

double psi_symbol(const ModelParams& p, double k) {
  return k / (1.0 + p.gamma1 * k * k + p.delta1 * k * k * k * k);
}

SpectralField triple(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const int n = u.max_mode() + v.max_mode() + w.max_mode();
  return product_widened(product_widened(u, v), w).resized(n);
}

void require_same(const SpectralField& a, const SpectralField& b) {
  if (a.max_mode() != b.max_mode()) throw RangeError("estimate inputs need equal max_mode");
}

}  // namespace

double bilinear_ratio(const SpectralField& u, const SpectralField& v, SobolevIndex s) {
  require_same(u, v);
  const double den = checked_denominator(sobolev_norm(u, s) * sobolev_norm(v, s));
  const auto uv = product_widened(u, v);
  return multiplier_norm(uv, [](double k) { return std::abs(k) / (1.0 + k * k); }, s.s) / den;
}

double prop21_counterexample(int n, SobolevIndex s) {
  if (n < 4) throw DomainError("counterexample needs N >= 4");
  const int a[] = {n - 1, n, n + 1};
  const int c[] = {-1, 0, 1};
  auto in_b = [n](int k) { return k >= -n - 1 && k <= -n + 1; };
  double sum = 0.0;
  for (int k : c) {
    const double kk = k;
    for (int j : a) {
      if (!in_b(k - j)) continue;
      sum += std::abs(kk) * std::pow(bracket(kk), s.s) /
             ((1.0 + kk * kk) * std::pow(bracket(j), s.s) * std::pow(bracket(k - j), s.s));
    }
  }
  return std::abs(sum) / (std::sqrt(3.0) * std::sqrt(3.0) * std::sqrt(3.0));
}

TauRatios tau_ratios(const SpectralField& u, const SpectralField& v, SobolevIndex s,
                     const ModelParams& p) {
  require_same(u, v);
  const double den = checked_denominator(sobolev_norm(u, s) * sobolev_norm(v, s));
  const double den1 = checked_denominator(sobolev_norm(u, 1.0) * sobolev_norm(v, 1.0));
  const auto uv = product_widened(u, v);
  TauRatios r;
  r.plain = multiplier_norm(uv, [&](double k) { return tau_symbol(p, k); }, s.s) / den;
  r.derivative = multiplier_norm(uv, [&](double k) { return k * tau_symbol(p, k); }, 1.0) / den1;
  return r;
}

PsiRatios psi_ratios(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                     SobolevIndex s, const ModelParams& p) {
  if (!(s.s > 0.5)) throw DomainError("cubic estimate needs s > 1/2");
  require_same(u, v);
  require_same(u, w);
  auto psi = [&](double k) { return psi_symbol(p, k); };
  auto dpsi = [&](double k) { return k * psi_symbol(p, k); };
  PsiRatios r;
  const auto uvw = triple(u, v, w);
  r.cubic = multiplier_norm(uvw, psi, s.s) /
            checked_denominator(sobolev_norm(u, s) * sobolev_norm(v, s) * sobolev_norm(w, s));
  r.cubic_derivative =
      multiplier_norm(uvw, dpsi, 1.0) /
      checked_denominator(sobolev_norm(u, 1.0) * sobolev_norm(v, 1.0) * sobolev_norm(w, 1.0));
  if (s.s >= 1.0) {
    const auto grad = product_widened(derivative(u), derivative(v));
    r.grad_pair = multiplier_norm(grad, psi, s.s) /
                  checked_denominator(sobolev_norm(u, s) * sobolev_norm(v, s));
    r.grad_pair_derivative = multiplier_norm(grad, dpsi, 1.0) /
                             checked_denominator(sobolev_norm(u, 1.0) * sobolev_norm(v, 1.0));
  }
  return r;
}

std::string_view family_name(EstimateFamily f) {
  switch (f) {
    case EstimateFamily::bilinear: return "bilinear";
    case EstimateFamily::tau: return "tau";
    case EstimateFamily::tau_derivative: return "tau_derivative";
    case EstimateFamily::cubic: return "cubic";
    case EstimateFamily::cubic_derivative: return "cubic_derivative";
    case EstimateFamily::grad_pair: return "grad_pair";
    case EstimateFamily::grad_pair_derivative: return "grad_pair_derivative";
  }
  return "?";
}

std::vector<EstimateFamily> all_families() {
  return {EstimateFamily::bilinear,         EstimateFamily::tau,
          EstimateFamily::tau_derivative,   EstimateFamily::cubic,
          EstimateFamily::cubic_derivative, EstimateFamily::grad_pair,
          EstimateFamily::grad_pair_derivative};
}

EstimateFamily family_from_name(std::string_view name) {
  for (auto f : all_families())
    if (family_name(f) == name) return f;
  throw ConfigError({"unknown estimate family '" + std::string(name) + "'"});
}

bool family_fixed_h1(EstimateFamily f) {
  return f == EstimateFamily::tau_derivative || f == EstimateFamily::cubic_derivative ||
         f == EstimateFamily::grad_pair_derivative;
}

bool family_admits(EstimateFamily f, double s) {
  switch (f) {
    case EstimateFamily::bilinear:
    case EstimateFamily::tau: return s >= 0.0;
    case EstimateFamily::cubic: return s > 0.5;
    case EstimateFamily::grad_pair: return s >= 1.0;
    case EstimateFamily::tau_derivative:
    case EstimateFamily::cubic_derivative:
    case EstimateFamily::grad_pair_derivative: return s == 1.0;
  }
  return false;
}

RatioSample corpus_ratio(EstimateFamily family, double s, int n, std::uint64_t index,
                         const CorpusSpec& corpus, const ModelParams& p) {
  if (!family_admits(family, s))
    throw DomainError("index s outside the admissible range of " +
                      std::string(family_name(family)));
  auto draw = [&](std::uint64_t arg) {
    return random_trig_polynomial(corpus.seed, 3 * index + arg, n, n, corpus.shape, s);
  };
  const auto u = draw(0), v = draw(1);
  RatioSample out{s, 0.0, corpus.seed, index, n};
  switch (family) {
    case EstimateFamily::bilinear: out.ratio = bilinear_ratio(u, v, s); break;
    case EstimateFamily::tau: out.ratio = tau_ratios(u, v, s, p).plain; break;
    case EstimateFamily::tau_derivative: out.ratio = tau_ratios(u, v, s, p).derivative; break;
    case EstimateFamily::cubic: out.ratio = psi_ratios(u, v, draw(2), s, p).cubic; break;
    case EstimateFamily::cubic_derivative:
      out.ratio = psi_ratios(u, v, draw(2), s, p).cubic_derivative;
      break;
    case EstimateFamily::grad_pair: out.ratio = *psi_ratios(u, v, u, s, p).grad_pair; break;
    case EstimateFamily::grad_pair_derivative:
      out.ratio = *psi_ratios(u, v, u, s, p).grad_pair_derivative;
      break;
  }
  return out;
}

CorpusStats corpus_sweep(EstimateFamily family, double s, int n, const CorpusSpec& corpus,
                         const ModelParams& p) {
  if (corpus.samples < 1) throw DomainError("corpus needs at least one sample");
  CorpusStats stats;
  double sum = 0.0;
  for (int i = 0; i < corpus.samples; ++i) {
    const auto r = corpus_ratio(family, s, n, static_cast<std::uint64_t>(i), corpus, p);
    sum += r.ratio;
    if (i == 0 || r.ratio > stats.max_ratio) {
      stats.max_ratio = r.ratio;
      stats.argmax = r;
    }
  }
  stats.mean_ratio = sum / corpus.samples;
  return stats;
}

}  // namespace kdvbbm
