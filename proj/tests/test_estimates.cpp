#include "doctest.h"
#include "kdvbbm/errors.hpp"
#include "kdvbbm/estimates.hpp"
#include "kdvbbm/report.hpp"
#include "oracles.hpp"

using namespace kdvbbm;
using oracle::pi;

namespace {

// ||m(D) f||_{H^s} from coefficients, for the oracles below
template <class M>
double weighted(const SpectralField& f, M m, double s) {
  double sum = 0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k)
    sum += std::pow(1.0 + k * k, s) * m(k) * m(k) * std::norm(f[k]);
  return std::sqrt(2 * pi * sum);
}

}  // namespace

TEST_CASE("bilinear ratio") {
  auto s1 = oracle::sine(8, 1);
  CHECK(bilinear_ratio(s1, s1, 0.0) == doctest::Approx(0.2 / std::sqrt(pi)).epsilon(1e-14));

  auto u = random_trig_polynomial(1, 0, 8, 8, SpectrumShape::flat);
  auto c = oracle::mode(8, 0, 2.0);
  // a constant factor shifts no frequencies
  const double expect = weighted(u, [](double k) { return std::abs(k) / (1 + k * k); }, 1.0) * 2.0 /
                        (sobolev_norm(u, 1.0) * sobolev_norm(c, 1.0));
  CHECK(bilinear_ratio(u, c, 1.0) == doctest::Approx(expect).epsilon(1e-13));
  CHECK_THROWS_AS(bilinear_ratio(u, SpectralField(8), 0.0), DomainError);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = random_trig_polynomial(seed, 1, 12, 12, SpectrumShape::flat);
    auto b = random_trig_polynomial(seed, 2, 12, 12, SpectrumShape::flat);
    // direct convolution oracle
    auto ab = oracle::convolve(a.resized(24), b.resized(24));
    const double num = weighted(ab, [](double k) { return std::abs(k) / (1 + k * k); }, 1.5);
    CHECK(bilinear_ratio(a, b, 1.5) ==
          doctest::Approx(num / (sobolev_norm(a, 1.5) * sobolev_norm(b, 1.5))).epsilon(1e-12));
    CHECK(bilinear_ratio(b, a, 1.5) == doctest::Approx(bilinear_ratio(a, b, 1.5)).epsilon(1e-12));
    CHECK(bilinear_ratio(3.7 * a, b, 1.5) == doctest::Approx(bilinear_ratio(a, b, 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("counterexample") {
  CHECK_THROWS_AS(prop21_counterexample(3, -0.5), DomainError);
  // at s = 0 the value is 4 * (1/2) / 3^{3/2} for every N
  for (int n : {8, 64, 512})
    CHECK(prop21_counterexample(n, 0.0) == doctest::Approx(2.0 / std::pow(3.0, 1.5)).epsilon(1e-14));
  for (double s : {-0.25, -0.5}) {
    std::vector<Point> pts;
    for (int n = 16; n <= 512; n *= 2) pts.push_back({double(n), prop21_counterexample(n, s)});
    const auto fit = fit_exponent(pts);
    CHECK(std::abs(fit.slope + 2 * s) <= 0.1 * std::abs(2 * s));
  }
}

TEST_CASE("tau ratios") {
  const auto p = preset("hamiltonian");
  const SymbolTable t(p, 4);
  auto s1 = oracle::sine(8, 1);
  auto r = tau_ratios(s1, s1, 1.0, p);
  // tau(0) = 0 removes the mean of sin^2; mode 2 carries -1/4
  const double plain = std::sqrt(2 * pi * 2 * 5 * std::pow(t.tau(2) / 4, 2)) / (2 * pi);
  CHECK(r.plain == doctest::Approx(plain).epsilon(1e-14));
  CHECK(r.derivative == doctest::Approx(2 * plain).epsilon(1e-14));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto a = random_trig_polynomial(seed, 4, 10, 10, SpectrumShape::flat);
    auto b = random_trig_polynomial(seed, 5, 10, 10, SpectrumShape::flat);
    auto ab = oracle::convolve(a.resized(20), b.resized(20));
    const double num = weighted(ab, [&](double k) { return oracle::tau(p, k); }, 0.5);
    auto q = tau_ratios(a, b, 0.5, p);
    CHECK(q.plain == doctest::Approx(num / (sobolev_norm(a, 0.5) * sobolev_norm(b, 0.5))).epsilon(1e-12));
    auto qs = tau_ratios(b, 2.5 * a, 0.5, p);
    CHECK(qs.plain == doctest::Approx(q.plain).epsilon(1e-12));
    CHECK(qs.derivative == doctest::Approx(q.derivative).epsilon(1e-12));
  }
}

TEST_CASE("psi ratios") {
  const auto p = preset("hamiltonian");
  const SymbolTable t(p, 4);
  auto s1 = oracle::sine(8, 1);
  auto r = psi_ratios(s1, s1, s1, 1.0, p);
  // (sin x)_x^2 = cos^2 x = 1/2 + cos 2x / 2, psi(0) = 0
  const double grad = std::sqrt(2 * pi * 2 * 5 * std::pow(t.psi(2) / 4, 2)) / (2 * pi);
  REQUIRE(r.grad_pair.has_value());
  CHECK(*r.grad_pair == doctest::Approx(grad).epsilon(1e-14));
  CHECK(*r.grad_pair_derivative == doctest::Approx(2 * grad).epsilon(1e-14));

  CHECK_THROWS_AS(psi_ratios(s1, s1, SpectralField(8), 1.0, p), DomainError);
  CHECK_THROWS_AS(psi_ratios(s1, s1, s1, 0.5, p), DomainError);
  CHECK_FALSE(psi_ratios(s1, s1, s1, 0.75, p).grad_pair.has_value());

  auto a = random_trig_polynomial(7, 1, 8, 8, SpectrumShape::flat);
  auto b = random_trig_polynomial(7, 2, 8, 8, SpectrumShape::flat);
  auto c = random_trig_polynomial(7, 3, 8, 8, SpectrumShape::flat);
  auto abc = oracle::convolve(oracle::convolve(a.resized(24), b.resized(24)), c.resized(24));
  const double num = weighted(abc, [&](double k) { return oracle::psi(p, k); }, 1.2);
  const double den = sobolev_norm(a, 1.2) * sobolev_norm(b, 1.2) * sobolev_norm(c, 1.2);
  const auto base = psi_ratios(a, b, c, 1.2, p);
  CHECK(base.cubic == doctest::Approx(num / den).epsilon(1e-12));
  for (const auto& perm : {psi_ratios(b, c, a, 1.2, p), psi_ratios(c, a, b, 1.2, p),
                           psi_ratios(0.1 * a, b, 7.0 * c, 1.2, p)}) {
    CHECK(perm.cubic == doctest::Approx(base.cubic).epsilon(1e-12));
    CHECK(perm.cubic_derivative == doctest::Approx(base.cubic_derivative).epsilon(1e-12));
  }
  CHECK(*psi_ratios(b, a, c, 1.2, p).grad_pair == doctest::Approx(*base.grad_pair).epsilon(1e-12));
}

TEST_CASE("corpus") {
  const auto p = preset("hamiltonian");
  CorpusSpec c;
  c.samples = 50;
  CHECK_THROWS_AS(corpus_ratio(EstimateFamily::cubic, 0.5, 16, 0, c, p), DomainError);
  CHECK_THROWS_AS(corpus_ratio(EstimateFamily::grad_pair, 0.9, 16, 0, c, p), DomainError);
  CHECK(family_from_name("tau_derivative") == EstimateFamily::tau_derivative);

  // deterministic, and nested: the degree-16 sample is the low part of degree 32
  auto a = corpus_sweep(EstimateFamily::bilinear, 1.0, 16, c, p);
  auto b = corpus_sweep(EstimateFamily::bilinear, 1.0, 16, c, p);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.mean_ratio == b.mean_ratio);
  CHECK(a.max_ratio >= a.mean_ratio);
  auto lo = random_trig_polynomial(c.seed, 5, 16, 16, c.shape, 1.0);
  auto hi = random_trig_polynomial(c.seed, 5, 32, 32, c.shape, 1.0);
  CHECK(oracle::max_diff(lo, hi.resized(16)) == 0.0);

  for (auto f : all_families()) {
    const double s = family_fixed_h1(f) ? 1.0 : (f == EstimateFamily::cubic ? 0.6 : 1.0);
    auto st = corpus_sweep(f, s, 16, c, p);
    CHECK(std::isfinite(st.max_ratio));
    CHECK(st.max_ratio > 0);
  }
}
