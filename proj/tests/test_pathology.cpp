#include <quadmath.h>

#include "doctest.h"
#include "kdvbbm/errors.hpp"
#include "kdvbbm/pathology.hpp"
#include "kdvbbm/random.hpp"
#include "oracles.hpp"

using namespace kdvbbm;
using oracle::pi;

TEST_CASE("theta and chi") {
  const auto p = preset("hamiltonian");
  const SymbolTable t(p, 64);
  for (int k : {-5, 0, 3, 17}) {
    CHECK(theta(k, 0, t) == 0.0);
    CHECK(theta(k, k, t) == 0.0);
    CHECK(chi(0, k, t) == 0.0);
  }
  // phi(1) = 345/391, phi(2) = 60/31 for gamma1 = 1/12, delta1 = 1/360
  CHECK(theta(2, 1, t) == doctest::Approx(60.0 / 31.0 - 2.0 * 345.0 / 391.0).epsilon(1e-14));
  CHECK(theta(2, 1, t) == doctest::Approx(0.170778).epsilon(1e-5));
  CHECK_THROWS_AS(theta(60, -10, t), RangeError);

  const double expect = 1.0 / (4 * oracle::varphi(p, 1)) *
                        (3 - 4 * p.gamma - 7.0 / 12.0 * (-8.0) * 9.0);
  CHECK(chi(1, -8, t) == doctest::Approx(expect).epsilon(1e-14));
  double prev = 0;
  for (int n : {4, 8, 16, 32, 64}) {
    const double r = chi(1, -2 * n, t) / chi(1, -n, t);
    if (prev != 0) CHECK(std::abs(r - 4) < std::abs(prev - 4));
    prev = r;
  }
  CHECK(std::abs(prev - 4) < 0.05);
}

TEST_CASE("resonant factor") {
  // direct form (e^{ix} - 1) / theta in 128-bit arithmetic
  for (double th : {1e-14, 1e-10, 1e-6, 1e-3, 0.1, 1.0, 14.5, -3.0, -29.0}) {
    for (double tt : {1e-3, 0.05, 1.0}) {
      const __float128 x = static_cast<__float128>(tt) * th;
      const Complex direct(static_cast<double>((cosq(x) - 1) / th),
                           static_cast<double>(sinq(x) / th));
      const Complex got = resonant_factor(th, tt);
      CHECK(std::abs(direct - got) / std::abs(got) < 1e-12);
    }
  }
  for (double th : {0.0, 1e-300, 1e-14, -1e-14}) {
    const Complex v = resonant_factor(th, 0.5);
    CHECK(std::isfinite(v.real()));
    CHECK(v.imag() == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("eta_N data and support") {
  auto d = illposed_data(16);
  CHECK(d.field.max_mode() == 34);
  CHECK(d.field[16] == Complex(1.0 / 16, 0));
  CHECK(d.field[14] == Complex{});
  // H^1 norm squared = 2 pi * 2 * sum (1 + k^2) / N^2
  double sum = 0;
  for (int k = 15; k <= 17; ++k) sum += 2 * (1.0 + k * k) / 256.0;
  CHECK(sobolev_norm(d.field, 1.0) == doctest::Approx(std::sqrt(2 * pi * sum)).epsilon(1e-14));
  CHECK(sobolev_norm(illposed_data(512).field, 1.0) ==
        doctest::Approx(std::sqrt(12 * pi)).epsilon(1e-3));
  CHECK_THROWS_AS(illposed_data(1, 1), DomainError);

  CHECK(interaction_set(1, 16, 1) == std::vector<int>{-16, -15, 16, 17});

  const SymbolTable t(preset("hamiltonian"), 64);
  // single mode sin(mx): output on {0, +-2m}, mode 0 annihilated
  auto i2 = second_iterate_formula(oracle::sine(40, 7), 0.3, t);
  for (int k = 0; k <= 40; ++k) {
    if (k == 14)
      CHECK(std::abs(i2[k]) > 0);
    else
      CHECK(i2[k] == Complex{});
  }
  // band sum B + B, truncated to the field
  auto j2 = second_iterate_formula(illposed_data(16).field, 0.05, t);
  for (int k = 0; k <= j2.max_mode(); ++k) {
    const bool allowed = (k >= 1 && k <= 2) || (k >= 30 && k <= 34);
    if (!allowed) CHECK(j2[k] == Complex{});
    if (allowed) CHECK(std::abs(j2[k]) > 0);
  }
  CHECK(sobolev_norm(second_iterate_formula(d.field, 0.0, t), 1.0) == 0.0);
  CHECK(sobolev_norm(second_iterate_quadrature(d.field, 0.0, t), 1.0) == 0.0);
}

TEST_CASE("second iterate: formula against quadrature") {
  for (const char* name : {"hamiltonian", "inflation"}) {
    const SymbolTable t(preset(name), 80);
    for (int n : {8, 16, 32}) {
      auto d = illposed_data(n);
      auto a = second_iterate_formula(d.field, 0.05, t);
      auto b = second_iterate_quadrature(d.field, 0.05, t);
      CHECK(sobolev_norm(a - b, 1.0) < 1e-8);
      CHECK(sobolev_norm(a, 1.0) > 1e-3);
    }
    // random data, both frames
    auto h = random_trig_polynomial(3, 0, 12, 12, SpectrumShape::flat).resized(24);
    for (Frame f : {Frame::standard, Frame::shifted}) {
      auto a = second_iterate_formula(h, 0.2, t, f);
      auto b = second_iterate_quadrature(h, 0.2, t, f, 256);
      CHECK(sobolev_norm(a - b, 1.0) < 1e-8 * sobolev_norm(a, 1.0));
    }
  }
  // first-order in t
  const SymbolTable t(preset("hamiltonian"), 40);
  auto d = illposed_data(16);
  double prev = 0;
  for (double tt : {1e-2, 1e-3, 1e-4}) {
    const double r = sobolev_norm(second_iterate_quadrature(d.field, tt / 2, t), 1.0) /
                     sobolev_norm(second_iterate_quadrature(d.field, tt, t), 1.0);
    CHECK(std::abs(r - 0.5) <= std::abs(prev - 0.5) + 1e-12);
    prev = r;
  }
  CHECK(std::abs(prev - 0.5) < 1e-3);
}

TEST_CASE("ill-posedness scan") {
  const SymbolTable t(preset("hamiltonian"), 2 * 513);
  const std::vector<int> ns{32, 64, 128, 256, 512};
  const auto b = measure_theta_bound(ns, 1, t);
  MESSAGE("Theta constant (mode 1): " << b.mode_one << ", all |k| <= 2: " << b.all);
  CHECK(b.window(1) > 0.05);
  bool same = false;
  const double c = mode_one_constant(64, 1, t, &same);
  CHECK(same);
  CHECK(c > 0);

  auto rep = illposed_scan(ns, 1, 0.5, 0.05, t);
  for (const auto& f : rep.fits()) MESSAGE(f.name << " slope " << f.fit.slope);
  for (const auto& ch : rep.checks()) CHECK_MESSAGE(ch.passed(), ch.name << " " << ch.value);
  CHECK(rep.passed());
  CHECK_THROWS_AS(illposed_scan(ns, 1, 1.0, 0.05, t), DomainError);
}

TEST_CASE("series remainder") {
  const SymbolTable t(preset("hamiltonian"), 4 * 17);
  SolveConfig cfg;
  cfg.dt = 1e-3;
  auto rep = series_remainder_check({0.0, 0.1, 0.05, 0.025}, 16, 1, 0.05, 0.5, cfg, t);
  REQUIRE(rep.fits().size() == 1);
  MESSAGE("remainder exponent " << rep.fits()[0].fit.slope);
  CHECK(rep.passed());
  CHECK(rep.notes()["remainder_at_zero"].get<double>() == 0.0);

  // the solution stays away from zero while the linear part shrinks with N
  double prev_lin = 1e300;
  for (int n : {16, 32, 64}) {
    const SymbolTable tn(preset("hamiltonian"), 4 * (n + 1));
    auto r = series_remainder_check({0.05}, n, 1, 0.05, 0.5, cfg, tn);
    const double sol = r.find_series("solution_Hs")->points[0].second;
    const double lin = r.find_series("linear_Hs")->points[0].second;
    CHECK(lin < prev_lin);
    CHECK(sol >= r.notes()["I2_Hs"].get<double>() * 0.05 * 0.05 / 4);
    prev_lin = lin;
  }
}

TEST_CASE("inflation closed form") {
  const auto p = preset("inflation");
  const SymbolTable t(p, 80);
  auto d = inflation_data(16, 0.3);
  CHECK(d.field[0] == Complex{});
  int nonzero = 0;
  for (int k = -d.field.max_mode(); k <= d.field.max_mode(); ++k) nonzero += d.field[k] != Complex{};
  CHECK(nonzero == 4);
  CHECK(oracle::evaluate(d.field, 0.3) ==
        doctest::Approx(std::pow(16.0, -0.7) * (std::sin(16 * 0.3) + std::sin(17 * 0.3))));

  CHECK(sobolev_norm(inflation_eta1_closed_form(d, 0.0, t), 1.0) == 0.0);
  for (double tt : {1e-3, 1e-8, 0.05}) {
    auto a = inflation_eta1_closed_form(d, tt, t);
    auto b = second_iterate_quadrature(d.field, tt, t, Frame::shifted);
    CHECK(sobolev_norm(a - b, 1.0) < 1e-8);
    CHECK(sobolev_norm(a - b, 1.0) <= 1e-9 * sobolev_norm(a, 1.0) + 1e-15);
  }

  // J3 carries the k1^2 t growth; I4 and J1 stay O(t)
  double j3_prev = 0;
  for (int k1 : {16, 32, 64}) {
    const SymbolTable tk(p, 2 * (k1 + 1));
    auto terms = inflation_eta1_terms(inflation_data(k1, 0.3), 1e-3, tk);
    const double scale = std::pow(k1, 2 * (0.3 - 1));
    double j3 = 0, i4 = 0, j1 = 0;
    for (auto& term : terms) {
      const double v = sobolev_norm(term.field, 0.5) / scale;
      if (term.name == "J3") j3 = v;
      if (term.name == "I4") i4 = v;
      if (term.name == "J1") j1 = v;
    }
    CHECK(j3 / (k1 * k1 * 1e-3) == doctest::Approx(j3_prev ? j3_prev : j3 / (k1 * k1 * 1e-3)).epsilon(0.07));
    j3_prev = j3 / (k1 * k1 * 1e-3);
    CHECK(i4 < 10 * 1e-3);
    CHECK(j1 < 10 * 1e-3);
  }
}

TEST_CASE("remainder decomposition identity") {
  const SymbolTable t(preset("inflation"), 48);
  auto L = random_trig_polynomial(1, 0, 6, 6, SpectrumShape::flat).resized(48);
  auto e = 0.3 * random_trig_polynomial(1, 1, 10, 10, SpectrumShape::flat).resized(48);
  auto z = 0.1 * random_trig_polynomial(1, 2, 12, 12, SpectrumShape::flat).resized(48);
  auto lhs = rhs_F(L + e + z, t);
  auto rhs = rhs_F_quadratic(L, t) + remainder_forcing(L, e, z, t);
  CHECK(sobolev_norm(lhs - rhs, 1.0) < 1e-10 * sobolev_norm(lhs, 1.0));

  auto d = inflation_data(16, 0.3, 64);
  const SymbolTable t2(preset("inflation"), 64);
  auto lin = semigroup(d.field, 0.01, t2, Frame::shifted);
  auto e1 = inflation_eta1_closed_form(d, 0.01, t2);
  auto zz = 1e-3 * random_trig_polynomial(5, 0, 40, 40, SpectrumShape::flat).resized(64);
  auto diff = rhs_F(lin + e1 + zz, t2) - rhs_F_quadratic(lin, t2) - remainder_forcing(lin, e1, zz, t2);
  CHECK(sobolev_norm(diff, 1.0) < 1e-10 * sobolev_norm(rhs_F(lin + e1 + zz, t2), 1.0));
}

TEST_CASE("inflation experiment") {
  const SymbolTable t(preset("inflation"), 4 * 129);
  InflationConfig ic;
  SolveConfig cfg;
  cfg.dt = 1e-4;
  auto rep = inflation_experiment(ic, cfg, t);
  for (const auto& f : rep.fits()) MESSAGE(f.name << " slope " << f.fit.slope << " expected " << f.expected);
  MESSAGE("zeta slope " << rep.notes()["zeta_slope"] << ", eta1(T_j) slope "
                        << rep.notes()["eta1_Tj_slope"]);
  CHECK(rep.passed());

  InflationConfig bad = ic;
  bad.sigma = 0.6;
  CHECK_THROWS_AS(inflation_experiment(bad, cfg, t), DomainError);
  bad = ic;
  bad.k1_list = {16, 300};
  CHECK_THROWS_AS(inflation_experiment(bad, cfg, t), RangeError);
}
