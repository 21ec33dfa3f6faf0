#include "kdvbbm/pathology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdvbbm/errors.hpp"

namespace kdvbbm {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

bool in_band(int k, int n, int k0) {
  const int a = std::abs(k);
  return a >= n - k0 && a <= n + k0;
}

void require_range(int k, const SymbolTable& table) {
  if (std::abs(k) > table.max_mode()) throw RangeError("mode outside symbol table range");
}

std::vector<int> support(const SpectralField& h) {
  std::vector<int> out;
  for (int k = -h.max_mode(); k <= h.max_mode(); ++k)
    if (h[k] != Complex{}) out.push_back(k);
  return out;
}

}  // namespace

IllposedData illposed_data(int n, int k0, int max_mode) {
  if (k0 < 1 || n <= k0) throw DomainError("eta_N needs 1 <= k0 < N");
  if (max_mode == 0) max_mode = 2 * (n + k0);
  if (max_mode < n + k0) throw RangeError("max_mode below the eta_N band");
  IllposedData d{n, k0, SpectralField(max_mode)};
  const double a = 1.0 / (n * std::sqrt(static_cast<double>(k0)));
  for (int k = n - k0; k <= n + k0; ++k) d.field.set(k, a);
  return d;
}

double theta(int k, int k1, const SymbolTable& table, Frame frame) {
  require_range(k, table);
  require_range(k1, table);
  require_range(k - k1, table);
  return table.dispersion(frame, k) - table.dispersion(frame, k - k1) -
         table.dispersion(frame, k1);
}

double chi(int k, int k1, const SymbolTable& table) {
  require_range(k, table);
  const double kk = k, g = table.params().gamma;
  const double q = static_cast<double>(k1) * static_cast<double>(k - k1);
  return kk / (4.0 * table.varphi(k)) * (3.0 - 4.0 * g * kk * kk - 7.0 / 12.0 * q);
}

double picard_symbol(int k, int k1, const SymbolTable& table) {
  require_range(k, table);
  const double q = static_cast<double>(k1) * static_cast<double>(k - k1);
  return table.tau(k) + 7.0 / 48.0 * table.psi(k) * q;
}

Complex resonant_factor(double theta, double t) {
  const double half = 0.5 * t * theta;
  return Complex(0.0, t * sinc(half)) * std::polar(1.0, half);
}

SpectralField second_iterate_formula(const SpectralField& h, double t, const SymbolTable& table,
                                     Frame frame) {
  const int n = h.max_mode();
  if (n > table.max_mode()) throw RangeError("field max_mode exceeds symbol table range");
  SpectralField out(n);
  if (t == 0.0) return out;
  const auto sup = support(h);
  std::vector<Complex> acc(static_cast<std::size_t>(n + 1));
  for (int a : sup) {
    for (int b : sup) {
      const int k = a + b;
      if (k < 1 || k > n) continue;
      const double th = table.dispersion(frame, k) - table.dispersion(frame, a) -
                        table.dispersion(frame, b);
      acc[static_cast<std::size_t>(k)] +=
          picard_symbol(k, b, table) * h[a] * h[b] * resonant_factor(th, t);
    }
  }
  for (int k = 1; k <= n; ++k)
    out.set(k, -acc[static_cast<std::size_t>(k)] * std::polar(1.0, -t * table.dispersion(frame, k)));
  return out;
}

SpectralField second_iterate_quadrature(const SpectralField& h, double t,
                                        const SymbolTable& table, Frame frame, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) throw DomainError("Simpson needs an even interval count");
  SpectralField acc(h.max_mode());
  if (t == 0.0) return acc;
  const double dx = t / intervals;
  for (int j = 0; j <= intervals; ++j) {
    const double s = j * dx;
    const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    auto g = rhs_F_quadratic(semigroup(h, s, table, frame), table);
    acc += w * semigroup(g, -s, table, frame);
  }
  acc *= dx / 3.0;
  return semigroup(acc, t, table, frame);
}

std::vector<int> interaction_set(int k, int n, int k0) {
  std::vector<int> out;
  for (int k1 = -(n + k0); k1 <= n + k0; ++k1)
    if (in_band(k1, n, k0) && in_band(k - k1, n, k0)) out.push_back(k1);
  return out;
}

double ThetaBound::window(int k0) const { return kPi / (4.0 * mode_one * k0); }

ThetaBound measure_theta_bound(const std::vector<int>& n_list, int k0, const SymbolTable& table) {
  ThetaBound b;
  for (int n : n_list) {
    for (int k = -2 * k0; k <= 2 * k0; ++k) {
      for (int k1 : interaction_set(k, n, k0)) {
        const double v = std::abs(theta(k, k1, table)) / k0;
        b.all = std::max(b.all, v);
        if (k == 1) b.mode_one = std::max(b.mode_one, v);
      }
    }
  }
  return b;
}

double mode_one_constant(int n, int k0, const SymbolTable& table, bool* same_sign) {
  double sum = 0.0;
  int pos = 0, neg = 0;
  for (int k1 : interaction_set(1, n, k0)) {
    const double m = picard_symbol(1, k1, table);
    sum += std::abs(m);
    (m > 0 ? pos : neg)++;
  }
  if (same_sign) *same_sign = pos == 0 || neg == 0;
  return sum / (static_cast<double>(n) * n * k0);
}

ExperimentReport illposed_scan(const std::vector<int>& n_list, int k0, double s, double t,
                               const SymbolTable& table) {
  if (!(s < 1.0)) throw DomainError("ill-posedness scan needs s < 1");
  ExperimentReport rep("illposed-scan");
  rep.inputs()["n_list"] = n_list;
  rep.inputs()["k0"] = k0;
  rep.inputs()["s"] = s;
  rep.inputs()["t"] = t;

  const auto bound = measure_theta_bound(n_list, k0, table);
  const double window = bound.window(k0);
  rep.note("theta_constant_mode_one", bound.mode_one);
  rep.note("theta_constant_all_modes", bound.all);
  rep.note("t_window", window);
  rep.check(CheckRecord::at_most("t_inside_window", t, window));

  auto& data_hs = rep.series("data_Hs");
  auto& data_h1 = rep.series("data_H1");
  auto& i2_hs = rep.series("I2_Hs");
  auto& i2_sq = rep.series("I2_Hs_squared");
  auto& mode1 = rep.series("I2_mode1");
  auto& lower = rep.series("mode1_lower_bound");
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const int n = n_list[i];
    const auto d = illposed_data(n, k0);
    const auto i2 = second_iterate_formula(d.field, t, table);
    const double x = n;
    data_hs.points.push_back({x, sobolev_norm(d.field, s)});
    data_h1.points.push_back({x, sobolev_norm(d.field, 1.0)});
    const double v = sobolev_norm(i2, s);
    i2_hs.points.push_back({x, v});
    i2_sq.points.push_back({x, v * v});
    const double f1 = std::abs(i2[1]);
    mode1.points.push_back({x, f1});
    bool same = false;
    const double c = mode_one_constant(n, k0, table, &same);
    const double b = std::sqrt(2.0) / 2.0 * t * c;
    lower.points.push_back({x, b});
    rep.check(CheckRecord::at_least("mode1_terms_share_sign_N" + std::to_string(n), same ? 1 : 0, 1));
    rep.check(CheckRecord::at_least("mode1_lower_bound_N" + std::to_string(n), f1, b));
    lo = i == 0 ? v : std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (n_list.size() >= 3) rep.fit("data_decay", "data_Hs", s - 1.0, 0.05);
  rep.check(CheckRecord::at_least("I2_floor_ratio", hi > 0 ? lo / hi : 0.0, 0.5));
  rep.note("I2_floor_over_t", lo / t);
  return rep;
}

ExperimentReport series_remainder_check(const std::vector<double>& eps_list, int n, int k0,
                                        double t, double s, const SolveConfig& cfg,
                                        const SymbolTable& table) {
  ExperimentReport rep("series-remainder");
  rep.inputs()["eps_list"] = eps_list;
  rep.inputs()["n"] = n;
  rep.inputs()["k0"] = k0;
  rep.inputs()["t"] = t;
  rep.inputs()["s"] = s;
  rep.inputs()["dt"] = cfg.dt;
  rep.inputs()["max_mode"] = table.max_mode();

  const auto d = illposed_data(n, k0, table.max_mode());
  const auto lin = semigroup(d.field, t, table, cfg.frame);
  const auto i2 = second_iterate_formula(d.field, t, table, cfg.frame);
  const double c0 = sobolev_norm(i2, s);
  rep.note("I2_Hs", c0);

  auto& rem_h1 = rep.series("remainder_H1");
  auto& rem_hs = rep.series("remainder_Hs");
  auto& sol = rep.series("solution_Hs");
  auto& linear = rep.series("linear_Hs");
  for (double eps : eps_list) {
    const auto eta = advance(eps * d.field, 0.0, t, cfg, table);
    const auto rem = eta - eps * lin - (eps * eps) * i2;
    if (eps == 0.0) {
      rep.note("remainder_at_zero", sobolev_norm(rem, 1.0));
      continue;
    }
    rem_h1.points.push_back({eps, sobolev_norm(rem, 1.0)});
    rem_hs.points.push_back({eps, sobolev_norm(rem, s)});
    const double norm = sobolev_norm(eta, s);
    sol.points.push_back({eps, norm});
    linear.points.push_back({eps, eps * sobolev_norm(lin, s)});
    rep.check(CheckRecord::at_least("solution_lower_bound_eps" + format_label(eps), norm,
                                    c0 / 4.0 * eps * eps));
  }
  if (rem_h1.points.size() >= 3) rep.fit("remainder_order", "remainder_H1", 3.0, 0.10);
  return rep;
}

// ---------------------------------------------------------------------------

InflationData inflation_data(int k1, double sigma, int max_mode) {
  if (k1 < 2) throw DomainError("inflation data needs k1 >= 2");
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("inflation data needs 0 < sigma < 1");
  if (max_mode == 0) max_mode = 2 * (k1 + 1);
  if (max_mode < k1 + 1) throw RangeError("max_mode below the inflation data");
  InflationData d{k1, sigma, SpectralField(max_mode)};
  const double a = std::pow(static_cast<double>(k1), sigma - 1.0);
  d.field.set(k1, Complex(0.0, -a / 2));
  d.field.set(k1 + 1, Complex(0.0, -a / 2));
  return d;
}

namespace {

// amp * sin(n x - beta) added to f.
void add_sine(SpectralField& f, int n, double amp, double beta) {
  if (n < 0) {
    n = -n;
    amp = -amp;
    beta = -beta;
  }
  if (n == 0) return;
  f.add(n, Complex(0.0, -amp / 2) * std::polar(1.0, -beta));
}

}  // namespace

std::vector<NamedField> inflation_eta1_terms(const InflationData& data, double t,
                                             const SymbolTable& table) {
  const int k1 = data.k1, k2 = k1 + 1;
  const int n = data.field.max_mode();
  if (2 * k2 > n || 2 * k2 > table.max_mode())
    throw RangeError("inflation closed form needs modes up to 2(k1+1)");
  auto ph = [&](int k) { return table.phi_shifted(k); };
  const double p1 = ph(k1), p2 = ph(k2);
  const double scale = std::pow(static_cast<double>(k1), 2.0 * (data.sigma - 1.0));
  const double kk = static_cast<double>(k1) * k2;

  struct Piece {
    const char* name;
    double c;
    int mode;
    double ell;
  };
  const Piece pieces[] = {
      {"I1", -table.tau(2 * k1) / 2, 2 * k1, 2 * p1},
      {"I2", -table.tau(2 * k2) / 2, 2 * k2, 2 * p2},
      {"I3", table.tau(k1 - k2), k1 - k2, p1 - p2},
      {"I4", -table.tau(k1 + k2), k1 + k2, p1 + p2},
      {"J1", -7.0 / 96.0 * k1 * k1 * table.psi(2 * k1), 2 * k1, 2 * p1},
      {"J2", -7.0 / 96.0 * k2 * k2 * table.psi(2 * k2), 2 * k2, 2 * p2},
      {"J3", -7.0 / 48.0 * kk * table.psi(k1 - k2), k1 - k2, p1 - p2},
      {"J4", -7.0 / 48.0 * kk * table.psi(k1 + k2), k1 + k2, p1 + p2},
  };
  std::vector<NamedField> out;
  for (const auto& pc : pieces) {
    // int_0^t S(t-t') sin(n x - l t') dt'
    //   = [cos(n x - phi(n) t) - cos(n x - l t)] / (phi(n) - l)
    //   = t sin(n x - (phi(n) + l) t / 2) sinc((phi(n) - l) t / 2)
    const double a = ph(pc.mode);
    SpectralField f(n);
    add_sine(f, pc.mode, scale * pc.c * t * sinc(0.5 * (a - pc.ell) * t), 0.5 * (a + pc.ell) * t);
    out.push_back({pc.name, std::move(f)});
  }
  return out;
}

SpectralField inflation_eta1_closed_form(const InflationData& data, double t,
                                         const SymbolTable& table) {
  SpectralField sum(data.field.max_mode());
  for (const auto& term : inflation_eta1_terms(data, t, table)) sum += term.field;
  return sum;
}

SpectralField remainder_forcing(const SpectralField& lin, const SpectralField& eta1,
                                const SpectralField& zeta, const SymbolTable& table) {
  const auto& L = lin;
  const auto& e = eta1;
  const auto& z = zeta;
  auto p2 = [](const SpectralField& a, const SpectralField& b) { return product(a, b); };
  auto p3 = [](const SpectralField& a, const SpectralField& b, const SpectralField& c) {
    return product(a, b, c);
  };
  const SpectralField F11 = p2(e, e) + 2.0 * p2(e, L);
  const SpectralField F12 = 2.0 * p2(z, e) + 2.0 * p2(z, L);
  const SpectralField F13 = p2(z, z);
  const SpectralField F21 = p3(e, e, e) + 3.0 * p3(e, e, L) + 3.0 * p3(e, L, L) + p3(L, L, L);
  const SpectralField F22 = 3.0 * p3(z, e, e) + 6.0 * p3(z, e, L) + 3.0 * p3(z, L, L);
  const SpectralField F23 = 3.0 * p3(z, z, L) + 3.0 * p3(z, z, e);
  const SpectralField F24 = p3(z, z, z);
  const auto Lx = derivative(L), ex = derivative(e), zx = derivative(z);
  const SpectralField F31 = p2(ex, ex) + 2.0 * p2(ex, Lx);
  const SpectralField F32 = 2.0 * p2(ex, zx) + 2.0 * p2(zx, Lx);
  const SpectralField F33 = p2(zx, zx);
  const SpectralField F1 = F11 + F12 + F13;
  const SpectralField F2 = F21 + F22 + F23 + F24;
  const SpectralField F3 = F31 + F32 + F33;
  return apply_symbol(table, Symbol::tau, F1) +
         apply_symbol(table, Symbol::psi, -0.125 * F2 - (7.0 / 48.0) * F3);
}

ExperimentReport inflation_experiment(const InflationConfig& icfg, const SolveConfig& cfg,
                                      const SymbolTable& table) {
  if (!(icfg.sigma > 0.0 && icfg.sigma < 1.0 - icfg.s))
    throw DomainError("inflation needs 0 < sigma < 1 - s");
  if (!(icfg.theta > 3.0)) throw DomainError("inflation needs theta > 3");
  const auto& p = table.params();
  ExperimentReport rep("inflate");
  rep.inputs()["k1_list"] = icfg.k1_list;
  rep.inputs()["sigma"] = icfg.sigma;
  rep.inputs()["theta"] = icfg.theta;
  rep.inputs()["s"] = icfg.s;
  rep.inputs()["t_fixed"] = icfg.t_fixed;
  rep.inputs()["dt"] = cfg.dt;
  rep.note("delta3", p.delta3);
  rep.note("delta3_positive", p.delta3 > 0.0);

  SolveConfig scfg = cfg;
  scfg.frame = Frame::shifted;

  auto& data = rep.series("data_Hs");
  auto& fixed = rep.series("eta1_fixed_t_Hs");
  auto& at_tj = rep.series("eta1_Tj_Hs");
  auto& zeta = rep.series("zeta_Tj_H1");
  auto& j3 = rep.series("J3_fixed_t_Hs");
  for (int k1 : icfg.k1_list) {
    const int active = 2 * (k1 + 1);
    if (active > table.max_mode())
      throw RangeError("k1 = " + std::to_string(k1) + " needs max_mode >= " +
                       std::to_string(active));
    const int m = std::min(table.max_mode(), 2 * active);
    const auto d = inflation_data(k1, icfg.sigma, m);
    const double x = k1;
    data.points.push_back({x, sobolev_norm(d.field, icfg.s)});
    const auto terms = inflation_eta1_terms(d, icfg.t_fixed, table);
    SpectralField sum(m);
    for (const auto& term : terms) {
      sum += term.field;
      if (term.name == "J3") j3.points.push_back({x, sobolev_norm(term.field, icfg.s)});
    }
    fixed.points.push_back({x, sobolev_norm(sum, icfg.s)});
    const double tj = std::pow(x, -icfg.theta * icfg.sigma);
    const auto eta1 = inflation_eta1_closed_form(d, tj, table);
    at_tj.points.push_back({x, sobolev_norm(eta1, icfg.s)});
    if (icfg.with_remainder) {
      SolveConfig c = scfg;
      c.dt = std::min(cfg.dt, tj / 64.0);
      const auto full = advance(d.field, 0.0, tj, c, table);
      const auto z = full - semigroup(d.field, tj, table, Frame::shifted) - eta1;
      zeta.points.push_back({x, sobolev_norm(z, 1.0)});
    }
  }
  if (icfg.k1_list.size() >= 3) {
    rep.fit("data_slope", "data_Hs", icfg.sigma - 1.0 + icfg.s, 0.05);
    rep.fit("eta1_fixed_t_slope", "eta1_fixed_t_Hs", 2.0 * icfg.sigma, 0.05);
    rep.note("eta1_Tj_expected_slope", (2.0 - icfg.theta) * icfg.sigma);
    rep.note("eta1_Tj_slope", fit_exponent(at_tj.points).slope);
    if (icfg.with_remainder) {
      const auto zf = fit_exponent(zeta.points);
      rep.note("zeta_bound_exponent", (3.0 - icfg.theta) * icfg.sigma);
      rep.check(CheckRecord::at_most("zeta_slope_negative", zf.slope, 0.0));
      rep.note("zeta_slope", zf.slope);
    }
  }
  return rep;
}

}  // namespace kdvbbm
