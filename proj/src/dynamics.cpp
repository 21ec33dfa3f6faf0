#include "kdvbbm/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "grid.hpp"
#include "kdvbbm/report.hpp"

namespace kdvbbm {

std::string_view scheme_name(Scheme s) {
  return s == Scheme::integrating_factor_rk4 ? "integrating-factor-rk4" : "picard-quadrature";
}

Scheme scheme_from_name(std::string_view name) {
  if (name == "integrating-factor-rk4" || name == "rk4") return Scheme::integrating_factor_rk4;
  if (name == "picard-quadrature" || name == "picard") return Scheme::picard_quadrature;
  throw ConfigError({"unknown scheme '" + std::string(name) + "'"});
}

void SolveConfig::validate() const {
  std::vector<std::string> errors;
  if (!(dt > 0.0) || !std::isfinite(dt)) errors.push_back("dt must be positive");
  if (picard_iters < 1) errors.push_back("picard_iters must be >= 1");
  if (!(c_s > 0.0)) errors.push_back("c_s must be positive");
  if (!(tol >= 0.0)) errors.push_back("tol must be non-negative");
  if (save_every < 1) errors.push_back("save_every must be >= 1");
  if (norm_indices.empty()) errors.push_back("norm_indices must not be empty");
  if (!(blowup_threshold > 0.0)) errors.push_back("blowup_threshold must be positive");
  if (!errors.empty()) throw ConfigError(errors);
}

// ---------------------------------------------------------------------------

void Trajectory::record(double t, const SpectralField& state, const ModelParams& p,
                        bool keep_state) {
  if (!times_.empty() && !(t > times_.back()))
    throw DomainError("trajectory times must increase strictly");
  if (!states_.empty() && states_.front().max_mode() != state.max_mode())
    throw RangeError("trajectory states must share max_mode");
  times_.push_back(t);
  if (keep_state) states_.push_back(state);
  energy_.push_back(kdvbbm::energy(state, p));
  mean_.push_back(state[0].real());
  std::vector<double> row;
  row.reserve(norm_indices_.size());
  for (double s : norm_indices_) row.push_back(sobolev_norm(state, s));
  norms_.push_back(std::move(row));
}

const SpectralField& Trajectory::final_state() const {
  if (states_.empty()) throw DomainError("trajectory has no stored states");
  return states_.back();
}

void Trajectory::append(const Trajectory& other) {
  if (norm_indices_.empty()) norm_indices_ = other.norm_indices_;
  const bool with_states = other.states_.size() == other.times_.size() &&
                           states_.size() == times_.size();
  for (std::size_t i = 0; i < other.size(); ++i) {
    if (!times_.empty() && other.times_[i] <= times_.back()) continue;
    times_.push_back(other.times_[i]);
    energy_.push_back(other.energy_[i]);
    mean_.push_back(other.mean_[i]);
    norms_.push_back(other.norms_[i]);
    if (with_states) states_.push_back(other.states_[i]);
  }
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,E,mean";
  for (double s : norm_indices_) os << ",H_" << format_double(s);
  os << '\n';
  for (std::size_t i = 0; i < times_.size(); ++i) {
    os << format_double(times_[i]) << ',' << format_double(energy_[i]) << ','
       << format_double(mean_[i]);
    for (double v : norms_[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

void require_table(const SpectralField& f, const SymbolTable& table) {
  if (f.max_mode() > table.max_mode())
    throw RangeError("field max_mode exceeds symbol table range");
}

// -i (tau A + psi B) for the transforms of A and B.
SpectralField combine(const SymbolTable& table, const SpectralField& quad,
                      const SpectralField& rest) {
  SpectralField out(quad.max_mode());
  for (int k = 1; k <= quad.max_mode(); ++k) {
    const Complex c = table.tau(k) * quad[k] + table.psi(k) * rest[k];
    out.set(k, Complex(c.imag(), -c.real()));
  }
  return out;
}

}  // namespace

SpectralField rhs_F(const SpectralField& eta, const SymbolTable& table) {
  require_table(eta, table);
  const int n = eta.max_mode();
  const int m = dealiased_grid_size(n);
  std::vector<double> u, ux;
  detail::to_grid(eta, m, u);
  detail::to_grid(eta, m, ux, true);
  std::vector<double> quad(u.size()), rest(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = u[j], b = ux[j];
    quad[j] = a * a;
    rest[j] = -0.125 * a * a * a - (7.0 / 48.0) * b * b;
  }
  return combine(table, detail::from_grid(quad, n), detail::from_grid(rest, n));
}

SpectralField rhs_F_quadratic(const SpectralField& eta, const SymbolTable& table) {
  require_table(eta, table);
  const int n = eta.max_mode();
  const int m = dealiased_grid_size(n);
  std::vector<double> u, ux;
  detail::to_grid(eta, m, u);
  detail::to_grid(eta, m, ux, true);
  std::vector<double> quad(u.size()), rest(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    quad[j] = u[j] * u[j];
    rest[j] = -(7.0 / 48.0) * ux[j] * ux[j];
  }
  return combine(table, detail::from_grid(quad, n), detail::from_grid(rest, n));
}

SpectralField rhs_F_difference(const SpectralField& v, const SpectralField& u,
                               const SymbolTable& table) {
  require_table(v, table);
  if (u.max_mode() != v.max_mode()) throw RangeError("rhs_F_difference needs equal max_mode");
  const int n = v.max_mode();
  const int m = dealiased_grid_size(n);
  std::vector<double> gu, gux, gv, gvx;
  detail::to_grid(u, m, gu);
  detail::to_grid(u, m, gux, true);
  detail::to_grid(v, m, gv);
  detail::to_grid(v, m, gvx, true);
  std::vector<double> quad(gu.size()), rest(gu.size());
  for (std::size_t j = 0; j < gu.size(); ++j) {
    const double a = gu[j], ax = gux[j], b = gv[j], bx = gvx[j];
    quad[j] = b * b + 2.0 * a * b;
    rest[j] = -0.125 * (b * b * b + 3.0 * a * b * b + 3.0 * a * a * b) -
              (7.0 / 48.0) * (bx * bx + 2.0 * bx * ax);
  }
  return combine(table, detail::from_grid(quad, n), detail::from_grid(rest, n));
}

// ---------------------------------------------------------------------------

namespace {

using State = std::vector<SpectralField>;

State flow(const State& y, double t, const SymbolTable& table, Frame frame) {
  State out;
  out.reserve(y.size());
  for (const auto& f : y) out.push_back(semigroup(f, t, table, frame));
  return out;
}

State axpy(const State& y, double a, const State& x) {
  State out = y;
  for (std::size_t i = 0; i < y.size(); ++i) out[i] += a * x[i];
  return out;
}

// Integrating-factor RK4 for y' = -i phi(D) y + G(y), written for y itself:
// the stages are the classical ones for w = S(-t) y mapped back by S.
template <class Rhs>
State lawson_rk4(const State& y, double h, const SymbolTable& table, Frame frame, Rhs&& G) {
  const State k1 = G(y);
  const State k2 = G(flow(axpy(y, h / 2, k1), h / 2, table, frame));
  const State half = flow(y, h / 2, table, frame);
  const State k3 = G(axpy(half, h / 2, k2));
  const State k4 = G(axpy(flow(y, h, table, frame), h, flow(k3, h / 2, table, frame)));
  State out = flow(y, h, table, frame);
  const State k1f = flow(k1, h, table, frame);
  const State k23 = flow(axpy(k2, 1.0, k3), h / 2, table, frame);
  for (std::size_t i = 0; i < y.size(); ++i) {
    SpectralField inc = k1f[i];
    inc += 2.0 * k23[i];
    inc += k4[i];
    out[i] += (h / 6.0) * inc;
  }
  return out;
}

// Fixed-point iteration of the Duhamel integral in the twisted variable
// w(s) = S(-s) eta(s), with Simpson nodes 0, h/2, h.
SpectralField picard_step(const SpectralField& eta, double h, const SolveConfig& cfg,
                          const SymbolTable& table) {
  auto g = [&](const SpectralField& w, double s) {
    return semigroup(rhs_F(semigroup(w, s, table, cfg.frame), table), -s, table, cfg.frame);
  };
  const SpectralField& w0 = eta;
  const SpectralField g0 = g(w0, 0.0);
  SpectralField w1 = w0 + (h / 2) * g0;
  SpectralField w2 = w0 + h * g0;
  for (int it = 0; it < cfg.picard_iters; ++it) {
    const SpectralField g1 = g(w1, h / 2);
    const SpectralField g2 = g(w2, h);
    SpectralField n1 = w0 + (h / 24.0) * (5.0 * g0 + 8.0 * g1 - g2);
    SpectralField n2 = w0 + (h / 6.0) * (g0 + 4.0 * g1 + g2);
    const double change = sobolev_norm(n2 - w2, 1.0);
    const double scale = sobolev_norm(n2, 1.0);
    w1 = std::move(n1);
    w2 = std::move(n2);
    if (change <= cfg.tol * scale) break;
  }
  return semigroup(w2, h, table, cfg.frame);
}

void check_state(const SpectralField& next, const SpectralField& prev, double t,
                 const SolveConfig& cfg) {
  if (!next.is_finite())
    throw BlowUp("non-finite coefficient after step", prev, t);
  const double n1 = sobolev_norm(next, 1.0);
  if (!(n1 <= cfg.blowup_threshold)) {
    std::ostringstream msg;
    msg << "H^1 norm " << n1 << " exceeds blow-up threshold " << cfg.blowup_threshold;
    throw BlowUp(msg.str(), prev, t);
  }
}

}  // namespace

SpectralField step(const SpectralField& eta, double t, double h, const SolveConfig& cfg,
                   const SymbolTable& table) {
  require_table(eta, table);
  SpectralField next;
  if (cfg.scheme == Scheme::integrating_factor_rk4) {
    auto G = [&](const State& y) { return State{rhs_F(y[0], table)}; };
    next = std::move(lawson_rk4(State{eta}, h, table, cfg.frame, G)[0]);
  } else {
    next = picard_step(eta, h, cfg, table);
  }
  check_state(next, eta, t, cfg);
  return next;
}

SpectralField step(const SpectralField& eta, double t, const SolveConfig& cfg,
                   const SymbolTable& table) {
  return step(eta, t, cfg.dt, cfg, table);
}

SpectralField advance(const SpectralField& eta0, double t0, double t1, const SolveConfig& cfg,
                      const SymbolTable& table) {
  cfg.validate();
  const double span = std::abs(t1 - t0);
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const auto full = static_cast<long>(std::floor(span / cfg.dt * (1.0 + 1e-12)));
  SpectralField eta = eta0;
  double t = t0;
  for (long i = 0; i < full; ++i) {
    eta = step(eta, t, dir * cfg.dt, cfg, table);
    t = t0 + dir * cfg.dt * static_cast<double>(i + 1);
  }
  const double rest = span - cfg.dt * static_cast<double>(full);
  if (rest > 1e-14 * std::max(1.0, span)) eta = step(eta, t, dir * rest, cfg, table);
  return eta;
}

double local_time_bound(double norm, double c_s) {
  if (!(norm > 0.0)) throw DomainError("local window needs a nonzero data norm");
  return c_s / (norm * (1.0 + 2.0 * norm));
}

namespace {

struct WindowRun {
  Trajectory trajectory;
  double sup_norm = 0.0;
  std::optional<double> first_violation;
  SpectralField end;
};

// Steps from t_start over [t_start, t_start + length], recording samples.
// With `stop_on_violation` the run ends at the first sample that breaks the
// growth bound.
WindowRun run_window(const SpectralField& eta0, double t_start, double length, double s,
                     double bound, bool stop_on_violation, bool record_start,
                     const SolveConfig& cfg, const SymbolTable& table) {
  WindowRun run;
  run.trajectory = Trajectory(cfg.norm_indices);
  const auto& p = table.params();
  SpectralField eta = eta0;
  run.sup_norm = sobolev_norm(eta, s);
  if (record_start) run.trajectory.record(t_start, eta, p, cfg.keep_states);
  const auto full = static_cast<long>(std::floor(length / cfg.dt * (1.0 + 1e-12)));
  const double rest = length - cfg.dt * static_cast<double>(full);
  const long total = full + (rest > 1e-14 * std::max(1.0, length) ? 1 : 0);
  double t = t_start;
  for (long i = 0; i < total; ++i) {
    const double h = i < full ? cfg.dt : rest;
    try {
      eta = step(eta, t, h, cfg, table);
    } catch (const BlowUp& b) {
      throw BlowUp(b.what(), b.last_good(), b.time(), run.trajectory);
    }
    t = i < full ? t_start + cfg.dt * static_cast<double>(i + 1) : t_start + length;
    const double nrm = sobolev_norm(eta, s);
    run.sup_norm = std::max(run.sup_norm, nrm);
    const bool last = i + 1 == total;
    if (last || (i + 1) % cfg.save_every == 0) run.trajectory.record(t, eta, p, cfg.keep_states);
    if (nrm > bound && !run.first_violation) {
      run.first_violation = t;
      if (stop_on_violation) break;
    }
  }
  run.end = std::move(eta);
  return run;
}

}  // namespace

LocalSolution solve_local(const SpectralField& eta0, SobolevIndex s, const SolveConfig& cfg,
                          const SymbolTable& table) {
  cfg.validate();
  require_table(eta0, table);
  LocalSolution out;
  out.norm0 = sobolev_norm(eta0, s);
  out.T_bar = local_time_bound(out.norm0, cfg.c_s);
  const double bound = 2.0 * out.norm0;
  double length = out.T_bar;
  for (int attempt = 0;; ++attempt) {
    const bool may_retry = attempt < cfg.max_halvings;
    WindowRun run = run_window(eta0, 0.0, length, s.s, bound, may_retry, true, cfg, table);
    if (attempt == 0) out.first_violation = run.first_violation;
    if (!run.first_violation || !may_retry) {
      out.T_local = length;
      out.sup_norm = run.sup_norm;
      out.halvings = attempt;
      out.trajectory = std::move(run.trajectory);
      return out;
    }
    length /= 2.0;
  }
}

GlobalSolution solve_to(const SpectralField& eta0, double T, const SolveConfig& cfg,
                        const SymbolTable& table) {
  cfg.validate();
  require_table(eta0, table);
  if (!(T > 0.0)) throw DomainError("solve_to needs T > 0");
  const double s = cfg.norm_indices.front();
  GlobalSolution out;
  out.trajectory = Trajectory(cfg.norm_indices);
  SpectralField eta = eta0;
  double t = 0.0;
  bool first = true;
  while (t < T * (1.0 - 1e-14)) {
    WindowRecord w;
    w.start = t;
    w.norm0 = sobolev_norm(eta, s);
    double length = w.norm0 > 0.0 ? local_time_bound(w.norm0, cfg.c_s) : T - t;
    length = std::min(length, T - t);
    WindowRun run;
    for (;;) {
      try {
        run = run_window(eta, t, length, s, 2.0 * w.norm0, w.halvings < cfg.max_halvings,
                         first, cfg, table);
      } catch (const BlowUp& b) {
        Trajectory partial = out.trajectory;
        partial.append(b.partial());
        throw BlowUp(b.what(), b.last_good(), b.time(), partial);
      }
      if (!run.first_violation || w.halvings >= cfg.max_halvings) break;
      length /= 2.0;
      ++w.halvings;
    }
    w.length = length;
    w.sup_norm = run.sup_norm;
    out.windows.push_back(w);
    out.trajectory.append(run.trajectory);
    eta = std::move(run.end);
    t = (T - t - length) <= 1e-14 * T ? T : t + length;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

double energy(const SpectralField& eta, const ModelParams& p) {
  double sum = 0.0;
  for (int k = -eta.max_mode(); k <= eta.max_mode(); ++k) {
    const double k2 = static_cast<double>(k) * k;
    sum += (1.0 + p.gamma1 * k2 + p.delta1 * k2 * k2) * std::norm(eta[k]);
  }
  return std::numbers::pi * sum;
}

double energy_drift_rate(const SpectralField& eta, const ModelParams& p) {
  if (p.conserves_energy()) return 0.0;
  return (p.gamma - ModelParams::kHamiltonianGamma) * integral_of_power(derivative(eta), 3);
}

std::pair<SpectralField, SpectralField> split_data(const SpectralField& eta0, int n_cut) {
  if (n_cut < 1 || n_cut >= eta0.max_mode())
    throw RangeError("split cutoff must satisfy 1 <= N_cut < max_mode");
  SpectralField low(eta0.max_mode()), high(eta0.max_mode());
  for (int k = 0; k <= eta0.max_mode(); ++k) (k <= n_cut ? low : high).set(k, eta0[k]);
  return {low, high};
}

SplitOutcome split_evolve(const SpectralField& eta0, double s, int n_cut, const SolveConfig& cfg,
                          const SymbolTable& table) {
  cfg.validate();
  require_table(eta0, table);
  if (!(s >= 1.0 && s < 2.0)) throw DomainError("splitting needs 1 <= s < 2");
  auto [u0, v0] = split_data(eta0, n_cut);
  SplitOutcome out;
  out.n_cut = n_cut;
  out.t0 = std::pow(static_cast<double>(n_cut), -2.0 * (2.0 - s));
  auto G = [&](const State& y) {
    return State{rhs_F(y[0], table), rhs_F_difference(y[1], y[0], table),
                 rhs_F(y[2], table)};
  };
  State y{u0, v0, eta0};
  const auto full = static_cast<long>(std::floor(out.t0 / cfg.dt * (1.0 + 1e-12)));
  const double rest = out.t0 - cfg.dt * static_cast<double>(full);
  double t = 0.0;
  for (long i = 0; i <= full; ++i) {
    const double h = i < full ? cfg.dt : rest;
    if (h <= 1e-14 * out.t0) break;
    State next = lawson_rk4(y, h, table, cfg.frame, G);
    for (std::size_t j = 0; j < next.size(); ++j) check_state(next[j], y[j], t, cfg);
    y = std::move(next);
    t += h;
  }
  out.u = y[0];
  out.v = y[1];
  out.unsplit = y[2];
  out.h = out.v - semigroup(v0, out.t0, table, cfg.frame);
  out.u_h2 = sobolev_norm(out.u, 2.0);
  out.h_h2 = sobolev_norm(out.h, 2.0);
  const auto& p = table.params();
  out.energy_increment = energy(out.u + out.h, p) - energy(out.u, p);
  out.consistency_h1 = sobolev_norm(out.u + out.v - out.unsplit, 1.0);
  return out;
}

ExperimentReport splitting_experiment(const SpectralField& eta0, double s,
                                      const std::vector<int>& n_cuts, const SolveConfig& cfg,
                                      const SymbolTable& table) {
  ExperimentReport rep("split");
  rep.inputs()["s"] = s;
  rep.inputs()["n_cuts"] = n_cuts;
  rep.inputs()["max_mode"] = eta0.max_mode();
  rep.inputs()["dt"] = cfg.dt;
  rep.inputs()["data_Hs"] = sobolev_norm(eta0, s);
  auto& hs = rep.series("h_H2");
  auto& us = rep.series("u_H2");
  auto& scaled = rep.series("u_H2_over_N^(2-s)");
  auto& de = rep.series("energy_increment");
  auto& t0 = rep.series("t0");
  double worst = 0.0;
  for (int n : n_cuts) {
    const auto out = split_evolve(eta0, s, n, cfg, table);
    const double x = n;
    hs.points.push_back({x, out.h_h2});
    us.points.push_back({x, out.u_h2});
    scaled.points.push_back({x, out.u_h2 / std::pow(x, 2.0 - s)});
    de.points.push_back({x, out.energy_increment});
    t0.points.push_back({x, out.t0});
    worst = std::max(worst, out.consistency_h1);
  }
  if (n_cuts.size() >= 3) {
    rep.fit("h_decay", "h_H2", s - 3.0, 0.15);
    const auto g = fit_exponent(scaled.points);
    rep.check(CheckRecord::at_most("u_scaled_growth_exponent", g.slope, 0.1));
  }
  rep.check(CheckRecord::at_most("split_consistency_H1", worst, 1e-9));
  return rep;
}

}  // namespace kdvbbm
