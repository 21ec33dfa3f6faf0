#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "kdvbbm/errors.hpp"
#include "kdvbbm/model.hpp"
#include "kdvbbm/report.hpp"
#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm {

enum class Scheme { integrating_factor_rk4, picard_quadrature };

std::string_view scheme_name(Scheme s);
Scheme scheme_from_name(std::string_view name);

struct SolveConfig {
  double dt = 1e-3;
  int picard_iters = 8;
  /// Local existence constant; the window is c_s / (r (1 + 2 r)).
  double c_s = 0.25;
  /// Picard sweeps stop early once the update is below tol (relative, H^1).
  double tol = 1e-15;
  Scheme scheme = Scheme::integrating_factor_rk4;
  Frame frame = Frame::standard;
  std::vector<double> norm_indices{1.0};
  int save_every = 1;
  bool keep_states = true;
  double blowup_threshold = 1e6;
  int max_halvings = 30;

  void validate() const;
};

class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<double> norm_indices) : norm_indices_(std::move(norm_indices)) {}

  /// Appends a sample; times must increase strictly.
  void record(double t, const SpectralField& state, const ModelParams& p, bool keep_state);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpectralField>& states() const { return states_; }
  const std::vector<double>& energy() const { return energy_; }
  const std::vector<double>& mean() const { return mean_; }
  /// norms()[i][j]: H^{s_j} norm at sample i.
  const std::vector<std::vector<double>>& norms() const { return norms_; }
  const std::vector<double>& norm_indices() const { return norm_indices_; }

  /// Last recorded state (requires keep_state on that sample).
  const SpectralField& final_state() const;

  /// Appends `other`, skipping a leading sample that repeats the last time.
  void append(const Trajectory& other);

  /// `t,E,mean,H_s...` with 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<double> norm_indices_;
  std::vector<double> times_;
  std::vector<SpectralField> states_;
  std::vector<double> energy_;
  std::vector<double> mean_;
  std::vector<std::vector<double>> norms_;
};

/// Raised when a step produces a non-finite coefficient or an H^1 norm above
/// the configured threshold. Carries the last good state and its time.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, SpectralField last_good, double time, Trajectory partial = {})
      : Error(what),
        last_good_(std::move(last_good)),
        time_(time),
        partial_(std::move(partial)) {}

  const SpectralField& last_good() const { return last_good_; }
  double time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  SpectralField last_good_;
  double time_;
  Trajectory partial_;
};

/// The nonlinearity as it enters eta_t = -i phi(D) eta + rhs_F(eta), i.e.
/// rhs_F = -i (tau(D) eta^2 - 1/8 psi(D) eta^3 - 7/48 psi(D) eta_x^2), which
/// is a real field. Products are exact on the stored modes.
SpectralField rhs_F(const SpectralField& eta, const SymbolTable& table);

/// The quadratic part -i (tau(D) eta^2 - 7/48 psi(D) eta_x^2).
SpectralField rhs_F_quadratic(const SpectralField& eta, const SymbolTable& table);

/// rhs_F(u + v) - rhs_F(u), assembled from the expanded polynomial terms.
SpectralField rhs_F_difference(const SpectralField& v, const SpectralField& u,
                               const SymbolTable& table);

/// One step of size cfg.dt starting at time t. Throws BlowUp.
SpectralField step(const SpectralField& eta, double t, const SolveConfig& cfg,
                   const SymbolTable& table);
/// Same with an explicit (possibly negative) step size.
SpectralField step(const SpectralField& eta, double t, double h, const SolveConfig& cfg,
                   const SymbolTable& table);

/// Integrates from t0 to t1 (either direction) with steps of cfg.dt and a
/// final partial step; returns the end state.
SpectralField advance(const SpectralField& eta0, double t0, double t1, const SolveConfig& cfg,
                      const SymbolTable& table);

/// c_s / (r (1 + 2 r)).
double local_time_bound(double norm, double c_s);

struct LocalSolution {
  double T_bar = 0.0;     // window from the initial norm
  double T_local = 0.0;   // window actually integrated (after halvings)
  double norm0 = 0.0;
  double sup_norm = 0.0;  // sup over the accepted window
  int halvings = 0;
  /// First time the growth bound broke on the original window, if ever.
  std::optional<double> first_violation;
  Trajectory trajectory;

  bool growth_ok() const { return sup_norm <= 2.0 * norm0; }
};

/// Integrates on [0, T_bar] and checks sup ||eta||_{H^s} <= 2 ||eta0||_{H^s};
/// on violation the window is halved and retried.
LocalSolution solve_local(const SpectralField& eta0, SobolevIndex s, const SolveConfig& cfg,
                          const SymbolTable& table);

struct WindowRecord {
  double start = 0.0;
  double length = 0.0;
  double norm0 = 0.0;
  double sup_norm = 0.0;
  int halvings = 0;
};

struct GlobalSolution {
  Trajectory trajectory;
  std::vector<WindowRecord> windows;
};

/// Chains local windows (H^s with s = cfg.norm_indices.front()) up to T.
GlobalSolution solve_to(const SpectralField& eta0, double T, const SolveConfig& cfg,
                        const SymbolTable& table);

/// (1/2) int eta^2 + gamma1 eta_x^2 + delta1 eta_xx^2.
double energy(const SpectralField& eta, const ModelParams& p);

/// (gamma - 7/48) int eta_x^3; exactly zero for the energy-conserving family.
double energy_drift_rate(const SpectralField& eta, const ModelParams& p);

/// Low part |k| <= n_cut and the remainder.
std::pair<SpectralField, SpectralField> split_data(const SpectralField& eta0, int n_cut);

struct SplitOutcome {
  int n_cut = 0;
  double t0 = 0.0;
  SpectralField u, v, h, unsplit;
  double u_h2 = 0.0;
  double h_h2 = 0.0;
  double energy_increment = 0.0;
  double consistency_h1 = 0.0;
};

/// Evolves (u, v) jointly to t0 = n_cut^{-2(2-s)} alongside the unsplit flow.
SplitOutcome split_evolve(const SpectralField& eta0, double s, int n_cut, const SolveConfig& cfg,
                          const SymbolTable& table);

/// Runs split_evolve for every cutoff and fits ||h(t0)||_{H^2} against
/// N^{s-3} (15%), checks that ||u(t0)||_{H^2} / N^{2-s} does not grow and
/// that u + v tracks the unsplit flow to 1e-9 in H^1.
ExperimentReport splitting_experiment(const SpectralField& eta0, double s,
                                      const std::vector<int>& n_cuts, const SolveConfig& cfg,
                                      const SymbolTable& table);

}  // namespace kdvbbm
