#pragma once

#include <string>
#include <vector>

#include "kdvbbm/dynamics.hpp"
#include "kdvbbm/model.hpp"
#include "kdvbbm/report.hpp"
#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm {

// Ill-posedness family ------------------------------------------------------

/// coefficients 1/(N sqrt(k0)) on N-k0 <= |k| <= N+k0.
struct IllposedData {
  int n = 0;
  int k0 = 1;
  SpectralField field;
};

/// max_mode defaults to 2(N + k0), enough for the quadratic interaction.
IllposedData illposed_data(int n, int k0 = 1, int max_mode = 0);

/// phi(k) - phi(k - k1) - phi(k1) with phi from `frame`.
double theta(int k, int k1, const SymbolTable& table, Frame frame = Frame::standard);

/// k/(4 varphi(k)) (3 - 4 gamma k^2 - 7/12 k1 (k - k1)), as printed.
double chi(int k, int k1, const SymbolTable& table);

/// tau(k) + 7/48 psi(k) k1 (k - k1): the multiplier that actually multiplies
/// h(k-k1) h(k1) in the quadratic Duhamel term.
double picard_symbol(int k, int k1, const SymbolTable& table);

/// (e^{i t theta} - 1) / theta, evaluated as i t e^{i t theta/2} sinc(t theta/2).
Complex resonant_factor(double theta, double t);

/// The eps^2 Picard term -i int_0^t S(t-t') [tau (S h)^2 - 7/48 psi ((S h)_x)^2] dt'
/// by its mode sum. Output shares h's max_mode (truncated).
SpectralField second_iterate_formula(const SpectralField& h, double t, const SymbolTable& table,
                                     Frame frame = Frame::standard);

/// Same object by composite Simpson in the twisted frame.
SpectralField second_iterate_quadrature(const SpectralField& h, double t,
                                        const SymbolTable& table,
                                        Frame frame = Frame::standard, int intervals = 64);

/// The pairs (k, k1) with h(k - k1) h(k1) nonzero for eta_N data at output
/// mode k: K_k as ordered pairs.
std::vector<int> interaction_set(int k, int n, int k0);

struct ThetaBound {
  double mode_one = 0.0;  // max |Theta(1, k1)| / k0 over K_1
  double all = 0.0;       // max |Theta(k, k1)| / k0 over |k| <= 2 k0, k1 in K_k

  /// t < pi / (4 C k0) with C = mode_one.
  double window(int k0) const;
};

ThetaBound measure_theta_bound(const std::vector<int>& n_list, int k0, const SymbolTable& table);

/// sum_{k1 in K_1} |picard_symbol(1, k1)| / (N^2 k0); the lower-bound chain
/// gives |F(I2)(1)| >= (sqrt 2 / 2) t times this when all terms share a sign.
double mode_one_constant(int n, int k0, const SymbolTable& table, bool* same_sign = nullptr);

ExperimentReport illposed_scan(const std::vector<int>& n_list, int k0, double s, double t,
                               const SymbolTable& table);

/// Solves from eps eta_N and compares with eps S(t) eta_N + eps^2 I2. The
/// field lives on the table's mode range.
ExperimentReport series_remainder_check(const std::vector<double>& eps_list, int n, int k0,
                                        double t, double s, const SolveConfig& cfg,
                                        const SymbolTable& table);

// Norm inflation ------------------------------------------------------------

struct InflationData {
  int k1 = 0;
  double sigma = 0.0;
  SpectralField field;  // k1^{sigma-1} (sin k1 x + sin (k1+1) x)
};

/// max_mode defaults to 2(k1 + 1).
InflationData inflation_data(int k1, double sigma, int max_mode = 0);

struct NamedField {
  std::string name;
  SpectralField field;
};

/// The eight pieces I1..I4, J1..J4 of eta_1 (already scaled by
/// k1^{2(sigma-1)}), in the moving frame.
std::vector<NamedField> inflation_eta1_terms(const InflationData& data, double t,
                                             const SymbolTable& table);
SpectralField inflation_eta1_closed_form(const InflationData& data, double t,
                                         const SymbolTable& table);

/// -i (tau F1 - 1/8 psi F2 - 7/48 psi F3) built from the expansion of
/// (L + e + z)^2, (L + e + z)^3 and ((L + e + z)_x)^2 minus the L^2, L_x^2
/// parts, term by term.
SpectralField remainder_forcing(const SpectralField& lin, const SpectralField& eta1,
                                const SpectralField& zeta, const SymbolTable& table);

struct InflationConfig {
  std::vector<int> k1_list{16, 32, 64, 128};
  double sigma = 0.3;
  double theta = 3.5;
  double s = 0.5;
  double t_fixed = 1e-3;
  /// Run the full solver for the remainder at T_j.
  bool with_remainder = true;
};

ExperimentReport inflation_experiment(const InflationConfig& icfg, const SolveConfig& cfg,
                                      const SymbolTable& table);

}  // namespace kdvbbm
