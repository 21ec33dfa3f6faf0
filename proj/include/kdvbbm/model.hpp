#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdvbbm/keyvalue.hpp"
#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm {

/// Coefficients of
///   eta_t + eta_x - g1 eta_xxt + g2 eta_xxx + d1 eta_xxxxt + d2 eta_xxxxx
///     + 3/2 eta eta_x + gamma (eta^2)_xxx - 7/48 (eta_x^2)_x - 1/8 (eta^3)_x = 0
/// together with the moving-frame coefficients delta3 = 1 - d2/d1 and
/// gamma3 = g2 + g1 d2/d1 (frame x -> x - (d2/d1) t, which removes eta_xxxxx).
struct ModelParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double gamma = 0.0;
  double delta3 = 0.0;
  double gamma3 = 0.0;

  static constexpr double kTolerance = 1e-12;
  static constexpr double kHamiltonianGamma = 7.0 / 48.0;

  /// Throws HypothesisError (gamma1, delta1 <= 0) or DomainError (constraint
  /// identity off by more than kTolerance).
  void validate() const;
  bool conserves_energy() const;
};

ModelParams params_from_primary(double gamma1, double delta1);

struct AbcdCoefficients {
  double a = 0, b = 0, c = 0, d = 0;
  double a1 = 0, b1 = 0, c1 = 0, d1 = 0;
};

ModelParams params_from_abcd(const AbcdCoefficients& abcd);

/// "hamiltonian": gamma1 = 1/12, delta1 = 1/360 (gamma = 7/48, delta3 < 0).
/// "inflation":   gamma1 = 0.35, delta1 = 0.01  (delta3 > 0).
ModelParams preset(std::string_view name);
std::vector<std::string> preset_names();

struct LoadedParams {
  ModelParams params;
  /// (field, rule that produced it), in a fixed order.
  std::vector<std::pair<std::string, std::string>> provenance;
};

/// Accepts either {gamma1, delta1} or the full abcd octet; anything else is
/// a ConfigError.
LoadedParams params_from_block(const KeyValueBlock& block);
LoadedParams load_params_file(const std::string& path);

// ---------------------------------------------------------------------------

enum class Symbol { varphi, inv_varphi, phi, psi, tau, omega, phi_shifted };

/// Which dispersion drives the free group: phi (original frame) or
/// phi_shifted (moving frame).
enum class Frame { standard, shifted };

std::string_view symbol_name(Symbol s);
Symbol symbol_from_name(std::string_view name);
bool symbol_is_odd(Symbol s);

/// Multiplier values on k in {-N..N}:
///   varphi(k) = 1 + g1 k^2 + d1 k^4
///   phi(k)    = k (1 - g2 k^2 + d2 k^4) / varphi(k)
///   psi(k)    = k / varphi(k)
///   tau(k)    = k (3 - 4 gamma k^2) / (4 varphi(k))
///   omega(k)  = |k| / (1 + k^2)
///   phi_shifted(k) = k (delta3 - gamma3 k^2) / varphi(k) = phi(k) - k d2/d1
class SymbolTable {
 public:
  SymbolTable(const ModelParams& params, int max_mode);

  int max_mode() const { return max_mode_; }
  const ModelParams& params() const { return params_; }

  /// Throws RangeError for |k| > N.
  double value(Symbol s, int k) const;

  double varphi(int k) const { return value(Symbol::varphi, k); }
  double phi(int k) const { return value(Symbol::phi, k); }
  double psi(int k) const { return value(Symbol::psi, k); }
  double tau(int k) const { return value(Symbol::tau, k); }
  double omega(int k) const { return value(Symbol::omega, k); }
  double phi_shifted(int k) const { return value(Symbol::phi_shifted, k); }

  /// Dispersion relation of the chosen frame.
  double dispersion(Frame frame, int k) const {
    return value(frame == Frame::standard ? Symbol::phi : Symbol::phi_shifted, k);
  }

 private:
  const std::vector<double>& column(Symbol s) const;

  ModelParams params_;
  int max_mode_;
  std::vector<double> varphi_, inv_varphi_, phi_, psi_, tau_, omega_, phi_shifted_;
};

/// Even symbols act as f^(k) -> m(k) f^(k). Odd symbols are applied with the
/// -i factor they carry in the evolution, f^(k) -> -i m(k) f^(k), so the
/// result is again a real function.
SpectralField apply_symbol(const SymbolTable& table, Symbol s, const SpectralField& f);

/// Free group: f^(k) -> exp(-i phi(k) t) f^(k), phi per `frame`.
SpectralField semigroup(const SpectralField& f, double t, const SymbolTable& table,
                        Frame frame = Frame::standard);

}  // namespace kdvbbm
