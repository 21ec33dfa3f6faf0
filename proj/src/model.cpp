#include "kdvbbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "kdvbbm/errors.hpp"

namespace kdvbbm {

void ModelParams::validate() const {
  if (!(gamma1 > 0.0) || !(delta1 > 0.0))
    throw HypothesisError("gamma1 and delta1 must be positive");
  auto check = [](double lhs, double rhs, const char* what) {
    if (!(std::abs(lhs - rhs) <= kTolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "constraint " << what << " violated: " << lhs << " vs " << rhs;
      throw DomainError(msg.str());
    }
  };
  check(gamma1 + gamma2, 1.0 / 6.0, "gamma1 + gamma2 = 1/6");
  check(gamma, (5.0 - 18.0 * gamma1) / 24.0, "gamma = (5 - 18 gamma1)/24");
  check(delta2 - delta1, 19.0 / 360.0 - gamma1 / 6.0, "delta2 - delta1 = 19/360 - gamma1/6");
  if (delta3 != 1.0 - delta2 / delta1 || gamma3 != gamma2 + gamma1 * delta2 / delta1)
    throw DomainError("shifted-frame coefficients inconsistent with delta2/delta1");
}

bool ModelParams::conserves_energy() const {
  return std::abs(gamma - kHamiltonianGamma) <= kTolerance;
}

namespace {

void fill_shifted(ModelParams& p) {
  p.delta3 = 1.0 - p.delta2 / p.delta1;
  p.gamma3 = p.gamma2 + p.gamma1 * p.delta2 / p.delta1;
}

}  // namespace

ModelParams params_from_primary(double gamma1, double delta1) {
  if (!(gamma1 > 0.0) || !(delta1 > 0.0))
    throw HypothesisError("gamma1 and delta1 must be positive");
  ModelParams p;
  p.gamma1 = gamma1;
  p.delta1 = delta1;
  p.gamma2 = 1.0 / 6.0 - gamma1;
  p.gamma = (5.0 - 18.0 * gamma1) / 24.0;
  p.delta2 = delta1 + 19.0 / 360.0 - gamma1 / 6.0;
  fill_shifted(p);
  p.validate();
  return p;
}

ModelParams params_from_abcd(const AbcdCoefficients& q) {
  if (!(std::abs(q.a + q.b + q.c + q.d - 1.0 / 3.0) <= ModelParams::kTolerance))
    throw DomainError("abcd coefficients must satisfy a + b + c + d = 1/3");
  const double rho = q.b + q.d - 1.0 / 6.0;
  ModelParams p;
  p.gamma1 = 0.5 * (q.b + q.d - rho);
  p.gamma2 = 0.5 * (q.a + q.c + rho);
  p.delta1 = 0.25 * (2.0 * (q.b1 + q.d1) - (q.b - q.d + rho) * (1.0 / 6.0 - q.a - q.d) -
                     q.d * (q.c - q.a + rho));
  p.delta2 = 0.25 * (2.0 * (q.a1 + q.c1) - (q.c - q.a + rho) * (1.0 / 6.0 - q.a) + rho / 3.0);
  p.gamma = (5.0 - 9.0 * (q.b + q.d) + 9.0 * rho) / 24.0;
  if (!(p.gamma1 > 0.0) || !(p.delta1 > 0.0))
    throw HypothesisError("abcd coefficients give gamma1 <= 0 or delta1 <= 0");
  fill_shifted(p);
  p.validate();
  return p;
}

ModelParams preset(std::string_view name) {
  if (name == "hamiltonian") return params_from_primary(1.0 / 12.0, 1.0 / 360.0);
  if (name == "inflation") return params_from_primary(0.35, 0.01);
  throw ConfigError({"unknown preset '" + std::string(name) + "'"});
}

std::vector<std::string> preset_names() { return {"hamiltonian", "inflation"}; }

LoadedParams params_from_block(const KeyValueBlock& block) {
  std::vector<std::string> errors;
  const std::set<std::string> primary{"gamma1", "delta1"};
  const std::set<std::string> abcd{"a", "b", "c", "d", "a1", "b1", "c1", "d1"};
  const bool has_primary = block.has("gamma1") || block.has("delta1");
  const bool has_abcd = std::any_of(abcd.begin(), abcd.end(),
                                    [&](const auto& k) { return block.has(k); });
  if (has_primary == has_abcd) {
    throw ConfigError({"parameters need exactly one of {gamma1, delta1} or the abcd octet"});
  }
  block.reject_unknown(has_primary ? primary : abcd, errors, "params.");
  LoadedParams out;
  if (has_primary) {
    auto g1 = block.number("gamma1", errors, "params.");
    auto d1 = block.number("delta1", errors, "params.");
    if (!block.has("gamma1")) errors.push_back("params.gamma1: missing");
    if (!block.has("delta1")) errors.push_back("params.delta1: missing");
    if (!errors.empty()) throw ConfigError(errors);
    out.params = params_from_primary(*g1, *d1);
    out.provenance = {{"gamma1", "given"},
                      {"delta1", "given"},
                      {"gamma2", "gamma1 + gamma2 = 1/6"},
                      {"gamma", "gamma = (5 - 18 gamma1)/24"},
                      {"delta2", "delta2 - delta1 = 19/360 - gamma1/6"},
                      {"delta3", "delta3 = 1 - delta2/delta1"},
                      {"gamma3", "gamma3 = gamma2 + gamma1 delta2/delta1"}};
    return out;
  }
  AbcdCoefficients q;
  const std::pair<const char*, double*> slots[] = {{"a", &q.a},   {"b", &q.b},   {"c", &q.c},
                                                   {"d", &q.d},   {"a1", &q.a1}, {"b1", &q.b1},
                                                   {"c1", &q.c1}, {"d1", &q.d1}};
  for (const auto& [key, dst] : slots) {
    if (auto v = block.number(key, errors, "params.")) *dst = *v;
    else if (!block.has(key)) errors.push_back(std::string("params.") + key + ": missing");
  }
  if (!errors.empty()) throw ConfigError(errors);
  out.params = params_from_abcd(q);
  out.provenance = {{"gamma1", "gamma1 = (b + d - rho)/2, rho = b + d - 1/6"},
                    {"gamma2", "gamma2 = (a + c + rho)/2"},
                    {"delta1", "delta1 from (b1, d1) block"},
                    {"delta2", "delta2 from (a1, c1) block"},
                    {"gamma", "gamma = (5 - 9(b + d) + 9 rho)/24"},
                    {"delta3", "delta3 = 1 - delta2/delta1"},
                    {"gamma3", "gamma3 = gamma2 + gamma1 delta2/delta1"}};
  return out;
}

LoadedParams load_params_file(const std::string& path) {
  const auto doc = parse_key_value_file(path);
  if (!doc.sections.empty()) throw ConfigError({"parameter file must not contain sections"});
  return params_from_block(doc.top);
}

// ---------------------------------------------------------------------------

std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::varphi: return "varphi";
    case Symbol::inv_varphi: return "inv_varphi";
    case Symbol::phi: return "phi";
    case Symbol::psi: return "psi";
    case Symbol::tau: return "tau";
    case Symbol::omega: return "omega";
    case Symbol::phi_shifted: return "phi_shifted";
  }
  return "?";
}

Symbol symbol_from_name(std::string_view name) {
  for (Symbol s : {Symbol::varphi, Symbol::inv_varphi, Symbol::phi, Symbol::psi, Symbol::tau,
                   Symbol::omega, Symbol::phi_shifted})
    if (symbol_name(s) == name) return s;
  throw RangeError("unknown symbol '" + std::string(name) + "'");
}

bool symbol_is_odd(Symbol s) {
  return s == Symbol::phi || s == Symbol::psi || s == Symbol::tau || s == Symbol::phi_shifted;
}

SymbolTable::SymbolTable(const ModelParams& params, int max_mode)
    : params_(params), max_mode_(max_mode) {
  if (max_mode < 1) throw RangeError("symbol table needs N >= 1");
  params_.validate();
  const auto n = static_cast<std::size_t>(2 * max_mode + 1);
  for (auto* col : {&varphi_, &inv_varphi_, &phi_, &psi_, &tau_, &omega_, &phi_shifted_})
    col->assign(n, 0.0);
  const auto& p = params_;
  for (int k = -max_mode; k <= max_mode; ++k) {
    const auto i = static_cast<std::size_t>(k + max_mode);
    const double kk = k;
    const double k2 = kk * kk;
    const double vp = 1.0 + p.gamma1 * k2 + p.delta1 * k2 * k2;
    varphi_[i] = vp;
    inv_varphi_[i] = 1.0 / vp;
    phi_[i] = kk * (1.0 - p.gamma2 * k2 + p.delta2 * k2 * k2) / vp;
    psi_[i] = kk / vp;
    tau_[i] = kk * (3.0 - 4.0 * p.gamma * k2) / (4.0 * vp);
    omega_[i] = std::abs(kk) / (1.0 + k2);
    phi_shifted_[i] = kk * (p.delta3 - p.gamma3 * k2) / vp;
  }
}

const std::vector<double>& SymbolTable::column(Symbol s) const {
  switch (s) {
    case Symbol::varphi: return varphi_;
    case Symbol::inv_varphi: return inv_varphi_;
    case Symbol::phi: return phi_;
    case Symbol::psi: return psi_;
    case Symbol::tau: return tau_;
    case Symbol::omega: return omega_;
    case Symbol::phi_shifted: return phi_shifted_;
  }
  throw RangeError("bad symbol");
}

double SymbolTable::value(Symbol s, int k) const {
  if (k < -max_mode_ || k > max_mode_) {
    std::ostringstream msg;
    msg << "mode " << k << " outside symbol table range N=" << max_mode_;
    throw RangeError(msg.str());
  }
  return column(s)[static_cast<std::size_t>(k + max_mode_)];
}

SpectralField apply_symbol(const SymbolTable& table, Symbol s, const SpectralField& f) {
  if (f.max_mode() > table.max_mode())
    throw RangeError("field max_mode exceeds symbol table range");
  const bool odd = symbol_is_odd(s);
  SpectralField out(f.max_mode());
  for (int k = 0; k <= f.max_mode(); ++k) {
    const double m = table.value(s, k);
    out.set(k, odd ? Complex(0.0, -m) * f[k] : m * f[k]);
  }
  return out;
}

SpectralField semigroup(const SpectralField& f, double t, const SymbolTable& table,
                        Frame frame) {
  if (f.max_mode() > table.max_mode())
    throw RangeError("field max_mode exceeds symbol table range");
  SpectralField out(f.max_mode());
  for (int k = 0; k <= f.max_mode(); ++k)
    out.set(k, std::polar(1.0, -table.dispersion(frame, k) * t) * f[k]);
  return out;
}

}  // namespace kdvbbm
