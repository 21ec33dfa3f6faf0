#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kdvbbm/model.hpp"
#include "kdvbbm/random.hpp"
#include "kdvbbm/spectral_field.hpp"

namespace kdvbbm {

/// ||omega(D)(u v)||_{H^s} / (||u||_{H^s} ||v||_{H^s}), product kept exact.
double bilinear_ratio(const SpectralField& u, const SpectralField& v, SobolevIndex s);

/// The trilinear form with a, b, c the indicators of {N-1, N, N+1},
/// {-N-1, -N, -N+1}, {-1, 0, 1}, divided by ||a|| ||b|| ||c||.
double prop21_counterexample(int n, SobolevIndex s);

struct TauRatios {
  double plain = 0.0;       // ||tau(D)(uv)||_{H^s} / (||u||_{H^s} ||v||_{H^s})
  double derivative = 0.0;  // ||d_x tau(D)(uv)||_{H^1} / (||u||_{H^1} ||v||_{H^1})
};

TauRatios tau_ratios(const SpectralField& u, const SpectralField& v, SobolevIndex s,
                     const ModelParams& p);

struct PsiRatios {
  double cubic = 0.0;             // ||psi(D)(uvw)||_{H^s} / prod ||.||_{H^s}
  double cubic_derivative = 0.0;  // ||d_x psi(D)(uvw)||_{H^1} / prod ||.||_{H^1}
  /// Only for s >= 1.
  std::optional<double> grad_pair;             // ||psi(D)(u_x v_x)||_{H^s} / ...
  std::optional<double> grad_pair_derivative;  // ||d_x psi(D)(u_x v_x)||_{H^1} / ...
};

/// Throws DomainError for s <= 1/2.
PsiRatios psi_ratios(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                     SobolevIndex s, const ModelParams& p);

enum class EstimateFamily {
  bilinear,
  tau,
  tau_derivative,
  cubic,
  cubic_derivative,
  grad_pair,
  grad_pair_derivative
};

std::string_view family_name(EstimateFamily f);
EstimateFamily family_from_name(std::string_view name);
std::vector<EstimateFamily> all_families();
/// Whether s lies in the range where the estimate is claimed.
bool family_admits(EstimateFamily f, double s);
/// Derivative variants are stated in H^1 only.
bool family_fixed_h1(EstimateFamily f);

struct RatioSample {
  double s = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  int degree = 0;
};

struct CorpusSpec {
  std::uint64_t seed = 20240601;
  int samples = 1000;
  SpectrumShape shape = SpectrumShape::decaying;
};

struct CorpusStats {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  RatioSample argmax;
};

/// One ratio of `family` on corpus sample `index` at degree n. Inputs of
/// sample i depend only on (seed, i), and raising n extends them.
RatioSample corpus_ratio(EstimateFamily family, double s, int n, std::uint64_t index,
                         const CorpusSpec& corpus, const ModelParams& p);

CorpusStats corpus_sweep(EstimateFamily family, double s, int n, const CorpusSpec& corpus,
                         const ModelParams& p);

}  // namespace kdvbbm
