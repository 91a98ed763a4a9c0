#pragma once

#include <optional>

#include "rfso/random.hpp"

namespace rfso::fso {

/// Optical link inputs, SI units throughout.
struct FsoGeometryInput {
  double L = 1000.0;          ///< link length, m
  double lambda = 1550e-9;    ///< wavelength, m
  double a = 0.05;            ///< receiver aperture radius, m
  double w0 = 5e-3;           ///< beam waist at the relay, m
  double F0 = -10.0;          ///< radius of curvature, m (non-zero)
  double Cn2 = 5e-14;         ///< refractive-index structure parameter, m^{-2/3}
  double sigma_s = 0.0375;    ///< jitter standard deviation, m
  double sigma_db_per_km = 0.43;
  double eta = 1.0;
  double sigma2_sq = 1.0;
  double Pt = 1.0;

  /// Impose ξ directly; σ_s is then back-computed from w_Leq.
  std::optional<double> xi_override;
  /// Impose the Rytov variance instead of deriving it from Cn2.
  std::optional<double> sigma_r2_override;

  void validate() const;
};

/// How the beam width at distance L combines Θ0 and Λ0.
enum class BeamWidthForm {
  squared,  ///< w0·sqrt((Θ0² + Λ0²)(1 + 1.63 σR^{12/5} Λ1))
  printed,  ///< w0·sqrt((Θ0 + Λ0)(1 + 1.63 σR^{12/5} Λ1))
};

struct FsoDerived {
  double sigma_r2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double theta0 = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double wL = 0.0;
  double v = 0.0;
  double wLeq = 0.0;
  double A0 = 0.0;
  double xi = 0.0;
  double h = 0.0;
  double Il = 0.0;
  double gbar2 = 0.0;    ///< average electrical SNR from the link budget
  double sigma_s = 0.0;  ///< jitter actually in force (after ξ override)
};

FsoDerived derive_geometry(const FsoGeometryInput& in,
                           BeamWidthForm form = BeamWidthForm::squared);

/// α, β of the Gamma-Gamma model for a given Rytov variance.
double alpha_from_rytov(double sigma_r2);
double beta_from_rytov(double sigma_r2);

/// Beers-Lambert loss for an attenuation in dB/km over L metres.
double path_loss(double sigma_db_per_km, double L);

/// Composite irradiance I_a·I_l·I_p.
double sample_irradiance(const FsoDerived& d, PhiloxStream& rng);

/// Pointing-error factor I_p only.
double sample_pointing(const FsoDerived& d, PhiloxStream& rng);

/// Electrical SNR γ2 for irradiance I when the hop's average SNR is gbar2.
double electrical_snr(const FsoDerived& d, double irradiance, double gbar2);

/// PDF of the electrical SNR at x > 0 for average SNR gbar2.
double optical_snr_pdf(const FsoDerived& d, double x, double gbar2);

}  // namespace rfso::fso
