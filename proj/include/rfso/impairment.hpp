#pragma once

#include <cstddef>

#include "rfso/random.hpp"

namespace rfso::hpa {

/// Soft-envelope-limiter parameters, normalised to unit input power σ_p².
struct SelHpaParams {
  double ibo = 0.0;       ///< A_sat² / σ_p², linear; +inf for an ideal relay
  double nu = 1.0;        ///< Bussgang scale ν
  double sigma_b2 = 0.0;  ///< distortion power σ_b² / σ_p²
  double mu = 1.0;        ///< output power factor μ

  bool ideal() const;
};

SelHpaParams sel_params(double ibo);
SelHpaParams sel_params_db(double ibo_db);
SelHpaParams ideal_hpa();

/// Relay gain G² = σ_p² / (E[|h|²] P_s + σ1²) for unit σ_p².
double relay_gain_sq(double mean_power_ratio, double noise_power);

/// κ = 1 + σ_b² / (ν² G² σ1²), evaluated from the gain directly.
double kappa_from_gain(const SelHpaParams& p, double gain_sq, double noise_power);

/// κ = 1 + (σ_b²/σ_p²)(E[γ1] + 1)/ν², the fixed-gain closed form.
double relay_gain_and_kappa(const SelHpaParams& p, double mean_gamma1);

/// Overall SNDR of the fixed-gain link.
double end_to_end_sndr(double gamma1, double gamma2, double mean_gamma1,
                       double kappa);

struct BussgangEstimate {
  double nu_hat;
  double nu_se;
  double sigma_b2_hat;
  double sigma_b2_se;
  double power_hat;  ///< E|Ω|² / σ_p²
  double power_se;
};

/// Clips n unit-power complex Gaussian samples at A_sat = sqrt(ibo) and
/// estimates the Bussgang parameters from the output.
BussgangEstimate bussgang_empirical_check(double ibo, std::size_t n,
                                          std::uint64_t seed);

}  // namespace rfso::hpa
