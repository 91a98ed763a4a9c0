#pragma once

#include <vector>

#include "rfso/random.hpp"

namespace rfso::rf {

/// First hop: N relays under Rayleigh fading, the relay of rank m (counted
/// from the weakest, so m = N is the best) selected on outdated CSI.
struct RfHopConfig {
  unsigned N = 5;
  unsigned m = 5;
  double rho = 0.9;
  double gbar1 = 1.0;  ///< average SNR, linear

  void validate() const;
};

/// ρ = J0(2π f_d T_d). Throws std::domain_error on a negative lobe.
double jakes_rho(double fd_td);

struct SelectedPair {
  double gamma_hat;  ///< outdated SNR used for the selection
  double gamma1;     ///< SNR at transmission time
};

SelectedPair sample_selected_pair(const RfHopConfig& cfg, PhiloxStream& rng);

/// Weight c_n and rate ϱ_n of the n-th exponential term of the CDF:
/// F(x) = Σ_n c_n (1 - exp(-ϱ_n x)), n = 0..m-1, with Σ c_n = 1.
struct PrsTerm {
  double weight;
  double rate;
};
std::vector<PrsTerm> prs_terms(const RfHopConfig& cfg);

double prs_cdf(const RfHopConfig& cfg, double x);
double prs_mean(const RfHopConfig& cfg);

double binomial(unsigned n, unsigned k);

}  // namespace rfso::rf
