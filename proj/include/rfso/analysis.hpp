#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rfso/fso_hop.hpp"
#include "rfso/impairment.hpp"
#include "rfso/rf_hop.hpp"
#include "rfso/specfun.hpp"

namespace rfso::analysis {

/// Lower-parameter set used for the end-to-end G^{7,0}_{2,7} kernels.
enum class KappaConvention {
  derived,  ///< κ2 = Δ(2:ξ²), Δ(2:α), Δ(2:β), 0
  printed,  ///< κ2 = Δ(2:ξ²+1), Δ(2:α), Δ(2:β), 0 (cancels against κ1)
};

/// Which small-argument terms the asymptotic forms keep.
enum class AsymptoticOrder {
  first_order,         ///< leading term of every ladder plus the linear term of the z^0 ladder
  leading_per_ladder,  ///< leading term of every ladder only
};

/// Result outside its admissible band by more than rounding noise.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModulationParams {
  double tau = 0.5;
  double delta = 0.5;
  std::string name = "CBFSK";
};

/// CBFSK, CBPSK, NBFSK, DBPSK (case-insensitive).
ModulationParams modulation_preset(std::string_view name);

struct LinkModel {
  rf::RfHopConfig rf;
  fso::FsoDerived fso;
  double gbar2 = 1.0;  ///< average SNR of the optical hop, linear
  hpa::SelHpaParams hpa = hpa::ideal_hpa();
  KappaConvention convention = KappaConvention::derived;

  double mean_gamma1() const;
  double kappa() const;
  double zeta() const;  ///< E[γ1] + κ
  void validate() const;
};

/// Per-relay-term quantities shared by the closed forms.
struct TermInputs {
  double weight;  ///< c_n
  double rate;    ///< ϱ_n
  double omega;   ///< Meijer-G argument per unit threshold: (αβh)² ϱ_n ζ / (16 γ̄2)
};
std::vector<TermInputs> term_inputs(const LinkModel& model);

/// Prefactor 2^{α+β-3} ξ² / (π Γ(α) Γ(β)).
double kernel_prefactor(const fso::FsoDerived& d);

/// The G^{7,0}_{2,7} kernel of the outage expression.
specfun::MeijerGSpec outage_kernel(const LinkModel& model);
/// The G^{7,1}_{3,7} kernel of the BEP expression for a given τ.
specfun::MeijerGSpec bep_kernel(const LinkModel& model, double tau);

double outage_cf(const LinkModel& model, double gamma_th);
double bep_cf(const LinkModel& model, const ModulationParams& mod);

/// 1 - outage_cf, evaluated directly so small tails keep their digits.
double ccdf(const LinkModel& model, double gamma);

struct AsymptoticValue {
  double value;
  bool skipped_coincident;
};

AsymptoticValue outage_asym(const LinkModel& model, double gamma_th,
                            AsymptoticOrder order = AsymptoticOrder::first_order);
AsymptoticValue bep_asym(const LinkModel& model, const ModulationParams& mod,
                         AsymptoticOrder order = AsymptoticOrder::first_order);

/// Ergodic capacity in bps/Hz by adaptive quadrature of the CCDF integral.
double ergodic_capacity(const LinkModel& model, double rel_tol = 1e-6);
AsymptoticValue ergodic_capacity_asym(
    const LinkModel& model, AsymptoticOrder order = AsymptoticOrder::first_order);

/// log2(1 + e ν² / (2π σ_b²)); +inf for distortion-free hardware.
double capacity_ceiling(const hpa::SelHpaParams& hpa);

/// Terms of the small-argument expansion kept by an asymptotic order.
std::vector<specfun::ExpansionTerm> asymptotic_terms(
    const specfun::MeijerGSpec& spec, AsymptoticOrder order, bool& skipped);

}  // namespace rfso::analysis
