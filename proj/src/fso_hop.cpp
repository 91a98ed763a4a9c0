#include "rfso/fso_hop.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rfso/specfun.hpp"

namespace rfso::fso {
namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void FsoGeometryInput::validate() const {
  require(L > 0.0, "L must be > 0");
  require(lambda > 0.0, "lambda must be > 0");
  require(a > 0.0, "a must be > 0");
  require(w0 > 0.0, "w0 must be > 0");
  require(F0 != 0.0 && std::isfinite(F0), "F0 must be non-zero");
  require(Cn2 > 0.0, "Cn2 must be > 0");
  require(sigma_s > 0.0, "sigma_s must be > 0");
  require(sigma_db_per_km >= 0.0, "sigma_db_per_km must be >= 0");
  require(eta > 0.0, "eta must be > 0");
  require(sigma2_sq > 0.0, "sigma2_sq must be > 0");
  require(Pt > 0.0, "Pt must be > 0");
  if (xi_override) require(*xi_override > 0.0, "xi must be > 0");
  if (sigma_r2_override) require(*sigma_r2_override > 0.0, "sigma_r2 must be > 0");
}

double alpha_from_rytov(double s2) {
  const double s125 = std::pow(s2, 1.2);  // σR^{12/5} = (σR²)^{6/5}
  return 1.0 / std::expm1(0.49 * s2 / std::pow(1.0 + 1.11 * s125, 7.0 / 6.0));
}

double beta_from_rytov(double s2) {
  const double s125 = std::pow(s2, 1.2);
  return 1.0 / std::expm1(0.51 * s2 / std::pow(1.0 + 0.69 * s125, 5.0 / 6.0));
}

double path_loss(double sigma_db_per_km, double L) {
  const double nepers_per_m = sigma_db_per_km * std::log(10.0) / 10.0 / 1000.0;
  return std::exp(-nepers_per_m * L);
}

FsoDerived derive_geometry(const FsoGeometryInput& in, BeamWidthForm form) {
  in.validate();
  FsoDerived d;
  const double k = 2.0 * kPi / in.lambda;
  d.sigma_r2 = in.sigma_r2_override
                   ? *in.sigma_r2_override
                   : 1.23 * in.Cn2 * std::pow(k, 7.0 / 6.0) * std::pow(in.L, 11.0 / 6.0);
  d.alpha = alpha_from_rytov(d.sigma_r2);
  d.beta = beta_from_rytov(d.sigma_r2);
  if (!(d.alpha > 0.0) || !(d.beta > 0.0)) {
    throw std::domain_error("turbulence parameters must be positive");
  }

  d.theta0 = 1.0 - in.L / in.F0;
  d.lambda0 = 2.0 * in.L / (k * in.w0 * in.w0);
  const double denom = d.theta0 * d.theta0 + d.lambda0 * d.lambda0;
  if (denom == 0.0) throw std::domain_error("Θ0² + Λ0² = 0");
  d.lambda1 = d.lambda0 / denom;
  const double spread = 1.0 + 1.63 * std::pow(d.sigma_r2, 1.2) * d.lambda1;
  const double focus =
      form == BeamWidthForm::squared ? denom : d.theta0 + d.lambda0;
  if (!(focus > 0.0)) throw std::domain_error("beam width is not real");
  d.wL = in.w0 * std::sqrt(focus * spread);

  d.v = std::sqrt(kPi) * in.a / (std::sqrt(2.0) * d.wL);
  const double ev = specfun::erf(d.v);
  d.wLeq = std::sqrt(d.wL * d.wL * std::sqrt(kPi) * ev /
                     (2.0 * d.v * std::exp(-d.v * d.v)));
  d.A0 = ev * ev;

  if (in.xi_override) {
    d.xi = *in.xi_override;
    d.sigma_s = d.wLeq / (2.0 * d.xi);
  } else {
    d.sigma_s = in.sigma_s;
    d.xi = d.wLeq / (2.0 * in.sigma_s);
  }
  const double xi2 = d.xi * d.xi;
  d.h = xi2 / (xi2 + 1.0);
  d.Il = path_loss(in.sigma_db_per_km, in.L);
  const double mean_i = d.h * d.A0 * d.Il;
  d.gbar2 = in.Pt * in.Pt * in.eta * in.eta / in.sigma2_sq * mean_i * mean_i;
  return d;
}

double sample_pointing(const FsoDerived& d, PhiloxStream& rng) {
  const double r = d.sigma_s * std::sqrt(-2.0 * std::log(rng.uniform()));
  return d.A0 * std::exp(-2.0 * r * r / (d.wLeq * d.wLeq));
}

double sample_irradiance(const FsoDerived& d, PhiloxStream& rng) {
  std::gamma_distribution<double> gx(d.alpha, 1.0 / d.alpha);
  std::gamma_distribution<double> gy(d.beta, 1.0 / d.beta);
  const double ia = gx(rng) * gy(rng);
  return ia * d.Il * sample_pointing(d, rng);
}

double electrical_snr(const FsoDerived& d, double irradiance, double gbar2) {
  const double r = irradiance / (d.Il * d.A0 * d.h);
  return gbar2 * r * r;
}

double optical_snr_pdf(const FsoDerived& d, double x, double gbar2) {
  if (!(x > 0.0)) throw std::domain_error("optical_snr_pdf: x must be > 0");
  const double xi2 = d.xi * d.xi;
  const specfun::MeijerGSpec g{3, 0, {xi2 + 1.0}, {xi2, d.alpha, d.beta}};
  const double z = d.alpha * d.beta * d.h * std::sqrt(x / gbar2);
  const double lpre = std::log(xi2 / 2.0) - specfun::log_gamma(d.alpha) -
                      specfun::log_gamma(d.beta) - std::log(x);
  return std::exp(lpre) * specfun::meijer_g(g, z);
}

}  // namespace rfso::fso
