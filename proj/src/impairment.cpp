#include "rfso/impairment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "rfso/specfun.hpp"

namespace rfso::hpa {

bool SelHpaParams::ideal() const { return std::isinf(ibo); }

SelHpaParams ideal_hpa() {
  return {std::numeric_limits<double>::infinity(), 1.0, 0.0, 1.0};
}

SelHpaParams sel_params(double ibo) {
  if (!(ibo > 0.0)) throw std::invalid_argument("ibo must be > 0");
  if (std::isinf(ibo)) return ideal_hpa();
  const double s = std::sqrt(ibo);
  const double tail = std::exp(-ibo);
  const double mu = -std::expm1(-ibo);
  const double t = 0.5 * std::sqrt(std::numbers::pi) * s * specfun::erfc(s);
  const double nu = mu + t;
  // μ - ν² rearranged as μ e^{-ibo} - t(2μ + t) to avoid cancellation.
  double sb2 = mu * tail - t * (2.0 * mu + t);
  if (sb2 < -1e-12) {
    throw std::logic_error("SEL distortion power came out negative");
  }
  if (sb2 < 0.0) sb2 = 0.0;
  return {ibo, nu, sb2, mu};
}

SelHpaParams sel_params_db(double ibo_db) {
  if (std::isinf(ibo_db) && ibo_db > 0.0) return ideal_hpa();
  return sel_params(std::pow(10.0, ibo_db / 10.0));
}

double relay_gain_sq(double mean_power_ratio, double noise_power) {
  return 1.0 / (mean_power_ratio * noise_power + noise_power);
}

double kappa_from_gain(const SelHpaParams& p, double gain_sq, double noise_power) {
  if (p.nu == 0.0) throw std::domain_error("kappa: nu = 0");
  return 1.0 + p.sigma_b2 / (p.nu * p.nu * gain_sq * noise_power);
}

double relay_gain_and_kappa(const SelHpaParams& p, double mean_gamma1) {
  if (p.nu == 0.0) throw std::domain_error("kappa: nu = 0");
  return 1.0 + p.sigma_b2 * (mean_gamma1 + 1.0) / (p.nu * p.nu);
}

double end_to_end_sndr(double gamma1, double gamma2, double mean_gamma1,
                       double kappa) {
  if (std::isinf(gamma2)) return gamma1 / kappa;
  return gamma1 * gamma2 / (kappa * gamma2 + mean_gamma1 + kappa);
}

BussgangEstimate bussgang_empirical_check(double ibo, std::size_t n,
                                          std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("bussgang check needs samples");
  const double asat = std::sqrt(ibo);
  PhiloxStream rng(seed, 0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  // Per-sample statistics: cross = Re(Ω x*), px = |x|², po = |Ω|².
  double s_c = 0, s_x = 0, s_o = 0;
  double s_cc = 0, s_xx = 0, s_oo = 0, s_cx = 0, s_co = 0, s_xo = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = gauss(rng);
    const double xi = gauss(rng);
    const double r2 = xr * xr + xi * xi;
    const double r = std::sqrt(r2);
    const double scale = r > asat ? asat / r : 1.0;
    const double c = scale * r2;  // Re(Ω x*) with Ω = scale·x
    const double o = scale * scale * r2;
    s_c += c;
    s_x += r2;
    s_o += o;
    s_cc += c * c;
    s_xx += r2 * r2;
    s_oo += o * o;
    s_cx += c * r2;
    s_co += c * o;
    s_xo += r2 * o;
  }
  const double dn = static_cast<double>(n);
  const double mc = s_c / dn, mx = s_x / dn, mo = s_o / dn;
  auto cov = [&](double sab, double ma, double mb) {
    return (sab / dn - ma * mb) * dn / (dn - 1.0);
  };
  const double vcc = cov(s_cc, mc, mc), vxx = cov(s_xx, mx, mx);
  const double voo = cov(s_oo, mo, mo), vcx = cov(s_cx, mc, mx);
  const double vco = cov(s_co, mc, mo), vxo = cov(s_xo, mx, mo);

  BussgangEstimate e{};
  e.nu_hat = mc / mx;
  // Delta method for the ratio of means.
  const double gn_c = 1.0 / mx, gn_x = -mc / (mx * mx);
  e.nu_se = std::sqrt((gn_c * gn_c * vcc + 2 * gn_c * gn_x * vcx +
                       gn_x * gn_x * vxx) / dn);
  // σ_b² = E|Ω - ν̂x|² = E|Ω|² - (E Re Ωx*)² / E|x|².
  e.sigma_b2_hat = mo - mc * mc / mx;
  const double gs_o = 1.0, gs_c = -2.0 * mc / mx, gs_x = mc * mc / (mx * mx);
  const double var_sb = gs_o * gs_o * voo + gs_c * gs_c * vcc + gs_x * gs_x * vxx +
                        2 * gs_o * gs_c * vco + 2 * gs_o * gs_x * vxo +
                        2 * gs_c * gs_x * vcx;
  e.sigma_b2_se = std::sqrt(std::max(var_sb, 0.0) / dn);
  e.power_hat = mo;
  e.power_se = std::sqrt(voo / dn);
  return e;
}

}  // namespace rfso::hpa
