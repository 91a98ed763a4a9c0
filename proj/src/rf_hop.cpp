#include "rfso/rf_hop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "rfso/specfun.hpp"

namespace rfso::rf {

void RfHopConfig::validate() const {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (m < 1 || m > N) throw std::invalid_argument("m must satisfy 1 <= m <= N");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("rho ∈ [0,1]");
  if (!(gbar1 > 0.0) || !std::isfinite(gbar1)) {
    throw std::invalid_argument("gbar1 must be positive");
  }
}

double jakes_rho(double fd_td) {
  if (!(fd_td >= 0.0)) throw std::domain_error("jakes_rho: fd_td must be >= 0");
  const double r = specfun::bessel_j0(2.0 * std::numbers::pi * fd_td);
  if (r < 0.0) {
    throw std::domain_error("jakes_rho: J0(2π fd Td) < 0 is not a valid correlation");
  }
  return std::min(r, 1.0);
}

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

SelectedPair sample_selected_pair(const RfHopConfig& cfg, PhiloxStream& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  // Small fixed capacity covers every practical N without allocating.
  constexpr unsigned kInline = 64;
  std::complex<double> inline_gains[kInline];
  std::vector<std::complex<double>> heap;
  std::complex<double>* gains = inline_gains;
  if (cfg.N > kInline) {
    heap.resize(cfg.N);
    gains = heap.data();
  }
  for (unsigned i = 0; i < cfg.N; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    gains[i] = {re, im};
  }
  std::nth_element(gains, gains + (cfg.m - 1), gains + cfg.N,
                   [](const auto& x, const auto& y) {
                     return std::norm(x) < std::norm(y);
                   });
  const std::complex<double> hhat = gains[cfg.m - 1];
  const double wr = gauss(rng);
  const double wi = gauss(rng);
  const std::complex<double> h =
      std::sqrt(cfg.rho) * hhat + std::sqrt(1.0 - cfg.rho) * std::complex<double>(wr, wi);
  return {cfg.gbar1 * std::norm(hhat), cfg.gbar1 * std::norm(h)};
}

std::vector<PrsTerm> prs_terms(const RfHopConfig& cfg) {
  cfg.validate();
  const unsigned N = cfg.N;
  const unsigned m = cfg.m;
  const double lead = m * binomial(N, m);
  std::vector<PrsTerm> out;
  out.reserve(m);
  for (unsigned n = 0; n < m; ++n) {
    const double k = N - m + n + 1.0;
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const double w = lead * sign * binomial(m - 1, n) / k;
    const double rate = k / (((N - m + n) * (1.0 - cfg.rho) + 1.0) * cfg.gbar1);
    out.push_back({w, rate});
  }
  return out;
}

double prs_cdf(const RfHopConfig& cfg, double x) {
  if (x <= 0.0) return 0.0;
  double f = 0.0;
  for (const auto& t : prs_terms(cfg)) f += t.weight * -std::expm1(-t.rate * x);
  return std::clamp(f, 0.0, 1.0);
}

double prs_mean(const RfHopConfig& cfg) {
  double mean = 0.0;
  for (const auto& t : prs_terms(cfg)) mean += t.weight / t.rate;
  return mean;
}

}  // namespace rfso::rf
