#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rfso/impairment.hpp"

using namespace rfso;

namespace {

struct SelOracle {
  double mu, nu, sb2;
};

SelOracle sel_oracle(double ibo) {
  const double mu = 1.0 - std::exp(-ibo);
  const double s = std::sqrt(ibo);
  const double nu = mu + std::sqrt(std::numbers::pi) / 2.0 * s * oracle::erfc_cf(s);
  return {mu, nu, mu - nu * nu};
}

}  // namespace

TEST_CASE("SEL parameters at 0 dB back-off") {
  const auto p = hpa::sel_params(1.0);
  const auto o = sel_oracle(1.0);
  CHECK(p.mu == doctest::Approx(o.mu).epsilon(1e-14));
  CHECK(p.nu == doctest::Approx(o.nu).epsilon(1e-14));
  CHECK(p.sigma_b2 == doctest::Approx(o.sb2).epsilon(1e-12));
  CHECK(p.mu == doctest::Approx(0.63212).epsilon(1e-5));
  CHECK(p.nu == doctest::Approx(0.7715).epsilon(1e-4));
  CHECK(p.sigma_b2 == doctest::Approx(0.0369).epsilon(1e-2));
  CHECK(hpa::sel_params_db(0.0).nu == p.nu);
}

TEST_CASE("ideal limit") {
  const auto inf = hpa::sel_params(std::numeric_limits<double>::infinity());
  CHECK(inf.ideal());
  CHECK(inf.nu == 1.0);
  CHECK(inf.mu == 1.0);
  CHECK(inf.sigma_b2 == 0.0);
  CHECK(hpa::relay_gain_and_kappa(inf, 1e6) == 1.0);
  const auto big = hpa::sel_params(1e4);
  CHECK(big.nu == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(big.mu == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(big.sigma_b2 < 1e-300);
  CHECK_THROWS(hpa::sel_params(0.0));
  CHECK_THROWS(hpa::sel_params(-1.0));
}

TEST_CASE("SEL parameters on a log grid") {
  double pnu = 0.0, pmu = 0.0, peak = 0.0, peak_ibo = 0.0;
  double first = -1.0, last = -1.0;
  for (int i = 0; i <= 600; ++i) {
    const double ibo = std::pow(10.0, -3.0 + 6.0 * i / 600.0);
    const auto p = hpa::sel_params(ibo);
    CHECK(p.mu - p.nu * p.nu >= -1e-15);
    CHECK(p.sigma_b2 >= 0.0);
    // Strict growth until both are within a few ulps of 1.
    CHECK((p.nu > pnu || (p.nu >= pnu && 1.0 - pnu < 1e-15)));
    CHECK((p.mu > pmu || (p.mu >= pmu && 1.0 - pmu < 1e-15)));
    CHECK(p.nu > 0.0);
    CHECK(p.nu <= 1.0);
    CHECK(p.mu <= 1.0);
    pnu = p.nu;
    pmu = p.mu;
    if (p.sigma_b2 > peak) {
      peak = p.sigma_b2;
      peak_ibo = ibo;
    }
    if (i == 0) first = p.sigma_b2;
    last = p.sigma_b2;
  }
  CHECK(peak_ibo > 1e-3);
  CHECK(peak_ibo < 1e3);
  CHECK(first < 0.05 * peak);
  CHECK(last < 1e-300);
}

TEST_CASE("kappa routes agree") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> lib(-3.0, 3.0), lg(-2.0, 6.0), ln(-3.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = hpa::sel_params(std::pow(10.0, lib(gen)));
    const double mean_g1 = std::pow(10.0, lg(gen));
    const double noise = std::pow(10.0, ln(gen));
    // E|h|² P_s / σ1² = E[γ1], so E|h|² P_s = E[γ1] σ1².
    const double g2 = hpa::relay_gain_sq(mean_g1, noise);
    const double a = hpa::kappa_from_gain(p, g2, noise);
    const double b = hpa::relay_gain_and_kappa(p, mean_g1);
    CHECK(oracle::rel_err(a, b) < 1e-12);
    CHECK(b >= 1.0);
  }
}

TEST_CASE("kappa at 30 dB back-off is unity") {
  const auto p = hpa::sel_params_db(30.0);
  for (double g1_db = 0.0; g1_db <= 60.0; g1_db += 5.0) {
    const double k = hpa::relay_gain_and_kappa(p, std::pow(10.0, g1_db / 10.0) * 2.3);
    CHECK(k - 1.0 < 1e-12);
  }
  CHECK(hpa::relay_gain_and_kappa(hpa::ideal_hpa(), 42.0) == 1.0);
}

TEST_CASE("end-to-end SNDR") {
  CHECK(hpa::end_to_end_sndr(1.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(hpa::end_to_end_sndr(3.0, INFINITY, 2.0, 1.5) == 2.0);
  CHECK(hpa::end_to_end_sndr(3.0, 1e300, 2.0, 1.5) == doctest::Approx(2.0).epsilon(1e-12));

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 5.0), uk(0.0, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const double g1 = std::pow(10.0, u(gen)), g2 = std::pow(10.0, u(gen));
    const double e = std::pow(10.0, u(gen)), k = 1.0 + std::pow(10.0, uk(gen) - 1.0);
    const double s = hpa::end_to_end_sndr(g1, g2, e, k);
    CHECK(s < hpa::end_to_end_sndr(g1, g2, e, 1.0));
    CHECK(s <= std::min(g1 / k, g1 * g2 / (e + k)) * (1.0 + 1e-15));
  }
}

TEST_CASE("Bussgang estimate agrees with the closed form") {
  for (double ibo : {1.0, 0.3, 3.0}) {
    const auto p = hpa::sel_params(ibo);
    const auto e = hpa::bussgang_empirical_check(ibo, 10000000, 17);
    CHECK(std::abs(e.nu_hat - p.nu) < 3.0 * e.nu_se);
    CHECK(std::abs(e.sigma_b2_hat - p.sigma_b2) < 3.0 * e.sigma_b2_se);
    CHECK(std::abs(e.power_hat - p.mu) < 3.0 * e.power_se);
  }
  // The printed sign would put ν above one.
  const auto e = hpa::bussgang_empirical_check(1.0, 10000000, 18);
  const double flipped = 0.63212 + std::sqrt(std::numbers::pi) / 2.0 * (2.0 - oracle::erfc_cf(1.0));
  CHECK(std::abs(e.nu_hat - flipped) > 100.0 * e.nu_se);

  const auto huge = hpa::bussgang_empirical_check(1e6, 200000, 19);
  CHECK(huge.nu_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(huge.sigma_b2_hat < 1e-12);
}
