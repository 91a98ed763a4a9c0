#pragma once

// Independent reference evaluations used only by the tests. None of these
// call into the library.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

// erfc(x), x > 0, by the Laplace continued fraction (modified Lentz).
inline double erfc_cf(double x) {
  long double tiny = 1e-300L;
  long double xx = x;
  // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  long double f = xx;
  long double c = xx;
  long double d = 0.0L;
  for (int n = 1; n < 20000; ++n) {
    const long double an = n / 2.0L;
    d = xx + an * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = xx + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double del = c * d;
    f *= del;
    if (std::fabs(del - 1.0L) < 1e-19L) break;
  }
  return static_cast<double>(std::exp(-xx * xx) / std::sqrt(std::numbers::pi_v<long double>) / f);
}

// J0 by its power series in long double.
inline double j0_series(double x) {
  long double q = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

// I_nu(x) by its power series, nu not a negative integer.
inline double i_nu_series(double nu, double x) {
  long double h = x / 2.0L;
  long double term = std::pow(h, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 300; ++k) {
    term *= h * h / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// K_nu(x) for non-integer nu from the I series.
inline double k_nu_series(double nu, double x) {
  return std::numbers::pi / 2.0 * (i_nu_series(-nu, x) - i_nu_series(nu, x)) /
         std::sin(nu * std::numbers::pi);
}

// Bisection root of f on [a, b] with f(a) f(b) < 0.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace oracle
