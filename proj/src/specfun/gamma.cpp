#include "rfso/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <math.h>  // lgamma_r

namespace rfso::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

bool is_pole(double x) { return x <= 0.0 && x == std::floor(x); }

// Stirling coefficients B_{2k} / (2k (2k-1)).
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,        -1.0 / 360.0,  1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};

std::complex<double> log_gamma_stirling(std::complex<double> z) {
  std::complex<double> shift = 0.0;
  std::complex<double> prod = 1.0;
  int n = 0;
  while (std::abs(z) < 15.0) {
    prod *= z;
    z += 1.0;
    if (++n == 16) {  // keep the product in range
      shift += std::log(prod);
      prod = 1.0;
      n = 0;
    }
  }
  shift += std::log(prod);
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> series = 0.0;
  std::complex<double> pw = inv;
  for (double c : kStirling) {
    series += c * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series -
         shift;
}

// log sin(pi z) that stays finite for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z) {
  const std::complex<double> w = kPi * z;
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  // sin w = (e^{iw} - e^{-iw}) / 2i; keep the growing exponential.
  const std::complex<double> i(0.0, 1.0);
  if (w.imag() > 0.0) {
    // e^{-iw} dominates
    return -i * w + std::log(1.0 - std::exp(2.0 * i * w)) - std::log(-2.0 * i);
  }
  return i * w + std::log(1.0 - std::exp(-2.0 * i * w)) - std::log(2.0 * i);
}

// Lower incomplete gamma by its power series, s > 0.
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      return sum * std::exp(s * std::log(x) - x);
    }
  }
  throw ConvergenceError("lower incomplete gamma series did not converge");
}

// Γ(s, x) by the Legendre continued fraction (modified Lentz), any s, x > 0.
double upper_cf(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      return std::exp(s * std::log(x) - x) * h;
    }
  }
  throw ConvergenceError("upper incomplete gamma continued fraction stalled");
}

// E1(x) = Γ(0, x) for small x.
double e1_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

// Γ(s, x) = Γ(s) - Σ (-1)^k x^{s+k} / (k! (s+k)), non-integer s.
double upper_series_nonint(double s, double x) {
  const double lx = std::log(x);
  double fact = 1.0;
  double pw = std::exp(s * lx);
  double sum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    if (k > 0) {
      fact *= -x / k;
    }
    const double add = fact * pw / (s + k);
    sum += add;
    if (k > 2 && std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return gamma(s) - sum;
}

}  // namespace

double gamma(double x) {
  if (is_pole(x)) throw DomainError("gamma: pole at non-positive integer");
  if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
  const double r = std::tgamma(x);
  if (!std::isfinite(r)) throw OverflowError("gamma: result overflows");
  return r;
}

double log_gamma(double x) {
  if (is_pole(x)) throw DomainError("log_gamma: pole at non-positive integer");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

int gamma_sign(double x) {
  if (is_pole(x)) throw DomainError("gamma_sign: pole at non-positive integer");
  if (x > 0.0) return 1;
  return static_cast<long long>(std::floor(x)) % 2 == 0 ? 1 : -1;
}

double reciprocal_gamma(double x) {
  if (is_pole(x)) return 0.0;
  if (std::abs(x) < 170.0) return 1.0 / std::tgamma(x);
  int sign = 0;
  const double lg = ::lgamma_r(x, &sign);
  return sign * std::exp(-lg);
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && is_pole(z.real())) {
    throw DomainError("log_gamma: pole at non-positive integer");
  }
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - log_gamma_stirling(1.0 - z);
  }
  return log_gamma_stirling(z);
}

double upper_incomplete_gamma(double s, double x) {
  if (!std::isfinite(s) || std::isnan(x)) {
    throw DomainError("upper_incomplete_gamma: non-finite argument");
  }
  if (x < 0.0) throw DomainError("upper_incomplete_gamma: x < 0");
  if (x == 0.0) {
    if (s <= 0.0) throw DomainError("upper_incomplete_gamma: diverges at x = 0");
    return gamma(s);
  }
  if (std::isinf(x)) return 0.0;
  if (s == 1.0) return std::exp(-x);
  if (s == 0.5) return std::sqrt(kPi) * std::erfc(std::sqrt(x));
  if (s > 0.0) {
    if (x < s + 1.0) return gamma(s) - lower_series(s, x);
    return upper_cf(s, x);
  }
  if (x >= 1.5) return upper_cf(s, x);
  if (s == std::floor(s)) {
    // Downward recurrence from E1: Γ(s,x) = (Γ(s+1,x) - x^s e^{-x}) / s.
    double g = e1_series(x);
    for (double a = -1.0; a >= s; a -= 1.0) {
      g = (g - std::exp(a * std::log(x) - x)) / a;
    }
    return g;
  }
  return upper_series_nonint(s, x);
}

double regularized_upper_gamma(double s, double x) {
  if (!(s > 0.0)) throw DomainError("regularized_upper_gamma: s must be > 0");
  if (x < 0.0) throw DomainError("regularized_upper_gamma: x < 0");
  if (x == 0.0) return 1.0;
  if (s == 1.0) return std::exp(-x);
  if (s == 0.5) return std::erfc(std::sqrt(x));
  if (x < s + 1.0) {
    return 1.0 - lower_series(s, x) * reciprocal_gamma(s);
  }
  // Stay in log space so huge Γ(s) does not overflow.
  int sign = 0;
  const double lg = ::lgamma_r(s, &sign);
  const double cf = upper_cf(s, x);
  if (cf == 0.0) return 0.0;
  return std::exp(std::log(cf) - lg);
}

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

double bessel_i0(double x) {
  if (std::abs(x) > 700.0) throw OverflowError("bessel_i0: |x| > 700");
  return std::cyl_bessel_i(0.0, std::abs(x));
}

std::vector<double> gap_sequence(unsigned j, double x) {
  if (j == 0) throw DomainError("gap_sequence: j must be positive");
  std::vector<double> out;
  out.reserve(j);
  for (unsigned i = 0; i < j; ++i) out.push_back((x + i) / j);
  return out;
}

}  // namespace rfso::specfun
