#include "rfso/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace rfso::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

bool same(double x, double y) {
  return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x));
}

double frac_distance(double d) { return std::abs(d - std::round(d)); }

// Cancel upper parameters a_l (l >= n) against identical numerator lower
// parameters b_j (j < m): Γ(b+s)/Γ(a+s) = 1.
MeijerGSpec reduce(const MeijerGSpec& in) {
  MeijerGSpec s = in;
  for (std::size_t l = s.n; l < s.a.size();) {
    bool cancelled = false;
    for (std::size_t j = 0; j < s.m; ++j) {
      if (same(s.a[l], s.b[j])) {
        s.a.erase(s.a.begin() + static_cast<std::ptrdiff_t>(l));
        s.b.erase(s.b.begin() + static_cast<std::ptrdiff_t>(j));
        --s.m;
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++l;
  }
  return s;
}

bool ladder_coincides(const MeijerGSpec& s, std::size_t h, double tol) {
  for (std::size_t j = 0; j < s.m; ++j) {
    if (j != h && frac_distance(s.b[j] - s.b[h]) < tol) return true;
  }
  return false;
}

bool any_coincident(const MeijerGSpec& s, double tol) {
  for (std::size_t h = 0; h < s.m; ++h) {
    if (ladder_coincides(s, h, tol)) return true;
  }
  return false;
}

// Leading residue coefficient of ladder h (without the z^{b_h} factor),
// as sign and log-magnitude. Returns nullopt when the ladder vanishes.
struct LogTerm {
  double log_mag;
  int sign;
};

std::optional<LogTerm> ladder_head(const MeijerGSpec& s, std::size_t h) {
  const double bh = s.b[h];
  double lm = 0.0;
  int sign = 1;
  auto num = [&](double x) {
    if (x <= 0.0 && x == std::floor(x)) {
      throw DomainError("meijer_g: upper and lower poles collide");
    }
    lm += log_gamma(x);
    sign *= gamma_sign(x);
  };
  auto den = [&](double x) -> bool {
    if (x <= 0.0 && x == std::floor(x)) return false;  // 1/Γ = 0
    lm -= log_gamma(x);
    sign *= gamma_sign(x);
    return true;
  };
  for (std::size_t j = 0; j < s.m; ++j) {
    if (j != h) num(s.b[j] - bh);
  }
  for (std::size_t l = 0; l < s.n; ++l) num(1.0 - s.a[l] + bh);
  for (std::size_t l = s.n; l < s.a.size(); ++l) {
    if (!den(s.a[l] - bh)) return std::nullopt;
  }
  for (std::size_t j = s.m; j < s.b.size(); ++j) {
    if (!den(1.0 - s.b[j] + bh)) return std::nullopt;
  }
  return LogTerm{lm, sign};
}

// T_{k+1} / T_k along ladder h, without the z factor.
double ladder_ratio(const MeijerGSpec& s, std::size_t h, std::size_t k) {
  const double bh = s.b[h];
  const double kk = static_cast<double>(k);
  double r = -1.0 / (kk + 1.0);
  for (std::size_t l = 0; l < s.n; ++l) r *= 1.0 - s.a[l] + bh + kk;
  for (std::size_t l = s.n; l < s.a.size(); ++l) r *= s.a[l] - bh - kk - 1.0;
  for (std::size_t j = 0; j < s.m; ++j) {
    if (j != h) r /= s.b[j] - bh - kk - 1.0;
  }
  for (std::size_t j = s.m; j < s.b.size(); ++j) r /= 1.0 - s.b[j] + bh + kk;
  return r;
}

bool is_constant_exponent(double bh, std::size_t k) {
  return bh + static_cast<double>(k) == 0.0;
}

void check_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("meijer_g: argument must be positive and finite");
  }
}

// Log of the Mellin-Barnes kernel at s.
std::complex<double> kernel_log(const MeijerGSpec& sp, std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < sp.m; ++j) acc += log_gamma(sp.b[j] + s);
  for (std::size_t l = 0; l < sp.n; ++l) acc += log_gamma(1.0 - sp.a[l] - s);
  for (std::size_t l = sp.n; l < sp.a.size(); ++l) acc -= log_gamma(sp.a[l] + s);
  for (std::size_t j = sp.m; j < sp.b.size(); ++j) {
    acc -= log_gamma(1.0 - sp.b[j] - s);
  }
  return acc;
}

double kernel_log_real(const MeijerGSpec& sp, double c) {
  double acc = 0.0;
  auto lg = [](double x) {
    if (x <= 0.0 && x == std::floor(x)) {
      return std::numeric_limits<double>::infinity();
    }
    return log_gamma(x);
  };
  for (std::size_t j = 0; j < sp.m; ++j) acc += lg(sp.b[j] + c);
  for (std::size_t l = 0; l < sp.n; ++l) acc += lg(1.0 - sp.a[l] - c);
  for (std::size_t l = sp.n; l < sp.a.size(); ++l) acc -= lg(sp.a[l] + c);
  for (std::size_t j = sp.m; j < sp.b.size(); ++j) acc -= lg(1.0 - sp.b[j] - c);
  return acc;
}

// Place the vertical line at the minimum of Re ln Φ(c) - c ln z on the
// admissible strip; the integrand magnitude then peaks near y = 0.
double saddle_abscissa(const MeijerGSpec& sp, double lz) {
  double lo = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < sp.m; ++j) lo = std::max(lo, -sp.b[j]);
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < sp.n; ++l) hi = std::min(hi, 1.0 - sp.a[l]);
  if (!(lo < hi)) {
    throw DomainError("meijer_g: no vertical line separates the pole sets");
  }
  const double mu = static_cast<double>(sp.q() - sp.p());
  double span;
  if (std::isfinite(hi)) {
    span = hi - lo;
  } else {
    span = 4.0 + 2.0 * std::exp(std::min(std::abs(lz), 600.0) / mu);
    span = std::min(span, 1e7);
  }
  auto f = [&](double d) { return kernel_log_real(sp, lo + d) - (lo + d) * lz; };
  // Coarse scan in log distance from the left edge, then golden refine.
  const int n_scan = 80;
  const double dmin = std::min(1e-6, 1e-3 * span);
  const double dmax = std::isfinite(hi) ? span - dmin : span;
  const double r = std::log(dmax / dmin);
  double best_d = dmin;
  double best_f = std::numeric_limits<double>::infinity();
  int best_i = 0;
  std::vector<double> ds(n_scan + 1);
  for (int i = 0; i <= n_scan; ++i) {
    double d = dmin * std::exp(r * i / n_scan);
    if (std::isfinite(hi)) {
      // symmetric spacing towards the right edge as well
      const double t = static_cast<double>(i) / n_scan;
      d = dmin + (dmax - dmin) * (0.5 - 0.5 * std::cos(kPi * t));
    }
    ds[i] = d;
    const double v = f(d);
    if (v < best_f) {
      best_f = v;
      best_d = d;
      best_i = i;
    }
  }
  double a = ds[std::max(best_i - 1, 0)];
  double b = ds[std::min(best_i + 1, n_scan)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-10 * (1.0 + best_d); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double d = f1 < f2 ? x1 : x2;
  return lo + (std::min(f1, f2) < best_f ? d : best_d);
}

double constant_term(const MeijerGSpec& spec) {
  double lowest = 0.0;
  for (std::size_t j = 0; j < spec.m; ++j) lowest = std::min(lowest, spec.b[j]);
  const auto orders = static_cast<std::size_t>(-std::floor(lowest)) + 1;
  const Expansion e = meijer_g_expansion(spec, orders, 0.0);
  double c = 0.0;
  for (const auto& t : e.terms) {
    if (is_constant_exponent(t.ladder, t.order)) c += t.coefficient;
  }
  return c;
}

}  // namespace

void MeijerGSpec::validate() const {
  if (m > q()) throw DomainError("meijer_g: m must not exceed q");
  if (n > p()) throw DomainError("meijer_g: n must not exceed p");
  if (n > 1) throw DomainError("meijer_g: only n in {0, 1} is supported");
  if (p() >= q()) throw DomainError("meijer_g: requires p < q");
  for (double v : a) {
    if (!std::isfinite(v)) throw DomainError("meijer_g: non-finite parameter");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw DomainError("meijer_g: non-finite parameter");
  }
  const double delta = static_cast<double>(m + n) -
                       0.5 * static_cast<double>(p() + q());
  if (!(delta > 0.0)) {
    throw DomainError("meijer_g: contour integral does not converge (m+n <= (p+q)/2)");
  }
}

MeijerGEvaluation meijer_g_residue(const MeijerGSpec& spec, double z,
                                   const MeijerGOptions& opts) {
  spec.validate();
  check_z(z);
  const MeijerGSpec s = reduce(spec);
  if (any_coincident(s, opts.coincidence_tol)) {
    throw DomainError("meijer_g: coincident lower parameters");
  }
  const double lz = std::log(z);
  Accumulator total;
  double abs_total = 0.0;
  std::size_t work = 0;
  for (std::size_t h = 0; h < s.m; ++h) {
    const auto head = ladder_head(s, h);
    if (!head) continue;
    const double bh = s.b[h];
    const double lt = head->log_mag + bh * lz;
    if (lt > 700.0) throw OverflowError("meijer_g: residue term overflows");
    double t = head->sign * std::exp(lt);
    Accumulator ladder;
    int small_run = 0;
    bool done = false;
    for (std::size_t k = 0; k < opts.max_terms; ++k) {
      ++work;
      if (!(opts.drop_constant_term && is_constant_exponent(bh, k))) {
        ladder.add(t);
        abs_total += std::abs(t);
      }
      const double ratio = ladder_ratio(s, h, k) * z;
      const double scale = std::max(std::abs(ladder.value()),
                                    std::abs(total.value()));
      if (std::abs(t) <= 1e-14 * scale && std::abs(ratio) < 0.5) {
        if (++small_run >= 3) {
          done = true;
          break;
        }
      } else {
        small_run = 0;
      }
      t *= ratio;
      if (t == 0.0) {
        done = true;
        break;
      }
      if (!std::isfinite(t)) {
        throw ConvergenceError("meijer_g: residue ladder overflowed");
      }
    }
    if (!done) {
      throw ConvergenceError("meijer_g: residue ladder hit the term cap");
    }
    total.add(ladder.value());
  }
  const double value = total.value();
  const double mag = std::max(std::abs(value), std::numeric_limits<double>::min());
  if (abs_total / mag > 1e4) {
    throw ConvergenceError("meijer_g: residue series lost precision to cancellation");
  }
  return {value, MeijerGPath::residue, false, work};
}

MeijerGEvaluation meijer_g_contour(const MeijerGSpec& spec, double z,
                                   const MeijerGOptions& opts) {
  spec.validate();
  check_z(z);
  const MeijerGSpec sp = reduce(spec);
  const double lz = std::log(z);
  const double c = saddle_abscissa(sp, lz);
  const std::complex<double> kc = kernel_log(sp, {c, 0.0});
  const double base = kc.real() - c * lz;
  // e^{base} bounds |G| up to the width of the integrand; far below the
  // subnormal range the result is zero in double.
  if (base < std::log(std::numeric_limits<double>::denorm_min()) - 40.0) {
    return {opts.drop_constant_term ? -constant_term(sp) : 0.0, MeijerGPath::contour, false, 0};
  }

  // Integrand on the upper half line; real part of the scaled kernel.
  // Returns {value, magnitude}.
  auto g = [&](double y) {
    const std::complex<double> s(c, y);
    const std::complex<double> e = kernel_log(sp, s) - s * lz - base;
    const double mag = std::exp(e.real());
    return std::pair<double, double>{mag * std::cos(e.imag()), mag};
  };
  // exp-sinh map y = exp(π/2 sinh t).
  auto node = [&](double t, double& weight_times_value, double& env) {
    const double sh = 0.5 * kPi * std::sinh(t);
    if (sh > 700.0) {
      weight_times_value = 0.0;
      env = 0.0;
      return;
    }
    const double y = std::exp(sh);
    const double w = y * 0.5 * kPi * std::cosh(t);
    const auto [v, m] = g(y);
    weight_times_value = w * v;
    env = w * m;
  };

  std::size_t work = 0;
  double h = 0.5;
  // Level 0: walk outwards from t = 0 until the envelope is negligible.
  double sum = 0.0;
  double peak = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  {
    double wv = 0.0;
    double env = 0.0;
    node(0.0, wv, env);
    ++work;
    sum += wv;
    peak = env;
    for (int k = 1;; ++k) {
      const double t = k * h;
      node(t, wv, env);
      ++work;
      sum += wv;
      peak = std::max(peak, env);
      t_hi = t;
      if ((env < 1e-18 * peak && t > 1.0) || t > 8.0) break;
    }
    for (int k = 1;; ++k) {
      const double t = -k * h;
      node(t, wv, env);
      ++work;
      sum += wv;
      peak = std::max(peak, env);
      t_lo = t;
      if (env < 1e-18 * peak || t < -6.0) break;
    }
  }
  double integral = sum * h;
  bool converged = false;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    double abs_add = 0.0;
    for (double t = t_lo + h; t < t_hi; t += 2.0 * h) {
      double wv = 0.0;
      double env = 0.0;
      node(t, wv, env);
      ++work;
      add += wv;
      abs_add += env;
    }
    sum += add;
    const double next = sum * h;
    const double diff = std::abs(next - integral);
    integral = next;
    if (level >= 3 && (diff <= opts.contour_rel_tol * std::abs(integral) ||
                       diff <= 1e-16 * peak)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("meijer_g: contour quadrature did not converge");
  }
  double value = std::exp(base) / kPi * integral;
  if (opts.drop_constant_term) value -= constant_term(sp);
  return {value, MeijerGPath::contour, false, work};
}

MeijerGEvaluation evaluate_meijer_g(const MeijerGSpec& spec, double z,
                                    const MeijerGOptions& opts) {
  switch (opts.method) {
    case MeijerGMethod::residue:
      return meijer_g_residue(spec, z, opts);
    case MeijerGMethod::contour:
      return meijer_g_contour(spec, z, opts);
    case MeijerGMethod::automatic:
      break;
  }
  spec.validate();
  check_z(z);
  const bool coincident = any_coincident(reduce(spec), opts.coincidence_tol);
  if (!coincident) {
    try {
      return meijer_g_residue(spec, z, opts);
    } catch (const ConvergenceError&) {
    } catch (const OverflowError&) {
    }
  }
  MeijerGEvaluation r = meijer_g_contour(spec, z, opts);
  r.near_coincident = coincident;
  return r;
}

double meijer_g(const MeijerGSpec& spec, double z, const MeijerGOptions& opts) {
  return evaluate_meijer_g(spec, z, opts).value;
}

Expansion meijer_g_expansion(const MeijerGSpec& spec, std::size_t orders,
                             double coincidence_tol) {
  spec.validate();
  const MeijerGSpec s = reduce(spec);
  Expansion out;
  for (std::size_t h = 0; h < s.m; ++h) {
    if (coincidence_tol > 0.0 && ladder_coincides(s, h, coincidence_tol)) {
      out.skipped_coincident = true;
      continue;
    }
    const auto head = ladder_head(s, h);
    if (!head) continue;
    double coef = head->sign * std::exp(head->log_mag);
    for (std::size_t k = 0; k < orders; ++k) {
      if (coef == 0.0) break;
      out.terms.push_back({s.b[h] + static_cast<double>(k), coef, s.b[h], k});
      coef *= ladder_ratio(s, h, k);
    }
  }
  std::sort(out.terms.begin(), out.terms.end(),
            [](const ExpansionTerm& x, const ExpansionTerm& y) {
              return x.exponent < y.exponent;
            });
  return out;
}

}  // namespace rfso::specfun
