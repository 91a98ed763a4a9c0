#include "rfso/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rfso::analysis {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double clamp_band(double v, double hi, const char* what) {
  if (!std::isfinite(v) || v < -1e-9 || v > hi + 1e-9) {
    throw ConsistencyError(std::string(what) + " out of range: " +
                           std::to_string(v));
  }
  return std::clamp(v, 0.0, hi);
}

// Constant (z^0) coefficient of a kernel, i.e. its limit at z -> 0+.
double kernel_constant(const specfun::MeijerGSpec& spec) {
  const auto e = specfun::meijer_g_expansion(spec, 1, 0.0);
  double c = 0.0;
  for (const auto& t : e.terms) {
    if (t.exponent == 0.0) c += t.coefficient;
  }
  return c;
}

// G(z) - G(0+).
double kernel_excess(const specfun::MeijerGSpec& spec, double z) {
  specfun::MeijerGOptions o;
  o.drop_constant_term = true;
  return specfun::meijer_g(spec, z, o);
}

// e^x Γ(s, x) without overflow.
double scaled_upper_gamma(double s, double x) {
  if (x < 50.0) return std::exp(x) * specfun::upper_incomplete_gamma(s, x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= (s - k) / x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::pow(x, s - 1.0) * sum;
}

double series_value(const std::vector<specfun::ExpansionTerm>& terms, double z) {
  const double lz = std::log(z);
  double s = 0.0;
  for (const auto& t : terms) s += t.coefficient * std::exp(t.exponent * lz);
  return s;
}

}  // namespace

ModulationParams modulation_preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (key == "CBFSK") return {0.5, 0.5, "CBFSK"};
  if (key == "CBPSK") return {0.5, 1.0, "CBPSK"};
  if (key == "NBFSK") return {1.0, 0.5, "NBFSK"};
  if (key == "DBPSK") return {1.0, 1.0, "DBPSK"};
  throw std::invalid_argument("unknown modulation: " + std::string(name));
}

double LinkModel::mean_gamma1() const { return rf::prs_mean(rf); }

double LinkModel::kappa() const {
  return hpa::relay_gain_and_kappa(hpa, mean_gamma1());
}

double LinkModel::zeta() const { return mean_gamma1() + kappa(); }

void LinkModel::validate() const {
  rf.validate();
  if (!(gbar2 > 0.0) || !std::isfinite(gbar2)) {
    throw std::invalid_argument("gbar2 must be positive");
  }
  if (!(fso.alpha > 0.0 && fso.beta > 0.0 && fso.xi > 0.0)) {
    throw std::invalid_argument("optical hop is not derived");
  }
}

double kernel_prefactor(const fso::FsoDerived& d) {
  const double l = (d.alpha + d.beta - 3.0) * std::log(2.0) +
                   2.0 * std::log(d.xi) - std::log(kPi) -
                   specfun::log_gamma(d.alpha) - specfun::log_gamma(d.beta);
  return std::exp(l);
}

std::vector<TermInputs> term_inputs(const LinkModel& model) {
  model.validate();
  const auto& d = model.fso;
  const double ab = d.alpha * d.beta * d.h;
  const double zeta = model.zeta();
  std::vector<TermInputs> out;
  for (const auto& t : rf::prs_terms(model.rf)) {
    out.push_back({t.weight, t.rate, ab * ab * t.rate * zeta / (16.0 * model.gbar2)});
  }
  return out;
}

specfun::MeijerGSpec outage_kernel(const LinkModel& model) {
  const auto& d = model.fso;
  const double xi2 = d.xi * d.xi;
  std::vector<double> b;
  for (double v : specfun::gap_sequence(
           2, model.convention == KappaConvention::derived ? xi2 : xi2 + 1.0)) {
    b.push_back(v);
  }
  for (double v : specfun::gap_sequence(2, d.alpha)) b.push_back(v);
  for (double v : specfun::gap_sequence(2, d.beta)) b.push_back(v);
  b.push_back(0.0);
  return {7, 0, specfun::gap_sequence(2, xi2 + 1.0), b};
}

specfun::MeijerGSpec bep_kernel(const LinkModel& model, double tau) {
  auto g = outage_kernel(model);
  g.a.insert(g.a.begin(), 1.0 - tau);
  g.n = 1;
  return g;
}

double outage_cf(const LinkModel& model, double gamma_th) {
  if (!(gamma_th > 0.0)) throw std::invalid_argument("gamma_th must be > 0");
  const auto terms = term_inputs(model);
  const auto g = outage_kernel(model);
  const double pref = kernel_prefactor(model.fso);
  const double residual = 1.0 - pref * kernel_constant(g);
  const double kappa = model.kappa();
  // 1 - Σ c e^{-x} pref G, split so the z^0 part cancels analytically.
  double p = 0.0;
  for (const auto& t : terms) {
    const double x = t.rate * kappa * gamma_th;
    p += t.weight * -std::expm1(-x);
    const double ex = std::exp(-x);
    if (ex == 0.0) continue;
    p += t.weight * ex * (residual - pref * kernel_excess(g, t.omega * gamma_th));
  }
  return clamp_band(p, 1.0, "outage");
}

double ccdf(const LinkModel& model, double gamma) {
  if (gamma <= 0.0) return 1.0;
  const auto terms = term_inputs(model);
  const auto g = outage_kernel(model);
  const double pref = kernel_prefactor(model.fso);
  const double kappa = model.kappa();
  double c = 0.0;
  for (const auto& t : terms) {
    const double x = t.rate * kappa * gamma;
    if (std::abs(t.weight) * std::exp(-x) < 1e-300) continue;
    const double lw = std::log(std::abs(t.weight)) - x;
    const double gv = specfun::meijer_g(g, t.omega * gamma);
    c += (t.weight < 0 ? -1.0 : 1.0) * std::exp(lw) * pref * gv;
  }
  return clamp_band(c, 1.0, "ccdf");
}

double bep_cf(const LinkModel& model, const ModulationParams& mod) {
  if (!(mod.tau > 0.0 && mod.delta > 0.0)) {
    throw std::invalid_argument("modulation needs tau > 0 and delta > 0");
  }
  const auto terms = term_inputs(model);
  const auto g = bep_kernel(model, mod.tau);
  const double pref = kernel_prefactor(model.fso);
  const double rg = specfun::reciprocal_gamma(mod.tau);
  const double residual = 1.0 - pref * rg * kernel_constant(g);
  const double kappa = model.kappa();
  double p = 0.0;
  for (const auto& t : terms) {
    const double bn = t.rate * kappa + mod.delta;
    const double f = std::pow(mod.delta / bn, mod.tau);
    p += 0.5 * t.weight * (1.0 - f);
    const double excess = kernel_excess(g, t.omega / bn);
    p += 0.5 * t.weight * f * (residual - pref * rg * excess);
  }
  return clamp_band(p, 0.5, "bep");
}

std::vector<specfun::ExpansionTerm> asymptotic_terms(
    const specfun::MeijerGSpec& spec, AsymptoticOrder order, bool& skipped) {
  const auto e = specfun::meijer_g_expansion(spec, 2);
  skipped = e.skipped_coincident;
  std::vector<specfun::ExpansionTerm> out;
  for (const auto& t : e.terms) {
    if (t.order == 0) {
      out.push_back(t);
    } else if (order == AsymptoticOrder::first_order && t.order == 1 &&
               t.ladder == 0.0) {
      out.push_back(t);
    }
  }
  return out;
}

AsymptoticValue outage_asym(const LinkModel& model, double gamma_th,
                            AsymptoticOrder order) {
  if (!(gamma_th > 0.0)) throw std::invalid_argument("gamma_th must be > 0");
  const auto terms = term_inputs(model);
  const auto g = outage_kernel(model);
  bool skipped = false;
  auto series = asymptotic_terms(g, order, skipped);
  const double pref = kernel_prefactor(model.fso);
  const double kappa = model.kappa();
  double p = 0.0;
  for (const auto& t : terms) {
    const double x = t.rate * kappa * gamma_th;
    p += t.weight * -std::expm1(-x);
    p += t.weight * std::exp(-x) * (1.0 - pref * series_value(series, t.omega * gamma_th));
  }
  return {p, skipped};
}

AsymptoticValue bep_asym(const LinkModel& model, const ModulationParams& mod,
                         AsymptoticOrder order) {
  const auto terms = term_inputs(model);
  const auto g = bep_kernel(model, mod.tau);
  bool skipped = false;
  auto series = asymptotic_terms(g, order, skipped);
  const double pref = kernel_prefactor(model.fso);
  const double rg = specfun::reciprocal_gamma(mod.tau);
  const double kappa = model.kappa();
  double p = 0.0;
  for (const auto& t : terms) {
    const double bn = t.rate * kappa + mod.delta;
    const double f = std::pow(mod.delta / bn, mod.tau);
    p += 0.5 * t.weight * (1.0 - f);
    p += 0.5 * t.weight * f * (1.0 - pref * rg * series_value(series, t.omega / bn));
  }
  return {p, skipped};
}

double ergodic_capacity(const LinkModel& model, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  const auto terms = term_inputs(model);
  const double kappa = model.kappa();
  // Beyond gmax every exponential weight is below 1e-20.
  double gmax = 0.0;
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) {
    const double r = t.rate * kappa;
    slowest = std::min(slowest, r);
    gmax = std::max(gmax, (std::log(std::abs(t.weight)) + 20.0 * std::log(10.0)) / r);
  }
  const double knee = std::min(1.0 / slowest, model.gbar2);
  const double u_scale = kE / (2.0 * kPi);
  auto to_t = [&](double gamma) {
    const double u = u_scale * gamma;
    return u / (1.0 + u);
  };
  std::vector<double> cuts = {0.0};
  for (double f : {1e-4, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
    const double gk = f * knee;
    if (gk < gmax) cuts.push_back(to_t(gk));
  }
  cuts.push_back(to_t(gmax));
  std::sort(cuts.begin(), cuts.end());

  auto integrand = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double gamma = t / (1.0 - t) / u_scale;
    return ccdf(model, gamma) / (1.0 - t);
  };
  // Global adaptive subdivision: split the segment with the largest error
  // until the summed error meets max(rel_tol |I|, 1e-12).
  struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
  };
  auto rule = [&](double a, double b) {
    double rel = 0.0;
    double l1 = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(integrand, a, b, 0, 0.0, &rel, &l1);
    return Segment{a, b, v, rel * l1};
  };
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double err_sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const Segment s = rule(cuts[i], cuts[i + 1]);
    total += s.value;
    err_sum += s.err;
    heap.push(s);
  }
  for (int split = 0; err_sum > std::max(rel_tol * std::abs(total), 1e-12); ++split) {
    if (split >= 4000) throw std::runtime_error("capacity quadrature did not converge");
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment l = rule(worst.a, mid), r = rule(mid, worst.b);
    total += l.value + r.value - worst.value;
    err_sum += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
  }
  return total / std::log(2.0);
}

AsymptoticValue ergodic_capacity_asym(const LinkModel& model,
                                      AsymptoticOrder order) {
  const auto terms = term_inputs(model);
  const auto g = outage_kernel(model);
  bool skipped = false;
  const auto series = asymptotic_terms(g, order, skipped);
  const double pref = kernel_prefactor(model.fso);
  const double kappa = model.kappa();
  double c = 0.0;
  for (const auto& t : terms) {
    const double b = 2.0 * kPi * t.rate * kappa / kE;
    const double scale = 2.0 * kPi * t.omega / kE;
    double inner = 0.0;
    for (const auto& s : series) {
      inner += s.coefficient * specfun::gamma(1.0 + s.exponent) *
               scaled_upper_gamma(-s.exponent, b) * std::pow(scale, s.exponent);
    }
    c += t.weight * inner;
  }
  return {pref * c / std::log(2.0), skipped};
}

double capacity_ceiling(const hpa::SelHpaParams& p) {
  if (p.ideal() || p.sigma_b2 < 1e-15) return std::numeric_limits<double>::infinity();
  return std::log2(1.0 + kE * p.nu * p.nu / (2.0 * kPi * p.sigma_b2));
}

}  // namespace rfso::analysis
