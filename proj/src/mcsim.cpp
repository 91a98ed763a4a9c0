#include "rfso/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace rfso::mc {
namespace {

struct Neumaier {
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

struct Moments {
  Neumaier s1;
  Neumaier s2;
  void add(double v) {
    s1.add(v);
    s2.add(v * v);
  }
  McEstimate finish(std::uint64_t n) const {
    const double dn = static_cast<double>(n);
    const double mean = s1.value() / dn;
    const double var = std::max(0.0, (s2.value() - dn * mean * mean) / (dn - 1.0));
    McEstimate e;
    e.value = mean;
    e.stderr_ = std::sqrt(var / dn);
    e.ci99 = 2.576 * e.stderr_;
    e.trials_used = n;
    return e;
  }
};

}  // namespace

void McPlan::validate() const {
  if (trials < 10000) throw std::invalid_argument("trials must be >= 10000");
  if (batch == 0) throw std::invalid_argument("batch must be positive");
  if (trials % batch != 0) throw std::invalid_argument("batch must divide trials");
}

double sample_sndr(const analysis::LinkModel& model, double kappa,
                   double mean_gamma1, PhiloxStream& rng) {
  const auto pair = rf::sample_selected_pair(model.rf, rng);
  const double irr = fso::sample_irradiance(model.fso, rng);
  const double g2 = fso::electrical_snr(model.fso, irr, model.gbar2);
  return hpa::end_to_end_sndr(pair.gamma1, g2, mean_gamma1, kappa);
}

double trial_statistic(const Metric& metric, double sndr) {
  if (const auto* o = std::get_if<OutageMetric>(&metric)) {
    return sndr < o->gamma_th ? 1.0 : 0.0;
  }
  if (const auto* b = std::get_if<BepMetric>(&metric)) {
    return 0.5 * specfun::regularized_upper_gamma(b->mod.tau, b->mod.delta * sndr);
  }
  return std::log2(1.0 + std::numbers::e * sndr / (2.0 * std::numbers::pi));
}

McEstimate run_point_serial(const analysis::LinkModel& model, const McPlan& plan) {
  plan.validate();
  model.validate();
  const double kappa = model.kappa();
  const double mean_g1 = model.mean_gamma1();
  Moments acc;
  for (std::uint64_t i = 0; i < plan.trials; ++i) {
    PhiloxStream rng(plan.seed, i);
    acc.add(trial_statistic(plan.metric, sample_sndr(model, kappa, mean_g1, rng)));
  }
  return acc.finish(plan.trials);
}

McEstimate run_point(const analysis::LinkModel& model, const McPlan& plan) {
  plan.validate();
  model.validate();
  const double kappa = model.kappa();
  const double mean_g1 = model.mean_gamma1();
  const int threads = plan.threads > 0 ? plan.threads : omp_get_max_threads();
  std::vector<double> buf(plan.batch);
  Moments acc;
  for (std::uint64_t start = 0; start < plan.trials; start += plan.batch) {
    const auto count = static_cast<std::int64_t>(plan.batch);
#pragma omp parallel for num_threads(threads) schedule(static)
    for (std::int64_t j = 0; j < count; ++j) {
      PhiloxStream rng(plan.seed, start + static_cast<std::uint64_t>(j));
      buf[j] = trial_statistic(plan.metric, sample_sndr(model, kappa, mean_g1, rng));
    }
    for (double v : buf) acc.add(v);
  }
  return acc.finish(plan.trials);
}

analysis::LinkModel model_at(const analysis::LinkModel& tmpl, double snr_db,
                             const SweepRequest& req) {
  analysis::LinkModel m = tmpl;
  const double axis = std::pow(10.0, snr_db / 10.0);
  m.rf.gbar1 = req.fixed_gbar1.value_or(axis);
  if (req.fixed_gbar2) {
    m.gbar2 = *req.fixed_gbar2;
  } else if (req.coupling == SnrCoupling::geometry) {
    const double mean_i = tmpl.fso.h * tmpl.fso.A0 * tmpl.fso.Il;
    m.gbar2 = axis * tmpl.hpa.mu * tmpl.hpa.mu * mean_i * mean_i;
  } else {
    m.gbar2 = axis;
  }
  return m;
}

std::vector<SweepResult> sweep(const analysis::LinkModel& tmpl,
                               const std::vector<double>& snr_grid_db,
                               const SweepRequest& req) {
  if (snr_grid_db.empty()) throw std::invalid_argument("snr grid is empty");
  if (req.monte_carlo) req.plan.validate();
  std::vector<SweepResult> out;
  for (double db : snr_grid_db) {
    const auto m = model_at(tmpl, db, req);
    SweepResult r;
    r.snr_db = db;
    r.gbar1 = m.rf.gbar1;
    r.gbar2 = m.gbar2;
    r.kappa = m.kappa();
    const auto& metric = req.plan.metric;
    if (req.analytic) {
      if (const auto* o = std::get_if<OutageMetric>(&metric)) {
        r.analytic = analysis::outage_cf(m, o->gamma_th);
      } else if (const auto* b = std::get_if<BepMetric>(&metric)) {
        r.analytic = analysis::bep_cf(m, b->mod);
      } else {
        r.analytic = analysis::ergodic_capacity(m);
      }
    }
    if (req.asymptotic) {
      if (const auto* o = std::get_if<OutageMetric>(&metric)) {
        r.asymptotic = analysis::outage_asym(m, o->gamma_th, req.order).value;
      } else if (const auto* b = std::get_if<BepMetric>(&metric)) {
        r.asymptotic = analysis::bep_asym(m, b->mod, req.order).value;
      } else {
        r.asymptotic = analysis::ergodic_capacity_asym(m, req.order).value;
      }
    }
    if (req.monte_carlo) {
      const auto e = run_point(m, req.plan);
      r.mc_value = e.value;
      r.mc_ci99 = e.ci99;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace rfso::mc
