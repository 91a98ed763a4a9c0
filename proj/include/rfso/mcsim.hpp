#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rfso/analysis.hpp"

namespace rfso::mc {

struct OutageMetric {
  double gamma_th;
};
struct BepMetric {
  analysis::ModulationParams mod;
};
struct CapacityMetric {};
using Metric = std::variant<OutageMetric, BepMetric, CapacityMetric>;

struct McPlan {
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t batch = 100'000;
  Metric metric = OutageMetric{0.01};
  /// Worker cap for run_point; 0 keeps the OpenMP default.
  int threads = 0;

  void validate() const;
};

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double ci99 = 0.0;  ///< 2.576 · stderr
  std::uint64_t trials_used = 0;
};

/// SNDR of one trial; the stream for trial i is keyed by (seed, i).
double sample_sndr(const analysis::LinkModel& model, double kappa,
                   double mean_gamma1, PhiloxStream& rng);

/// Per-trial statistic whose mean is the metric.
double trial_statistic(const Metric& metric, double sndr);

/// OpenMP estimator. Bit-identical to run_point_serial for any thread count
/// or batch size: trials are filled in parallel and reduced in trial order.
McEstimate run_point(const analysis::LinkModel& model, const McPlan& plan);

/// Single-threaded reference implementation.
McEstimate run_point_serial(const analysis::LinkModel& model, const McPlan& plan);

enum class SnrCoupling {
  equal,     ///< γ̄1 = γ̄2 = axis
  geometry,  ///< γ̄1 = axis, γ̄2 = axis · μ² (h A0 I_l)²
};

struct SweepRequest {
  McPlan plan;
  bool analytic = true;
  bool asymptotic = false;
  bool monte_carlo = true;
  SnrCoupling coupling = SnrCoupling::equal;
  std::optional<double> fixed_gbar1;  ///< linear; overrides the axis for hop 1
  std::optional<double> fixed_gbar2;
  analysis::AsymptoticOrder order = analysis::AsymptoticOrder::first_order;
};

struct SweepResult {
  double snr_db = 0.0;
  double gbar1 = 0.0;
  double gbar2 = 0.0;
  double kappa = 1.0;
  std::optional<double> analytic;
  std::optional<double> asymptotic;
  std::optional<double> mc_value;
  std::optional<double> mc_ci99;
};

/// Model for one axis value under the request's coupling.
analysis::LinkModel model_at(const analysis::LinkModel& tmpl, double snr_db,
                             const SweepRequest& req);

std::vector<SweepResult> sweep(const analysis::LinkModel& tmpl,
                               const std::vector<double>& snr_grid_db,
                               const SweepRequest& req);

}  // namespace rfso::mc
