#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfso/mcsim.hpp"

namespace rfso::cli {

/// Schema violation; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetricKind { outage, bep, capacity };

struct ExperimentConfig {
  nlohmann::json resolved;  ///< full document after defaults and overrides

  rf::RfHopConfig rf;
  fso::FsoGeometryInput fso;
  fso::BeamWidthForm beam_width = fso::BeamWidthForm::squared;
  std::optional<double> ibo_db;  ///< empty means ideal hardware
  MetricKind metric = MetricKind::outage;
  analysis::ModulationParams modulation;
  double gamma_th_db = -20.0;
  std::vector<double> snr_grid_db;
  bool analytic = true;
  bool asymptotic = false;
  bool monte_carlo = true;
  mc::SnrCoupling coupling = mc::SnrCoupling::equal;
  std::optional<double> gbar1_db;
  std::optional<double> gbar2_db;
  analysis::KappaConvention convention = analysis::KappaConvention::derived;
  analysis::AsymptoticOrder order = analysis::AsymptoticOrder::first_order;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t batch = 100'000;
  std::string output = "rfso_out.csv";
};

/// Reference link defaults (N = m = 5, 30 dB back-off, outage at -20 dB).
nlohmann::json default_document();

/// Applies "a.b.c=value" to a document. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates a user document (unknown keys rejected), merges defaults.
ExperimentConfig resolve_config(const nlohmann::json& user,
                                const std::vector<std::string>& overrides = {});

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

/// Link model and sweep request described by a config.
analysis::LinkModel build_template(const ExperimentConfig& cfg);
mc::SweepRequest build_request(const ExperimentConfig& cfg);

/// CSV text: provenance header plus one row per grid point.
std::string render_csv(const ExperimentConfig& cfg,
                       const analysis::LinkModel& tmpl,
                       const std::vector<mc::SweepResult>& rows);

/// Python/matplotlib script plotting the CSV at csv_path.
std::string render_plot_script(const ExperimentConfig& cfg,
                               const std::string& csv_path,
                               const analysis::LinkModel& tmpl);

/// Writes via a temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

/// Runs the sweep and writes CSV plus plot script; returns the CSV path.
std::string run(const ExperimentConfig& cfg);

}  // namespace rfso::cli
