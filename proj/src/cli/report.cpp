#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rfso/config.hpp"

namespace rfso::cli {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string cell(const std::optional<double>& v) { return v ? num(*v) : ""; }

const char* metric_name(MetricKind k) {
  switch (k) {
    case MetricKind::outage: return "outage";
    case MetricKind::bep: return "bep";
    case MetricKind::capacity: return "capacity";
  }
  return "?";
}

}  // namespace

std::string render_csv(const ExperimentConfig& cfg, const analysis::LinkModel& tmpl,
                       const std::vector<mc::SweepResult>& rows) {
  std::ostringstream out;
  const auto& d = tmpl.fso;
  out << "# config = " << cfg.resolved.dump() << "\n";
  out << "# metric = " << metric_name(cfg.metric) << "\n";
  out << "# sigma_r2 = " << num(d.sigma_r2) << "\n";
  out << "# alpha = " << num(d.alpha) << "\n";
  out << "# beta = " << num(d.beta) << "\n";
  out << "# wL_m = " << num(d.wL) << "\n";
  out << "# wLeq_m = " << num(d.wLeq) << "\n";
  out << "# A0 = " << num(d.A0) << "\n";
  out << "# xi = " << num(d.xi) << "\n";
  out << "# sigma_s_m = " << num(d.sigma_s) << "\n";
  out << "# h = " << num(d.h) << "\n";
  out << "# Il = " << num(d.Il) << "\n";
  out << "# gbar2_link_budget = " << num(d.gbar2) << "\n";
  out << "# ibo = " << num(tmpl.hpa.ibo) << "\n";
  out << "# nu = " << num(tmpl.hpa.nu) << "\n";
  out << "# mu = " << num(tmpl.hpa.mu) << "\n";
  out << "# sigma_b2 = " << num(tmpl.hpa.sigma_b2) << "\n";
  if (cfg.metric == MetricKind::capacity) {
    out << "# capacity_ceiling = " << num(analysis::capacity_ceiling(tmpl.hpa)) << "\n";
  }
  for (const auto& r : rows) {
    out << "# point snr_db=" << num(r.snr_db) << " gbar1=" << num(r.gbar1)
        << " gbar2=" << num(r.gbar2) << " kappa=" << num(r.kappa) << "\n";
  }
  out << "snr_db,analytic,asymptotic,mc_value,mc_ci99\n";
  for (const auto& r : rows) {
    out << num(r.snr_db) << ',' << cell(r.analytic) << ',' << cell(r.asymptotic) << ','
        << cell(r.mc_value) << ',' << cell(r.mc_ci99) << "\n";
  }
  return out.str();
}

std::string render_plot_script(const ExperimentConfig& cfg, const std::string& csv_path,
                               const analysis::LinkModel& tmpl) {
  const std::string name = std::filesystem::path(csv_path).filename().string();
  const bool log_y = cfg.metric != MetricKind::capacity;
  std::ostringstream s;
  s << "import os\n"
       "import matplotlib\n"
       "matplotlib.use('Agg')\n"
       "import matplotlib.pyplot as plt\n"
       "import pandas as pd\n\n"
       "here = os.path.dirname(os.path.abspath(__file__))\n"
    << "df = pd.read_csv(os.path.join(here, '" << name << "'), comment='#')\n"
    << "fig, ax = plt.subplots()\n"
       "if df['analytic'].notna().any():\n"
       "    ax.plot(df['snr_db'], df['analytic'], '-', label='analytic')\n"
       "if df['asymptotic'].notna().any():\n"
       "    ax.plot(df['snr_db'], df['asymptotic'], '--', label='asymptotic')\n"
       "if df['mc_value'].notna().any():\n"
       "    ax.errorbar(df['snr_db'], df['mc_value'], yerr=df['mc_ci99'], fmt='o',\n"
       "                label='Monte Carlo')\n";
  if (cfg.metric == MetricKind::capacity) {
    const double ceiling = analysis::capacity_ceiling(tmpl.hpa);
    if (std::isfinite(ceiling)) {
      s << "ax.axhline(" << num(ceiling) << ", color='k', linestyle=':', label='ceiling')\n";
    }
  }
  if (log_y) s << "ax.set_yscale('log')\n";
  s << "ax.set_xlabel('average SNR (dB)')\n"
    << "ax.set_ylabel('" << metric_name(cfg.metric) << "')\n"
    << "ax.grid(True, which='both', alpha=0.3)\n"
       "ax.legend()\n"
    << "fig.savefig(os.path.join(here, '"
    << std::filesystem::path(csv_path).stem().string() << ".png'), dpi=150)\n";
  return s.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string run(const ExperimentConfig& cfg) {
  const auto tmpl = build_template(cfg);
  const auto req = build_request(cfg);
  const auto rows = mc::sweep(tmpl, cfg.snr_grid_db, req);
  write_atomic(cfg.output, render_csv(cfg, tmpl, rows));
  auto script = std::filesystem::path(cfg.output);
  script.replace_extension(".plot.py");
  write_atomic(script.string(), render_plot_script(cfg, cfg.output, tmpl));
  return cfg.output;
}

}  // namespace rfso::cli
