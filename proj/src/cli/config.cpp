#include "rfso/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rfso::cli {

using nlohmann::json;

namespace {

enum class Kind { number, integer, string, boolean, number_list, string_list };

struct Field {
  Kind kind;
  bool nullable;
};

const std::map<std::string, Field>& schema() {
  static const std::map<std::string, Field> s = {
      {"rf.N", {Kind::integer, false}},
      {"rf.m", {Kind::integer, false}},
      {"rf.rho", {Kind::number, false}},
      {"rf.fd_td", {Kind::number, true}},
      {"fso.L_km", {Kind::number, false}},
      {"fso.lambda_nm", {Kind::number, false}},
      {"fso.a_cm", {Kind::number, false}},
      {"fso.w0_mm", {Kind::number, false}},
      {"fso.F0_m", {Kind::number, false}},
      {"fso.cn2", {Kind::number, false}},
      {"fso.sigma_s_cm", {Kind::number, false}},
      {"fso.sigma_db_per_km", {Kind::number, false}},
      {"fso.weather", {Kind::string, true}},
      {"fso.eta", {Kind::number, false}},
      {"fso.sigma2_sq", {Kind::number, false}},
      {"fso.Pt", {Kind::number, false}},
      {"fso.xi", {Kind::number, true}},
      {"fso.sigma_r2", {Kind::number, true}},
      {"fso.beam_width", {Kind::string, false}},
      {"hpa.ibo_db", {Kind::number, true}},
      {"hpa.ideal", {Kind::boolean, false}},
      {"metric", {Kind::string, false}},
      {"modulation", {Kind::string, false}},
      {"gamma_th_db", {Kind::number, false}},
      {"snr_grid_db", {Kind::number_list, false}},
      {"methods", {Kind::string_list, false}},
      {"snr_coupling", {Kind::string, false}},
      {"gbar1_db", {Kind::number, true}},
      {"gbar2_db", {Kind::number, true}},
      {"kappa_convention", {Kind::string, false}},
      {"asymptotic_order", {Kind::string, false}},
      {"mc.trials", {Kind::integer, false}},
      {"mc.seed", {Kind::integer, false}},
      {"mc.batch", {Kind::integer, false}},
      {"output", {Kind::string, false}},
  };
  return s;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::number: return "a number";
    case Kind::integer: return "a non-negative integer";
    case Kind::string: return "a string";
    case Kind::boolean: return "a boolean";
    case Kind::number_list: return "a list of numbers";
    case Kind::string_list: return "a list of strings";
  }
  return "?";
}

bool matches(const json& v, Kind k) {
  switch (k) {
    case Kind::number: return v.is_number();
    case Kind::integer: return v.is_number_unsigned() ||
                               (v.is_number_integer() && v.get<long long>() >= 0);
    case Kind::string: return v.is_string();
    case Kind::boolean: return v.is_boolean();
    case Kind::number_list:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_number()) return false;
      }
      return true;
    case Kind::string_list:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_string()) return false;
      }
      return true;
  }
  return false;
}

bool is_section(const std::string& key) {
  return key == "rf" || key == "fso" || key == "hpa" || key == "mc";
}

void check_document(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (is_section(key)) {
      if (!value.is_object()) throw ConfigError(key + ": expected an object");
      for (const auto& [sub, v] : value.items()) {
        const std::string path = key + "." + sub;
        const auto it = schema().find(path);
        if (it == schema().end()) throw ConfigError(path + ": unknown key");
        if (v.is_null() && it->second.nullable) continue;
        if (!matches(v, it->second.kind)) {
          throw ConfigError(path + ": expected " + kind_name(it->second.kind));
        }
      }
      continue;
    }
    const auto it = schema().find(key);
    if (it == schema().end()) throw ConfigError(key + ": unknown key");
    if (value.is_null() && it->second.nullable) continue;
    if (!matches(value, it->second.kind)) {
      throw ConfigError(key + ": expected " + kind_name(it->second.kind));
    }
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::optional<double> opt_number(const json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

bool user_has(const json& user, const std::string& section, const std::string& key) {
  return user.contains(section) && user[section].is_object() &&
         user[section].contains(key) && !user[section][key].is_null();
}

}  // namespace

json default_document() {
  json grid = json::array();
  for (int db = 0; db <= 50; db += 5) grid.push_back(static_cast<double>(db));
  return json{
      {"rf", {{"N", 5}, {"m", 5}, {"rho", 0.9}, {"fd_td", nullptr}}},
      {"fso",
       {{"L_km", 1.0},
        {"lambda_nm", 1550.0},
        {"a_cm", 5.0},
        {"w0_mm", 5.0},
        {"F0_m", -10.0},
        {"cn2", 5e-14},
        {"sigma_s_cm", 3.75},
        {"sigma_db_per_km", 0.43},
        {"weather", nullptr},
        {"eta", 1.0},
        {"sigma2_sq", 1.0},
        {"Pt", 1.0},
        {"xi", nullptr},
        {"sigma_r2", nullptr},
        {"beam_width", "squared"}}},
      {"hpa", {{"ibo_db", 30.0}, {"ideal", false}}},
      {"metric", "outage"},
      {"modulation", "CBFSK"},
      {"gamma_th_db", -20.0},
      {"snr_grid_db", grid},
      {"methods", {"analytic", "mc"}},
      {"snr_coupling", "equal"},
      {"gbar1_db", nullptr},
      {"gbar2_db", nullptr},
      {"kappa_convention", "derived"},
      {"asymptotic_order", "first_order"},
      {"mc", {{"trials", 1000000}, {"seed", 1}, {"batch", 100000}}},
      {"output", "rfso_out.csv"},
  };
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected KEY=VALUE");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "': empty key");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    json& child = (*node)[part];
    if (child.is_null()) child = json::object();
    if (!child.is_object()) {
      throw ConfigError("override '" + assignment + "': " + part + " is not a section");
    }
    node = &child;
    start = dot + 1;
  }
}

ExperimentConfig resolve_config(const json& user_in,
                                const std::vector<std::string>& overrides) {
  json user = user_in.is_null() ? json::object() : user_in;
  for (const auto& o : overrides) apply_override(user, o);
  check_document(user);
  json doc = default_document();
  for (const auto& [key, value] : user.items()) {
    if (is_section(key)) {
      for (const auto& [sub, v] : value.items()) doc[key][sub] = v;
    } else {
      doc[key] = value;
    }
  }

  ExperimentConfig c;
  c.resolved = doc;
  const auto& rf = doc["rf"];
  c.rf.N = rf["N"].get<unsigned>();
  c.rf.m = rf["m"].get<unsigned>();
  require(c.rf.N >= 1, "rf.N: must be >= 1");
  require(c.rf.m >= 1 && c.rf.m <= c.rf.N, "rf.m: must satisfy 1 <= m <= N");
  if (!rf["fd_td"].is_null()) {
    require(!user_has(user, "rf", "rho"), "rf.fd_td: conflicts with rf.rho");
    try {
      c.rf.rho = rf::jakes_rho(rf["fd_td"].get<double>());
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("rf.fd_td: ") + e.what());
    }
  } else {
    c.rf.rho = rf["rho"].get<double>();
  }
  require(c.rf.rho >= 0.0 && c.rf.rho <= 1.0, "rf.rho: rho ∈ [0,1]");

  const auto& f = doc["fso"];
  auto positive = [&](const char* key) {
    const double v = f[key].get<double>();
    require(v > 0.0 && std::isfinite(v), std::string("fso.") + key + ": must be > 0");
    return v;
  };
  c.fso.L = positive("L_km") * 1e3;
  c.fso.lambda = positive("lambda_nm") * 1e-9;
  c.fso.a = positive("a_cm") * 1e-2;
  c.fso.w0 = positive("w0_mm") * 1e-3;
  c.fso.F0 = f["F0_m"].get<double>();
  require(c.fso.F0 != 0.0, "fso.F0_m: must be non-zero (m)");
  c.fso.Cn2 = positive("cn2");
  c.fso.sigma_s = positive("sigma_s_cm") * 1e-2;
  c.fso.eta = positive("eta");
  c.fso.sigma2_sq = positive("sigma2_sq");
  c.fso.Pt = positive("Pt");
  if (!f["weather"].is_null()) {
    require(!user_has(user, "fso", "sigma_db_per_km"),
            "fso.weather: conflicts with fso.sigma_db_per_km");
    const auto w = f["weather"].get<std::string>();
    require(w == "clear",
            "fso.weather: only 'clear' is built in; give sigma_db_per_km (dB/km) otherwise");
    c.fso.sigma_db_per_km = 0.43;
  } else {
    c.fso.sigma_db_per_km = f["sigma_db_per_km"].get<double>();
    require(c.fso.sigma_db_per_km >= 0.0, "fso.sigma_db_per_km: must be >= 0 (dB/km)");
  }
  c.fso.xi_override = opt_number(f["xi"]);
  if (c.fso.xi_override) require(*c.fso.xi_override > 0.0, "fso.xi: must be > 0");
  c.fso.sigma_r2_override = opt_number(f["sigma_r2"]);
  if (c.fso.sigma_r2_override) {
    require(*c.fso.sigma_r2_override > 0.0, "fso.sigma_r2: must be > 0");
  }
  const auto bw = f["beam_width"].get<std::string>();
  require(bw == "squared" || bw == "printed",
          "fso.beam_width: expected 'squared' or 'printed'");
  c.beam_width = bw == "squared" ? fso::BeamWidthForm::squared
                                 : fso::BeamWidthForm::printed;

  const auto& h = doc["hpa"];
  if (h["ideal"].get<bool>()) {
    c.ibo_db.reset();
  } else {
    require(!h["ibo_db"].is_null(), "hpa.ibo_db: required unless hpa.ideal is true");
    c.ibo_db = h["ibo_db"].get<double>();
    require(std::isfinite(*c.ibo_db), "hpa.ibo_db: must be finite (dB)");
  }

  const auto metric = doc["metric"].get<std::string>();
  if (metric == "outage") {
    c.metric = MetricKind::outage;
  } else if (metric == "bep") {
    c.metric = MetricKind::bep;
  } else if (metric == "capacity") {
    c.metric = MetricKind::capacity;
  } else {
    throw ConfigError("metric: expected outage, bep or capacity");
  }
  try {
    c.modulation = analysis::modulation_preset(doc["modulation"].get<std::string>());
  } catch (const std::invalid_argument&) {
    throw ConfigError("modulation: expected CBFSK, CBPSK, NBFSK or DBPSK");
  }
  c.gamma_th_db = doc["gamma_th_db"].get<double>();
  require(std::isfinite(c.gamma_th_db), "gamma_th_db: must be finite (dB)");
  c.snr_grid_db = doc["snr_grid_db"].get<std::vector<double>>();
  require(!c.snr_grid_db.empty(), "snr_grid_db: must not be empty");

  c.analytic = c.asymptotic = c.monte_carlo = false;
  for (const auto& m : doc["methods"].get<std::vector<std::string>>()) {
    if (m == "analytic") {
      c.analytic = true;
    } else if (m == "asymptotic") {
      c.asymptotic = true;
    } else if (m == "mc") {
      c.monte_carlo = true;
    } else {
      throw ConfigError("methods: entries must be analytic, asymptotic or mc");
    }
  }
  require(c.analytic || c.asymptotic || c.monte_carlo, "methods: must not be empty");

  const auto coupling = doc["snr_coupling"].get<std::string>();
  require(coupling == "equal" || coupling == "geometry",
          "snr_coupling: expected 'equal' or 'geometry'");
  c.coupling = coupling == "equal" ? mc::SnrCoupling::equal : mc::SnrCoupling::geometry;
  c.gbar1_db = opt_number(doc["gbar1_db"]);
  c.gbar2_db = opt_number(doc["gbar2_db"]);

  const auto conv = doc["kappa_convention"].get<std::string>();
  require(conv == "derived" || conv == "printed",
          "kappa_convention: expected 'derived' or 'printed'");
  c.convention = conv == "derived" ? analysis::KappaConvention::derived
                                   : analysis::KappaConvention::printed;
  const auto order = doc["asymptotic_order"].get<std::string>();
  require(order == "first_order" || order == "leading_per_ladder",
          "asymptotic_order: expected 'first_order' or 'leading_per_ladder'");
  c.order = order == "first_order" ? analysis::AsymptoticOrder::first_order
                                   : analysis::AsymptoticOrder::leading_per_ladder;

  const auto& m = doc["mc"];
  c.trials = m["trials"].get<std::uint64_t>();
  c.seed = m["seed"].get<std::uint64_t>();
  c.batch = m["batch"].get<std::uint64_t>();
  require(c.trials >= 10000, "mc.trials: must be >= 10000");
  require(c.batch >= 1 && c.trials % c.batch == 0, "mc.batch: must divide mc.trials");
  c.output = doc["output"].get<std::string>();
  require(!c.output.empty(), "output: must not be empty");
  return c;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config: " + path + " is not valid JSON");
  return resolve_config(doc, overrides);
}

analysis::LinkModel build_template(const ExperimentConfig& cfg) {
  analysis::LinkModel m;
  m.rf = cfg.rf;
  m.fso = fso::derive_geometry(cfg.fso, cfg.beam_width);
  m.gbar2 = 1.0;
  m.hpa = cfg.ibo_db ? hpa::sel_params_db(*cfg.ibo_db) : hpa::ideal_hpa();
  m.convention = cfg.convention;
  return m;
}

mc::SweepRequest build_request(const ExperimentConfig& cfg) {
  mc::SweepRequest r;
  r.plan.trials = cfg.trials;
  r.plan.seed = cfg.seed;
  r.plan.batch = cfg.batch;
  switch (cfg.metric) {
    case MetricKind::outage:
      r.plan.metric = mc::OutageMetric{std::pow(10.0, cfg.gamma_th_db / 10.0)};
      break;
    case MetricKind::bep:
      r.plan.metric = mc::BepMetric{cfg.modulation};
      break;
    case MetricKind::capacity:
      r.plan.metric = mc::CapacityMetric{};
      break;
  }
  r.analytic = cfg.analytic;
  r.asymptotic = cfg.asymptotic;
  r.monte_carlo = cfg.monte_carlo;
  r.coupling = cfg.coupling;
  if (cfg.gbar1_db) r.fixed_gbar1 = std::pow(10.0, *cfg.gbar1_db / 10.0);
  if (cfg.gbar2_db) r.fixed_gbar2 = std::pow(10.0, *cfg.gbar2_db / 10.0);
  r.order = cfg.order;
  return r;
}

}  // namespace rfso::cli
