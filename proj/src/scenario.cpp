#include "catasym/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "catasym/busemann.hpp"
#include "catasym/cat1.hpp"
#include "catasym/cone.hpp"
#include "catasym/gh.hpp"
#include "catasym/strainer.hpp"

namespace catasym {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json jnum(double value, const std::string& provenance) {
  return json{{"value", value}, {"provenance", provenance}};
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractViolation("cannot write " + path.string());
  out << text;
}

/// Quarter-point tuple spanning the model: the canonical strainer used by
/// the experiment pipelines.
void canonical_strainer_tuple(const SpaceDescriptor& base,
                              std::vector<IdealPoint>& xi,
                              std::vector<IdealPoint>& eta) {
  xi.clear();
  eta.clear();
  if (base.kind() == SpaceKind::Circle) {
    const double L = base.circle_length();
    xi.push_back({ModelPoint::circle_angle(0.0)});
    xi.push_back({ModelPoint::circle_angle(L / 4.0)});
    eta.push_back({ModelPoint::circle_angle(L / 2.0)});
    eta.push_back({ModelPoint::circle_angle(3.0 * L / 4.0)});
    return;
  }
  if (base.kind() == SpaceKind::Suspension &&
      base.base().kind() == SpaceKind::Circle) {
    const double L = base.base().circle_length();
    const auto eq = [&](double angle) {
      return ModelPoint::suspension_point(kPi / 2.0,
                                          ModelPoint::circle_angle(angle));
    };
    xi.push_back({ModelPoint::suspension_point(
        0.0, canonical_point(base.base()))});
    eta.push_back({ModelPoint::suspension_point(
        kPi, canonical_point(base.base()))});
    xi.push_back({eq(0.0)});
    eta.push_back({eq(L / 2.0)});
    xi.push_back({eq(L / 4.0)});
    eta.push_back({eq(3.0 * L / 4.0)});
    return;
  }
  throw ContractViolation(
      "no canonical strainer tuple for this base variant");
}

struct StrainerSetup {
  SpaceDescriptor cone;
  IdealStrainer strainer;
  StrainerMap map;
  double delta_certified = 0.0;
};

StrainerSetup build_strainer(const SpaceDescriptor& base, double base_mesh,
                             std::uint64_t seed) {
  StrainerSetup s{SpaceDescriptor::euclidean_cone(base), {}, {}, 0.0};
  std::vector<IdealPoint> xi, eta;
  canonical_strainer_tuple(base, xi, eta);
  const SampleSet base_net = epsilon_net(base, 0.0, base_mesh, seed);
  const auto delta =
      sharpest_certified_delta(s.cone, xi, eta, base_net, seed);
  if (!delta)
    throw ContractViolation(
        "canonical tuple does not certify on the base net");
  s.delta_certified = *delta;
  s.strainer =
      *certify_ideal_strainer(s.cone, xi, eta, base_net, *delta, seed);
  s.map = make_strainer_map(s.cone, s.strainer);
  return s;
}

json certificate_json(const SuspenderCertificate& c) {
  json j;
  j["m"] = c.m;
  j["delta"] = c.delta;
  j["sample_mesh"] = c.sample_mesh;
  j["p_indices"] = c.p_indices;
  j["q_indices"] = c.q_indices;
  json sup = json::array();
  for (std::size_t i = 0; i < c.sup_raw.size(); ++i)
    sup.push_back(json{{"raw", c.sup_raw[i]},
                       {"certified", c.sup_certified[i]}});
  j["slot_sups"] = sup;
  j["max_pairwise"] = c.max_pairwise;
  j["min_pairwise"] = c.min_pairwise;
  return j;
}

int finish(const ScenarioConfig& cfg, json& report, bool pass,
           const std::vector<std::pair<std::string, std::string>>& csvs) {
  report["assertions_passed"] = pass;
  const std::filesystem::path out = cfg.get("out", "out");
  std::filesystem::create_directories(out);
  write_file(out / "report.json", report.dump(2) + "\n");
  for (const auto& [name, text] : csvs) write_file(out / name, text);
  return pass ? kExitOk : kExitAssertionFailure;
}

int run_suspender_search(const ScenarioConfig& cfg) {
  const SpaceDescriptor space =
      SpaceDescriptor::parse(cfg.get("space", "circle:" + fmt(2.0 * kPi + 0.2)));
  const double mesh = cfg.get_num("mesh", 0.004);
  const int m = static_cast<int>(cfg.get_num("m", 1));
  const double delta = cfg.get_num("delta", 0.11);
  const auto budget =
      static_cast<std::uint64_t>(cfg.get_num("budget", 50'000'000));

  const SampleSet net = epsilon_net(space, 0.0, mesh, cfg.get_seed());
  SuspenderSearchStats stats;
  json report;
  report["schema_version"] = 1;
  report["experiment"] = "suspender-search";
  report["space"] = space.to_string();
  report["mesh"] = jnum(mesh, "closed_form");
  report["m"] = m;
  report["delta"] = jnum(delta, "closed_form");

  bool pass = true;
  std::ostringstream csv;
  csv << "slot,p_index,q_index,sup_raw,sup_certified\n";
  const auto cert = find_suspender(space, net, m, delta, budget, &stats);
  report["found"] = cert.has_value();
  report["search"] = json{{"evaluations", stats.evaluations},
                          {"exhausted", stats.exhausted},
                          {"rank_refuted", stats.rank_refuted},
                          {"coarse_refuted", stats.coarse_refuted}};
  if (cert) {
    report["certificate"] = certificate_json(*cert);
    const auto conclusions = verify_suspender_conclusions(space, *cert, net);
    report["conclusions"] =
        json{{"min_sum_slack", jnum(conclusions.min_sum_slack,
                                    "sampled(" + fmt(mesh) + ")")},
             {"min_pairwise_slack",
              jnum(conclusions.min_pairwise_slack, "closed_form")},
             {"pass", conclusions.pass}};
    pass = conclusions.pass;
    for (int i = 0; i < cert->m; ++i)
      csv << i << ',' << cert->p_indices[i] << ',' << cert->q_indices[i]
          << ',' << fmt(cert->sup_raw[i]) << ',' << fmt(cert->sup_certified[i])
          << '\n';
  } else {
    pass = stats.exhausted || stats.rank_refuted || stats.coarse_refuted;
  }
  return finish(cfg, report, pass, {{"suspender.csv", csv.str()}});
}

int run_strainer_verify(const ScenarioConfig& cfg) {
  const SpaceDescriptor base =
      SpaceDescriptor::parse(cfg.get("space", "circle:" + fmt(2.0 * kPi + 0.1)));
  const double mesh = cfg.get_num("mesh", 0.05);
  const double base_mesh = cfg.get_num("base_mesh", 0.002);
  const double cap = cfg.get_num("radius_cap", 2.0);
  const std::uint64_t seed = cfg.get_seed();

  const StrainerSetup s = build_strainer(base, base_mesh, seed);
  const double delta = s.delta_certified;
  const double m = static_cast<double>(s.strainer.m);

  const SampleSet net = epsilon_net(s.cone, cap, mesh, seed);
  const BusemannFunction bf = s.map.coords.front();
  const LevelAngleReport level = level_set_angle_check(
      s.cone, bf, net, delta,
      static_cast<std::size_t>(cfg.get_num("pair_budget", 500'000)), seed);

  Rng rng(seed + 1);
  std::vector<std::pair<ModelPoint, ModelPoint>> endpoints;
  const int geodesic_count =
      static_cast<int>(cfg.get_num("geodesics", 200));
  for (int i = 0; i < geodesic_count; ++i)
    endpoints.push_back(
        {random_point(s.cone, cap, rng), random_point(s.cone, cap, rng)});
  const FirstVariationInequalityReport fv =
      first_variation_inequalities_check(s.map, endpoints);

  json report;
  report["schema_version"] = 1;
  report["experiment"] = "strainer-verify";
  report["space"] = base.to_string();
  report["delta_certified"] = jnum(delta, "sampled(" + fmt(base_mesh) + ")");
  report["level_angles"] =
      json{{"pairs", level.level_pairs},
           {"max", jnum(level.max_level_angle, "sampled(" + fmt(mesh) + ")")},
           {"min", jnum(level.min_level_angle, "sampled(" + fmt(mesh) + ")")},
           {"sum_min", jnum(level.min_angle_sum, "sampled(" + fmt(mesh) + ")")},
           {"sum_max", jnum(level.max_angle_sum, "sampled(" + fmt(mesh) + ")")}};
  report["first_variation"] = json{
      {"max_coordinate_residual",
       jnum(fv.max_coordinate_residual, "sampled(" + fmt(mesh) + ")")},
      {"max_norm_residual",
       jnum(fv.max_norm_residual, "sampled(" + fmt(mesh) + ")")},
      {"max_derivative_variation",
       jnum(fv.max_derivative_variation, "sampled(" + fmt(mesh) + ")")},
      {"max_level_coordinate_derivative",
       jnum(fv.max_level_coordinate_derivative, "sampled(" + fmt(mesh) + ")")},
      {"max_equal_map_derivative",
       jnum(fv.max_equal_map_derivative, "sampled(" + fmt(mesh) + ")")},
      {"geodesics", fv.geodesics},
      {"level_coordinate_cases", fv.level_coordinate_cases},
      {"equal_map_cases", fv.equal_map_cases}};

  const double sqm = std::sqrt(m);
  const bool pass = level.max_level_angle <= kPi / 2.0 + 1e-9 &&
                    level.min_level_angle > kPi / 2.0 - 2.0 * delta - 1e-9 &&
                    level.max_angle_sum <= kPi + 1e-9 &&
                    level.min_angle_sum > kPi - 2.0 * delta - 1e-9 &&
                    fv.max_coordinate_residual < 2.0 * delta + 1e-6 &&
                    fv.max_norm_residual < 2.0 * sqm * delta + 1e-6 &&
                    fv.max_derivative_variation <= 4.0 * sqm * delta + 1e-6 &&
                    fv.max_equal_map_derivative <= 6.0 * sqm * delta + 1e-6;

  std::ostringstream csv;
  csv << "quantity,measured,bound\n";
  csv << "max_level_angle," << fmt(level.max_level_angle) << ','
      << fmt(kPi / 2.0 + 1e-9) << '\n';
  csv << "min_level_angle," << fmt(level.min_level_angle) << ','
      << fmt(kPi / 2.0 - 2.0 * delta) << '\n';
  csv << "max_angle_sum," << fmt(level.max_angle_sum) << ',' << fmt(kPi)
      << '\n';
  csv << "min_angle_sum," << fmt(level.min_angle_sum) << ','
      << fmt(kPi - 2.0 * delta) << '\n';
  csv << "max_coordinate_residual," << fmt(fv.max_coordinate_residual) << ','
      << fmt(2.0 * delta) << '\n';
  csv << "max_derivative_variation," << fmt(fv.max_derivative_variation)
      << ',' << fmt(4.0 * sqm * delta) << '\n';
  csv << "max_equal_map_derivative," << fmt(fv.max_equal_map_derivative)
      << ',' << fmt(6.0 * sqm * delta) << '\n';
  return finish(cfg, report, pass, {{"strainer_verify.csv", csv.str()}});
}

int run_openness_iterate(const ScenarioConfig& cfg) {
  const SpaceDescriptor base =
      SpaceDescriptor::parse(cfg.get("space", "circle:" + fmt(2.0 * kPi)));
  const double base_mesh = cfg.get_num("base_mesh", 0.002);
  const double tol = cfg.get_num("tol", 1e-12);
  const std::uint64_t seed = cfg.get_seed();

  const StrainerSetup s = build_strainer(base, base_mesh, seed);
  const int m = s.strainer.m;
  std::vector<double> u0 = cfg.get_list("u0", {0.3, 0.4});
  u0.resize(m, 0.0);

  ModelPoint x0 = normalize_point(
      s.cone, ModelPoint::cone_point(0.0, canonical_point(base)));
  const double x0_radius = cfg.get_num("x0_radius", 0.0);
  if (x0_radius > 0.0) {
    Rng rng(seed + 3);
    x0 = random_point(s.cone, x0_radius, rng);
  }

  const IterationResult res = openness_iteration(s.map, x0, u0, tol);
  double u0_l1 = 0.0, u0_l2 = 0.0;
  for (double c : u0) {
    u0_l1 += std::fabs(c);
    u0_l2 += c * c;
  }
  u0_l2 = std::sqrt(u0_l2);
  const double contraction = 2.0 * (m - 1) * s.delta_certified;
  const double bound = u0_l1 / (1.0 - contraction);

  json report;
  report["schema_version"] = 1;
  report["experiment"] = "openness-iterate";
  report["space"] = base.to_string();
  report["delta_certified"] =
      jnum(s.delta_certified, "sampled(" + fmt(base_mesh) + ")");
  report["u0_l1"] = jnum(u0_l1, "closed_form");
  report["converged"] = res.trace.converged;
  report["iterations"] = res.trace.rows.size() - 1;
  report["displacement"] = jnum(res.trace.displacement,
                                "iterated(" + fmt(tol) + ")");
  report["displacement_bound"] = jnum(bound, "closed_form");
  report["max_ratio"] = jnum(res.trace.max_ratio, "iterated(" + fmt(tol) + ")");
  report["ratio_bound"] = jnum(contraction + 0.02, "closed_form");

  std::ostringstream csv;
  csv << "k,residual_l1,residual_l2,step_distance,ratio\n";
  for (const auto& row : res.trace.rows)
    csv << row.k << ',' << fmt(row.residual_l1) << ',' << fmt(row.residual_l2)
        << ',' << fmt(row.step_distance) << ',' << fmt(row.ratio) << '\n';

  const bool pass = res.trace.converged &&
                    res.trace.displacement <= bound + 1e-6 &&
                    res.trace.max_ratio <= contraction + 0.02;
  return finish(cfg, report, pass, {{"trace.csv", csv.str()}});
}

int run_bilip_sweep(const ScenarioConfig& cfg) {
  const std::vector<double> Ls = cfg.get_list(
      "L_values",
      {2.0 * kPi + 0.05, 2.0 * kPi + 0.1, 2.0 * kPi + 0.2});
  const double mesh = cfg.get_num("mesh", 0.02);
  const double cap = cfg.get_num("radius_cap", 3.0);
  const double base_mesh = cfg.get_num("base_mesh", 0.004);
  const auto pair_budget =
      static_cast<std::size_t>(cfg.get_num("pair_budget", 20'000'000));
  const auto probes = static_cast<std::size_t>(cfg.get_num("probes", 100));
  const std::uint64_t seed = cfg.get_seed();

  json rows = json::array();
  std::ostringstream csv;
  csv << "L,delta_certified,lip,open_c,bilip_lower,bilip_upper\n";
  bool pass = true;
  double prev_upper = 0.0, prev_lower = 2.0;
  for (double L : Ls) {
    const SpaceDescriptor base = SpaceDescriptor::circle(L);
    const StrainerSetup s = build_strainer(base, base_mesh, seed);
    const SampleSet net = epsilon_net(s.cone, cap, mesh, seed);
    const RegularityConstants rc = lipschitz_and_open_constants(
        s.map, net.points, pair_budget, probes, 0.5, 1e-10, seed);
    const BiLipschitzReport bl =
        bilipschitz_verify(s.map, net.points, mesh, pair_budget, 1e-9, seed);
    rows.push_back(json{{"L", L},
                        {"delta_certified", s.delta_certified},
                        {"lip", jnum(rc.lip, "sampled(" + fmt(mesh) + ")")},
                        {"open_c", jnum(rc.open_c, "iterated(1e-10)")},
                        {"bilip_lower",
                         jnum(bl.lower, "sampled(" + fmt(mesh) + ")")},
                        {"bilip_upper",
                         jnum(bl.upper, "sampled(" + fmt(mesh) + ")")},
                        {"injectivity_violations", bl.injectivity_violations}});
    csv << fmt(L) << ',' << fmt(s.delta_certified) << ',' << fmt(rc.lip) << ','
        << fmt(rc.open_c) << ',' << fmt(bl.lower) << ',' << fmt(bl.upper)
        << '\n';
    pass = pass && bl.injectivity_violations == 0 &&
           bl.upper >= prev_upper - 1e-9 && bl.lower <= prev_lower + 1e-9;
    prev_upper = bl.upper;
    prev_lower = bl.lower;
  }
  json report;
  report["schema_version"] = 1;
  report["experiment"] = "bilip-sweep";
  report["mesh"] = jnum(mesh, "closed_form");
  report["rows"] = rows;
  return finish(cfg, report, pass, {{"bilip_sweep.csv", csv.str()}});
}

int run_gh_bounds(const ScenarioConfig& cfg) {
  const SpaceDescriptor Z =
      SpaceDescriptor::parse(cfg.get("space", "circle:" + fmt(2.0 * kPi)));
  const int n = static_cast<int>(cfg.get_num("n", 2));
  const double mesh = cfg.get_num("mesh", 0.01);
  const GHInterval interval = gh_to_sphere(Z, n, mesh, cfg.get_seed());

  json report;
  report["schema_version"] = 1;
  report["experiment"] = "gh-bounds";
  report["space"] = Z.to_string();
  report["n"] = n;
  report["mesh"] = jnum(mesh, "closed_form");
  report["lower"] = jnum(interval.lower, interval.lower_provenance);
  report["upper"] = jnum(interval.upper, interval.upper_provenance);
  report["covering_radius_convention"] =
      "c-approximation coverage radius taken as c";

  std::ostringstream csv;
  csv << "lower,upper\n" << fmt(interval.lower) << ',' << fmt(interval.upper)
      << '\n';
  const bool pass = interval.lower <= interval.upper + 1e-12;
  return finish(cfg, report, pass, {{"gh_bounds.csv", csv.str()}});
}

int run_sphere_map(const ScenarioConfig& cfg) {
  const std::vector<double> Ls = cfg.get_list(
      "L_values",
      {2.0 * kPi + 0.05, 2.0 * kPi + 0.1, 2.0 * kPi + 0.2});
  const double mesh = cfg.get_num("mesh", 0.01);
  const double base_mesh = cfg.get_num("base_mesh", 0.004);
  const std::uint64_t seed = cfg.get_seed();

  json rows = json::array();
  std::ostringstream csv;
  csv << "L,delta_certified,lower,upper,min_norm,gap\n";
  bool pass = true;
  for (double L : Ls) {
    const SpaceDescriptor base = SpaceDescriptor::circle(L);
    const StrainerSetup s = build_strainer(base, base_mesh, seed);
    const SampleSet net = epsilon_net(base, 0.0, mesh, seed);
    const SphereMapReport sm = sphere_map_distortion(s.map, net);
    const double gap = fullsusp_gap(base, net, s.strainer.base_certificate);
    rows.push_back(json{{"L", L},
                        {"delta_certified", s.delta_certified},
                        {"lower", jnum(sm.lower, "sampled(" + fmt(mesh) + ")")},
                        {"upper", jnum(sm.upper, "sampled(" + fmt(mesh) + ")")},
                        {"min_norm", jnum(sm.min_norm, "closed_form")},
                        {"gap", jnum(gap, "sampled(" + fmt(mesh) + ")")}});
    csv << fmt(L) << ',' << fmt(s.delta_certified) << ',' << fmt(sm.lower)
        << ',' << fmt(sm.upper) << ',' << fmt(sm.min_norm) << ',' << fmt(gap)
        << '\n';
    pass = pass && !sm.normalization_failure && sm.lower <= sm.upper &&
           gap > 0.5;
  }
  json report;
  report["schema_version"] = 1;
  report["experiment"] = "sphere-map";
  report["mesh"] = jnum(mesh, "closed_form");
  report["rows"] = rows;
  return finish(cfg, report, pass, {{"sphere_map.csv", csv.str()}});
}

}  // namespace

std::string ScenarioConfig::get(const std::string& key,
                                const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ScenarioConfig::get_num(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ContractViolation("config value for '" + key + "' is not numeric");
  }
}

std::uint64_t ScenarioConfig::get_seed() const {
  return static_cast<std::uint64_t>(get_num("seed", 42));
}

std::vector<double> ScenarioConfig::get_list(
    const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ContractViolation("config list '" + key + "' is not numeric");
    }
  }
  return out;
}

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names = {
      "suspender-search", "strainer-verify", "openness-iterate",
      "bilip-sweep",      "gh-bounds",       "sphere-map"};
  return names;
}

ScenarioConfig config_from_text(const std::string& text,
                                const std::string& experiment) {
  const auto& names = known_experiments();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw ContractViolation("unknown experiment: " + experiment);

  ScenarioConfig cfg;
  cfg.experiment = experiment;
  std::map<std::string, std::string> global, sectioned;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(names.begin(), names.end(), section) == names.end())
        throw ContractViolation("unknown experiment section [" + section +
                                "] at line " + std::to_string(lineno));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ContractViolation("malformed config line " +
                              std::to_string(lineno) + ": " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ContractViolation("empty key at config line " +
                              std::to_string(lineno));
    if (section.empty())
      global[key] = value;
    else if (section == experiment)
      sectioned[key] = value;
  }
  cfg.values = std::move(global);
  for (auto& [k, v] : sectioned) cfg.values[k] = v;
  return cfg;
}

ScenarioConfig load_config(const std::string& path,
                           const std::string& experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_text(ss.str(), experiment);
}

int run_scenario(const ScenarioConfig& cfg) {
  if (cfg.experiment == "suspender-search") return run_suspender_search(cfg);
  if (cfg.experiment == "strainer-verify") return run_strainer_verify(cfg);
  if (cfg.experiment == "openness-iterate") return run_openness_iterate(cfg);
  if (cfg.experiment == "bilip-sweep") return run_bilip_sweep(cfg);
  if (cfg.experiment == "gh-bounds") return run_gh_bounds(cfg);
  if (cfg.experiment == "sphere-map") return run_sphere_map(cfg);
  throw ContractViolation("unknown experiment: " + cfg.experiment);
}

}  // namespace catasym
