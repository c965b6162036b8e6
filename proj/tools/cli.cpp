#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "billiard_lab/affine_geometry.hpp"
#include "billiard_lab/conics.hpp"
#include "billiard_lab/constant_curvature.hpp"
#include "billiard_lab/curve_spec.hpp"
#include "billiard_lab/error.hpp"
#include "billiard_lab/gravity.hpp"
#include "billiard_lab/planar_billiard.hpp"
#include "billiard_lab/poritsky.hpp"
#include "billiard_lab/svg.hpp"

namespace billiard_lab {

namespace {

using nlohmann::json;

struct Config {
  std::string command;
  std::string curve;
  std::string form;
  std::string out = "-";
  std::string envelope_out;
  std::string plot;
  std::string expect;
  std::string json_path;
  std::string geometry = "sphere";
  std::string density = "homeoid";
  std::string points = "random:20:1";
  std::string start;
  std::size_t samples = kDefaultSampleCount;
  std::size_t steps = 100;
  std::size_t pairs = 256;
  std::size_t nodes = 1024;
  std::size_t trials = 100;
  unsigned long long seed = 1;
  std::optional<double> tol;
  double start_t = 0.0;
  double angle = 1.0;
  double c = kTwoPi / 7.0;
};

struct Outcome {
  json summary;
  /// Verdict compared against --expect: "conic" or "non-conic".
  std::optional<std::string> verdict;
  bool tolerance_violated = false;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  body(f);
  if (!f) throw Error(ErrorCode::io_error, "failed writing '" + path + "'");
}

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& flag, char sep = ',') {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, flag + ": '" + text + "' is not a list of numbers");
    }
  }
  if (v.size() != count) {
    throw Error(ErrorCode::parse_error, flag + ": expected " + std::to_string(count) + " numbers, got '" + text + "'");
  }
  return v;
}

LoadedCurve need_curve(const Config& cfg) {
  if (cfg.curve.empty()) throw Error(ErrorCode::invalid_argument, "--curve is required");
  return load_curve_file(cfg.curve, cfg.samples);
}

const SampledCurve& need_planar(const LoadedCurve& lc) {
  if (lc.curve.dimension() != 2) throw Error(ErrorCode::dimension_mismatch, "this command needs a planar curve");
  return lc.curve;
}

std::vector<Vec2> curve_points(const SampledCurve& c) {
  std::vector<Vec2> pts;
  for (std::size_t j = 0; j < c.size(); ++j) pts.emplace_back(c.sample(j));
  return pts;
}

void write_plot(const Config& cfg, const SvgDataset& data, std::ostream& out) {
  if (cfg.plot.empty()) return;
  const std::string svg = emit_svg(data);
  write_to(cfg.plot, out, [&](std::ostream& o) { o << svg; });
}

Outcome cmd_billiard(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  const SampledCurve& curve = need_planar(lc);
  std::optional<QuadraticForm> form = lc.form;
  if (!cfg.form.empty()) form = load_quadric_file(cfg.form);
  const OrbitRecord rec = orbit(curve, start_state(curve, cfg.start_t, cfg.angle), cfg.steps, form);

  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "k,t,x,y,ux,uy,J\n";
    for (std::size_t k = 0; k < rec.states.size(); ++k) {
      const auto& s = rec.states[k];
      const Vec2 p = as_vec2(curve.point(s.t));
      const double j = k < rec.integral_values.size() ? rec.integral_values[k] : std::nan("");
      o << k << ',' << num(s.t) << ',' << num(p.x()) << ',' << num(p.y()) << ',' << num(s.u.x()) << ','
        << num(s.u.y()) << ',' << num(j) << '\n';
    }
  });

  Outcome res;
  res.summary["steps_requested"] = cfg.steps;
  res.summary["steps_completed"] = rec.states.size() - 1;
  if (!rec.integral_values.empty()) {
    const double drift = integral_drift(rec);
    const double rel = drift / std::abs(rec.integral_values.front());
    res.summary["invariant_initial"] = rec.integral_values.front();
    res.summary["invariant_drift"] = drift;
    res.summary["invariant_relative_drift"] = rel;
    if (cfg.tol && rel > *cfg.tol) res.tolerance_violated = true;
  }
  if (!rec.complete()) res.summary["abort_reason"] = rec.abort_reason;

  SvgDataset data{curve_points(curve), std::vector<Vec2>{}, std::nullopt};
  for (const auto& s : rec.states) data.orbit->push_back(as_vec2(curve.point(s.t)));
  if (rec.terminal_t) data.orbit->push_back(as_vec2(curve.point(*rec.terminal_t)));
  write_plot(cfg, data, out);
  if (!rec.complete()) throw Error(ErrorCode::invariant_violated, "orbit stopped early: " + rec.abort_reason);
  return res;
}

Outcome cmd_fit_normal_field(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  const SampledCurve& curve = need_planar(lc);
  const NormalFieldFit fit = fit_normal_field(curve, cfg.pairs, cfg.seed);
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "t,f\n";
    for (std::size_t j = 0; j < fit.field.f.size(); ++j) o << num(fit.field.parameters[j]) << ',' << num(fit.field.f[j]) << '\n';
  });
  const double tol = cfg.tol.value_or(1e-6);
  Outcome res;
  res.summary["residual"] = fit.residual;
  res.summary["admissible"] = fit.admissible;
  res.summary["equations"] = fit.equations;
  res.summary["tolerance"] = tol;
  if (lc.form) {
    double worst = 0.0;
    for (std::size_t j = 0; j < curve.size(); ++j) {
      const Vec2 n = fitted_normal(curve, fit.field, j);
      const Vec2 a = as_vec2(lc.form->apply(curve.sample(j)));
      worst = std::max(worst, std::atan2(std::abs(cross2(n, a)), n.dot(a)));
    }
    res.summary["max_angle_to_form_normal"] = worst;
  }
  res.verdict = fit.residual < tol && fit.admissible ? "conic" : "non-conic";
  return res;
}

json verdict_json(const ConicVerdict& v) {
  json j;
  j["verdict"] = v.conic ? "conic" : "non-conic";
  j["reason"] = v.reason;
  j["affine_curvature"] = {{"min", v.k_min}, {"max", v.k_max}, {"mean", v.k_mean}, {"relative_spread", v.k_variation}};
  j["kappa_ode_residual"] = {{"max_raw", v.kappa_residual.max_raw},
                             {"max_scaled", v.kappa_residual.max_scaled},
                             {"scale", v.kappa_residual.scale}};
  j["curvature_ratio"] = v.curvature_ratio;
  return j;
}

Outcome cmd_conic_test(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  ConicTestOptions opt;
  if (cfg.tol) opt.tol = *cfg.tol;
  const ConicVerdict v = conic_test(need_planar(lc), opt);
  json report = verdict_json(v);
  report["schema_version"] = kSchemaVersion;
  report["tolerance"] = opt.tol;
  report["k_profile"] = {{"parameter", v.k_parameters}, {"k", v.k_profile}};
  write_to(cfg.out, out, [&](std::ostream& o) { o << report.dump(2) << '\n'; });
  Outcome res;
  res.summary = verdict_json(v);
  res.verdict = v.conic ? "conic" : "non-conic";
  return res;
}

std::string sibling(const std::string& path, const std::string& name) {
  if (path == "-") return "";
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? name : path.substr(0, slash + 1) + name;
}

Outcome cmd_poritsky(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  const PoritskyParam pp(need_planar(lc));
  const ChordFamily fam = constant_area_chords(pp, cfg.c);
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "x,x+c,area,dA/dx\n";
    for (const Chord& ch : fam.chords) o << num(ch.x) << ',' << num(ch.y) << ',' << num(ch.area) << ',' << num(ch.dA_dx) << '\n';
  });
  const double tol = cfg.tol.value_or(1e-6);
  Outcome res;
  res.summary["c"] = cfg.c;
  res.summary["area_drift"] = fam.drift;
  res.summary["tolerance"] = tol;
  res.verdict = fam.drift <= tol ? "conic" : "non-conic";
  SvgDataset data{curve_points(pp.base()), std::nullopt, std::nullopt};
  const std::string env_path = cfg.envelope_out.empty() ? sibling(cfg.out, "envelope.csv") : cfg.envelope_out;
  if (fam.drift <= tol) {
    const AreaEnvelope env = area_envelope(fam, tol);
    res.summary["tangency_defect"] = env.tangency_defect;
    if (!env_path.empty()) {
      write_to(env_path, out, [&](std::ostream& o) {
        o << "x,ex,ey\n";
        for (std::size_t j = 0; j < env.curve.size(); ++j) {
          o << num(env.curve.parameter(j)) << ',' << num(env.curve.samples()(0, static_cast<Eigen::Index>(j))) << ','
            << num(env.curve.samples()(1, static_cast<Eigen::Index>(j))) << '\n';
        }
      });
      res.summary["envelope"] = env_path;
    }
    data.envelope = curve_points(env.curve);
  } else {
    res.summary["envelope"] = nullptr;
    res.summary["envelope_error"] = "area drift above tolerance; envelope undefined";
  }
  write_plot(cfg, data, out);
  return res;
}

Outcome cmd_outer_billiard(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  const SampledCurve& curve = need_planar(lc);
  const auto s = parse_list(cfg.start.empty() ? "2,0" : cfg.start, 2, "--start");
  const std::vector<Vec2> pts = outer_billiard_orbit(curve, Vec2(s[0], s[1]), cfg.steps);
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "k,x,y\n";
    for (std::size_t k = 0; k < pts.size(); ++k) o << k << ',' << num(pts[k].x()) << ',' << num(pts[k].y()) << '\n';
  });
  Outcome res;
  res.summary["steps"] = cfg.steps;
  double rmin = pts.front().norm(), rmax = rmin;
  for (const Vec2& p : pts) {
    rmin = std::min(rmin, p.norm());
    rmax = std::max(rmax, p.norm());
  }
  res.summary["radius_min"] = rmin;
  res.summary["radius_max"] = rmax;
  write_plot(cfg, {curve_points(curve), pts, std::nullopt}, out);
  return res;
}

SpaceForm space_of(const Config& cfg) {
  if (cfg.geometry == "sphere") return SpaceForm::sphere();
  if (cfg.geometry == "hyperbolic") return SpaceForm::hyperbolic();
  throw Error(ErrorCode::invalid_argument, "--geometry must be sphere or hyperbolic");
}

Outcome cmd_sphere_billiard(const Config& cfg, std::ostream& out) {
  if (cfg.form.empty()) throw Error(ErrorCode::invalid_argument, "--cone is required");
  QuadraticForm q = load_quadric_file(cfg.form);
  if (q.dim() != 3) throw Error(ErrorCode::dimension_mismatch, "--cone must be a 3x3 form");
  const SphericalConic conic(QuadraticForm(q.matrix(), 0.0), space_of(cfg));
  const auto s = parse_list(cfg.start.empty() ? "0.3,1.1" : cfg.start, 2, "--start");
  const SurfaceOrbit orb = surface_orbit(conic, surface_start_state(conic, s[0], s[1]), cfg.steps);
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "x,y,z,J\n";
    for (std::size_t k = 0; k < orb.states.size(); ++k) {
      const Vec3& x = orb.states[k].x;
      o << num(x.x()) << ',' << num(x.y()) << ',' << num(x.z()) << ',' << num(orb.invariants[k]) << '\n';
    }
  });
  double surface = 0.0;
  for (const auto& st : orb.states) {
    surface = std::max(surface, std::abs(conic.space().pair(st.x, st.x) - conic.space().self_pairing()));
  }
  Outcome res;
  res.summary["geometry"] = to_string(conic.space().kind);
  res.summary["steps_requested"] = cfg.steps;
  res.summary["steps_completed"] = orb.states.size() - 1;
  res.summary["invariant_initial"] = orb.invariants.front();
  res.summary["invariant_relative_drift"] = invariant_drift(orb);
  res.summary["surface_residual"] = surface;
  if (cfg.tol && invariant_drift(orb) > *cfg.tol) res.tolerance_violated = true;
  if (!orb.complete()) {
    res.summary["abort_reason"] = *orb.abort_reason;
    throw Error(ErrorCode::invariant_violated, "orbit stopped early: " + *orb.abort_reason);
  }
  return res;
}

Outcome cmd_sphere_conic_test(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  if (lc.curve.dimension() != 3) throw Error(ErrorCode::dimension_mismatch, "sphere-conic-test needs a curve in 3-space");
  const SpaceForm space = lc.space ? *lc.space : space_of(cfg);
  for (std::size_t j = 0; j < lc.curve.size(); ++j) {
    if (!space.contains(lc.curve.sample(j), 1e-8)) {
      throw Error(ErrorCode::off_curve, "curve sample " + std::to_string(j) + " is not on the " + std::string(to_string(space.kind)));
    }
  }
  if (space.kind == SpaceKind::sphere && !in_open_hemisphere(lc.curve)) {
    throw Error(ErrorCode::not_convex, "spherical curve does not fit in an open hemisphere");
  }
  const EquiaffineCurve3 ec = equiaffine_frame3(lc.curve);
  const CubicCoeffs cc = cubic_coeffs(ec);
  const CriterionProfile crit = conic_criterion_residual(cc);
  const double tol = cfg.tol.value_or(1e-5);
  const std::string verdict = crit.max_abs < tol ? "conic" : "non-conic";

  json report;
  report["schema_version"] = kSchemaVersion;
  report["geometry"] = to_string(space.kind);
  report["verdict"] = verdict;
  report["tolerance"] = tol;
  report["criterion"] = {{"max_abs", crit.max_abs}, {"mean_abs", crit.mean_abs}};
  report["gamma2_coefficient_max"] = cc.c_max;
  report["reconstruction_residual"] = cc.reconstruction_residual;
  report["bracket_defect"] = ec.bracket_defect;
  report["equiaffine_period"] = cc.period;
  report["profiles"] = {{"s", cc.parameters}, {"a", cc.a}, {"b", cc.b}, {"2a-b'", crit.values}};
  write_to(cfg.out, out, [&](std::ostream& o) { o << report.dump(2) << '\n'; });

  Outcome res;
  res.summary = report;
  res.summary.erase("profiles");
  res.verdict = verdict;
  return res;
}

std::vector<Vec2> read_points(const Config& cfg, const SampledCurve& curve) {
  const std::string& spec = cfg.points;
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = parse_list(spec.substr(7), 2, "--points random:N:seed", ':');
    if (parts[0] < 0 || parts[0] != std::floor(parts[0])) throw Error(ErrorCode::parse_error, "--points: N must be a count");
    return random_interior_points(curve, static_cast<std::size_t>(parts[0]), static_cast<unsigned long long>(parts[1]));
  }
  std::ifstream in(spec);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + spec + "'");
  std::vector<Vec2> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' || line[0] == '.' || line[0] == '+')) continue;
    try {
      const auto v = parse_list(line, 2, "point");
      pts.emplace_back(v[0], v[1]);
    } catch (const Error&) {
      throw Error(ErrorCode::parse_error, spec + ":" + std::to_string(lineno) + ": expected 'x,y'");
    }
  }
  if (pts.empty()) throw Error(ErrorCode::empty_dataset, spec + ": no points");
  return pts;
}

Outcome cmd_gravity(const Config& cfg, std::ostream& out) {
  const LoadedCurve lc = need_curve(cfg);
  const SampledCurve& curve = need_planar(lc);
  DensityModel density;
  if (cfg.density == "homeoid") {
    if (!lc.form) throw Error(ErrorCode::invalid_argument, "homeoid density needs an ellipse or circle curve");
    density = DensityModel::homeoid(*lc.form);
  } else if (cfg.density != "uniform") {
    throw Error(ErrorCode::invalid_argument, "--density must be homeoid or uniform");
  }
  const SampledCurve nodes_curve = cfg.nodes == curve.size() ? curve : need_planar(load_curve_file(cfg.curve, cfg.nodes));
  const std::vector<Vec2> pts = read_points(cfg, nodes_curve);
  const std::vector<ForceResult> forces = net_forces(nodes_curve, density, pts);
  double worst = 0.0;
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "Ox,Oy,Fx,Fy,|F|,err\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const ForceResult& f = forces[i];
      worst = std::max(worst, f.force.norm());
      o << num(pts[i].x()) << ',' << num(pts[i].y()) << ',' << num(f.force.x()) << ',' << num(f.force.y()) << ','
        << num(f.force.norm()) << ',' << num(f.quadrature_error) << '\n';
    }
  });
  Outcome res;
  res.summary["density"] = cfg.density;
  res.summary["nodes"] = nodes_curve.size();
  res.summary["points"] = pts.size();
  res.summary["max_force"] = worst;
  if (cfg.tol && worst > *cfg.tol) res.tolerance_violated = true;
  return res;
}

Outcome cmd_sections(const Config& cfg, std::ostream& out) {
  if (cfg.form.empty()) throw Error(ErrorCode::invalid_argument, "--form is required");
  const QuadraticForm q = load_quadric_file(cfg.form);
  const SectionReport rep = all_sections_ellipse_report(q, cfg.trials, cfg.seed);
  write_to(cfg.out, out, [&](std::ostream& o) {
    o << "id,nx,ny,nz,offset,class,discriminant\n";
    for (const SectionSample& s : rep.sections) {
      o << s.id << ',' << num(s.normal.x()) << ',' << num(s.normal.y()) << ',' << num(s.normal.z()) << ','
        << num(s.offset) << ',' << to_string(s.kind) << ',' << num(s.discriminant) << '\n';
    }
  });
  Outcome res;
  json hist = json::object();
  for (const auto& [kind, count] : rep.histogram) hist[std::string(to_string(kind))] = count;
  res.summary["trials"] = cfg.trials;
  res.summary["histogram"] = hist;
  res.summary["redrawn_empty"] = rep.redrawn_empty;
  res.summary["redrawn_near_tangent"] = rep.redrawn_near_tangent;
  const auto it = rep.histogram.find(ConicKind::ellipse);
  const bool all = it != rep.histogram.end() && it->second == rep.sections.size();
  res.summary["all_ellipses"] = all;
  res.verdict = all ? "conic" : "non-conic";
  return res;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Billiards, conics and quadrics at desk scale", "billiard-lab"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output path, - for stdout");
    sub->add_option("--json", cfg.json_path, "write a JSON summary here (- for stdout)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol", cfg.tol, "tolerance for the verdict or invariant check");
    sub->add_option("--samples", cfg.samples, "curve sample count")->check(CLI::Range(std::size_t{4}, std::size_t{1} << 22));
  };
  auto expect = [&](CLI::App* sub) {
    sub->add_option("--expect", cfg.expect, "expected verdict; exit 2 when it differs")
        ->check(CLI::IsMember({"conic", "non-conic"}));
  };
  auto curve = [&](CLI::App* sub) { sub->add_option("--curve", cfg.curve, "curve spec JSON")->required(); };

  auto* billiard = app.add_subcommand("billiard", "billiard orbit with the Joachimsthal integral");
  curve(billiard);
  common(billiard);
  billiard->add_option("--form", cfg.form, "quadric JSON for the invariant A x . u");
  billiard->add_option("--start-t", cfg.start_t, "start parameter");
  billiard->add_option("--angle", cfg.angle, "start angle with the tangent, in (0, pi)");
  billiard->add_option("--steps", cfg.steps, "number of reflections");
  billiard->add_option("--plot", cfg.plot, "SVG output path");

  auto* fit = app.add_subcommand("fit-normal-field", "least-squares normal field from chord pairs");
  curve(fit);
  common(fit);
  expect(fit);
  fit->add_option("--pairs", cfg.pairs, "random pairs beyond the fixed separations");

  auto* conic = app.add_subcommand("conic-test", "affine curvature and kappa-ODE conic test");
  curve(conic);
  common(conic);
  expect(conic);

  auto* poritsky = app.add_subcommand("poritsky", "constant-area chords and their envelope");
  curve(poritsky);
  common(poritsky);
  expect(poritsky);
  poritsky->add_option("--c", cfg.c, "parameter offset in (0, 2 pi)");
  poritsky->add_option("--envelope", cfg.envelope_out, "envelope CSV path (default: envelope.csv next to --out)");
  poritsky->add_option("--plot", cfg.plot, "SVG output path");

  auto* outer = app.add_subcommand("outer-billiard", "outer billiard orbit");
  curve(outer);
  common(outer);
  outer->add_option("--start", cfg.start, "start point x,y");
  outer->add_option("--steps", cfg.steps, "number of steps");
  outer->add_option("--plot", cfg.plot, "SVG output path");

  auto* sphere = app.add_subcommand("sphere-billiard", "billiard inside a spherical or hyperbolic conic");
  common(sphere);
  sphere->add_option("--cone", cfg.form, "3x3 cone JSON")->required();
  sphere->add_option("--geometry", cfg.geometry, "sphere or hyperbolic")->check(CLI::IsMember({"sphere", "hyperbolic"}));
  sphere->add_option("--start", cfg.start, "start angle on the conic and direction angle: phi,angle");
  sphere->add_option("--steps", cfg.steps, "number of reflections");

  auto* sconic = app.add_subcommand("sphere-conic-test", "2a = b' criterion for curves on the sphere or hyperboloid");
  curve(sconic);
  common(sconic);
  expect(sconic);
  sconic->add_option("--geometry", cfg.geometry, "surface for sampled curves")->check(CLI::IsMember({"sphere", "hyperbolic"}));

  auto* gravity = app.add_subcommand("gravity", "net 1/r force of a curve density at interior points");
  curve(gravity);
  common(gravity);
  gravity->add_option("--density", cfg.density, "homeoid or uniform")->check(CLI::IsMember({"homeoid", "uniform"}));
  gravity->add_option("--points", cfg.points, "points file (x,y per line) or random:N:seed");
  gravity->add_option("--nodes", cfg.nodes, "quadrature nodes")->check(CLI::Range(std::size_t{4}, std::size_t{1} << 22));

  auto* sections = app.add_subcommand("sections", "classify random plane sections of a quadric");
  common(sections);
  expect(sections);
  sections->add_option("--form", cfg.form, "quadric JSON")->required();
  sections->add_option("--trials", cfg.trials, "number of sections");

  std::vector<const char*> argv{"billiard-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  const std::map<std::string, std::function<Outcome(const Config&, std::ostream&)>> commands{
      {"billiard", cmd_billiard},         {"fit-normal-field", cmd_fit_normal_field},
      {"conic-test", cmd_conic_test},     {"poritsky", cmd_poritsky},
      {"outer-billiard", cmd_outer_billiard}, {"sphere-billiard", cmd_sphere_billiard},
      {"sphere-conic-test", cmd_sphere_conic_test}, {"gravity", cmd_gravity},
      {"sections", cmd_sections}};

  json summary;
  int code = 0;
  try {
    if (cfg.nodes % 2 != 0) throw Error(ErrorCode::invalid_argument, "--nodes must be even");
    Outcome res = commands.at(cfg.command)(cfg, out);
    summary = std::move(res.summary);
    summary["status"] = "ok";
    if (res.verdict) summary["verdict"] = *res.verdict;
    if (res.tolerance_violated) {
      summary["status"] = "tolerance_violation";
      err << "error: " << cfg.command << ": tolerance " << num(*cfg.tol) << " exceeded\n";
      code = 1;
    } else if (!cfg.expect.empty() && res.verdict && *res.verdict != cfg.expect) {
      summary["status"] = "unexpected_verdict";
      summary["expected"] = cfg.expect;
      err << cfg.command << ": verdict " << *res.verdict << ", expected " << cfg.expect << '\n';
      code = 2;
    }
  } catch (const Error& e) {
    summary["status"] = "error";
    summary["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << "error: " << e.what() << '\n';
    code = 1;
  } catch (const std::exception& e) {
    summary["status"] = "error";
    summary["error"] = {{"code", "internal"}, {"message", e.what()}};
    err << "error: " << e.what() << '\n';
    code = 1;
  }
  summary["schema_version"] = kSchemaVersion;
  summary["command"] = cfg.command;
  if (!cfg.json_path.empty()) {
    try {
      write_to(cfg.json_path, out, [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return code;
}

}  // namespace billiard_lab
