// hsr: command-line front end for homogeneous sub-Riemannian structures.
//
// Exit codes: 0 success / homogeneous, 1 violation / not homogeneous / hypothesis failure,
// 2 bad input, 3 integration blow-up, 4 inconclusive.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hsr/existence.hpp"
#include "hsr/go_analysis.hpp"
#include "hsr/homogeneity.hpp"
#include "hsr/integrator.hpp"
#include "hsr/json_io.hpp"
#include "hsr/models.hpp"

namespace {

enum Exit { ok = 0, failed = 1, bad_input = 2, blow_up = 3, inconclusive = 4 };

struct Config
{
  std::string model;
  std::string p0;
  double T          = 10.0;
  double step       = 1e-3;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int degree_cap    = 4;
  std::string out;
  double tol        = 1e-8;
  bool phase_portrait = false;
  std::size_t curves = 8;
  unsigned jobs     = 1;
};

class BadInput : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

Eigen::VectorXd parse_vector(const std::string & text)
{
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(hsr::to_double(hsr::parse_rational(item)));
    } catch (const hsr::ExactError & e) {
      throw BadInput("cannot parse --p0 entry '" + item + "'");
    }
  }
  if (vals.empty()) { throw BadInput("--p0 is empty"); }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

/// Writes to --out when given, otherwise to stdout.
template<class Fn>
void emit(const Config & c, Fn write)
{
  if (c.out.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) { throw BadInput("cannot open output file " + c.out); }
  write(f);
}

void emit_json(const Config & c, const hsr::Json & j)
{
  emit(c, [&](std::ostream & os) { os << j.dump(2) << '\n'; });
}

Eigen::VectorXd momentum(const hsr::ModelSpec & spec, const Config & c)
{
  const auto & s = spec.structure;
  if (c.p0.empty()) { return hsr::MomentumSampler(s)(c.seed, 0); }
  try {
    return s.momentum_from_input(parse_vector(c.p0));
  } catch (const hsr::DimensionError & e) {
    throw BadInput(e.what());
  }
}

int cmd_validate(const Config & c)
{
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto rep      = hsr::validate_structure(spec.structure);
  hsr::Json j;
  j["model"] = spec.name;
  hsr::Json v = hsr::Json::array();
  for (const auto & x : rep.algebra.violations) { v.push_back(x.describe()); }
  j["algebra_violations"] = v;
  hsr::Json issues        = hsr::Json::array();
  for (const auto & i : rep.issues) { issues.push_back({{"check", i.check}, {"message", i.message}}); }
  j["structure_issues"] = issues;
  hsr::Json cas         = hsr::Json::array();
  bool casimirs_ok      = true;
  for (std::size_t i = 0; i < spec.casimirs.size(); ++i) {
    const bool good = rep.algebra.valid() && hsr::model_casimir_ok(spec, spec.casimirs[i]);
    casimirs_ok     = casimirs_ok && good;
    cas.push_back({{"name", spec.casimir_names[i]}, {"polynomial", spec.casimirs[i].to_string()}, {"casimir", good}});
  }
  j["casimirs"] = cas;
  const bool clean = rep.valid() && casimirs_ok;
  j["valid"]       = clean;
  emit_json(c, j);
  std::cerr << spec.name << ": " << (clean ? "valid" : "INVALID") << " (" << rep.algebra.violations.size() << " algebra violations, "
            << rep.issues.size() << " structure issues)\n";
  for (const auto & x : rep.algebra.violations) { std::cerr << "  " << x.describe() << '\n'; }
  for (const auto & i : rep.issues) { std::cerr << "  " << i.check << ": " << i.message << '\n'; }
  return clean ? ok : failed;
}

int cmd_integrate(const Config & c)
{
  if (!(c.T > 0.0) || !(c.step > 0.0)) { throw BadInput("--T and --step must be positive"); }
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto & s      = spec.structure;
  if (c.phase_portrait) {
    const auto pp = hsr::phase_portrait(s, c.samples, c.curves, c.seed, c.T, c.step);
    emit(c, [&](std::ostream & os) { hsr::write_phase_portrait_csv(os, s, pp); });
    std::cerr << spec.name << ": phase portrait with " << pp.arrow_points.size() << " arrows and " << pp.trajectories.size() << " trajectories\n";
    return ok;
  }
  const Eigen::VectorXd p0 = momentum(spec, c);
  auto tr                  = hsr::integrate_vertical(s, p0, c.T, c.step, spec.casimirs);
  if (!s.representation().empty() && !tr.aborted) { tr = hsr::integrate_horizontal(s, std::move(tr)); }
  emit(c, [&](std::ostream & os) { hsr::write_trajectory_csv(os, tr, spec.casimir_names); });
  if (tr.aborted) {
    std::cerr << spec.name << ": integration blew up at t = " << tr.times.back() << " (" << tr.abort_reason << ")\n";
    return blow_up;
  }
  double cdrift = 0.0;
  for (double d : tr.max_casimir_drift()) { cdrift = std::max(cdrift, d); }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: %zu steps, max |H drift| %.3e, max Casimir drift %.3e\n", spec.name.c_str(), tr.size() - 1, tr.max_energy_drift(),
    cdrift);
  std::cerr << buf;
  return ok;
}

int cmd_check(const Config & c)
{
  if (c.p0.empty()) { throw BadInput("check needs --p0"); }
  if (!(c.tol > 0.0)) { throw BadInput("--tol must be positive"); }
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto & s      = spec.structure;
  const Eigen::VectorXd p = momentum(spec, c);
  if (s.isotropy_residual(p) > 1e-9) { throw BadInput("p0 does not annihilate the isotropy algebra"); }
  const auto cert = hsr::check_homogeneous(s, p, c.tol);
  hsr::Json j     = hsr::certificate_json(cert);
  j["momentum"]   = hsr::detail::eigen_json(p);
  emit_json(c, j);
  std::cerr << spec.name << ": " << hsr::to_string(cert.verdict) << " (residual " << cert.residual << ")\n";
  switch (cert.verdict) {
    case hsr::Verdict::homogeneous: return ok;
    case hsr::Verdict::not_homogeneous: return failed;
    case hsr::Verdict::inconclusive: return inconclusive;
  }
  return failed;
}

int cmd_go(const Config & c)
{
  if (c.degree_cap < 2) { throw BadInput("--degree-cap must be at least 2"); }
  if (!(c.tol > 0.0)) { throw BadInput("--tol must be positive"); }
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  hsr::GoOptions opt;
  opt.degree_cap         = c.degree_cap;
  opt.samples            = c.samples;
  opt.seed               = c.seed;
  opt.jobs               = c.jobs;
  opt.threshold          = c.tol;
  opt.isotropy_connected = spec.isotropy_connected;
  const auto v           = hsr::go_verdict(spec.structure, opt);
  hsr::Json j;
  j["model"] = spec.name;
  const hsr::Json body = hsr::go_verdict_json(v);
  for (const auto & [k, val] : body.items()) { j[k] = val; }
  emit_json(c, j);
  std::cerr << spec.name << ": " << hsr::to_string(v.status) << " (degree cap " << v.degree_cap << ", " << v.brackets.invariants_checked
            << " invariants, homogeneous fraction " << v.scan.fraction() << ")\n";
  return ok;
}

int cmd_exist(const Config & c)
{
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto r        = hsr::construct_homogeneous_geodesic(spec.structure);
  hsr::Json j;
  j["model"] = spec.name;
  const hsr::Json body = hsr::existence_json(spec.structure, r);
  for (const auto & [k, val] : body.items()) { j[k] = val; }
  emit_json(c, j);
  std::cerr << spec.name << ": homogeneous geodesic via " << hsr::to_string(r.route) << '\n';
  return ok;
}

int cmd_invariants(const Config & c)
{
  if (c.degree_cap < 1) { throw BadInput("--degree-cap must be positive"); }
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto b        = hsr::invariant_polynomials(spec.structure, c.degree_cap, c.jobs);
  emit(c, [&](std::ostream & os) {
    for (const auto & f : b.polynomials) { os << f.to_string("y") << '\n'; }
  });
  std::cerr << spec.name << ": " << b.polynomials.size() << " invariants up to degree " << c.degree_cap << " in y_i = p(m_i)\n";
  return ok;
}

int cmd_fixed(const Config & c)
{
  hsr::ModelSpec spec = hsr::resolve_model(c.model);
  const auto pts      = hsr::find_fixed_points(spec.structure, c.samples, c.seed);
  hsr::Json j;
  j["model"] = spec.name;
  hsr::Json a = hsr::Json::array();
  for (const auto & p : pts) { a.push_back(hsr::detail::eigen_json(p)); }
  j["fixed_points"] = a;
  emit_json(c, j);
  std::cerr << spec.name << ": " << pts.size() << " fixed points on H = 1/2\n";
  return ok;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Homogeneous sub-Riemannian geodesics: validation, integration, homogeneity and GO analysis"};
  app.require_subcommand(1);
  Config c;

  auto add_model = [&](CLI::App * sub) { sub->add_option("--model", c.model, "bundled model name or path to a JSON model file")->required(); };
  auto add_out   = [&](CLI::App * sub) { sub->add_option("--out", c.out, "output file (default: stdout)"); };
  auto add_jobs  = [&](CLI::App * sub) { sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber); };

  auto * validate = app.add_subcommand("validate", "check algebraic and structural invariants");
  add_model(validate);
  add_out(validate);

  auto * integrate = app.add_subcommand("integrate", "integrate the vertical (and horizontal) system to CSV");
  add_model(integrate);
  add_out(integrate);
  integrate->add_option("--p0", c.p0, "initial momentum, comma separated (covector or m* coordinates)");
  integrate->add_option("--T", c.T, "final time");
  integrate->add_option("--step", c.step, "RK4 step");
  integrate->add_option("--seed", c.seed, "seed for a sampled p0 or the phase portrait");
  integrate->add_flag("--phase-portrait", c.phase_portrait, "emit field arrows and trajectories on H = 1/2");
  integrate->add_option("--samples", c.samples, "arrow count for --phase-portrait");
  integrate->add_option("--curves", c.curves, "trajectory count for --phase-portrait");

  auto * check = app.add_subcommand("check", "decide homogeneity of the geodesic with momentum p0");
  add_model(check);
  add_out(check);
  check->add_option("--p0", c.p0, "initial momentum, comma separated")->required();
  check->add_option("--tol", c.tol, "residual threshold");

  auto * go = app.add_subcommand("go", "geodesic-orbit verdict");
  add_model(go);
  add_out(go);
  add_jobs(go);
  go->add_option("--degree-cap", c.degree_cap, "maximal invariant degree");
  go->add_option("--samples", c.samples, "homogeneity scan size");
  go->add_option("--seed", c.seed, "scan seed");
  go->add_option("--tol", c.tol, "residual threshold");

  auto * exist = app.add_subcommand("exist", "construct one homogeneous geodesic");
  add_model(exist);
  add_out(exist);

  auto * inv = app.add_subcommand("invariants", "isotropy-invariant polynomials on m*");
  add_model(inv);
  add_out(inv);
  add_jobs(inv);
  inv->add_option("--degree-cap", c.degree_cap, "maximal degree");

  auto * fixed = app.add_subcommand("fixed-points", "zeros of the vertical field on H = 1/2");
  add_model(fixed);
  add_out(fixed);
  fixed->add_option("--samples", c.samples, "Newton starting points");
  fixed->add_option("--seed", c.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return bad_input;
  }

  try {
    if (*validate) { return cmd_validate(c); }
    if (*integrate) { return cmd_integrate(c); }
    if (*check) { return cmd_check(c); }
    if (*go) { return cmd_go(c); }
    if (*exist) { return cmd_exist(c); }
    if (*inv) { return cmd_invariants(c); }
    if (*fixed) { return cmd_fixed(c); }
  } catch (const BadInput & e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const hsr::SpecFormatError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const hsr::ModelError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return bad_input;
  } catch (const hsr::HypothesisError & e) {
    std::cerr << "hypothesis not met: " << e.what() << '\n';
    return failed;
  } catch (const hsr::ExistenceError & e) {
    std::cerr << "no geodesic constructed: " << e.what() << '\n';
    return failed;
  } catch (const hsr::StructureError & e) {
    std::cerr << "invalid structure: " << e.what() << '\n';
    return failed;
  } catch (const hsr::DimensionError & e) {
    std::cerr << "invalid structure: " << e.what() << '\n';
    return failed;
  } catch (const hsr::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return failed;
  }
  return bad_input;
}
