#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "acceptance.hpp"
#include "magnus/assoc.hpp"
#include "magnus/expansion.hpp"
#include "magnus/json_io.hpp"
#include "magnus/torus.hpp"
#include "magnus/torus_diagnostics.hpp"
#include "magnus/variation.hpp"

namespace fs = std::filesystem;
using namespace magnus;

namespace {

enum Exit { kOk = 0, kVerificationFailed = 1, kUsage = 2, kRuntime = 3 };

// Raised for I/O problems; maps to the runtime exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

struct Checks {
  Json list = Json::array();
  bool ok = true;
  void add(const std::string& name, double value, double tolerance) {
    const bool pass = std::isfinite(value) && value <= tolerance;
    ok = ok && pass;
    list.push_back({{"name", name}, {"value", value}, {"tolerance", tolerance}, {"pass", pass}});
    std::printf("  %-34s %.3e (<= %.1e) %s\n", name.c_str(), value, tolerance, pass ? "ok" : "FAILED");
  }
  void add_flag(const std::string& name, bool pass) {
    ok = ok && pass;
    list.push_back({{"name", name}, {"pass", pass}});
    std::printf("  %-34s %s\n", name.c_str(), pass ? "ok" : "FAILED");
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- johnson ---------------------------------------------------------------

struct JohnsonOptions {
  int n = 4, trunc = 5;
  std::string expansion = "std", aut, out = "tau.json";
  std::uint64_t seed = 0;
};

int run_johnson(const JohnsonOptions& o) {
  if (o.expansion != "std") throw std::invalid_argument("--expansion: only \"std\" is available");
  if (o.n < 1 || o.trunc < 2) throw std::invalid_argument("--n must be >= 1 and --trunc >= 2");
  const FreeAut phi = aut_from_json(read_json(o.aut));
  if (phi.rank() != o.n) throw std::invalid_argument("automorphism rank differs from --n");

  const QExpansion theta = std_expansion<Rational>(o.n, o.trunc);
  const JohnsonMap<Rational> tau = johnson(theta, phi);
  Json config = {{"n", o.n}, {"trunc", o.trunc}, {"expansion", o.expansion}, {"aut", read_json(o.aut)}, {"seed", o.seed}};
  Json j = artifact("magnus.johnson", config);
  Json comps = Json::array();
  for (int p = 1; p < o.trunc; ++p) comps.push_back(hom_to_json(tau.component(p), p, o.trunc));
  j["components"] = std::move(comps);

  std::printf("johnson: n=%d trunc=%d\n", o.n, o.trunc);
  Checks checks;
  for (int i = 1; i <= o.n; ++i) {
    const QSeries r = johnson_residual(theta, phi, tau, i);
    checks.add_flag("residual x" + std::to_string(i) + " exactly zero", r.is_zero());
  }
  j["checks"] = checks.list;
  write_json(o.out, j);
  return checks.ok ? kOk : kVerificationFailed;
}

// ---- assoc -----------------------------------------------------------------

struct AssocVerifyOptions {
  int p = 3, dim_h = 4, trunc = 6, tuples = 5;
  std::uint64_t seed = 7;
  std::string out = "report.json";
};

int run_assoc_verify(const AssocVerifyOptions& o) {
  if (o.p < 1 || o.p > 6) throw std::invalid_argument("--p must lie in 1..6");
  if (o.dim_h < 1 || o.tuples < 1 || o.trunc < o.p + 1) throw std::invalid_argument("need dim-h >= 1, tuples >= 1, trunc >= p + 1");
  const auto t0 = std::chrono::steady_clock::now();
  const CocycleReport rep = verify_cocycle(o.p, o.dim_h, o.trunc, o.tuples, o.seed);
  Json config = {{"p", o.p}, {"dim_h", o.dim_h}, {"trunc", o.trunc}, {"tuples", o.tuples}, {"seed", o.seed}};
  Json j = artifact("magnus.assoc.verify", config);
  Json cells = Json::array();
  for (const auto& c : rep.cells) {
    Json e = to_json(c.cell);
    e["equal"] = c.equal;
    e["tuples"] = c.tuples;
    if (!c.detail.empty()) e["detail"] = c.detail;
    cells.push_back(std::move(e));
  }
  j["cells"] = std::move(cells);
  j["all_equal"] = rep.all_equal();
  write_json(o.out, j);
  std::size_t equal = 0;
  for (const auto& c : rep.cells) equal += c.equal;
  std::printf("assoc verify: p=%d, %zu/%zu cells exact, %.2fs\n", o.p, equal, rep.cells.size(), seconds_since(t0));
  return rep.all_equal() ? kOk : kVerificationFailed;
}

struct AssocCellsOptions {
  int p = 3;
  std::uint64_t seed = 0;
  std::string out = "cells.json";
};

int run_assoc_cells(const AssocCellsOptions& o) {
  if (o.p < 1 || o.p > 7) throw std::invalid_argument("--p must lie in 1..7");
  Json j = artifact("magnus.assoc.cells", {{"p", o.p}, {"seed", o.seed}});
  Json list = Json::array();
  for (const auto& c : cells(o.p)) {
    Json e = to_json(c);
    Json bd = Json::array();
    for (const auto& [face, coeff] : boundary(c)) bd.push_back({{"cell", to_json(face)["brackets"]}, {"coeff", coeff}});
    e["boundary"] = std::move(bd);
    e["y"] = y_cochain(c).to_string();
    list.push_back(std::move(e));
  }
  j["f_vector"] = f_vector(o.p);
  j["cells"] = std::move(list);
  write_json(o.out, j);
  std::printf("assoc cells: K_%d has %zu cells\n", o.p + 1, j["cells"].size());
  return kOk;
}

// ---- torus -----------------------------------------------------------------

struct BuildInfo {
  TorusGeometry geom;
  int deg = 4;
  Json config, diagnostics;
};

Json geometry_json(const TorusGeometry& g, int deg) {
  return {{"tau", to_json(g.tau)}, {"p0", to_json(g.p0)}, {"v", to_json(g.v)}, {"grid", g.M}, {"deg", deg}};
}

BuildInfo load_build(const std::string& dir) {
  const Json j = read_json((fs::path(dir) / "build.json").string());
  if (j.value("schema", "") != "magnus.torus.build") throw std::invalid_argument(dir + ": not a torus build directory");
  BuildInfo b;
  b.config = j.at("config");
  b.geom.tau = complex_from_json(b.config.at("tau"));
  b.geom.p0 = complex_from_json(b.config.at("p0"));
  b.geom.v = complex_from_json(b.config.at("v"));
  b.geom.M = b.config.at("grid").get<int>();
  b.deg = b.config.at("deg").get<int>();
  b.geom.validate();
  b.diagnostics = j.at("diagnostics");
  return b;
}

struct TorusBuildOptions {
  std::string tau = "0.3+1.1i", p0 = "0.41+0.27i", v = "1+0i", out = "build";
  int grid = 256, deg = 4;
  std::uint64_t seed = 0;
};

int run_torus_build(const TorusBuildOptions& o) {
  TorusGeometry g;
  g.tau = parse_complex(o.tau);
  g.p0 = parse_complex(o.p0);
  g.v = parse_complex(o.v);
  g.M = o.grid;
  g.validate();
  if (o.deg < 1 || o.deg > 6) throw std::invalid_argument("--deg must lie in 1..6");
  const auto t0 = std::chrono::steady_clock::now();
  const ConnectionForm cf(g, o.deg);
  Json config = geometry_json(g, o.deg);
  config["seed"] = o.seed;
  Json j = artifact("magnus.torus.build", config);
  Json diag;
  diag["charge"] = cf.diagnostics().charge;
  if (o.deg >= 2) {
    const IntegrabilityReport ir = integrability_residual(cf);
    diag["integrability"] = {{"r_cut", ir.r_cut}, {"residual", ir.residual}, {"scale", ir.scale}};
  }
  j["diagnostics"] = diag;
  write_json(fs::path(o.out) / "build.json", j);
  std::printf("torus build: tau=%s M=%d deg=%d, %.2fs\n", o.tau.c_str(), g.M, o.deg, seconds_since(t0));
  if (diag.contains("integrability"))
    for (int m = 2; m <= o.deg; ++m) std::printf("  integrability residual m=%d: %.3e\n", m, diag["integrability"]["residual"][m].get<double>());
  return kOk;
}

std::vector<TangentialLoop> make_loops(const BuildInfo& b, const std::string& loops_path, Json& source) {
  std::vector<TangentialLoop> loops;
  if (loops_path.empty()) {
    loops = default_loops(b.geom);
    LoopsFile f{b.geom.tau, b.geom.p0, b.geom.v, {}};
    const auto polys = default_polylines(b.geom);
    for (std::size_t i = 0; i < loops.size(); ++i) f.loops.push_back({loops[i].label, polys[i]});
    source = to_json(f);
  } else {
    source = read_json(loops_path);
    const LoopsFile f = loops_from_json(source);
    auto close = [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    if (!close(f.tau, b.geom.tau) || !close(f.p0, b.geom.p0) || !close(f.v, b.geom.v))
      throw std::invalid_argument(loops_path + ": tau/p0/v differ from the build");
    for (const auto& l : f.loops) loops.push_back(spline_loop(l.label, l.polyline, b.geom.v));
  }
  for (const auto& l : loops) validate_loop(l, b.geom);
  return loops;
}

struct TorusExpandOptions {
  std::string build = "build", loops, out = "theta.json";
  std::uint64_t seed = 0;
};

int run_torus_expand(const TorusExpandOptions& o) {
  const BuildInfo b = load_build(o.build);
  const auto t0 = std::chrono::steady_clock::now();
  const ConnectionForm cf(b.geom, b.deg);
  Json source;
  const auto loops = make_loops(b, o.loops, source);
  Json config = {{"build", b.config}, {"loops", source}, {"seed", o.seed}};
  Json j = artifact("magnus.torus.expand", config);
  j["grid_diagnostics"] = b.diagnostics;

  std::vector<FSeries> values;
  Json out = Json::array();
  for (const auto& l : loops) {
    values.push_back(loop_value(cf, l));
    const LoopCheck lc = validate_loop(l, b.geom);
    out.push_back({{"label", l.label},
                   {"theta", to_json(values.back())},
                   {"endpoint_error", lc.endpoint_error},
                   {"clearance", lc.clearance}});
  }
  j["loops"] = std::move(out);
  std::printf("torus expand: %zu loops, %.2fs\n", loops.size(), seconds_since(t0));

  auto find = [&](const std::string& label) -> const FSeries* {
    for (std::size_t i = 0; i < loops.size(); ++i)
      if (loops[i].label == label) return &values[i];
    return nullptr;
  };
  Checks checks;
  const FSeries *a = find("a"), *bb = find("b"), *ab = find("ab");
  if (a && bb) {
    double deg1 = 0;
    for (int i = 1; i <= 2; ++i) {
      const FSeries& v = i == 1 ? *a : *bb;
      deg1 = std::max(deg1, (v.degree_part(1) - FSeries::generator(2, b.deg, i)).max_abs());
    }
    checks.add("degree-one error", deg1, 1e-6);
    if (ab) checks.add("homomorphism defect", (mul(*a, *bb) - *ab).max_abs(), 1e-4);
    // Reported only: the degree-2 part of theta([a, b]) is [X1, X2] = +I for
    // every Magnus expansion, so exp(-I) cannot be attained.
    std::vector<FSeries> vals = {*a, *bb};
    for (int i = 0; i < 2; ++i) {
      vals[i].mutable_component(1).clear();
      vals[i].add_term(1, std::uint64_t(i), 1.0);
    }
    const FExpansion theta(vals);
    const FSeries w = evaluate(theta, w0(1));
    const FSeries I = Symplectic(1).intersection<double>(b.deg);
    j["symplectic"] = {{"theta_w0", to_json(w)},
                       {"defect_exp_minus_I", (w - exp_series(-I)).max_abs()},
                       {"defect_exp_plus_I", (w - exp_series(I)).max_abs()}};
    std::printf("  theta(w0) vs exp(-I): %.3e, vs exp(+I): %.3e\n", j["symplectic"]["defect_exp_minus_I"].get<double>(),
                j["symplectic"]["defect_exp_plus_I"].get<double>());
  }
  j["checks"] = checks.list;
  write_json(o.out, j);
  return checks.ok ? kOk : kVerificationFailed;
}

struct TorusQuadOptions {
  std::string build = "build", out = "q.json";
  std::uint64_t seed = 0;
};

int run_torus_quaddiff(const TorusQuadOptions& o) {
  const BuildInfo b = load_build(o.build);
  if (b.deg < 3) throw std::invalid_argument("quaddiff needs a build with deg >= 3");
  const auto t0 = std::chrono::steady_clock::now();
  const ConnectionForm cf(b.geom, b.deg);
  const QuadDifferentialReport q = quad_differential(cf);
  Json j = artifact("magnus.torus.quaddiff", {{"build", b.config}, {"seed", o.seed}});
  j["grid_diagnostics"] = b.diagnostics;
  j["quadratic_differential"] = {{"max_degree", q.max_degree},     {"r_cut", q.r_cut},
                                 {"norm", q.norm},                 {"dbar_residual", q.dbar_residual},
                                 {"pole_slope", q.pole_slope},     {"pole_order", q.pole_order},
                                 {"degree3_ratio", q.degree3_ratio}, {"epsilon_defect", q.epsilon_defect}};
  Json env = Json::array();
  for (int m = 3; m <= b.deg; ++m) {
    const GrowthEnvelope e = growth_envelope(cf, m);
    env.push_back({{"degree", m}, {"exponent", e.exponent}, {"constant", e.constant}, {"radii", e.radii}, {"ratio", e.ratio}, {"worst_ratio", e.worst_ratio}});
  }
  j["growth_envelope"] = std::move(env);
  std::printf("torus quaddiff: degrees 2..%d, %.2fs\n", q.max_degree, seconds_since(t0));
  Checks checks;
  for (int m = 4; m <= q.max_degree; m += 2) checks.add("dbar residual degree " + std::to_string(m), q.dbar_residual[m], 1e-3);
  checks.add("degree-3 ratio", q.degree3_ratio, 1e-6);
  checks.add("epsilon defect", q.epsilon_defect, 1e-12);
  j["checks"] = checks.list;
  write_json(o.out, j);
  return checks.ok ? kOk : kVerificationFailed;
}

struct TorusVaryOptions {
  std::string build = "build", loops, mu = "0.05", out = "vary.json";
  double bump = 0.08, h = 1e-3, threshold = 1e-3, tolerance = 0.05;
  std::uint64_t seed = 0;
};

int run_torus_vary(const TorusVaryOptions& o) {
  const BuildInfo b = load_build(o.build);
  const cplx amp = parse_complex(o.mu);
  if (!(o.bump > 0)) throw std::invalid_argument("--bump must be positive (the variation needs mu = 0 near P0)");
  if (!(o.h > 0)) throw std::invalid_argument("--h must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  Json source;
  const auto loops = make_loops(b, o.loops, source);
  const BeltramiField mu = beltrami_field(b.geom, amp, o.bump);
  const RauchCheck rc = rauch_check(beltrami_field(b.geom, amp, 0.0), o.h);
  const VariationReport rep = variation_check(b.geom, b.deg, mu, o.h, loops, o.threshold);

  Json config = {{"build", b.config}, {"loops", source}, {"mu", to_json(amp)}, {"bump", o.bump}, {"h", o.h},
                 {"threshold", o.threshold}, {"tolerance", o.tolerance}, {"seed", o.seed}};
  Json j = artifact("magnus.torus.vary", config);
  j["grid_diagnostics"] = b.diagnostics;
  j["rauch"] = {{"integral", to_json(rc.integral)}, {"tau_dot", to_json(rc.tau_dot)}, {"relative_error", rc.relative_error}};
  const ConnectionForm cf(b.geom, b.deg);
  std::printf("torus vary: mu=%s bump=%g h=%g, %.2fs\n", o.mu.c_str(), o.bump, o.h, seconds_since(t0));
  Checks checks;
  checks.add("rauch relative error", rc.relative_error, 1e-3);
  Json out = Json::array();
  for (std::size_t i = 0; i < rep.loops.size(); ++i) {
    const auto& l = rep.loops[i];
    if (i == 0) j["h_series"] = to_json(variation_predict(cf, mu, loop_value(cf, loops[0])).h);
    out.push_back({{"label", l.label},
                   {"predicted", to_json(l.predicted)},
                   {"finite_difference", to_json(l.finite_difference)},
                   {"max_relative_error", l.max_relative_error},
                   {"compared", l.compared}});
    for (int m = 3; m <= std::min(4, b.deg); ++m)
      checks.add("loop " + l.label + " degree " + std::to_string(m), l.max_relative_error[m], o.tolerance);
  }
  j["loops"] = std::move(out);
  j["checks"] = checks.list;
  write_json(o.out, j);
  return checks.ok ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnus expansions of free groups and pointed flat tori"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  JohnsonOptions jo;
  auto* johnson_cmd = app.add_subcommand("johnson", "Johnson map of an automorphism for the standard expansion");
  johnson_cmd->add_option("--n", jo.n, "Rank of the free group");
  johnson_cmd->add_option("--trunc", jo.trunc, "Truncation degree");
  johnson_cmd->add_option("--expansion", jo.expansion, "Magnus expansion (std)");
  johnson_cmd->add_option("--aut", jo.aut, "Automorphism JSON")->required();
  johnson_cmd->add_option("--out", jo.out, "Output JSON");
  johnson_cmd->add_option("--seed", jo.seed, "Seed echoed into the artifact");

  auto* assoc_cmd = app.add_subcommand("assoc", "Associahedron cells and the cocycle identity");
  assoc_cmd->require_subcommand(1);
  AssocVerifyOptions av;
  auto* verify_cmd = assoc_cmd->add_subcommand("verify", "Check dY(w) = Y(boundary w) on every cell, exactly");
  verify_cmd->add_option("--p", av.p, "Cells of K_{p+1}");
  verify_cmd->add_option("--dim-h", av.dim_h, "Rank of H");
  verify_cmd->add_option("--trunc", av.trunc, "Truncation degree");
  verify_cmd->add_option("--tuples", av.tuples, "Random direction tuples per cell");
  verify_cmd->add_option("--seed", av.seed, "Random seed");
  verify_cmd->add_option("--out", av.out, "Output JSON");
  AssocCellsOptions ac;
  auto* cells_cmd = assoc_cmd->add_subcommand("cells", "List the cells of K_{p+1} with boundaries");
  cells_cmd->add_option("--p", ac.p, "Cells of K_{p+1}");
  cells_cmd->add_option("--seed", ac.seed, "Seed echoed into the artifact");
  cells_cmd->add_option("--out", ac.out, "Output JSON");

  auto* torus_cmd = app.add_subcommand("torus", "Harmonic Magnus expansion of a pointed flat torus");
  torus_cmd->require_subcommand(1);
  TorusBuildOptions tb;
  auto* build_cmd = torus_cmd->add_subcommand("build", "Solve for the connection form");
  build_cmd->add_option("--tau", tb.tau, "Modulus, e.g. 0.3+1.1i");
  build_cmd->add_option("--p0", tb.p0, "Base point");
  build_cmd->add_option("--v", tb.v, "Tangent vector at the base point");
  build_cmd->add_option("--grid", tb.grid, "Grid size M (power of two)");
  build_cmd->add_option("--deg", tb.deg, "Highest form degree");
  build_cmd->add_option("--seed", tb.seed, "Seed echoed into the artifact");
  build_cmd->add_option("--out", tb.out, "Build directory");
  TorusExpandOptions te;
  auto* expand_cmd = torus_cmd->add_subcommand("expand", "Integrate the connection along loops");
  expand_cmd->add_option("--build", te.build, "Build directory")->required();
  expand_cmd->add_option("--loops", te.loops, "Loops JSON (default: a, b, ab)");
  expand_cmd->add_option("--seed", te.seed, "Seed echoed into the artifact");
  expand_cmd->add_option("--out", te.out, "Output JSON");
  TorusQuadOptions tq;
  auto* quad_cmd = torus_cmd->add_subcommand("quaddiff", "Quadratic-differential diagnostics");
  quad_cmd->add_option("--build", tq.build, "Build directory")->required();
  quad_cmd->add_option("--seed", tq.seed, "Seed echoed into the artifact");
  quad_cmd->add_option("--out", tq.out, "Output JSON");
  TorusVaryOptions tv;
  auto* vary_cmd = torus_cmd->add_subcommand("vary", "Variation of the expansion under a Beltrami deformation");
  vary_cmd->add_option("--build", tv.build, "Build directory")->required();
  vary_cmd->add_option("--loops", tv.loops, "Loops JSON (default: a, b, ab)");
  vary_cmd->add_option("--mu", tv.mu, "Beltrami amplitude");
  vary_cmd->add_option("--bump", tv.bump, "Radius of the region around P0 where mu vanishes");
  vary_cmd->add_option("--h", tv.h, "Central-difference step");
  vary_cmd->add_option("--threshold", tv.threshold, "Skip coefficients below this fraction of the component norm");
  vary_cmd->add_option("--tolerance", tv.tolerance, "Allowed relative error in degrees 3 and 4");
  vary_cmd->add_option("--seed", tv.seed, "Seed echoed into the artifact");
  vary_cmd->add_option("--out", tv.out, "Output JSON");

  std::vector<std::string> only;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest_cmd->add_option("--only", only, "Criteria to run (e.g. A1 A4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*johnson_cmd) return run_johnson(jo);
    if (*verify_cmd) return run_assoc_verify(av);
    if (*cells_cmd) return run_assoc_cells(ac);
    if (*build_cmd) return run_torus_build(tb);
    if (*expand_cmd) return run_torus_expand(te);
    if (*quad_cmd) return run_torus_quaddiff(tq);
    if (*vary_cmd) return run_torus_vary(tv);
    if (*selftest_cmd) return acceptance::run_all(std::cout, only) == 0 ? kOk : kVerificationFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}
