#include "lamekit/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lamekit/cli/models.hpp"
#include "lamekit/cli/spec_file.hpp"
#include "lamekit/eigen.hpp"
#include "lamekit/errors.hpp"
#include "lamekit/lame.hpp"
#include "lamekit/numerics/kernels.hpp"
#include "lamekit/numerics/tolerances.hpp"

namespace lamekit::cli {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      if (!first) os_ << ',';
      os_ << h;
      first = false;
    }
    os_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) os_ << ',';
      os_ << format_number(v);
      first = false;
    }
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

// One command's product: the main payload and optionally a side report.
struct Output {
  std::string payload;
  json parameters = json::object();
  json inputs = json::object();
  std::string report;  // hierarchy residual report
};

json spec_json(const PotentialSpec& s) { return json::parse(serialize_spec(s)); }

Interval resolve_domain(const std::optional<double>& x0, const std::optional<double>& x1,
                        const std::optional<Interval>& hint, const char* what) {
  if (x0 && x1) {
    if (!(*x0 < *x1)) throw ParseError(std::string(what) + ": need lower end < upper end");
    return {*x0, *x1};
  }
  if (x0 || x1) throw ParseError(std::string(what) + ": give both ends or neither");
  if (hint) return *hint;
  throw ParseError(std::string(what) + ": no interval given and the spec has no domain hint");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string out;
  std::string tol;

  // wp
  double g2 = 0, g3 = 0;
  std::optional<double> x, x0, x1;
  int samples = 201;
  int order = 12;

  // shared
  std::string potential;
  std::optional<double> xb;

  // lame
  int n = 1;
  double c0 = 0;
  double w0 = 0;
  bool search = false;
  std::string symmetry;

  // eigen
  std::optional<double> a, b;
  double lmin = 0, lmax = 0;
  std::string method = "shoot";
  int scan = 0;
  double density = 400.0;
  int threads = 1;
  double lambda = 0;

  // hierarchy
  std::string base;
  double c_hat = 0;
  std::vector<double> alpha;
  std::string report;
};

Output run_wp(const Options& o) {
  const WeierstrassEvaluator eval({o.g2, o.g3}, o.order);
  Output r;
  r.parameters = {{"g2", o.g2}, {"g3", o.g3}, {"order", o.order}};
  if (o.x) {
    const auto d = eval.derivatives(*o.x, 2);
    r.parameters["x"] = *o.x;
    r.payload = json{{"x", *o.x}, {"wp", d[0]}, {"wp_prime", d[1]}, {"wp_second", d[2]}}.dump(2) + "\n";
    return r;
  }
  const Interval dom = resolve_domain(o.x0, o.x1, std::nullopt, "wp");
  if (o.samples < 2) throw ParseError("wp: --samples must be at least 2");
  const Grid grid(dom.lo, dom.hi, static_cast<std::size_t>(o.samples));
  const std::vector<double> xs = grid.nodes();
  std::vector<double> p0(xs.size()), p1(xs.size());
  eval.evaluate_many(xs, p0, p1);
  Csv csv({"x", "wp", "wp_prime"});
  for (std::size_t i = 0; i < xs.size(); ++i) csv.row({xs[i], p0[i], p1[i]});
  r.parameters.update({{"x0", dom.lo}, {"x1", dom.hi}, {"samples", o.samples}});
  r.payload = csv.str();
  return r;
}

Output run_solve(const Options& o, const Tolerances& tol) {
  const PotentialSpec spec = load_spec(o.potential);
  const PotentialModel model = build_model(spec);
  const Interval dom = resolve_domain(o.x0, o.x1, model.domain_hint, "solve");
  if (o.samples < 2) throw ParseError("solve: --samples must be at least 2");
  const double xb = o.xb.value_or(dom.midpoint());
  if (!dom.contains(xb)) throw ParseError("solve: --xb must lie inside the interval");
  const SymmetryPair pair = model.pair_on(dom);
  const Grid grid(dom.lo, dom.hi, static_cast<std::size_t>(o.samples));
  const FundamentalPair fp = fundamental_solutions(pair, xb, grid, std::max(1e-14, tol.rtol * 1e-2));
  Csv csv({"x", "z", "w", "y1", "y2", "Phi"});
  for (std::size_t i = 0; i < grid.samples; ++i) {
    const double x = grid.node(i);
    csv.row({x, pair.z()(x), pair.w()(x), fp.y1()(x), fp.y2()(x), fp.phi()(x)});
  }
  Output r;
  r.parameters = {{"potential", o.potential}, {"x0", dom.lo}, {"x1", dom.hi}, {"samples", o.samples}, {"xb", xb}};
  r.inputs["potential"] = spec_json(spec);
  r.payload = csv.str();
  return r;
}

Output run_lame_even(const Options& o) {
  const EvenFamily fam = even_coefficients(o.n, o.c0, {o.g2, o.g3});
  const Polynomial cw = even_cw_polynomial(fam);
  double drift = 0.0;
  for (std::size_t k = 1; k < cw.coeffs().size(); ++k) drift = std::max(drift, std::abs(cw[k]));
  json j{{"n", o.n}, {"c0", o.c0}, {"g2", o.g2}, {"g3", o.g3}, {"c1", fam.c1}, {"a", fam.a}, {"c_w", cw[0]}};
  if (o.n <= 3) j["c_w_closed_form"] = even_cw_closed_form(o.n, o.c0, fam.invariants);
  j["c_w_nonconstant_part"] = drift;
  j["case"] = std::string(to_string(classify_case(cw[0], 1.0)));
  Output r;
  r.parameters = {{"n", o.n}, {"c0", o.c0}, {"g2", o.g2}, {"g3", o.g3}};
  r.payload = j.dump(2) + "\n";
  return r;
}

Output run_lame_odd(const Options& o) {
  const OddFamily fam = odd_coefficients(o.n, o.c0, {o.g2, o.g3});
  json j{{"n", o.n},
         {"c0", o.c0},
         {"g2", o.g2},
         {"g3", o.g3},
         {"c1", fam.c1},
         {"b", fam.b},
         {"gc_residuals", gc_residuals(fam)},
         {"gc_term_scale", gc_term_scale(fam)}};
  if (o.search) {
    json roots = json::array();
    for (const auto& g : search_gc_roots(o.n)) {
      roots.push_back({{"c0", g.c0},
                       {"g2", g.g2},
                       {"g3", g.g3},
                       {"residuals", g.residuals},
                       {"relative_residual", g.relative_residual}});
    }
    j["gc_roots"] = roots;
  }
  Output r;
  r.parameters = {{"n", o.n}, {"c0", o.c0}, {"g2", o.g2}, {"g3", o.g3}, {"search", o.search}};
  r.payload = j.dump(2) + "\n";
  return r;
}

Output run_lame_odd_trivial(const Options& o) {
  const OddTrivialPair t = odd_trivial_pair(o.n, o.w0);
  const Interval dom = resolve_domain(o.x0, o.x1, Interval{1.0 - o.w0, 2.0 - o.w0}, "lame odd-trivial");
  if (!(dom.lo + o.w0 > 0.0)) throw ParseError("lame odd-trivial: interval must satisfy x + w0 > 0");
  std::vector<double> xs;
  for (int k = 0; k < 50; ++k) xs.push_back(dom.lo + dom.length() * k / 49.0);
  const CwEstimate cw = compute_cw(t.w, t.z, xs);
  const ScalarField y = t.solution(1.0, 1.0);
  double resid = 0.0;
  for (double x : xs) {
    const Jet j = y.jet(x);
    const double wy = t.w(x) * j[0];
    resid = std::max(resid, std::abs(j[2] + wy) / std::max({std::abs(j[2]), std::abs(wy), 1e-300}));
  }
  json j{{"n", o.n},
         {"w0", o.w0},
         {"c1", t.c1},
         {"w", {{"coefficient", t.c1}, {"power", -2}}},
         {"z", {{"coefficient", -2.0}, {"power", -2 * o.n - 3}}},
         {"solution_powers", {-1.5 - o.n, o.n + 2.5}},
         {"c_w", 0.0},
         {"case", "parabolic"},
         {"check",
          {{"x0", dom.lo},
           {"x1", dom.hi},
           {"c_w_numeric", cw.c_w},
           {"c_w_deviation", cw.max_deviation},
           {"max_relative_schrodinger_residual", resid}}}};
  Output r;
  r.parameters = {{"n", o.n}, {"w0", o.w0}, {"x0", dom.lo}, {"x1", dom.hi}};
  r.payload = j.dump(2) + "\n";
  return r;
}

Output run_lame_check(const Options& o) {
  const PotentialSpec spec = load_spec(o.potential);
  LamePotentialSpec pot;
  std::optional<LameSymmetrySpec> sym;
  if (const auto* e = std::get_if<LameEvenKind>(&spec.body)) {
    const EvenFamily fam = even_coefficients(e->n, e->c0, {e->g2, e->g3});
    pot = fam.potential();
    sym = fam.symmetry();
  } else if (const auto* d = std::get_if<LameOddKind>(&spec.body)) {
    const OddFamily fam = odd_coefficients(d->n, d->c0, {d->g2, d->g3});
    pot = fam.potential();
    sym = fam.symmetry();
  } else if (const auto* g = std::get_if<LameGeneralKind>(&spec.body)) {
    pot = {Polynomial(g->C), Polynomial(g->E), {g->g2, g->g3}};
    if (g->A || g->B) {
      sym = LameSymmetrySpec{Polynomial(g->A.value_or(std::vector<double>{})),
                             Polynomial(g->B.value_or(std::vector<double>{}))};
    }
  } else {
    throw ParseError("lame check: potential must be of kind lame_even, lame_odd or lame_general");
  }
  Output r;
  r.parameters = {{"potential", o.potential}};
  r.inputs["potential"] = spec_json(spec);
  if (!o.symmetry.empty()) {
    const SymmetryPolys s = parse_symmetry(read_text(o.symmetry));
    sym = LameSymmetrySpec{Polynomial(s.A), Polynomial(s.B)};
    r.parameters["symmetry"] = o.symmetry;
    r.inputs["symmetry"] = {{"A", s.A}, {"B", s.B}};
  }
  if (!sym) throw ParseError("lame check: no symmetry; pass --symmetry or give A/B in the spec");
  const ReducedLieEquation printed = r1_r2_polynomials(pot, *sym);
  const ReducedLieEquation direct = reduce_lie_equation(pot, *sym);
  const int top = std::max({printed.R1.degree(), printed.R2.degree(), direct.R1.degree(), direct.R2.degree(), 0});
  Csv csv({"power", "R1", "R2", "R1_substituted", "R2_substituted"});
  for (int k = 0; k <= top; ++k) {
    const auto i = static_cast<std::size_t>(k);
    csv.row({static_cast<double>(k), printed.R1[i], printed.R2[i], direct.R1[i], direct.R2[i]});
  }
  r.payload = csv.str();
  return r;
}

EigenMethod parse_method(const std::string& m) {
  if (m == "shoot") return EigenMethod::shooting;
  if (m == "det") return EigenMethod::determinant;
  if (m == "both") return EigenMethod::both;
  throw ParseError("--method must be shoot, det or both");
}

Output run_eigen(const Options& o, const Tolerances& tol) {
  const PotentialSpec spec = load_spec(o.potential);
  const PotentialModel model = build_model(spec);
  const Interval dom = resolve_domain(o.a, o.b, model.domain_hint, "eigen");
  EigenProblem p;
  p.w = model.w;
  p.a = dom.lo;
  p.b = dom.hi;
  p.lambda_min = o.lmin;
  p.lambda_max = o.lmax;
  p.scan_density = o.density;
  p.scan_nodes = o.scan;
  p.method = parse_method(o.method);
  if (p.method != EigenMethod::shooting) p.family = model.family_on(dom);
  p.threads = std::max(1, o.threads);
  p.tolerances = tol;
  const EigenResult res = solve_eigen(p);
  json j{{"eigenvalues", res.eigenvalues},
         {"residuals", res.residuals},
         {"method_flags", res.method_flags},
         {"method", std::string(to_string(res.method))}};
  if (p.method != EigenMethod::shooting) j["unclassified_nodes"] = res.unclassified_nodes;
  Output r;
  r.parameters = {{"potential", o.potential}, {"a", p.a},           {"b", p.b},
                  {"lmin", o.lmin},           {"lmax", o.lmax},     {"method", o.method},
                  {"scan", o.scan},           {"density", o.density}, {"threads", p.threads}};
  r.inputs["potential"] = spec_json(spec);
  r.payload = j.dump(2) + "\n";
  return r;
}

Output run_eigen_density(const Options& o, const Tolerances& tol) {
  const PotentialSpec spec = load_spec(o.potential);
  const PotentialModel model = build_model(spec);
  const Interval dom = resolve_domain(o.a, o.b, model.domain_hint, "eigen density");
  if (o.samples < 2) throw ParseError("eigen density: --samples must be at least 2");
  const Grid g = density_profile(model.w, o.lambda, dom.lo, dom.hi,
                                 Grid(dom.lo, dom.hi, static_cast<std::size_t>(o.samples)), {tol.rtol, tol.atol});
  Csv csv({"x", "density"});
  for (std::size_t i = 0; i < g.samples; ++i) csv.row({g.node(i), g.values[i]});
  Output r;
  r.parameters = {{"potential", o.potential}, {"lambda", o.lambda}, {"a", dom.lo}, {"b", dom.hi}, {"samples", o.samples}};
  r.inputs["potential"] = spec_json(spec);
  r.payload = csv.str();
  return r;
}

Output run_hierarchy(const Options& o) {
  const PotentialSpec base = load_spec(o.base);
  if (o.alpha.size() != 3) throw ParseError("hierarchy: --alpha needs three comma-separated numbers");
  const Interval dom = resolve_domain(o.x0, o.x1, base.domain, "hierarchy");
  const double xb = o.xb.value_or(dom.midpoint());
  if (!dom.contains(xb)) throw ParseError("hierarchy: --xb must lie inside the interval");
  if (o.samples < 3) throw ParseError("hierarchy: --samples must be at least 3");
  PotentialSpec next{HierarchyKind{std::make_shared<const PotentialSpec>(base), o.c_hat,
                                   {o.alpha[0], o.alpha[1], o.alpha[2]}, xb, o.samples},
                     dom};
  const SymmetryPair pair = build_model(next).pair_on(dom);
  const PairDiagnostics diag = check_pair(pair, 64, 1e-6, 1e-7);
  Output r;
  r.parameters = {{"base", o.base}, {"chat", o.c_hat}, {"alpha", o.alpha}, {"x0", dom.lo},
                  {"x1", dom.hi},   {"xb", xb},        {"samples", o.samples}};
  r.inputs["base"] = spec_json(base);
  r.payload = serialize_spec(next);
  r.report = json{{"c_w", diag.c_w},
                  {"case", std::string(to_string(pair.symmetry_case()))},
                  {"max_relative_lie_residual", diag.max_relative_lie_residual},
                  {"c_w_deviation", diag.cw_deviation},
                  {"ok", diag.ok()}}
                 .dump(2) +
             "\n";
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

std::string manifest_path(const std::string& out) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + ".manifest.json")).string();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Integrable potentials, Lame families and Dirichlet spectra for y'' + w y = 0", "lamekit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.add_option("--out", o.out, "Write the result here and a <stem>.manifest.json beside it");
  app.add_option("--tol", o.tol, "Tolerance bundle, e.g. rtol=1e-9,atol=1e-12,xtol=1e-10 (overrides LAME_KIT_TOL)");

  auto* wp = app.add_subcommand("wp", "Weierstrass p and p' (JSON for --x, CSV x,wp,wp_prime for a range)");
  wp->add_option("--g2", o.g2)->required();
  wp->add_option("--g3", o.g3)->required();
  wp->add_option("--x", o.x);
  wp->add_option("--x0", o.x0);
  wp->add_option("--x1", o.x1);
  wp->add_option("--samples", o.samples)->capture_default_str();
  wp->add_option("--order", o.order, "Laurent truncation order")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Fundamental solutions by quadrature; CSV x,z,w,y1,y2,Phi");
  solve->add_option("--potential", o.potential, "Potential spec (JSON)")->required();
  solve->add_option("--x0", o.x0);
  solve->add_option("--x1", o.x1);
  solve->add_option("--samples", o.samples)->capture_default_str();
  solve->add_option("--xb", o.xb, "Base point of Phi = int dx/z (default: midpoint)");

  auto* lame = app.add_subcommand("lame", "Lame families on the elliptic curve");
  lame->require_subcommand(1);
  auto* even = lame->add_subcommand("even", "Even family: JSON {c1, a, c_w, case}");
  auto* odd = lame->add_subcommand("odd", "Odd family: JSON {c1, b, gc_residuals}");
  for (auto* s : {even, odd}) {
    s->add_option("--n", o.n)->required();
    s->add_option("--c0", o.c0)->required();
    s->add_option("--g2", o.g2)->required();
    s->add_option("--g3", o.g3)->required();
  }
  odd->add_flag("--search", o.search, "Multi-start Newton search for nontrivial closing roots");
  auto* trivial = lame->add_subcommand("odd-trivial", "Closed-form parabolic pair at g2 = g3 = c0 = 0");
  trivial->add_option("--n", o.n)->required();
  trivial->add_option("--w0", o.w0)->capture_default_str();
  trivial->add_option("--x0", o.x0);
  trivial->add_option("--x1", o.x1);
  auto* check = lame->add_subcommand("check", "R1/R2 coefficient table; CSV power,R1,R2,R1_substituted,R2_substituted");
  check->add_option("--potential", o.potential)->required();
  check->add_option("--symmetry", o.symmetry, "JSON {\"A\":[..],\"B\":[..]}");

  auto* eigen = app.add_subcommand("eigen", "Dirichlet eigenvalues of y'' + (w - lambda) y = 0; JSON");
  eigen->require_subcommand(0, 1);
  eigen->add_option("--potential", o.potential);
  eigen->add_option("--a", o.a);
  eigen->add_option("--b", o.b);
  eigen->add_option("--lmin", o.lmin);
  eigen->add_option("--lmax", o.lmax);
  eigen->add_option("--method", o.method, "shoot | det | both")->capture_default_str();
  eigen->add_option("--scan", o.scan, "Total scan nodes (overrides --density)");
  eigen->add_option("--density", o.density, "Scan nodes per unit lambda")->capture_default_str();
  eigen->add_option("--threads", o.threads)->capture_default_str();
  auto* density = eigen->add_subcommand("density", "Normalized y^2 of an eigenfunction; CSV x,density");
  density->add_option("--potential", o.potential)->required();
  density->add_option("--lambda", o.lambda)->required();
  density->add_option("--a", o.a);
  density->add_option("--b", o.b);
  density->add_option("--samples", o.samples)->capture_default_str();

  auto* hier = app.add_subcommand("hierarchy", "One hierarchy step; prints the new spec, report to stderr or --report");
  hier->add_option("--base", o.base, "Base potential spec")->required();
  hier->add_option("--chat", o.c_hat)->required();
  hier->add_option("--alpha", o.alpha)->required()->delimiter(',')->expected(3);
  hier->add_option("--x0", o.x0);
  hier->add_option("--x1", o.x1);
  hier->add_option("--xb", o.xb);
  hier->add_option("--samples", o.samples)->default_val(129);
  hier->add_option("--report", o.report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Tolerances tol = default_tolerances();
    if (!o.tol.empty()) tol = parse_tolerances(o.tol, tol);

    Output result;
    std::string command;
    if (wp->parsed()) {
      command = "wp";
      result = run_wp(o);
    } else if (solve->parsed()) {
      command = "solve";
      result = run_solve(o, tol);
    } else if (even->parsed()) {
      command = "lame even";
      result = run_lame_even(o);
    } else if (odd->parsed()) {
      command = "lame odd";
      result = run_lame_odd(o);
    } else if (trivial->parsed()) {
      command = "lame odd-trivial";
      result = run_lame_odd_trivial(o);
    } else if (check->parsed()) {
      command = "lame check";
      result = run_lame_check(o);
    } else if (density->parsed()) {
      command = "eigen density";
      result = run_eigen_density(o, tol);
    } else if (eigen->parsed()) {
      command = "eigen";
      if (o.potential.empty() || !eigen->count("--lmin") || !eigen->count("--lmax")) {
        throw ParseError("eigen: --potential, --lmin and --lmax are required");
      }
      result = run_eigen(o, tol);
    } else {
      command = "hierarchy";
      result = run_hierarchy(o);
    }

    if (!result.report.empty()) {
      if (!o.report.empty())
        write_file(o.report, result.report);
      else
        err << result.report;
    }
    if (o.out.empty()) {
      out << result.payload;
      return 0;
    }
    write_file(o.out, result.payload);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest{{"command", command},
                  {"argv", args},
                  {"parameters", result.parameters},
                  {"inputs", result.inputs},
                  {"version", std::string(kVersion)},
                  {"tolerances", {{"rtol", tol.rtol}, {"atol", tol.atol}, {"xtol", tol.xtol}}},
                  {"simd_backend", std::string(kernels::name(kernels::active_backend()))},
                  {"output", o.out},
                  {"wall_clock_seconds", seconds}};
    if (!o.report.empty()) manifest["report"] = o.report;
    write_file(manifest_path(o.out), manifest.dump(2) + "\n");
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.domain() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lamekit::cli
