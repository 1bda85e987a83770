// nilspec: command-line front end for the spectral-multiplier pipeline on the
// Engel and Cartan groups.

#include "nilspec/config.hpp"
#include "nilspec/dual_trace.hpp"
#include "nilspec/group.hpp"
#include "nilspec/multiplier.hpp"
#include "nilspec/schrodinger.hpp"
#include "nilspec/weyl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

using namespace nilspec;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, sep);) out.push_back(p);
  return out;
}

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      Rational r(s.substr(0, slash));
      Rational d(s.substr(slash + 1));
      if (d == 0) throw std::invalid_argument("zero denominator");
      return r / d;
    }
    const auto dot = s.find_first_of(".eE");
    if (dot == std::string::npos) return Rational(s);
    // exact decimal: digits before and after the point, optional exponent
    std::string mant = s, expo;
    if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
      mant = s.substr(0, e);
      expo = s.substr(e + 1);
    }
    std::string digits = mant;
    int scale = 0;
    if (const auto p = mant.find('.'); p != std::string::npos) {
      digits = mant.substr(0, p) + mant.substr(p + 1);
      scale = static_cast<int>(mant.size() - p - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("no digits");
    if (digits[0] == '+') digits.erase(0, 1);
    Rational r(digits);
    int e10 = expo.empty() ? 0 : std::stoi(expo);
    e10 -= scale;
    Rational ten(10);
    for (int k = 0; k < std::abs(e10); ++k) {
      if (e10 > 0)
        r *= ten;
      else
        r /= ten;
    }
    return r;
  } catch (const std::exception&) {
    throw CLI::ValidationError("not a rational number: '" + s + "'");
  }
}

std::vector<Rational> parse_coords(const std::string& s, GroupId g) {
  std::vector<Rational> v;
  for (const std::string& p : split(s, ',')) v.push_back(parse_rational(p));
  if (static_cast<int>(v.size()) != dimension(g))
    throw CLI::ValidationError("expected " + std::to_string(dimension(g)) + " comma-separated coordinates for " +
                               std::string(group_name(g)) + ", got '" + s + "'");
  return v;
}

std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + to_string(v[k]);
  return out;
}

// Exponents accept fractions ("4/3"). A decimal with at least four places is
// read as the fraction with denominator <= 12 it rounds from, if there is one
// ("1.3333" -> 4/3), so Sobolev boundary cases are not lost to truncation.
double parse_exponent(const std::string& s) {
  if (s.find('/') != std::string::npos) return static_cast<double>(parse_rational(s));
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw CLI::ValidationError("not a number: '" + s + "'");
  const auto dot = s.find('.');
  const int places = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  if (places >= 4) {
    const double half_ulp = 0.5 * std::pow(10.0, -places);
    for (int d = 1; d <= 12; ++d) {
      const double n = std::round(v * d);
      if (std::abs(n / d - v) <= half_ulp) return n / d;
    }
  }
  return v;
}

// ---------------------------------------------------------------- output

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
      os = &file;
    }
    *os << std::setprecision(17);
  }
  std::ostream& operator*() { return *os; }
};

json provenance_json(const RunConfig& cfg) {
  json j;
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  return j;
}

DualPoint make_point(GroupId g, double l, double m, double n, double eps) {
  DualPoint p{g, l, m, g == GroupId::Cartan ? n : 0.0};
  p.validate(eps);
  return p;
}

// ---------------------------------------------------------------- commands

int cmd_group(const RunConfig& cfg, const std::string& action, const std::vector<std::string>& args) {
  Output out(cfg.output);
  const GroupId g = cfg.group;
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw CLI::ValidationError("group " + action + " expects " + std::to_string(n) + " argument(s)");
  };
  if (action == "mul") {
    need(2);
    GroupElement<Rational> a(g, parse_coords(args[0], g)), b(g, parse_coords(args[1], g));
    *out << join(multiply(a, b).coords()) << '\n';
  } else if (action == "inv") {
    need(1);
    *out << join(inverse(GroupElement<Rational>(g, parse_coords(args[0], g))).coords()) << '\n';
  } else if (action == "dilate") {
    need(2);
    *out << join(dilate(parse_rational(args[0]), GroupElement<Rational>(g, parse_coords(args[1], g))).coords()) << '\n';
  } else if (action == "commutators") {
    need(0);
    const int d = dimension(g);
    *out << "# " << group_name(g) << " Lie algebra brackets (basis X1..X" << d
         << "; X3 is minus the third frame field)\n";
    for (int i = 1; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) {
        const std::vector<Rational> c = frame_coordinates(g, commutator(algebra_basis(g, i), algebra_basis(g, j)));
        std::string rhs;
        for (int k = 1; k <= d; ++k) {
          const Rational ck = c[static_cast<std::size_t>(k - 1)] * algebra_basis_sign(g, k);
          if (ck == 0) continue;
          const std::string coef = ck == 1 ? "" : ck == -1 ? "-" : to_string(ck) + "*";
          rhs += (rhs.empty() || coef.starts_with("-") ? "" : "+") + coef + "X" + std::to_string(k);
        }
        *out << "[X" << i << ",X" << j << "]=" << (rhs.empty() ? "0" : rhs) << '\n';
      }
  } else if (action == "fields") {
    need(0);
    const auto names = coordinate_names(g);
    for (int i = 1; i <= dimension(g); ++i) *out << "X" << i << " = " << vector_field(g, i).to_string(names) << '\n';
  } else {
    throw CLI::ValidationError("unknown group action '" + action + "' (mul, inv, dilate, commutators, fields)");
  }
  return 0;
}

struct PointArgs {
  double lambda = 1.0, mu = 0.0, nu = 0.0;
  bool harmonic = false;
  std::vector<int> exponents;
};

SchrodingerOp point_operator(const RunConfig& cfg, const PointArgs& p, double& threshold_scale) {
  threshold_scale = 1.0;
  if (p.harmonic) return SchrodingerOp(1.0, Potential({0.0, 1.0}));
  const DualPoint pi = make_point(cfg.group, p.lambda, p.mu, p.nu, cfg.dual_epsilon);
  if (!p.exponents.empty()) return build_symbol_generalized(pi, p.exponents);
  return build_symbol(pi);
}

int cmd_spectrum(const RunConfig& cfg, const PointArgs& p, double s) {
  double scale = 1.0;
  const SchrodingerOp op = point_operator(cfg, p, scale);
  const std::vector<double> ev = spectrum_below(op, s, cfg.solver());
  Output out(cfg.output);
  *out << cfg.provenance() << "# lambda = " << p.lambda << "\n# mu = " << p.mu << "\n# nu = " << p.nu
       << "\n# threshold = " << s << "\nindex,eigenvalue\n";
  for (std::size_t k = 0; k < ev.size(); ++k) *out << k << ',' << ev[k] << '\n';
  return 0;
}

int cmd_count(const RunConfig& cfg, const PointArgs& p, const std::vector<double>& grid) {
  Output out(cfg.output);
  *out << cfg.provenance() << "s,N,volume,weyl_ratio,N_over_s_exponent\n";
  const double expo = counting_exponent(cfg.group);
  for (double s : grid) {
    std::size_t n;
    double vol;
    if (p.harmonic || !p.exponents.empty()) {
      double scale;
      const SchrodingerOp op = point_operator(cfg, p, scale);
      n = counting_function(op, s, cfg.solver());
      vol = phase_space_volume(WeylSymbol(op), s);
    } else {
      const DualPoint pi = make_point(cfg.group, p.lambda, p.mu, p.nu, cfg.dual_epsilon);
      n = point_count(pi, s, cfg.solver());
      vol = point_volume(pi, s);
    }
    const double ratio = vol > 0.0 ? 2.0 * std::numbers::pi * static_cast<double>(n) / vol : 0.0;
    *out << s << ',' << n << ',' << vol << ',' << ratio << ',' << static_cast<double>(n) / std::pow(s, expo) << '\n';
  }
  return 0;
}

int cmd_volume(const RunConfig& cfg, const PointArgs& p, double s, std::size_t mc_samples) {
  double scale = 1.0;
  SchrodingerOp op = point_operator(cfg, p, scale);
  double threshold = s;
  if (!p.harmonic && p.exponents.empty() && cfg.group == GroupId::Cartan) {
    // compare B' = rho B at rho s so that the kinetic coefficient is 1
    const CountingProblem cp = counting_problem(make_point(cfg.group, p.lambda, p.mu, p.nu, cfg.dual_epsilon));
    op = cp.op;
    threshold = cp.threshold_scale * s;
  }
  const WeylSymbol sigma(op);
  json j;
  j["provenance"] = provenance_json(cfg);
  j["s"] = s;
  j["threshold"] = threshold;
  j["volume"] = phase_space_volume(sigma, threshold);
  for (const Interval& iv : sublevel_intervals(op.potential, threshold)) j["intervals"].push_back({iv.lo, iv.hi});
  bool ok = true;
  if (mc_samples > 0) {
    const auto iv = sublevel_intervals(op.potential, threshold);
    if (!iv.empty()) {
      const double U = std::max(std::abs(iv.front().lo), std::abs(iv.back().hi));
      const double X = std::sqrt((threshold - op.potential.minimum()) / op.kinetic);
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> du(-U, U), dx(-X, X);
      std::size_t hits = 0;
      for (std::size_t k = 0; k < mc_samples; ++k) {
        const double u = du(rng), x = dx(rng);
        hits += op.kinetic * x * x + op.potential(u) < threshold ? 1 : 0;
      }
      const double box = 4.0 * U * X, pr = static_cast<double>(hits) / static_cast<double>(mc_samples);
      const double est = box * pr, sigma_mc = box * std::sqrt(pr * (1.0 - pr) / static_cast<double>(mc_samples));
      ok = std::abs(est - j["volume"].get<double>()) <= 3.0 * sigma_mc;
      j["monte_carlo"] = {{"samples", mc_samples}, {"seed", cfg.seed}, {"estimate", est}, {"sigma", sigma_mc}, {"within_3_sigma", ok}};
    }
  }
  Output out(cfg.output);
  *out << j.dump(2) << '\n';
  return ok ? 0 : 1;
}

int cmd_trace(const RunConfig& cfg, const std::string& csv_path, bool cross) {
  TraceOptions opts;
  opts.method = cfg.method;
  opts.quadrature = cfg.quadrature();
  opts.solver = cfg.solver();
  opts.threads = cfg.threads;
  const std::vector<double> grid = cfg.s_grid.values();
  std::vector<TraceEstimate> est;
  const GrowthFit fit = growth_exponent(cfg.group, grid, opts, &est);
  json j = json::parse(fit.to_json());
  j["provenance"] = provenance_json(cfg);
  bool ok = fit.pass();
  if (cross) {
    const auto cv = cross_validate(cfg.group, grid.back(), opts);
    for (const CrossCheck& c : cv) {
      j["cross_validation"].push_back({{"lambda", c.point.lambda}, {"mu", c.point.mu}, {"nu", c.point.nu}, {"s", c.s},
                                       {"count", c.count}, {"volume_estimate", c.volume_estimate}, {"rel_diff", c.rel_diff},
                                       {"pass", c.rel_diff <= 0.25}});
      ok = ok && c.rel_diff <= 0.25;
    }
    ok = ok && cv.size() == 3;
  }
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open '" + csv_path + "'");
    csv << cfg.provenance();
    write_sweep_csv(csv, est);
  }
  Output out(cfg.output);
  *out << j.dump(2) << '\n';
  return ok ? 0 : 1;
}

struct BoundArgs {
  std::string p = "2", q = "2";
  double power = -1.0, heat = -1.0;
  double a = 0.0, b = 0.0;
  std::vector<double> t{1.0};
};

int cmd_bound(const RunConfig& cfg, const std::string& what, const BoundArgs& ba) {
  const ExponentPair pq(parse_exponent(ba.p), parse_exponent(ba.q));
  Output out(cfg.output);
  const GroupId g = cfg.group;
  if (what == "phi") {
    if ((ba.power >= 0.0) == (ba.heat > 0.0)) throw CLI::ValidationError("bound phi needs exactly one of --power, --heat");
    const PhiFunction phi = ba.power >= 0.0 ? PhiFunction::power(ba.power) : PhiFunction::heat(ba.heat);
    const SupResult r = sup_bound(phi, g, pq);
    json j = json::parse(sup_record_json(g, pq, phi, r));
    j["provenance"] = provenance_json(cfg);
    *out << j.dump(2) << '\n';
    return r.finite && r.has_closed_form && r.rel_err > 1e-6 ? 1 : 0;
  }
  if (what == "sobolev") {
    const SobolevResult r = sobolev_check(g, ba.a, ba.b, pq);
    json j{{"group", group_name(g)}, {"p", pq.p()}, {"q", pq.q()}, {"a", ba.a}, {"b", ba.b},
           {"required", trace_exponent(g) * pq.inv_r()}, {"pass", r.pass}, {"margin", r.margin},
           {"provenance", provenance_json(cfg)}};
    *out << j.dump(2) << '\n';
    return r.pass ? 0 : 1;
  }
  if (what == "heat") {
    json j{{"group", group_name(g)}, {"p", pq.p()}, {"q", pq.q()}, {"provenance", provenance_json(cfg)}};
    bool ok = true;
    for (double t : ba.t) {
      const HeatDecay h = heat_decay(g, pq, t);
      j["rows"].push_back({{"t", t}, {"C", h.constant}, {"beta", h.exponent}, {"sup", h.sup}, {"rel_err", h.rel_err}});
      j["C"] = h.constant;
      j["beta"] = h.exponent;
      ok = ok && h.rel_err <= 1e-6;
    }
    j["pass"] = ok;
    *out << j.dump(2) << '\n';
    return ok ? 0 : 1;
  }
  throw CLI::ValidationError("unknown bound mode '" + what + "' (phi, sobolev, heat)");
}

int cmd_report(RunConfig cfg) {
  json j;
  j["provenance"] = provenance_json(cfg);
  bool ok = true;
  for (GroupId g : {GroupId::Engel, GroupId::Cartan}) {
    cfg.group = g;
    json r;
    bool alg = true;
    for (const BracketRelation& rel : printed_brackets(g)) {
      const ExactOp lhs = commutator(algebra_basis(g, rel.i), algebra_basis(g, rel.j));
      alg = alg && (rel.k == 0 ? lhs == ExactOp(dimension(g)) : lhs == algebra_basis(g, rel.k));
    }
    r["brackets_exact"] = alg;
    const DualPoint pi = g == GroupId::Engel ? DualPoint::engel(1.0, 0.0) : DualPoint::cartan(1.0, 1.0, 0.0);
    const double s = 400.0;
    const double ratio = 2.0 * std::numbers::pi * static_cast<double>(point_count(pi, s, cfg.solver())) / point_volume(pi, s);
    r["weyl_ratio"] = {{"s", s}, {"ratio", ratio}, {"pass", std::abs(ratio - 1.0) <= 0.1}};
    TraceOptions opts;
    opts.quadrature = cfg.quadrature();
    opts.solver = cfg.solver();
    opts.threads = cfg.threads;
    const std::vector<double> grid = cfg.s_grid.values();
    const GrowthFit fit = growth_exponent(g, grid, opts);
    r["trace_fit"] = json::parse(fit.to_json());
    const HeatDecay h = heat_decay(g, ExponentPair(4.0 / 3.0, 4.0), 1.0);
    r["heat"] = {{"C", h.constant}, {"beta", h.exponent}, {"rel_err", h.rel_err}};
    const bool pass = alg && std::abs(ratio - 1.0) <= 0.1 && fit.pass() && h.rel_err <= 1e-6;
    r["pass"] = pass;
    ok = ok && pass;
    j[std::string(group_name(g))] = r;
  }
  j["pass"] = ok;
  Output out(cfg.output);
  *out << j.dump(2) << '\n';
  return ok ? 0 : 1;
}

void add_group_flags(CLI::App* sub, bool& engel, bool& cartan) {
  auto* e = sub->add_flag("--engel", engel, "Engel group (default)");
  auto* c = sub->add_flag("--cartan", cartan, "Cartan group");
  e->excludes(c);
}

void add_point_options(CLI::App* sub, PointArgs& p) {
  sub->add_option("-l,--lambda", p.lambda, "dual parameter lambda");
  sub->add_option("-m,--mu", p.mu, "dual parameter mu");
  sub->add_option("-n,--nu", p.nu, "dual parameter nu (Cartan)");
  sub->add_flag("--harmonic", p.harmonic, "use -d^2/du^2 + u^2 instead of a group symbol");
  sub->add_option("--exponents", p.exponents, "generalized family exponents (Engel n2..n5, Cartan n1..n6)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilspec: spectral multipliers on the Engel and Cartan groups"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key = value config file (overrides flags; default $NILSPEC_CONFIG)");
  app.add_option("--threads", cfg.threads, "worker threads for dual-grid sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "seed for Monte Carlo cross-checks");
  app.add_option("-o,--output", cfg.output, "output file (default stdout)");
  app.add_option("--kappa", cfg.kappa, "domain margin V(L) >= kappa s");
  app.add_option("--tol", cfg.tol, "eigenvalue bracket width");
  app.add_option("--points-per-wavelength", cfg.points_per_wavelength, "grid resolution of the eigen-solver");
  app.add_option("--max-points", cfg.max_points, "largest grid for the eigen-solver");
  app.add_option("--dual-epsilon", cfg.dual_epsilon, "degeneracy threshold for dual points");

  bool engel = false, cartan = false;

  auto* grp = app.add_subcommand("group", "exact group operations: mul A B | inv A | dilate R A | commutators | fields");
  add_group_flags(grp, engel, cartan);
  std::string action;
  std::vector<std::string> gargs;
  grp->add_option("action", action, "mul, inv, dilate, commutators, fields")->required();
  grp->add_option("args", gargs, "comma-separated rational coordinates");

  PointArgs pa;
  double s_value = 20.0;
  auto* spec = app.add_subcommand("spectrum", "eigenvalues below s of the symbol at a dual point (CSV)");
  add_group_flags(spec, engel, cartan);
  add_point_options(spec, pa);
  spec->add_option("-s", s_value, "threshold")->required();

  std::string grid_spec;
  auto* cnt = app.add_subcommand("count", "counting function, volume and Weyl ratio over an s-grid (CSV)");
  add_group_flags(cnt, engel, cartan);
  add_point_options(cnt, pa);
  cnt->add_option("--s", grid_spec, "geometric grid lo:hi:n")->required();

  std::size_t mc = 0;
  auto* vol = app.add_subcommand("volume", "phase-space volume of the symbol below s (JSON)");
  add_group_flags(vol, engel, cartan);
  add_point_options(vol, pa);
  vol->add_option("-s", s_value, "threshold")->required();
  vol->add_option("--mc", mc, "Monte Carlo samples for a cross-check (uses --seed)");

  std::string csv_path, nodes_spec, method, rule;
  bool cross = false;
  auto* tr = app.add_subcommand("trace", "trace sweep over the dual region and growth fit (JSON)");
  add_group_flags(tr, engel, cartan);
  tr->add_option("--s", grid_spec, "geometric grid lo:hi:n (default 1e2:1e4:5)");
  tr->add_option("--method", method, "volume or eigen_count");
  tr->add_option("--nodes", nodes_spec, "nodes per axis: N or N1,N2[,N3]");
  tr->add_option("--rule", rule, "gauss or midpoint");
  tr->add_option("--csv", csv_path, "write the sweep as CSV");
  tr->add_flag("--cross-validate", cross, "eigen-count check at 3 thinned nodes of the largest s");

  BoundArgs ba;
  std::string mode;
  auto* bd = app.add_subcommand("bound", "multiplier bound: phi | sobolev | heat (JSON)");
  add_group_flags(bd, engel, cartan);
  bd->add_option("mode", mode, "phi, sobolev or heat")->required();
  bd->add_option("-p", ba.p, "exponent p (fractions like 4/3 accepted)");
  bd->add_option("-q", ba.q, "exponent q");
  bd->add_option("--power", ba.power, "phi(s) = (1+s)^-A");
  bd->add_option("--heat", ba.heat, "phi(s) = exp(-T s)");
  bd->add_option("-a", ba.a, "Sobolev order a");
  bd->add_option("-b", ba.b, "Sobolev order b");
  bd->add_option("-t", ba.t, "heat times")->delimiter(',');

  auto* rep = app.add_subcommand("report", "compact pass/fail report for both groups (JSON)");
  rep->add_option("--s", grid_spec, "trace grid lo:hi:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.group = cartan ? GroupId::Cartan : GroupId::Engel;
    if (!grid_spec.empty()) cfg.s_grid = SGrid::parse(grid_spec);
    if (!method.empty()) cfg.method = parse_trace_method(method);
    if (!rule.empty()) cfg.rule = parse_quad_rule(rule);
    if (!nodes_spec.empty()) apply_entries(cfg, {{"nodes", nodes_spec}});
    cfg.command = app.get_subcommands().front()->get_name();
    if (config_path.empty())
      if (auto env = config_path_from_env()) config_path = *env;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    cfg.validate();

    if (grp->parsed()) return cmd_group(cfg, action, gargs);
    if (spec->parsed()) return cmd_spectrum(cfg, pa, s_value);
    if (cnt->parsed()) return cmd_count(cfg, pa, cfg.s_grid.values());
    if (vol->parsed()) return cmd_volume(cfg, pa, s_value, mc);
    if (tr->parsed()) return cmd_trace(cfg, csv_path, cross);
    if (bd->parsed()) return cmd_bound(cfg, mode, ba);
    if (rep->parsed()) return cmd_report(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
