#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "percolab/cayley.hpp"
#include "percolab/dixmier.hpp"
#include "percolab/errors.hpp"
#include "percolab/group.hpp"
#include "percolab/isoperimetry.hpp"
#include "percolab/multiset.hpp"
#include "percolab/percolation.hpp"
#include "percolab/report.hpp"
#include "percolab/spectral.hpp"

namespace percolab::cli {
namespace {

struct Outputs {
  std::string json;
  std::string csv;
  std::string svg;
  bool timing = false;
};

// Tracks the running stage for error messages and per-stage timings.
class Stages {
 public:
  void enter(std::string name) {
    close();
    name_ = std::move(name);
    start_ = std::chrono::steady_clock::now();
  }
  void close() {
    if (report_ && !name_.empty()) {
      const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
      report_->seconds(name_, d.count());
    }
  }
  void attach(RunReport* r) { report_ = r; }
  const std::string& name() const { return name_; }

 private:
  std::string name_ = "arguments";
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  RunReport* report_ = nullptr;
};

// Output files are collected here and written once the command succeeded.
class PendingFiles {
 public:
  void add(const std::string& path, std::string contents) {
    if (!path.empty()) files_.emplace_back(path, std::move(contents));
  }
  void flush() {
    for (const auto& [path, contents] : files_) write_file_atomic(path, contents);
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PERCOLAB_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ArgumentError(std::string("PERCOLAB_SEED is not an unsigned integer: ") + env);
  }
  return 1;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof())
    throw ParseError("grid must look like start:stop:step, got '" + spec + "'");
  if (!(step > 0) || hi < lo) throw ArgumentError("grid needs step > 0 and stop >= start");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> ps;
  for (std::size_t i = 0; i < n; ++i) ps.push_back(lo + static_cast<double>(i) * step);
  return ps;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

// True when the Cayley graph of S (with inverses) is the 2k-regular tree.
bool is_tree_multiset(const GroupContext& ctx, const GeneratorMultiset& sym) {
  return ctx.family() == Family::free_group && is_standard_free_multiset(ctx, sym) &&
         sym.size() == 2 * static_cast<std::uint64_t>(ctx.num_generators());
}

// --------------------------------------------------------------------------

struct CriterionArgs {
  std::string group;
  std::string set = "std";
  int nmax = 12;
  int returns = 40;
  std::size_t max_support = 2'000'000;
  int box = 8;
};

int cmd_criterion(const CriterionArgs& a, const Outputs& o, Stages& st, std::ostream& out) {
  st.enter("parse");
  const auto ctx = GroupContext::parse(a.group);
  const auto s = parse_multiset(ctx, a.set);
  RunReport rep("criterion", ctx.spec(), to_string(ctx, s), std::nullopt);
  st.attach(&rep);
  rep.integer("input", "multiset_size", static_cast<std::int64_t>(s.size()), Provenance::exact);

  st.enter("returns");
  std::optional<double> rho_lower;
  if (s.is_symmetric(ctx)) {
    const auto returns = return_probabilities(ctx, s, a.returns, {a.max_support});
    const auto est = rho_lower_from_returns(returns);
    rho_lower = est.best;
    rep.number("returns", "rho_lower", est.best, est.provenance);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < est.lower_bounds.size(); ++k)
      rows.push_back({static_cast<double>(2 * (k + 1)), to_double(returns[2 * k + 1]),
                      est.lower_bounds[k]});
    rep.table("returns", "ladder", {"n", "p_n", "lower_bound"}, rows, Provenance::certified_bound);
  } else {
    rep.text("returns", "skipped", "multiset is not symmetric");
  }

  st.enter("rho-oracle");
  std::optional<double> rho_exact;
  if (ctx.family() == Family::free_group && is_standard_free_multiset(ctx, s)) {
    rho_exact = free_group_rho(ctx.num_generators());
    rep.number("rho-oracle", "rho", *rho_exact, Provenance::exact);
    rep.text("rho-oracle", "method", "closed form sqrt(2k-1)/k");
  } else {
    rep.text("rho-oracle", "skipped", "no closed form for this group and multiset");
  }

  st.enter("mohar");
  HBounds hb = mohar_bounds(rho_lower, rho_exact, s.size(), rho_exact.has_value());
  if (ctx.family() == Family::zd) {
    try {
      const auto f = phi(ctx, s, lattice_box(ctx, s, a.box));
      add_candidate(hb, f);
      rep.exact("mohar", "box_phi", f.phi);
      rep.integer("mohar", "box_size", static_cast<std::int64_t>(f.size()), Provenance::exact);
    } catch (const ArgumentError& e) {
      rep.text("mohar", "box_skipped", e.what());
    }
  }
  if (hb.lower) rep.number("mohar", "h_lower", *hb.lower, Provenance::certified_bound);
  rep.text("mohar", "h_lower_source", to_string(hb.lower_source));
  if (hb.upper) rep.number("mohar", "h_upper", *hb.upper, Provenance::certified_bound);
  rep.text("mohar", "h_upper_source", to_string(hb.upper_source));

  CriterionResult crit = criterion_check(hb.lower.value_or(0.0), hb.lower_source);
  std::optional<int> found;
  double h_used = hb.lower.value_or(0.0);
  if (rho_exact) {
    st.enter("witness-search");
    const auto ws = witness_power_search(s.size(), *rho_exact, a.nmax, true);
    std::vector<std::vector<double>> rows;
    for (const auto& step : ws.trail)
      rows.push_back({static_cast<double>(step.n), step.rho_power, step.multiset_size,
                      step.bounds.lower.value_or(0.0)});
    rep.table("witness-search", "trail", {"n", "rho_n", "size_n", "h_lower"}, rows,
              Provenance::certified_bound);
    if (ws.n) {
      found = ws.n;
      const auto& step = ws.trail[static_cast<std::size_t>(*ws.n - 1)];
      h_used = *step.bounds.lower;
      crit = criterion_check(h_used, step.bounds.lower_source);
      rep.integer("witness-search", "n", *ws.n, Provenance::exact);
      rep.number("witness-search", "h_lower", h_used, Provenance::certified_bound);

      st.enter("pc-bounds");
      const auto pcb = bs_pc_bound(step.multiset_size, h_used, HKind::lower_bound);
      rep.number("pc-bounds", "pc_upper", pcb.value, pcb.provenance);
      const auto u = bs_uniqueness_report(CertifiedValue{step.rho_power, Provenance::exact},
                                          CertifiedValue{pcb.value, pcb.provenance},
                                          step.multiset_size);
      if (u.product) rep.number("pc-bounds", "rho_pc_size", *u.product, Provenance::certified_bound);
      rep.flag("pc-bounds", "non_uniqueness_certified", u.certified);
      rep.text("pc-bounds", "reason", u.reason);
    } else {
      rep.text("witness-search", "result", "no n <= nmax clears the threshold");
    }
  }

  st.enter("criterion");
  rep.number("criterion", "threshold", kCriterionThreshold, Provenance::exact);
  rep.number("criterion", "margin", crit.margin,
             crit.input_certified ? Provenance::certified_bound : Provenance::heuristic);
  std::string reason;
  if (!crit.input_certified)
    reason = "no certified lower bound on h";
  else if (crit.certified)
    reason = found ? "h(S^" + std::to_string(*found) + ") > sqrt(1/2)" : "h(S) > sqrt(1/2)";
  else
    reason = "certified lower bound on h does not exceed sqrt(1/2)";
  rep.outcome(crit.input_certified, crit.certified, reason);
  st.close();

  out << "group        " << ctx.spec() << "  S = " << to_string(ctx, s) << "\n";
  if (rho_lower) out << "rho >=       " << fmt(*rho_lower) << "  (return probabilities)\n";
  if (rho_exact) out << "rho =        " << fmt(*rho_exact) << "  (closed form)\n";
  if (hb.lower) out << "h >=         " << fmt(*hb.lower) << "\n";
  if (hb.upper) out << "h <=         " << fmt(*hb.upper) << "\n";
  if (found) out << "witness      n = " << *found << ", h(S^n) >= " << fmt(h_used) << "\n";
  out << "verdict      " << rep.status() << " (" << reason << ")\n";

  PendingFiles files;
  files.add(o.json, rep.to_json(o.timing));
  files.flush();
  return crit.certified ? kExitCertified : kExitNotCertified;
}

// --------------------------------------------------------------------------

struct PercolateArgs {
  std::string group;
  std::string set = "std";
  int radius = 8;
  std::optional<int> boundary_radius;
  std::vector<double> ps;
  std::string grid;
  bool pc = false;
  double tau = 0.05;
  std::uint64_t samples = 2000;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool census = false;
  std::optional<double> probe_p;
  std::string h;
  std::string h_kind = "lower";
};

int cmd_percolate(const PercolateArgs& a, const Outputs& o, Stages& st, std::ostream& out) {
  st.enter("parse");
  const auto ctx = GroupContext::parse(a.group);
  const auto sym = symmetric_closure(ctx, parse_multiset(ctx, a.set));
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  std::vector<double> ps = a.ps;
  if (!a.grid.empty()) {
    const auto g = parse_grid(a.grid);
    ps.insert(ps.end(), g.begin(), g.end());
  }
  if (ps.empty() && !a.pc) ps = parse_grid("0:1:0.05");
  for (double p : ps)
    if (!(p >= 0 && p <= 1)) throw ArgumentError("p = " + fmt(p) + " is outside [0, 1]");
  std::optional<double> h_given;
  if (!a.h.empty()) h_given = to_double(parse_rational(a.h));
  if (a.h_kind != "exact" && a.h_kind != "lower" && a.h_kind != "upper")
    throw ArgumentError("--conductance-kind must be exact, lower or upper");

  RunReport rep("percolate", ctx.spec(), to_string(ctx, sym), seed);
  st.attach(&rep);

  st.enter("ball");
  const auto ball = build_ball(ctx, sym, a.radius);
  const PercolationGraph g(ball, a.boundary_radius);
  rep.integer("ball", "radius", a.radius, Provenance::exact);
  rep.integer("ball", "boundary_radius", g.boundary_radius(), Provenance::exact);
  rep.integer("ball", "vertices", static_cast<std::int64_t>(g.num_vertices()), Provenance::exact);
  rep.integer("ball", "edges", static_cast<std::int64_t>(g.num_edges()), Provenance::exact);

  const SamplingOptions sampling{
      .samples = a.samples, .seed = seed, .threads = a.threads, .census = a.census};
  const bool tree = is_tree_multiset(ctx, sym) && g.boundary_radius() == a.radius;
  const int b = static_cast<int>(sym.size()) - 1, d = static_cast<int>(sym.size());

  SvgPlot plot;
  plot.title = "theta(p) on " + ctx.spec() + ", R = " + std::to_string(a.radius) +
               ", N = " + std::to_string(a.samples);
  std::string csv;
  std::vector<ThetaPoint> curve;
  if (!ps.empty()) {
    st.enter("theta");
    curve = theta_curve(g, ps, sampling);
    std::vector<std::vector<double>> rows;
    for (const auto& t : curve)
      rows.push_back({t.p, t.theta, t.ci.lo, t.ci.hi, static_cast<double>(t.samples)});
    rep.table("theta", "curve", {"p", "theta_hat", "ci_lo", "ci_hi", "n_samples"}, rows,
              Provenance::monte_carlo_ci);
    if (a.census) {
      std::vector<std::vector<double>> crow;
      for (const auto& t : curve) crow.push_back({t.p, t.boundary_clusters_mean.value_or(0.0)});
      rep.table("theta", "boundary_clusters", {"p", "mean"}, crow, Provenance::monte_carlo_ci);
    }
    std::ostringstream c;
    write_theta_csv(c, curve);
    csv = c.str();
    plot.curves.push_back({"theta_hat (95% Wilson band)", curve, true});
    if (tree) {
      std::vector<std::vector<double>> orows;
      for (double p : ps) orows.push_back({p, tree_theta_oracle(b, d, p, a.radius)});
      rep.table("theta", "tree_oracle", {"p", "theta"}, orows, Provenance::exact);
      std::vector<ThetaPoint> dense;
      for (int i = 0; i <= 200; ++i) {
        const double p = i / 200.0;
        const double t = tree_theta_oracle(b, d, p, a.radius);
        dense.push_back({.p = p, .successes = 0, .samples = 0, .theta = t, .ci = {t, t}, .boundary_clusters_mean = std::nullopt});
      }
      plot.curves.push_back({"exact tree survival", std::move(dense), false});
    }
  }

  std::optional<PcEstimate> pc;
  if (a.pc) {
    st.enter("pc");
    pc = pc_estimate(g, sampling, {.tau = a.tau});
    rep.number("pc", "tau", a.tau, Provenance::exact);
    rep.number("pc", "p", pc->p, pc->provenance);
    rep.number("pc", "ci_lo", pc->ci.lo, pc->provenance);
    rep.number("pc", "ci_hi", pc->ci.hi, pc->provenance);
    rep.text("pc", "method", pc->method);
    if (tree) rep.number("pc", "tree_oracle_crossing", tree_theta_crossing(b, d, a.radius, a.tau),
                         Provenance::exact);
    plot.rules.push_back({"tau", a.tau, false});
    plot.rules.push_back({"p_c estimate", pc->p, true});
  }

  if (a.probe_p) {
    st.enter("probe");
    const auto u = uniqueness_probe(g, *a.probe_p, sampling);
    rep.number("probe", "p", u.p, Provenance::exact);
    rep.number("probe", "mean_boundary_clusters", u.mean, Provenance::monte_carlo_ci);
    std::vector<std::vector<double>> rows;
    for (const auto& [k, n] : u.histogram)
      rows.push_back({static_cast<double>(k), static_cast<double>(n)});
    rep.table("probe", "histogram", {"clusters", "samples"}, rows, Provenance::monte_carlo_ci);
    rep.text("probe", "note", u.note);
  }

  st.enter("pc-bound");
  std::optional<PcBound> bound;
  if (h_given) {
    const HKind kind = a.h_kind == "exact"   ? HKind::exact
                       : a.h_kind == "lower" ? HKind::lower_bound
                                             : HKind::upper_bound;
    bound = bs_pc_bound(static_cast<double>(sym.size()), *h_given, kind);
    rep.text("pc-bound", "h_source", "--conductance " + a.h + " (" + a.h_kind + ")");
  } else if (tree) {
    const HBounds hb = mohar_bounds(std::nullopt, free_group_rho(ctx.num_generators()),
                                    sym.size(), true);
    bound = bs_pc_bound(static_cast<double>(sym.size()), *hb.lower, HKind::lower_bound);
    rep.text("pc-bound", "h_source", to_string(hb.lower_source));
  }
  if (bound) {
    rep.number("pc-bound", "pc_upper", bound->value, bound->provenance);
    rep.text("pc-bound", "note", bound->note);
    plot.rules.push_back({"p_c bound", bound->value, true});
  } else {
    rep.text("pc-bound", "skipped", "no certified h available");
  }
  st.close();

  out << "ball         " << ctx.spec() << " R = " << a.radius << ", " << g.num_vertices()
      << " vertices, " << g.num_edges() << " edges, seed " << seed << "\n";
  for (const auto& t : curve)
    out << "p = " << std::left << std::setw(10) << fmt(t.p) << " theta_hat = " << std::setw(10)
        << fmt(t.theta) << " [" << fmt(t.ci.lo) << ", " << fmt(t.ci.hi) << "]\n";
  if (pc)
    out << "p_c estimate " << fmt(pc->p) << " [" << fmt(pc->ci.lo) << ", " << fmt(pc->ci.hi)
        << "] at tau = " << a.tau << "\n";
  if (bound) out << "p_c <=       " << fmt(bound->value) << "\n";

  PendingFiles files;
  files.add(o.json, rep.to_json(o.timing));
  files.add(o.csv, csv);
  if (!o.svg.empty()) {
    std::ostringstream svg;
    write_svg(svg, plot);
    files.add(o.svg, svg.str());
  }
  files.flush();
  return 0;
}

// --------------------------------------------------------------------------

struct WitnessArgs {
  bool paradoxical = false;
  std::string group;
  std::string set = "std";
  std::string iterate;
  int m = 1;
  int max_depth = 12;
};

std::vector<GroupElement> parse_element_list(const GroupContext& ctx, std::string text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw ParseError("element list must be bracketed: " + text);
  text = text.substr(1, text.size() - 2);
  std::vector<GroupElement> out;
  std::size_t depth = 0, start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      out.push_back(ctx.parse_element(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

int cmd_witness(const WitnessArgs& a, const Outputs& o, Stages& st, std::ostream& out) {
  st.enter("parse");
  if (!a.paradoxical && a.group.empty())
    throw ArgumentError("give --paradoxical-f2 or --group with --iterate");
  if (!a.paradoxical && a.iterate.empty())
    throw ArgumentError("--group needs --iterate");
  if (a.m < 1) throw ArgumentError("--m must be at least 1");
  const FunctionBudget budget{.max_depth = a.max_depth};

  std::optional<ParadoxicalF2> para;
  std::optional<GroupContext> ctx;
  std::optional<DixmierWitness> start;
  if (a.paradoxical) {
    para = paradoxical_witness_f2();
    ctx = para->witness.context();
    start = para->witness;
  } else {
    ctx = GroupContext::parse(a.group);
    if (ctx->family() != Family::zd)
      throw ArgumentError("iteration from a box witness needs a zd group; use --paradoxical-f2 "
                          "for free:2");
  }

  std::string iterate_kind, iterate_arg;
  if (!a.iterate.empty()) {
    const auto colon = a.iterate.find(':');
    if (colon == std::string::npos) throw ParseError("--iterate must be box:L, set:[...] or search:n");
    iterate_kind = a.iterate.substr(0, colon);
    iterate_arg = a.iterate.substr(colon + 1);
    if (iterate_kind != "box" && iterate_kind != "set" && iterate_kind != "search")
      throw ParseError("unknown --iterate kind '" + iterate_kind + "'");
  }
  auto parse_int = [](const std::string& s) {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size() || v < 1) throw ParseError("expected a positive integer, got " + s);
    return v;
  };

  if (!start) {
    const auto s = parse_multiset(*ctx, a.set);
    const int side = iterate_kind == "box" ? parse_int(iterate_arg) : 10;
    const auto h = Rational(BigInt(1), BigInt(2 * s.size())) *
                   BoundedFunction::indicator(*ctx, lattice_box(*ctx, s, 2 * side));
    std::vector<WitnessPair> pairs;
    for (const auto& e : s.entries())
      for (std::uint64_t k = 0; k < e.multiplicity; ++k) pairs.push_back({h, e.element});
    start = DixmierWitness(*ctx, std::move(pairs));
  }

  RunReport rep("witness", ctx->spec(), to_string(*ctx, start->multiset()), std::nullopt);
  st.attach(&rep);
  bool holds = true;
  std::string reason;

  if (para) {
    st.enter("paradoxical");
    const auto checks = para->decomposition.check();
    rep.flag("paradoxical", "partition", checks.partition);
    rep.flag("paradoxical", "gamma_cover", checks.gamma_cover);
    rep.flag("paradoxical", "eta_cover", checks.eta_cover);
    rep.integer("paradoxical", "tarski_count", para->decomposition.tarski_count(),
                Provenance::exact);
    rep.exact("paradoxical", "normalization", para->witness.normalization());
    rep.exact("paradoxical", "sup_H", para->witness.sup());
    const auto eps = para->witness.epsilon();
    if (eps) rep.exact("paradoxical", "epsilon", *eps);
    rep.exact("paradoxical", "sup_scaled_difference",
              para->decomposition.scaled_difference().sup());
    rep.json("paradoxical", "decomposition", to_json(para->decomposition, *ctx));
    rep.json("paradoxical", "witness", to_json(para->witness));
    holds = checks.all() && eps.has_value();
    reason = holds ? "exact partition checks pass and sup(H) < 0"
                   : "paradoxical decomposition failed its checks";
    out << "partition    " << (checks.partition ? "ok" : "FAILED") << ", gamma cover "
        << (checks.gamma_cover ? "ok" : "FAILED") << ", eta cover "
        << (checks.eta_cover ? "ok" : "FAILED") << "\n";
    out << "sup H        " << to_string(para->witness.sup()) << "\n";
    if (eps) out << "epsilon      " << to_string(*eps) << "\n";
    out << "scaled form  sup = " << to_string(para->decomposition.scaled_difference().sup())
        << " with s + t = " << para->decomposition.tarski_count() << "\n";
  }

  if (!iterate_kind.empty()) {
    st.enter("iterate");
    std::vector<GroupElement> fixed;
    if (iterate_kind == "set") fixed = parse_element_list(*ctx, iterate_arg);
    const auto next_set = [&](const GeneratorMultiset& s, int) -> std::vector<GroupElement> {
      if (iterate_kind == "box") return lattice_box(*ctx, s, parse_int(iterate_arg));
      if (iterate_kind == "set") return fixed;
      const int size = parse_int(iterate_arg);
      const auto ball = build_ball(*ctx, s, size - 1);
      const auto r = folner_search_exhaustive(ball, {.max_size = size});
      return r.best.elements;
    };
    const auto chain = dixmier_chain(*start, a.m, next_set, budget);
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
      const auto& s = chain.steps[i];
      const std::string p = "step" + std::to_string(i + 1) + "_";
      rep.exact("iterate", p + "k", s.k);
      rep.integer("iterate", p + "set_size", static_cast<std::int64_t>(s.set_size),
                  Provenance::exact);
      rep.exact("iterate", p + "normalization_after", s.normalization_after);
      rep.exact("iterate", p + "norm_after", s.norm_after);
      rep.exact("iterate", p + "sup_after", s.sup_after);
      rep.flag("iterate", p + "averaging_checked", s.averaging_checked);
      out << "step " << i + 1 << "       k = " << to_string(s.k) << ", |F| = " << s.set_size
          << ", ||H|| = " << to_string(s.norm_after) << " <= "
          << to_string(s.normalization_after) << "\n";
    }
    rep.exact("iterate", "initial_normalization", chain.initial_normalization);
    rep.exact("iterate", "chain_bound", chain.chain_bound);
    rep.exact("iterate", "measured_norm", chain.measured_norm);
    const bool verified = chain.measured_norm <= chain.chain_bound * chain.initial_normalization;
    rep.flag("iterate", "verified", verified);
    rep.flag("iterate", "contradiction", chain.contradiction);
    out << "chain bound  " << to_string(chain.chain_bound) << " (times "
        << to_string(chain.initial_normalization) << "), measured ||H_" << a.m
        << "|| = " << to_string(chain.measured_norm) << (verified ? "  verified" : "  VIOLATED")
        << "\n";
    if (chain.contradiction)
      out << "contradiction: epsilon exceeds the chain bound, the starting witness is rejected\n";
    holds = holds && verified;
    reason += reason.empty() ? "" : "; ";
    reason += verified ? "norm chain verified" : "norm chain violated";
  }
  rep.outcome(true, holds, reason);
  st.close();

  PendingFiles files;
  files.add(o.json, rep.to_json(o.timing));
  files.flush();
  return holds ? kExitCertified : kExitNotCertified;
}

// --------------------------------------------------------------------------

struct RhoArgs {
  std::string group;
  std::string set = "std";
  int steps = 40;
  std::size_t max_support = 2'000'000;
  int power_radius = 0;
  int iters = 200;
};

int cmd_rho(const RhoArgs& a, const Outputs& o, Stages& st, std::ostream& out) {
  st.enter("parse");
  const auto ctx = GroupContext::parse(a.group);
  const auto s = parse_multiset(ctx, a.set);
  RunReport rep("rho", ctx.spec(), to_string(ctx, s), std::nullopt);
  st.attach(&rep);

  st.enter("returns");
  const auto returns = return_probabilities(ctx, s, a.steps, {a.max_support});
  const auto est = rho_lower_from_returns(returns);
  rep.number("returns", "rho_lower", est.best, est.provenance);
  for (std::size_t n = 1; n <= std::min<std::size_t>(returns.size(), 4); ++n)
    rep.exact("returns", "p_" + std::to_string(n), returns[n - 1]);
  std::ostringstream csv;
  write_returns_csv(csv, returns);
  out << "rho >=       " << fmt(est.best, 10) << "  (p_2n^(1/2n), 2n <= " << a.steps << ")\n";

  if (a.power_radius > 0) {
    st.enter("power-iteration");
    const auto ball = build_ball(ctx, s, a.power_radius);
    const auto p = rho_power_iteration(ball, a.iters);
    rep.number("power-iteration", "rho_lower", p.best, p.provenance);
    rep.integer("power-iteration", "radius", a.power_radius, Provenance::exact);
    out << "rho >=       " << fmt(p.best, 10) << "  (compression to radius " << a.power_radius
        << ", " << to_string(p.provenance) << ")\n";
  }
  if (ctx.family() == Family::free_group && is_standard_free_multiset(ctx, s)) {
    const double r = free_group_rho(ctx.num_generators());
    rep.number("oracle", "rho", r, Provenance::exact);
    out << "rho =        " << fmt(r, 10) << "  (closed form)\n";
  }
  st.close();

  PendingFiles files;
  files.add(o.json, rep.to_json(o.timing));
  files.add(o.csv, csv.str());
  files.flush();
  return 0;
}

struct BallArgs {
  std::string group;
  std::string set = "std";
  int radius = 4;
  std::string edges;
};

int cmd_ball(const BallArgs& a, const Outputs& o, Stages& st, std::ostream& out) {
  st.enter("parse");
  const auto ctx = GroupContext::parse(a.group);
  const auto s = parse_multiset(ctx, a.set);
  RunReport rep("ball", ctx.spec(), to_string(ctx, s), std::nullopt);
  st.attach(&rep);
  st.enter("ball");
  const auto ball = build_ball(ctx, s, a.radius);
  rep.integer("ball", "vertices", static_cast<std::int64_t>(ball.size()),
              Provenance::exact);
  std::vector<std::vector<double>> rows;
  for (int r = 0; r <= a.radius; ++r) {
    const auto n = sphere(ball, r).size();
    rows.push_back({static_cast<double>(r), static_cast<double>(n)});
    out << "sphere " << std::setw(3) << r << "  " << n << "\n";
  }
  rep.table("ball", "spheres", {"r", "size"}, rows, Provenance::exact);
  out << "total        " << ball.size() << "\n";
  st.close();

  PendingFiles files;
  if (!a.edges.empty()) {
    std::ostringstream e;
    write_edge_list(e, ball);
    files.add(a.edges, e.str());
  }
  files.add(o.json, rep.to_json(o.timing));
  files.flush();
  return 0;
}

void add_outputs(CLI::App* sub, Outputs& o, bool csv, bool svg) {
  sub->add_option("--json", o.json, "Write the run report as JSON");
  if (csv) sub->add_option("--csv", o.csv, "Write the data table as CSV");
  if (svg) sub->add_option("--svg", o.svg, "Write a plot as SVG");
  sub->add_flag("--timing", o.timing, "Include per-stage timings in the JSON report");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"percolab: spectral, isoperimetric and percolation bounds on Cayley graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Outputs o;

  CriterionArgs ca;
  auto* crit = app.add_subcommand("criterion", "Decide h(S) > sqrt(1/2) with certified bounds");
  crit->add_option("--group", ca.group, "Group, e.g. free:2, zd:2, fpc:2,3")->required();
  crit->add_option("--set", ca.set, "Multiset, e.g. std or [a,a^-1,b,b^-1]");
  crit->add_option("--nmax", ca.nmax, "Largest power tried by the witness search");
  crit->add_option("--returns", ca.returns, "Return-probability steps");
  crit->add_option("--max-support", ca.max_support, "Convolution support budget");
  crit->add_option("--box", ca.box, "Box side for the zd upper bound");
  add_outputs(crit, o, false, false);

  PercolateArgs pa;
  auto* perc = app.add_subcommand("percolate", "Bond percolation on a Cayley ball");
  perc->add_option("--group", pa.group, "Group")->required();
  perc->add_option("--set", pa.set, "Multiset (closed under inverses before use)");
  perc->add_option("--radius", pa.radius, "Ball radius");
  perc->add_option("--boundary-radius", pa.boundary_radius, "Sphere counted as the boundary");
  perc->add_option("--p", pa.ps, "Values of p")->delimiter(',');
  perc->add_option("--grid", pa.grid, "Grid of p as start:stop:step");
  perc->add_flag("--pc", pa.pc, "Estimate the crossing of theta_hat = tau");
  perc->add_option("--tau", pa.tau, "Crossing level for --pc");
  perc->add_option("--samples", pa.samples, "Samples per p");
  perc->add_option("--seed", pa.seed, "Seed (default $PERCOLAB_SEED or 1)");
  perc->add_option("--threads", pa.threads, "Worker threads");
  perc->add_flag("--census", pa.census, "Count boundary clusters per sample");
  perc->add_option("--probe", pa.probe_p, "Boundary-cluster histogram at this p");
  perc->add_option("--conductance", pa.h, "Value of h for the p_c bound (rational or decimal)");
  perc->add_option("--conductance-kind", pa.h_kind, "exact, lower or upper");
  add_outputs(perc, o, true, true);

  WitnessArgs wa;
  auto* wit = app.add_subcommand("witness", "Dixmier witnesses and the averaging chain");
  wit->add_flag("--paradoxical-f2", wa.paradoxical, "The paradoxical decomposition of free:2");
  wit->add_option("--group", wa.group, "zd group for a box-started chain");
  wit->add_option("--set", wa.set, "Multiset of the starting witness");
  wit->add_option("--iterate", wa.iterate, "Averaging sets: box:L, set:[...] or search:n");
  wit->add_option("--m", wa.m, "Number of averaging steps");
  wit->add_option("--max-depth", wa.max_depth, "Depth cap for prefix functions");
  add_outputs(wit, o, false, false);

  RhoArgs ra;
  auto* rho = app.add_subcommand("rho", "Lower bounds on the spectral radius");
  rho->add_option("--group", ra.group, "Group")->required();
  rho->add_option("--set", ra.set, "Symmetric multiset");
  rho->add_option("--steps", ra.steps, "Return-probability steps");
  rho->add_option("--max-support", ra.max_support, "Convolution support budget");
  rho->add_option("--power-radius", ra.power_radius, "Ball radius for power iteration");
  rho->add_option("--iters", ra.iters, "Power iterations");
  add_outputs(rho, o, true, false);

  BallArgs ba;
  auto* ball = app.add_subcommand("ball", "Build a Cayley ball and report sphere sizes");
  ball->add_option("--group", ba.group, "Group")->required();
  ball->add_option("--set", ba.set, "Multiset");
  ball->add_option("--radius", ba.radius, "Radius");
  ball->add_option("--edges", ba.edges, "Write the edge list here");
  add_outputs(ball, o, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  Stages st;
  try {
    if (*crit) return cmd_criterion(ca, o, st, out);
    if (*perc) return cmd_percolate(pa, o, st, out);
    if (*wit) return cmd_witness(wa, o, st, out);
    if (*rho) return cmd_rho(ra, o, st, out);
    return cmd_ball(ba, o, st, out);
  } catch (const std::exception& e) {
    err << "percolab: error in stage '" << st.name() << "': " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace percolab::cli
