#pragma once

/// @file cli.hpp
/// Command dispatch for the `maxplus` tool. Every command reads one matrix
/// file and writes a single JSON report to `out`.
///
/// Exit codes: 0 success, 1 a `verify` check failed, 2 input error,
/// 3 precondition error, 64 usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maxplus/csr.hpp"
#include "maxplus/error.hpp"
#include "maxplus/expansion.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/io.hpp"
#include "maxplus/kleene.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/oracle.hpp"
#include "maxplus/orbit.hpp"

namespace maxplus::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
  kPreconditionError = 3,
  kUsage = 64,
};

struct Options {
  std::string command;
  std::string file;
  std::string format = "auto";
  std::string semiring = "maxplus";
  std::string numeric = "exact";
  std::string rule = "canonical";
  long long t = 0;
  long long t_max = -1;
  std::string y_file;
  bool fast = false;
  bool normalize = false;
  bool timings = false;
};

inline double env_tolerance() {
  if (const char* env = std::getenv("TROPICAL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v >= 0) return v;
  }
  return 1e-9;
}

inline std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

namespace detail {

inline json node_list(const std::vector<int>& v) {
  json out = json::array();
  for (int x : v) out.push_back(x);
  return out;
}

inline json edge_list(const std::vector<Edge>& edges) {
  json out = json::array();
  for (const auto& [u, v] : edges) out.push_back(json::array({u, v}));
  return out;
}

inline json cyclic_json(const CyclicStructure& cyc) {
  json comps = json::array();
  for (std::size_t c = 0; c < cyc.components.size(); ++c) {
    json classes = json::array();
    for (long long k = 0; k < cyc.cyclicity[c]; ++k) {
      json members = json::array();
      for (int v : cyc.components[c])
        if (cyc.class_of[v] == k) members.push_back(v);
      classes.push_back(std::move(members));
    }
    comps.push_back({{"nodes", node_list(cyc.components[c])},
                     {"cyclicity", cyc.cyclicity[c]},
                     {"classes", std::move(classes)}});
  }
  return comps;
}

template <class F>
json expansion_json(const Expansion<F>& e, long long t, const std::vector<Matrix<F>>* fast) {
  json terms = json::array();
  const auto ev = evaluate(e, t);
  for (std::size_t mu = 0; mu < e.terms.size(); ++mu) {
    const auto& term = e.terms[mu];
    json item;
    item["lambda"] = to_json(term.lambda);
    item["nodes"] = node_list(term.triple.nodes());
    item["edges"] = edge_list(term.triple.subgraph.edges);
    item["gamma"] = term.triple.gamma;
    item["k_set"] = node_list(e.steps[mu].k_set);
    if (e.kind == ExpansionKind::ultimate) item["sigma"] = e.sigma[mu];
    item["product"] = to_json(fast ? (*fast)[mu] : csr_product(term.triple, t).matrix);
    item["scaled"] = to_json(ev.per_term[mu]);
    terms.push_back(std::move(item));
  }
  json out;
  out["kind"] = expansion_kind_name(e.kind);
  out["t"] = t;
  out["gamma"] = e.gamma;
  if (e.validity_threshold) out["validity_threshold"] = *e.validity_threshold;
  out["terms"] = std::move(terms);
  out["sum"] = to_json(ev.matrix);
  return out;
}

template <class F>
json orbit_report_json(const Matrix<F>& a, const OrbitReport& r) {
  const auto cs = component_means(a);
  json comps = json::array();
  for (std::size_t c = 0; c < cs.scc.size(); ++c)
    comps.push_back({{"nodes", node_list(cs.scc.components[c])},
                     {"trivial", static_cast<bool>(cs.scc.trivial[c])},
                     {"lambda", to_json(cs.lambda_of_component[c])}});
  json c1 = json::array(), c2 = json::array(), sv = json::array();
  for (const auto& [x, y] : r.condition1_violations) c1.push_back(json::array({x, y}));
  for (const auto& [x, y] : r.condition2_violations) c2.push_back(json::array({x, y}));
  for (const auto& v : r.support_violations)
    sv.push_back({{"mu", v.mu}, {"nu", v.nu}, {"i", v.i}, {"j", v.j}});
  json out;
  out["verdict"] = r.verdict;
  out["gamma_u"] = r.gamma_u;
  out["components"] = std::move(comps);
  out["condition1_violations"] = std::move(c1);
  out["condition2_violations"] = std::move(c2);
  out["support_violations"] = std::move(sv);
  if (cs.lambda.is_zero()) out["note"] = "acyclic: every orbit vanishes, verdict true by convention";
  return out;
}

/// Cross-checks of the production routes against the brute-force oracles.
template <class F>
json verify(const Matrix<F>& a, bool& all_pass) {
  const std::size_t n = a.size();
  if (n > oracle::oracle_cap())
    throw Error(Errc::too_large, "n = " + std::to_string(n) + " exceeds the oracle cap " +
                                     std::to_string(oracle::oracle_cap()));
  const double tol = field_traits<F>::exact ? 0.0 : env_tolerance();
  json checks = json::array();
  all_pass = true;
  auto record = [&](const std::string& name, bool pass) {
    checks.push_back({{"name", name}, {"pass", pass}});
    all_pass = all_pass && pass;
  };

  const auto means = component_means(a);
  if (means.lambda.is_zero()) {
    bool nilpotent = true;
    const auto p = mat_power(a, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) nilpotent = nilpotent && p(i, j).is_zero();
    record("acyclic input: A^n vanishes", nilpotent);
    record("orbit verdict matches access conditions",
           is_orbit_periodic(a).verdict == oracle::orbit_conditions(a));
    return checks;
  }

  const long long t_hi = std::min<long long>(60, 3LL * static_cast<long long>(n * n));
  const auto nacht = nachtigall_expand(a);
  const auto ult = ultimate_expand(a);
  const auto cs = critical_structure(a);
  const auto rec = oracle::make_record(nacht, ult);
  const auto table = oracle::enumerate_small(a, t_hi, rec, cs.critical_nodes);

  bool ok = true;
  Matrix<F> p = Matrix<F>::identity(n);
  for (long long t = 0; t <= t_hi; ++t) {
    if (t > 0) p = mat_mul(p, a);
    ok = ok && mat_eq(table.all[t], p, tol);
  }
  record("path DP equals matrix powers", ok);

  const long long t0 = 3LL * static_cast<long long>(n * n);
  ok = true;
  for (long long t = t0; t <= t0 + 2 * nacht.gamma; ++t)
    ok = ok && mat_eq(evaluate(nacht, t).matrix, mat_power(a, t), tol);
  record("Nachtigall expansion equals A^t on [3n², 3n²+2γ]", ok);

  ok = true;
  for (std::size_t mu = 0; mu < nacht.terms.size(); ++mu)
    for (long long t = 0; t <= t_hi; ++t) {
      const auto term = mat_scalar_mul(tpow(nacht.terms[mu].lambda, t),
                                       csr_product(nacht.terms[mu].triple, t).matrix);
      ok = ok && mat_leq(table.mu_heavy[mu][t], term);
    }
  record("μ-heavy path weights bounded by Nachtigall terms", ok);

  ok = true;
  for (std::size_t mu = 0; mu < ult.terms.size(); ++mu)
    for (long long t = 0; t <= t_hi; ++t) {
      const auto term = mat_scalar_mul(tpow(ult.terms[mu].lambda, t),
                                       csr_product(ult.terms[mu].triple, t).matrix);
      ok = ok && mat_leq(table.mu_hard[mu][t], term);
    }
  record("μ-hard path weights bounded by ultimate terms", ok);

  ok = true;
  for (std::size_t nu = 0; nu < ult.terms.size(); ++nu)
    for (long long t = 0; t < ult.gamma; ++t)
      ok = ok && mat_leq(csr_product(ult.terms[nu].triple, t).matrix,
                         csr_product(nacht.terms[ult.sigma[nu]].triple, t).matrix) &&
           nacht.terms[ult.sigma[nu]].triple.gamma % ult.terms[nu].triple.gamma == 0;
  record("ultimate terms below matched Nachtigall terms, cyclicities divide", ok);

  const auto thr = ultimate_threshold(a, ult, 10 * t0);
  ok = thr.has_value();
  if (thr)
    for (long long t = *thr; t <= *thr + 2 * ult.gamma; ++t)
      ok = ok && mat_eq(evaluate(ult, t).matrix, mat_power(a, t), tol);
  record("ultimate expansion equals A^t from its threshold", ok);

  ok = true;
  const auto fast = fast_terms(a, t0 + 1, ExpansionKind::nachtigall_canonical);
  for (std::size_t mu = 0; mu < fast.size(); ++mu)
    ok = ok && mat_eq(fast[mu].matrix, csr_product(nacht.terms[mu].triple, t0 + 1).matrix, tol);
  record("fast terms equal literal terms", ok);

  record("orbit verdict matches access conditions",
         is_orbit_periodic(a).verdict == oracle::orbit_conditions(a));
  return checks;
}

template <class F>
json run_engine(const Options& opt, const std::string& text) {
  const Semiring semiring = opt.semiring == "maxtimes" ? Semiring::maxtimes : Semiring::maxplus;
  const FileFormat format = opt.format == "json"    ? FileFormat::json
                            : opt.format == "plain" ? FileFormat::plain
                                                    : FileFormat::automatic;
  Matrix<F> a = parse_matrix<F>(text, semiring, format);
  const std::size_t n = a.size();
  const auto rule = opt.rule == "cycle" ? SelectionRule::single_cycle : SelectionRule::canonical;
  json r;

  if (opt.command == "power") {
    if (opt.t < 0) throw Error(Errc::precondition, "--t must be non-negative");
    r["t"] = opt.t;
    r["matrix"] = to_json(mat_power(a, static_cast<unsigned long long>(opt.t)));
  } else if (opt.command == "star") {
    r["matrix"] = to_json(kleene_star(a));
  } else if (opt.command == "lambda") {
    const auto cs = component_means(a);
    // Components listed by their smallest node.
    std::vector<std::size_t> order(cs.scc.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return cs.scc.components[x].front() < cs.scc.components[y].front();
    });
    json per = json::array(), comps = json::array();
    for (std::size_t c : order) {
      per.push_back(to_json(cs.lambda_of_component[c]));
      comps.push_back(node_list(cs.scc.components[c]));
    }
    r["lambda"] = to_json(cs.lambda);
    r["per_component"] = std::move(per);
    r["components"] = std::move(comps);
  } else if (opt.command == "critical") {
    const auto cs = critical_structure(a);
    r["lambda"] = to_json(cs.lambda);
    r["nodes"] = node_list(cs.critical_nodes);
    r["edges"] = edge_list(cs.critical_edges);
    r["gamma"] = cs.gamma_lcm();
  } else if (opt.command == "classes") {
    const auto cs = critical_structure(a);
    r["lambda"] = to_json(cs.lambda);
    r["gamma"] = cs.gamma_lcm();
    r["components"] = cyclic_json(cs.cyclic);
  } else if (opt.command == "csr") {
    if (opt.t < 0) throw Error(Errc::precondition, "--t must be non-negative");
    Matrix<F> d = a;
    if (opt.normalize) {
      const auto cs = critical_structure(a);
      d = mat_scalar_mul(Tropical<F>(-cs.lambda.value()), a);
      r["lambda"] = to_json(cs.lambda);
    }
    const auto tr = csr_build(d, rule);
    r["t"] = opt.t;
    r["rule"] = opt.rule;
    r["gamma"] = tr.gamma;
    r["nodes"] = node_list(tr.nodes());
    r["edges"] = edge_list(tr.subgraph.edges);
    r["c"] = to_json(tr.c);
    r["s"] = to_json(tr.s);
    r["r"] = to_json(tr.r);
    r["product"] = to_json(csr_product(tr, opt.t).matrix);
    r["group_law"] = csr_group_check(tr, opt.t, 1, field_traits<F>::exact ? 0.0 : env_tolerance());
  } else if (opt.command == "nachtigall" || opt.command == "ultimate") {
    if (opt.t < 0) throw Error(Errc::precondition, "--t must be non-negative");
    const bool ultimate = opt.command == "ultimate";
    const auto e = ultimate ? ultimate_expand(a) : nachtigall_expand(a, rule);
    std::vector<Matrix<F>> fast;
    if (opt.fast)
      for (auto& ft : fast_terms(a, opt.t, e.kind)) fast.push_back(std::move(ft.matrix));
    r["expansion"] = expansion_json(e, opt.t, opt.fast ? &fast : nullptr);
    if (!ultimate && opt.t < *e.validity_threshold)
      r["warning"] = "t is below 3n², the expansion may differ from A^t";
    r["matches_power"] = mat_eq(evaluate(e, opt.t).matrix, mat_power(a, opt.t),
                                field_traits<F>::exact ? 0.0 : env_tolerance());
  } else if (opt.command == "threshold") {
    const long long t_max = opt.t_max >= 0 ? opt.t_max : 30LL * static_cast<long long>(n * n);
    const auto e = ultimate_expand(a);
    const auto thr = ultimate_threshold(a, e, t_max);
    r["t_max"] = t_max;
    r["gamma_u"] = e.gamma;
    if (thr) {
      r["threshold"] = *thr;
    } else {
      r["threshold"] = nullptr;
      r["note"] = "exceeds t_max";
    }
  } else if (opt.command == "orbit-check") {
    r = orbit_report_json(a, is_orbit_periodic(a));
  } else if (opt.command == "orbit") {
    if (opt.y_file.empty()) throw Error(Errc::precondition, "--y is required");
    const auto y = parse_vector<F>(read_file(opt.y_file), semiring);
    const long long t_max = opt.t_max >= 1 ? opt.t_max : 6LL * static_cast<long long>(n * n);
    const auto trace = simulate_orbit(a, y, t_max);
    r["t_max"] = t_max;
    r["gamma_u"] = trace.gamma_u;
    r["period"] = trace.detected_period ? json(*trace.detected_period) : json(nullptr);
    r["transient"] = trace.transient ? json(*trace.transient) : json(nullptr);
    r["growth_rate"] = trace.growth_rate ? to_json(*trace.growth_rate) : json(nullptr);
    const auto report = is_orbit_periodic(a);
    r["orbit_periodic"] = report.verdict;
    if (report.verdict && std::any_of(y.begin(), y.end(), [](const auto& v) { return v.is_finite(); }))
      r["predicted_growth_rate"] = to_json(orbit_growth_rate(a, y));
    json samples = json::array();
    for (const auto& x : trace.samples) samples.push_back(to_json(x));
    r["samples"] = std::move(samples);
  } else if (opt.command == "verify") {
    bool all_pass = true;
    r["checks"] = verify(a, all_pass);
    r["all_pass"] = all_pass;
  }
  return r;
}

inline int error_exit(Errc code) {
  return code == Errc::parse || code == Errc::dimension ? kInputError : kPreconditionError;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Max-plus matrix powers through CSR expansions", "maxplus"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Describe every command");
  app.add_option("--format", opt.format, "Matrix file format")
      ->check(CLI::IsMember({"auto", "plain", "json"}));
  app.add_option("--semiring", opt.semiring, "Interpretation of the entries")
      ->check(CLI::IsMember({"maxplus", "maxtimes"}));
  app.add_option("--numeric", opt.numeric, "Arithmetic: exact rationals or doubles")
      ->check(CLI::IsMember({"exact", "double"}));
  app.add_flag("--timings", opt.timings, "Add wall-clock timings to the report");

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", opt.file, "Matrix file, or - for stdin")->required();
    return sub;
  };
  add("power", "A^t")->add_option("--t", opt.t, "Exponent")->required();
  add("star", "Kleene star A*");
  add("lambda", "Maximum cycle mean, overall and per component");
  add("critical", "Critical graph");
  add("classes", "Cyclic classes of the critical components");
  {
    auto* sub = add("csr", "CSR triple of a definite matrix and its product at t");
    sub->add_option("--t", opt.t, "Exponent")->required();
    sub->add_option("--rule", opt.rule, "Critical subgraph selection")
        ->check(CLI::IsMember({"canonical", "cycle"}));
    sub->add_flag("--normalize", opt.normalize, "Subtract λ first");
  }
  {
    auto* sub = add("nachtigall", "Nachtigall expansion evaluated at t");
    sub->add_option("--t", opt.t, "Exponent")->required();
    sub->add_option("--rule", opt.rule, "Critical subgraph selection")
        ->check(CLI::IsMember({"canonical", "cycle"}));
    sub->add_flag("--fast", opt.fast, "Compute the terms by squaring and rotation");
  }
  {
    auto* sub = add("ultimate", "Ultimate expansion evaluated at t");
    sub->add_option("--t", opt.t, "Exponent")->required();
    sub->add_flag("--fast", opt.fast, "Compute the terms by squaring and rotation");
  }
  add("threshold", "Exponent from which the ultimate expansion holds")
      ->add_option("--tmax", opt.t_max, "Search bound (default 30n²)");
  add("orbit-check", "Decide orbit periodicity");
  {
    auto* sub = add("orbit", "Simulate the orbit of a vector");
    sub->add_option("--y", opt.y_file, "Vector file")->required();
    sub->add_option("--tmax", opt.t_max, "Number of steps (default 6n²)");
  }
  add("verify", "Cross-check the engine against brute-force oracles (n ≤ 8)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  opt.command = app.get_subcommands().front()->get_name();

  json report;
  report["command"] = opt.command;
  std::string text;
  try {
    text = read_file(opt.file);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  report["input_digest"] = fnv1a_hex(text);
  const bool use_double = opt.numeric == "double" || opt.semiring == "maxtimes";
  report["semiring"] = opt.semiring;
  report["numeric"] = use_double ? "double" : "exact";

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    json body = use_double ? detail::run_engine<double>(opt, text)
                           : detail::run_engine<Rational>(opt, text);
    for (auto& [key, value] : body.items()) report[key] = value;
    if (opt.command == "verify" && !report["all_pass"].get<bool>()) code = kCheckFailed;
  } catch (const Error& e) {
    report["error"] = {{"kind", errc_name(e.code())}, {"message", e.what()}};
    err << e.what() << '\n';
    code = detail::error_exit(e.code());
  } catch (const std::overflow_error& e) {
    report["error"] = {{"kind", "overflow"}, {"message", e.what()}};
    err << "overflow: " << e.what() << '\n';
    code = kPreconditionError;
  }
  if (opt.timings) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    report["timings"] = {{"total_ms", std::stod(format_number(ms.count()))}};
  }
  out << report.dump(2) << '\n';
  return code;
}

}  // namespace maxplus::cli
