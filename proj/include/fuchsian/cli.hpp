#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "fuchsian/json_io.hpp"

namespace fuchsian::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;

struct RunConfig {
  std::string input;
  std::string alphas;
  std::string base;
  std::uint64_t seed = 1;
  double polish_tol = 1e-11;
  double dedupe_tol = 1e-6;
  double mono_tol = 1e-6;
  std::size_t series_T = 0;  // 0: max(60, 4d)
  bool json = false;
  bool pretty = false;
  bool normalize = false;
  unsigned workers = 0;

  void validate() const {
    if (!(polish_tol > 0.0) || !(dedupe_tol > 0.0) || !(mono_tol > 0.0))
      throw validation_error("bad_tolerance", "tolerances must be positive");
    if (series_T != 0 && series_T < 20) throw validation_error("bad_series_order", "--series-T must be at least 20");
  }

  SolveOptions solve_options() const {
    SolveOptions o;
    o.polish_tol = polish_tol;
    o.dedupe_tol = dedupe_tol;
    o.workers = workers;
    return o;
  }
};

inline Json read_input(const std::string& path) {
  if (path.empty()) throw validation_error("missing_input", "--input FILE is required");
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw validation_error("unreadable_input", "cannot open " + path);
    buf << in.rdbuf();
  }
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("malformed_json", e.what());
  }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw validation_error("bad_number", flag + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

inline bool is_sl(const Json& j) { return j.is_object() && j.contains("form") && j.at("form") == "sl"; }

/// An equation file, or the output of `solve` (every solved equation).
inline std::vector<EquationA> equations_from_input(const Json& j) {
  std::vector<EquationA> out;
  if (j.is_object() && j.contains("equations")) {
    for (const auto& e : j.at("equations")) out.push_back(equation_a_from_json(e));
    if (out.empty()) throw validation_error("no_equations", "input lists no equations");
    return out;
  }
  out.push_back(equation_a_from_json(j));
  return out;
}

inline Json cmd_check_angles(const RunConfig& cfg) {
  std::vector<double> a = cfg.alphas.empty() ? angle_data_from_json(read_input(cfg.input)).angles : parse_list(cfg.alphas, "--alphas");
  if (a.size() < 3) throw validation_error("too_few_points", "need at least three angles");
  const long sigma = sigma_of(a);
  long bound = 1;
  for (std::size_t j = 3; j < a.size(); ++j) bound *= std::lround(a[j]);
  Json j;
  j["angles"] = a;
  j["sigma"] = sigma;
  j["coaxial_ok"] = coaxial_check(a[0], a[1], a[2]);
  j["cond_lhs"] = cond_value(a[0], a[1], a[2], sigma);
  j["cond"] = cond_check(a[0], a[1], a[2], sigma);
  j["bound"] = bound;
  return j;
}

inline Json cmd_solve(const RunConfig& cfg) {
  const Json in = read_input(cfg.input);
  Json j;
  if (is_sl(in)) {
    const auto sl = equation_sl_from_json(in);
    j["input"] = to_json(sl);
    j["report"] = to_json(solve_total_degree(build_system(sl.points, sl.exps), cfg.seed, cfg.solve_options()));
    return j;
  }
  const EquationA sk = equation_a_from_json(in);
  const auto solved = solve_equation_a(sk, cfg.seed, cfg.solve_options());
  EquationA shown = sk;
  shown.accessory.assign(sk.k(), 0.0);
  j["input"] = to_json(shown);
  j["regular_point"] = to_json(solved.form.regular_point);
  j["report"] = to_json(solved.report);
  Json eqs = Json::array();
  for (const auto& e : solved.equations) eqs.push_back(to_json(e));
  j["equations"] = eqs;
  return j;
}

inline Json cmd_klein(const RunConfig& cfg) {
  const auto eqs = equations_from_input(read_input(cfg.input));
  Json results = Json::array();
  for (const auto& eq : eqs) results.push_back(to_json(klein_construct(eq)));
  Json j;
  j["results"] = results;
  return j;
}

inline Json cmd_verify(const RunConfig& cfg, bool& ok) {
  const auto eqs = equations_from_input(read_input(cfg.input));
  std::vector<Json> results(eqs.size());
  std::vector<char> good(eqs.size(), 0);
  const unsigned workers = resolve_workers(cfg.workers);
  // one equation per task; loops inside each stay sequential
  parallel_for(eqs.size(), workers, [&](std::size_t i) {
    const EquationA& eq = eqs[i];
    const auto kd = klein_construct(eq);
    const std::size_t T = cfg.series_T ? cfg.series_T : default_series_order(eq);
    const auto [f1, f2] = klein_solutions(kd, T);
    const double r1 = equation_residual(eq, f1), r2 = equation_residual(eq, f2);
    const auto cmp = compare_with_hypergeometric(kd, std::max<std::size_t>(240, T));
    double apparent = 0.0;
    for (double d : cmp.apparent_defects) apparent = std::max(apparent, d);
    const bool match = cmp.max_distance < cfg.mono_tol && apparent < 0.1 * cfg.mono_tol;
    Json r;
    r["equation"] = to_json(eq);
    r["series_T"] = T;
    r["Q"] = to_json(kd.Q);
    r["Q_degree"] = kd.Q.degree();
    r["d"] = eq.degree_d();
    r["residual_f1"] = r1;
    r["residual_f2"] = r2;
    r["monodromy"] = to_json(cmp);
    r["monodromy_match"] = match;
    const bool this_ok = r1 < 1e-8 && r2 < 1e-8 && match && kd.Q.degree() == eq.degree_d();
    r["ok"] = this_ok;
    results[i] = r;
    good[i] = this_ok;
  });
  ok = std::all_of(good.begin(), good.end(), [](char g) { return g != 0; });
  Json j;
  j["results"] = results;
  j["ok"] = ok;
  return j;
}

inline Complex parse_base(const std::string& s) {
  const auto v = parse_list(s, "--base");
  if (v.size() != 2) throw validation_error("bad_base", "--base takes re,im");
  return {v[0], v[1]};
}

inline Json cmd_monodromy(const RunConfig& cfg) {
  const Json in = read_input(cfg.input);
  TransportOptions opt;
  const unsigned workers = resolve_workers(cfg.workers);
  Json j;
  MonodromyRep rep;
  if (is_sl(in)) {
    const auto sl = equation_sl_from_json(in);
    const Complex base = cfg.base.empty() ? default_base_point(sl.points) : parse_base(cfg.base);
    rep = monodromy_rep(sl, base, opt, workers);
    j["input"] = to_json(sl);
  } else {
    const auto eqs = equations_from_input(in);
    if (eqs.size() != 1) throw validation_error("one_equation", "monodromy takes a single equation");
    const auto sing = eqs[0].singular_points();
    const Complex base = cfg.base.empty() ? default_base_point(sing) : parse_base(cfg.base);
    rep = monodromy_rep(eqs[0], base, opt, workers);
    j["input"] = to_json(eqs[0]);
  }
  if (cfg.normalize) rep = det_normalized(rep);
  j["monodromy"] = to_json(rep);
  return j;
}

inline Json tableaux_probe(const std::vector<double>& a) {
  std::vector<long> v;
  for (double x : a) {
    if (!near_int(x) || x < 1.0) throw validation_error("non_integer_angle", "tableaux probes need positive integer angles");
    v.push_back(std::lround(x));
  }
  long prod = 1;
  for (std::size_t j = 2; j + 1 < v.size(); ++j) prod *= v[j];
  Json j;
  j["angles"] = v;
  j["tableaux_count"] = tableaux_count(v);
  j["product"] = prod;
  j["conditions"] = tableaux_conditions(v);
  j["room_conditions"] = tableaux_room_conditions(v);
  return j;
}

/// Default layout when no positions are given: 0, 1, infinity, then points drawn from the seed.
inline std::vector<ExtPoint> default_positions(std::size_t n, std::uint64_t seed) {
  std::vector<ExtPoint> out{{0.0, false}, {1.0, false}, ExtPoint::at_infinity()};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(1.5, 3.0), angle(-pi, pi);
  while (out.size() < n) {
    const Complex z = std::polar(radius(rng), angle(rng));
    bool ok = std::abs(z - 1.0) > 0.5;
    for (std::size_t i = 3; i < out.size(); ++i) ok = ok && std::abs(z - out[i].z) > 0.5;
    if (ok) out.push_back({z, false});
  }
  return out;
}

inline Json cmd_count(const RunConfig& cfg) {
  AngleData data;
  if (!cfg.alphas.empty()) data.angles = parse_list(cfg.alphas, "--alphas");
  else data = angle_data_from_json(read_input(cfg.input));
  if (data.angles.size() >= 3 && std::all_of(data.angles.begin(), data.angles.end(), [](double x) { return near_int(x); })) {
    Json j;
    j["tableaux"] = tableaux_probe(data.angles);
    return j;
  }
  if (data.positions.empty()) data.positions = default_positions(data.angles.size(), cfg.seed);
  MetricOptions opt;
  opt.seed = cfg.seed;
  opt.solve = cfg.solve_options();
  opt.mono_tol = cfg.mono_tol;
  Json j = to_json(count_metrics(data, opt));
  Json pos = Json::array();
  for (const auto& p : data.positions) pos.push_back(to_json(p));
  j["positions"] = pos;
  return j;
}

inline void emit(std::ostream& out, const Json& j, const RunConfig& cfg) {
  out << (cfg.pretty ? j.dump(2) : j.dump()) << '\n';
}

inline int report_error(std::ostream& out, std::ostream& err, const RunConfig& cfg, const std::string& kind,
                        const std::string& code, const std::string& message, int status) {
  err << "error [" << code << "]: " << message << '\n';
  Json j;
  j["error"] = {{"kind", kind}, {"code", code}, {"message", message}, {"exit_code", status}};
  emit(out, j, cfg);
  return status;
}

/// Entry point; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Fuchsian equations with apparent singularities"};
  app.require_subcommand(1);
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "input JSON file ('-' for stdin)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--tol", cfg.polish_tol, "Newton polish tolerance");
    sub->add_option("--dedupe", cfg.dedupe_tol, "relative distance below which solutions merge");
    sub->add_option("--mono-tol", cfg.mono_tol, "monodromy comparison tolerance");
    sub->add_option("--series-T", cfg.series_T, "series truncation order (0: automatic)");
    sub->add_option("--workers", cfg.workers, "worker threads (0: FUCHSIAN_WORKERS or hardware)");
    sub->add_flag("--json", cfg.json, "compact JSON output (default)");
    sub->add_flag("--pretty", cfg.pretty, "indented JSON output");
  };
  auto* check = app.add_subcommand("check-angles", "coaxial and existence conditions for cone angles");
  auto* solve = app.add_subcommand("solve", "all apparent equations for a skeleton by homotopy continuation");
  auto* klein = app.add_subcommand("klein", "Klein operator Q and the exponential-polynomial data");
  auto* verify = app.add_subcommand("verify", "series residuals and monodromy against the hypergeometric target");
  auto* mono = app.add_subcommand("monodromy", "monodromy matrices by transport along loops");
  auto* count = app.add_subcommand("count", "count metrics for cone angles and positions");
  for (auto* s : {check, solve, klein, verify, mono, count}) common(s);
  check->add_option("--alphas", cfg.alphas, "comma-separated angles");
  count->add_option("--alphas", cfg.alphas, "comma-separated angles");
  mono->add_option("--base", cfg.base, "base point re,im");
  mono->add_flag("--normalize", cfg.normalize, "scale matrices to determinant one");

  std::vector<std::string> argv_store{"fuchsian"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    return report_error(out, err, cfg, "validation", "bad_arguments", e.what(), exit_validation);
  }

  try {
    cfg.validate();
    Json result;
    bool ok = true;
    if (check->parsed()) result = cmd_check_angles(cfg);
    else if (solve->parsed()) result = cmd_solve(cfg);
    else if (klein->parsed()) result = cmd_klein(cfg);
    else if (verify->parsed()) result = cmd_verify(cfg, ok);
    else if (mono->parsed()) result = cmd_monodromy(cfg);
    else result = cmd_count(cfg);
    emit(out, result, cfg);
    if (!ok) {
      err << "error [verification_failed]: at least one check exceeded its tolerance\n";
      return exit_numerical;
    }
    return exit_ok;
  } catch (const Error& e) {
    const bool validation = e.kind() == ErrorKind::validation;
    return report_error(out, err, cfg, validation ? "validation" : "numerical", e.code(), e.what(),
                        validation ? exit_validation : exit_numerical);
  } catch (const nlohmann::json::exception& e) {
    return report_error(out, err, cfg, "validation", "malformed_input", e.what(), exit_validation);
  } catch (const std::exception& e) {
    return report_error(out, err, cfg, "numerical", "internal", e.what(), exit_numerical);
  }
}

}  // namespace fuchsian::cli
