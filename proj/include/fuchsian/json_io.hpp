#pragma once

#include <json.hpp>

#include "fuchsian/metrics.hpp"

namespace fuchsian {

using Json = nlohmann::ordered_json;

// complex numbers travel as [re, im]; a bare number is accepted on input

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(to_json(z));
  return out;
}

/// Coefficients, lowest degree first.
inline Json to_json(const Polynomial& p) { return to_json(p.coeffs()); }

/// Row-major nested rows of [re, im] pairs.
inline Json to_json(const Matrix2& m) {
  return Json::array({Json::array({to_json(m(0, 0)), to_json(m(0, 1))}), Json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline Complex complex_from_json(const Json& j, const std::string& field) {
  Complex z;
  if (j.is_number()) {
    z = Complex(j.get<double>(), 0.0);
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    z = Complex(j[0].get<double>(), j[1].get<double>());
  } else {
    throw validation_error("bad_complex", "field '" + field + "' must be a number or an [re, im] pair");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw validation_error("non_finite", "field '" + field + "' is not finite");
  return z;
}

inline ComplexVector complex_vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw validation_error("bad_array", "field '" + field + "' must be an array");
  ComplexVector out;
  for (const auto& e : j) out.push_back(complex_from_json(e, field));
  return out;
}

inline const Json& require(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw validation_error("missing_field", "missing field '" + key + "'");
  return j.at(key);
}

inline std::vector<int> int_vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw validation_error("bad_array", "field '" + field + "' must be an array");
  std::vector<int> out;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw validation_error("bad_integer", "field '" + field + "' must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

// ---- equations

inline Json to_json(const EquationA& eq) {
  Json j;
  j["alpha"] = to_json(eq.alpha);
  j["beta"] = to_json(eq.beta);
  j["gamma"] = to_json(eq.gamma);
  j["delta"] = to_json(eq.delta);
  j["points"] = to_json(eq.points);
  j["mults"] = eq.mults;
  j["accessory"] = to_json(eq.accessory);
  j["generic_0d"] = eq.generic_0d;
  return j;
}

/// Either gamma and delta (checked against the Fuchs relation) or gamma_minus_delta.
/// A missing accessory array means zeros, which is what the solver expects.
inline EquationA equation_a_from_json(const Json& j) {
  const Complex alpha = complex_from_json(require(j, "alpha"), "alpha");
  const Complex beta = complex_from_json(require(j, "beta"), "beta");
  const ComplexVector points = j.contains("points") ? complex_vector_from_json(j.at("points"), "points") : ComplexVector{};
  const std::vector<int> mults = j.contains("mults") ? int_vector_from_json(j.at("mults"), "mults") : std::vector<int>{};
  ComplexVector accessory = j.contains("accessory") ? complex_vector_from_json(j.at("accessory"), "accessory") : ComplexVector{};
  if (j.contains("gamma") && j.contains("delta"))
    return make_equation_a(alpha, beta, complex_from_json(j.at("gamma"), "gamma"), complex_from_json(j.at("delta"), "delta"),
                           points, mults, accessory.empty() ? ComplexVector(points.size(), 0.0) : accessory);
  return build_equation_a(alpha, beta, complex_from_json(require(j, "gamma_minus_delta"), "gamma_minus_delta"), points, mults,
                          accessory);
}

inline Json to_json(const EquationSL& eq) {
  Json j;
  j["form"] = "sl";
  j["points"] = to_json(eq.points);
  j["exps"] = to_json(eq.exps);
  j["residues"] = to_json(eq.residues);
  return j;
}

inline EquationSL equation_sl_from_json(const Json& j) {
  EquationSL eq;
  eq.points = complex_vector_from_json(require(j, "points"), "points");
  eq.exps = complex_vector_from_json(require(j, "exps"), "exps");
  eq.residues = complex_vector_from_json(require(j, "residues"), "residues");
  if (eq.exps.size() != eq.points.size() || eq.residues.size() != eq.points.size())
    throw validation_error("size_mismatch", "points, exps and residues must have equal length");
  if (eq.points.size() > 1 && min_pairwise_distance(eq.points) <= 1e-12)
    throw validation_error("duplicate_point", "points must be distinct");
  return eq;
}

inline Json to_json(const HGEquation& hg) {
  Json j;
  j["a0"] = to_json(hg.a0);
  j["a1"] = to_json(hg.a1);
  j["g"] = to_json(hg.g);
  j["de"] = to_json(hg.de);
  return j;
}

// ---- solver

inline Json to_json(const SolveReport& r) {
  Json j;
  j["seed"] = r.seed;
  j["twist"] = to_json(r.twist);
  j["start_constants"] = to_json(r.start_constants);
  j["points"] = to_json(r.points);
  j["exps"] = to_json(r.exps);
  j["degrees"] = r.degrees;
  j["bezout_bound"] = r.bezout_bound;
  j["paths_tracked"] = r.paths_tracked;
  j["paths_converged"] = r.paths_converged;
  j["paths_diverged"] = r.paths_diverged;
  j["paths_failed"] = r.paths_failed;
  j["dedupe_tol"] = r.dedupe_tol;
  j["polish_tol"] = r.polish_tol;
  Json paths = Json::array();
  for (const auto& p : r.paths) {
    Json e;
    e["index"] = p.index;
    e["status"] = to_string(p.status);
    e["final_s"] = p.final_s;
    e["steps"] = p.steps;
    e["attempts"] = p.attempts;
    e["start"] = to_json(p.start);
    e["endpoint"] = to_json(p.endpoint);
    e["residual"] = std::isfinite(p.residual) ? Json(p.residual) : Json(nullptr);
    paths.push_back(e);
  }
  j["paths"] = paths;
  Json sols = Json::array();
  for (const auto& s : r.solutions) {
    Json e;
    e["beta_free"] = to_json(s.beta_free);
    e["residues"] = to_json(s.residues);
    if (!s.accessory.empty()) e["accessory"] = to_json(s.accessory);
    e["max_residual"] = s.max_residual;
    e["multiplicity"] = s.multiplicity;
    e["singular"] = s.singular;
    e["condition"] = std::isfinite(s.condition) ? Json(s.condition) : Json(nullptr);
    sols.push_back(e);
  }
  j["solutions"] = sols;
  j["warnings"] = r.warnings;
  return j;
}

// ---- Klein

inline Json to_json(const KleinData& kd) {
  Json j;
  j["source"] = to_json(kd.source);
  j["target"] = to_json(kd.target);
  Json ps = Json::array();
  for (const auto& p : kd.ps) ps.push_back(to_json(p));
  j["p"] = ps;
  j["Q"] = to_json(kd.Q);
  j["Q_degree"] = kd.Q.degree();
  j["d"] = kd.source.degree_d();
  j["kernel_dimensions"] = kd.kernel_dimensions;
  return j;
}

// ---- monodromy

inline Json to_json(const MonodromyRep& rep) {
  Json j;
  j["base_point"] = to_json(rep.base_point);
  j["singular_points"] = to_json(rep.singular);
  j["det_normalized"] = rep.det_normalized;
  Json loops = Json::array();
  for (std::size_t i = 0; i < rep.loops.size(); ++i) {
    Json e;
    e["target"] = rep.loops[i].target;
    e["center"] = to_json(rep.loops[i].center);
    e["radius"] = rep.loops[i].radius;
    e["matrix"] = to_json(rep.matrices[i]);
    e["trace"] = to_json(rep.matrices[i].trace());
    e["det"] = to_json(rep.matrices[i].determinant());
    loops.push_back(e);
  }
  j["loops"] = loops;
  j["loop_product"] = to_json(rep.loop_product());
  return j;
}

inline Json to_json(const HypergeometricComparison& c) {
  Json j;
  j["base_point"] = to_json(c.base_point);
  Json loops = Json::array();
  for (std::size_t i = 0; i < c.loops.size(); ++i) {
    Json e;
    e["target"] = c.loops[i].target;
    e["main"] = to_json(c.main[i]);
    e["hypergeometric"] = to_json(c.target[i]);
    e["projective_distance"] = c.distances[i];
    loops.push_back(e);
  }
  j["loops"] = loops;
  j["apparent_defects"] = c.apparent_defects;
  j["max_distance"] = c.max_distance;
  return j;
}

// ---- metrics

inline Json to_json(const ExtPoint& p) { return p.infinite ? Json("inf") : to_json(p.z); }

inline ExtPoint ext_point_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return ExtPoint::at_infinity();
    throw validation_error("bad_point", "the only string position accepted is \"inf\"");
  }
  return {complex_from_json(j, "positions"), false};
}

inline AngleData angle_data_from_json(const Json& j) {
  AngleData d;
  const Json& a = require(j, "angles");
  if (!a.is_array()) throw validation_error("bad_array", "field 'angles' must be an array");
  for (const auto& x : a) {
    if (!x.is_number()) throw validation_error("bad_number", "angles must be numbers");
    d.angles.push_back(x.get<double>());
  }
  if (j.contains("positions")) {
    const Json& p = j.at("positions");
    if (!p.is_array()) throw validation_error("bad_array", "field 'positions' must be an array");
    for (const auto& x : p) d.positions.push_back(ext_point_from_json(x));
  }
  return d;
}

inline Json to_json(const TraceData& t) {
  Json j;
  j["traces"] = t.traces;
  j["trace_imag_defect"] = t.imag_defect;
  j["trace_value"] = t.test.value;
  j["unitarizable"] = t.test.unitarizable;
  j["traces_in_range"] = t.test.in_range;
  j["boundary"] = t.test.boundary;
  j["product_sign"] = t.product_sign;
  j["product_defect"] = t.product_defect;
  j["apparent_defect"] = t.apparent_defect;
  return j;
}

inline Json to_json(const MetricReport& r) {
  Json j;
  j["angles"] = r.angles;
  j["sigma"] = r.sigma;
  j["coaxial_ok"] = r.coaxial_ok;
  j["cond_lhs"] = r.cond_lhs;
  j["cond"] = r.cond;
  j["bound"] = r.bound;
  j["verified"] = r.verified;
  Json m;
  m["a"] = to_json(r.normalized.map.a);
  m["b"] = to_json(r.normalized.map.b);
  m["c"] = to_json(r.normalized.map.c);
  m["d"] = to_json(r.normalized.map.d);
  j["mobius"] = m;
  j["skeleton"] = to_json(r.normalized.skeleton);
  if (r.solve) {
    j["paths_tracked"] = r.solve->paths_tracked;
    j["paths_converged"] = r.solve->paths_converged;
    j["bezout_bound"] = r.solve->bezout_bound;
  }
  Json sols = Json::array();
  for (const auto& s : r.solutions) {
    Json e;
    e["accessory"] = to_json(s.accessory);
    e["residual"] = s.residual;
    e["apparent"] = s.apparent;
    e["singular"] = s.singular;
    e["verified"] = s.verified;
    e["monodromy"] = to_json(s.traces);
    sols.push_back(e);
  }
  j["solutions"] = sols;
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace fuchsian
