#pragma once

/**
 * @file
 * @brief JSON model files and JSON records for certificates, GO verdicts and existence results.
 *
 * Model file layout (indices 1-based, numbers as JSON numbers or "p/q" strings):
 *
 *     { "name": "...", "dim": n, "labels": [...],
 *       "constants": [[i, j, k, num, den], ...],
 *       "k_basis": [[...]], "m_basis": [[...]], "delta_basis": [[...]], "metric": [[...]],
 *       "grading": [[[...]], ...], "representation": [[[...]], ...], "delta_complement": [[...]],
 *       "casimirs": ["p1^2 + p2^2", ...], "facts": {"key": "value"},
 *       "kappa": x, "axis": [...], "isotropy_connected": true }
 *
 * Constants are taken literally: [i, j, k, a, b] sets the e_k coefficient of
 * [e_i, e_j] to a/b, and the (j, i) entry must be listed as well.
 */

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsr/existence.hpp"
#include "hsr/go_analysis.hpp"
#include "hsr/homogeneity.hpp"
#include "hsr/models.hpp"

namespace hsr {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable model file.
class SpecFormatError : public Error
{
public:
  using Error::Error;
};

namespace detail {

inline Rational json_rational(const Json & v, const std::string & where)
{
  try {
    if (v.is_number_integer()) { return Rational(static_cast<long>(v.get<long long>())); }
    if (v.is_number()) { return from_double(v.get<double>()); }
    if (v.is_string()) { return parse_rational(v.get<std::string>()); }
  } catch (const ExactError & e) {
    throw SpecFormatError(where + ": " + e.what());
  }
  throw SpecFormatError(where + ": expected a number");
}

inline QVector json_vector(const Json & v, std::size_t n, const std::string & where)
{
  if (!v.is_array() || v.size() != n) { throw SpecFormatError(where + ": expected an array of length " + std::to_string(n)); }
  QVector out(n);
  for (std::size_t i = 0; i < n; ++i) { out[i] = json_rational(v[i], where); }
  return out;
}

inline std::vector<QVector> json_vectors(const Json & v, std::size_t n, const std::string & where)
{
  if (!v.is_array()) { throw SpecFormatError(where + ": expected an array of vectors"); }
  std::vector<QVector> out;
  for (const auto & row : v) { out.push_back(json_vector(row, n, where)); }
  return out;
}

inline QMatrix json_matrix(const Json & v, const std::string & where)
{
  if (!v.is_array() || v.empty()) { throw SpecFormatError(where + ": expected a nonempty matrix"); }
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  return QMatrix::from_rows(json_vectors(v, cols, where), cols);
}

inline Json rational_json(const Rational & q)
{
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) { return Json(q.get_num().get_si()); }
  return Json(q.get_str());
}

inline Json vector_json(const QVector & v)
{
  Json a = Json::array();
  for (const auto & x : v) { a.push_back(rational_json(x)); }
  return a;
}

inline Json vectors_json(const std::vector<QVector> & vs)
{
  Json a = Json::array();
  for (const auto & v : vs) { a.push_back(vector_json(v)); }
  return a;
}

inline Json matrix_json(const QMatrix & m)
{
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) { a.push_back(vector_json(m.row(i))); }
  return a;
}

inline Json eigen_json(const Eigen::VectorXd & v)
{
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) { a.push_back(v[i]); }
  return a;
}

}  // namespace detail

/// Builds a model from its JSON form; structural failures surface as StructureError or DimensionError.
inline ModelSpec model_from_json(const Json & j)
{
  using namespace detail;
  if (!j.is_object()) { throw SpecFormatError("model file must hold a JSON object"); }
  for (const char * key : {"dim", "constants", "m_basis", "delta_basis", "metric"}) {
    if (!j.contains(key)) { throw SpecFormatError(std::string("missing field \"") + key + "\""); }
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) { throw SpecFormatError("dim must be a positive integer"); }
  const auto n = static_cast<std::size_t>(j["dim"].get<long long>());

  std::vector<LieAlgebra::Constant> cs;
  for (const auto & c : j["constants"]) {
    if (!c.is_array() || c.size() != 5) { throw SpecFormatError("constants entries must be [i, j, k, num, den]"); }
    for (std::size_t t = 0; t < 3; ++t) {
      if (!c[t].is_number_integer() || c[t].get<long long>() < 1 || static_cast<std::size_t>(c[t].get<long long>()) > n) {
        throw SpecFormatError("constant index out of range 1.." + std::to_string(n));
      }
    }
    const Rational den = json_rational(c[4], "constants");
    if (sgn(den) == 0) { throw SpecFormatError("constant with zero denominator"); }
    cs.push_back({static_cast<std::size_t>(c[0].get<long long>() - 1), static_cast<std::size_t>(c[1].get<long long>() - 1),
      static_cast<std::size_t>(c[2].get<long long>() - 1), json_rational(c[3], "constants") / den});
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) { labels = j["labels"].get<std::vector<std::string>>(); }
  LieAlgebra g(n, cs, labels);

  const auto kb = j.contains("k_basis") ? json_vectors(j["k_basis"], n, "k_basis") : std::vector<QVector>{};
  const Subspace k = Subspace::from_basis(kb, n);
  const Subspace m = Subspace::from_basis(json_vectors(j["m_basis"], n, "m_basis"), n);
  const Subspace d = Subspace::from_basis(json_vectors(j["delta_basis"], n, "delta_basis"), n);
  const QMatrix metric = json_matrix(j["metric"], "metric");

  std::vector<Subspace> grading;
  if (j.contains("grading")) {
    for (const auto & layer : j["grading"]) { grading.push_back(Subspace::from_basis(json_vectors(layer, n, "grading"), n)); }
  }
  std::vector<QMatrix> rep;
  if (j.contains("representation")) {
    for (const auto & mat : j["representation"]) { rep.push_back(json_matrix(mat, "representation")); }
  }
  std::optional<Subspace> dc;
  if (j.contains("delta_complement")) { dc = Subspace::from_basis(json_vectors(j["delta_complement"], n, "delta_complement"), n); }

  ModelSpec spec{j.value("name", std::string("custom")), HomogeneousStructure(g, k, m, d, metric, grading, rep, dc)};
  if (j.contains("casimirs")) {
    std::vector<std::string> texts;
    for (const auto & c : j["casimirs"]) {
      if (!c.is_string()) { throw SpecFormatError("casimirs must be polynomial strings"); }
      texts.push_back(c.get<std::string>());
    }
    try {
      detail::add_casimirs(spec, texts);
    } catch (const ExactError & e) {
      throw SpecFormatError(std::string("casimir: ") + e.what());
    }
  }
  if (j.contains("facts")) {
    for (const auto & [key, value] : j["facts"].items()) { spec.facts.push_back({key, value.is_string() ? value.get<std::string>() : value.dump()}); }
  }
  if (j.contains("kappa")) { spec.kappa = j["kappa"].get<double>(); }
  if (j.contains("axis")) { spec.axis = json_vector(j["axis"], n, "axis"); }
  spec.isotropy_connected = j.value("isotropy_connected", true);
  spec.notes              = j.value("notes", std::string());
  return spec;
}

inline Json model_to_json(const ModelSpec & spec)
{
  using namespace detail;
  const auto & s = spec.structure;
  const auto & g = s.algebra();
  Json j;
  j["name"]   = spec.name;
  j["dim"]    = g.dim();
  j["labels"] = g.labels();
  Json cs     = Json::array();
  for (const auto & c : g.constants()) {
    cs.push_back(Json::array({c.i + 1, c.j + 1, c.k + 1, rational_json(Rational(c.value.get_num())), rational_json(Rational(c.value.get_den()))}));
  }
  j["constants"]   = cs;
  j["k_basis"]     = vectors_json(s.isotropy().basis());
  j["m_basis"]     = vectors_json(s.complement().basis());
  j["delta_basis"] = vectors_json(s.distribution().basis());
  j["metric"]      = matrix_json(s.metric());
  if (!s.grading().empty()) {
    Json gr = Json::array();
    for (const auto & l : s.grading()) { gr.push_back(vectors_json(l.basis())); }
    j["grading"] = gr;
  }
  if (!s.representation().empty()) {
    Json rp = Json::array();
    for (const auto & m : s.representation()) { rp.push_back(matrix_json(m)); }
    j["representation"] = rp;
  }
  if (s.delta_complement()) { j["delta_complement"] = vectors_json(s.delta_complement()->basis()); }
  if (!spec.casimirs.empty()) {
    Json c = Json::array();
    for (const auto & f : spec.casimirs) { c.push_back(f.to_string()); }
    j["casimirs"] = c;
  }
  if (!spec.facts.empty()) {
    Json f = Json::object();
    for (const auto & fact : spec.facts) { f[fact.key] = fact.value; }
    j["facts"] = f;
  }
  if (spec.kappa) { j["kappa"] = *spec.kappa; }
  if (spec.axis) { j["axis"] = vector_json(*spec.axis); }
  j["isotropy_connected"] = spec.isotropy_connected;
  if (!spec.notes.empty()) { j["notes"] = spec.notes; }
  return j;
}

inline ModelSpec load_model_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) { throw SpecFormatError("cannot read model file " + path); }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception & e) {
    throw SpecFormatError("malformed JSON in " + path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const Json::exception & e) {
    throw SpecFormatError("bad field in " + path + ": " + e.what());
  }
}

/// Bundled name, or a path to a JSON model file (anything containing '/' or ending in .json).
inline ModelSpec resolve_model(const std::string & ref)
{
  const bool is_path = ref.find('/') != std::string::npos || (ref.size() > 5 && ref.compare(ref.size() - 5, 5, ".json") == 0);
  if (is_path) { return load_model_file(ref); }
  return load_model(ref);
}

inline Json certificate_json(const HomogeneityCertificate & c)
{
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["witness"] = c.witness ? detail::eigen_json(*c.witness) : Json(nullptr);
  j["residual"]    = c.residual;
  j["threshold"]   = c.threshold;
  j["exact_retry"] = c.exact_retry;
  return j;
}

inline Json scan_json(const ScanSummary & s)
{
  Json j;
  j["samples"]      = s.samples;
  j["homogeneous"]  = s.homogeneous;
  j["inconclusive"] = s.inconclusive;
  j["fraction"]     = s.fraction();
  Json ce           = Json::array();
  for (const auto & c : s.counterexamples) {
    ce.push_back({{"index", c.index}, {"momentum", detail::eigen_json(c.momentum)}, {"residual", c.residual}});
  }
  j["counterexamples"] = ce;
  return j;
}

inline Json go_verdict_json(const GoVerdict & v)
{
  Json j;
  j["status"]             = to_string(v.status);
  j["degree_cap"]         = v.degree_cap;
  j["isotropy_connected"] = v.isotropy_connected;
  Json b;
  b["invariants_checked"] = v.brackets.invariants_checked;
  b["all_vanish"]         = v.brackets.all_vanish();
  Json f                  = Json::array();
  for (const auto & fl : v.brackets.failures) { f.push_back({{"invariant", fl.invariant.to_string("y")}, {"bracket", fl.bracket.to_string("y")}}); }
  b["failures"]  = f;
  j["brackets"]  = b;
  if (v.skew) {
    Json s;
    s["complement_source"] = v.skew->complement_source;
    s["complement_dim"]    = v.skew->complement_dim;
    s["carnot"]            = v.skew->carnot;
    s["step"]              = v.skew->step;
    s["skew_holds"]        = v.skew->skew_holds();
    s["max_asymmetry"]     = v.skew->max_asymmetry();
    s["refutes_go"]        = v.skew->refutes_go();
    Json e                 = Json::array();
    for (const auto & en : v.skew->entries) {
      e.push_back({{"delta_index", en.delta_index + 1}, {"asymmetry", en.asymmetry}, {"skew", en.skew}, {"nilpotent", en.nilpotent}});
    }
    s["entries"] = e;
    j["skew"]    = s;
  } else {
    j["skew"] = nullptr;
  }
  j["scan"]             = scan_json(v.scan);
  j["witness_vector"]   = v.witness_vector ? detail::eigen_json(*v.witness_vector) : Json(nullptr);
  j["witness_momentum"] = v.witness_momentum ? detail::eigen_json(*v.witness_momentum) : Json(nullptr);
  return j;
}

inline Json existence_json(const HomogeneousStructure & s, const ExistenceResult & r)
{
  using namespace detail;
  Json j;
  j["route"]           = to_string(r.route);
  j["momentum"]        = eigen_json(r.momentum);
  j["geodesic_vector"] = eigen_json(r.geodesic_vector);
  j["hamiltonian"]     = hamiltonian_value(s, r.momentum);
  j["certificate"]     = certificate_json(r.certificate);
  Json a;
  Json ideals = Json::array();
  for (const auto & i : r.audit.factored_ideals) { ideals.push_back(vectors_json(i.basis())); }
  a["factored_ideals"] = ideals;
  a["final_killing_kernel"] = vectors_json(r.audit.final_kernel.basis());
  a["reduced_dim"]          = r.audit.reduced ? r.audit.reduced->dim() : 0;
  a["pullback"]             = matrix_json(r.audit.pullback);
  a["solvable_step"]        = r.audit.solvable_step;
  if (r.audit.eigen) {
    const auto & e = *r.audit.eigen;
    Json ej;
    ej["gamma"]           = vectors_json(e.gamma.basis());
    ej["extended_metric"] = matrix_json(e.extended_metric);
    ej["killing"]         = matrix_json(e.killing);
    ej["operator_a"]      = matrix_json(e.operator_a);
    ej["eigenvalue"]      = e.eigenvalue;
    ej["eigenvector"]     = eigen_json(e.eigenvector);
    ej["reduced_momentum"] = eigen_json(e.momentum);
    const auto chk        = verify_eigenconstruction(s, r);
    ej["verified"]        = chk.ok;
    ej["bracket_residual"] = chk.bracket_residual;
    ej["eigen_residual"]   = chk.eigen_residual;
    a["eigen"]             = ej;
  } else {
    a["eigen"] = nullptr;
  }
  j["audit"] = a;
  return j;
}

}  // namespace hsr
