#include "dnlab/forms.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dnlab/linalg.hpp"

namespace dnlab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

}  // namespace

FormSpec::FormSpec(std::vector<std::string> vertices, const EdgeList& edges,
                   const ScalarMap& kill, const ScalarMap& m,
                   const std::vector<std::string>& boundary,
                   const ScalarMap& mu)
    : vertices_(std::move(vertices)) {
  const int n = static_cast<int>(vertices_.size());
  if (n == 0) fail("vertices", "must be nonempty");
  for (int v = 0; v < n; ++v) {
    if (!index_.emplace(vertices_[v], v).second)
      fail("vertices[" + std::to_string(v) + "]",
           "duplicate id '" + vertices_[v] + "'");
  }

  Matrix weights = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& [a, b, w] = edges[e];
    const std::string path = "edges[" + std::to_string(e) + "]";
    const auto ia = index_.find(a);
    const auto ib = index_.find(b);
    if (ia == index_.end()) fail(path + ".i", "unknown vertex '" + a + "'");
    if (ib == index_.end()) fail(path + ".j", "unknown vertex '" + b + "'");
    if (ia->second == ib->second) fail(path, "self-loop on '" + a + "'");
    if (!(w >= 0.0)) fail(path + ".w", "weight must be >= 0");
    weights(ia->second, ib->second) += w;
    weights(ib->second, ia->second) += w;
  }

  kill_ = Vector::Zero(n);
  for (const auto& [id, val] : kill) {
    const auto it = index_.find(id);
    if (it == index_.end()) fail("kill." + id, "unknown vertex");
    if (!(val >= 0.0)) fail("kill." + id, "killing weight must be >= 0");
    kill_[it->second] = val;
  }

  m_ = Vector::Zero(n);
  for (const auto& [id, val] : m) {
    const auto it = index_.find(id);
    if (it == index_.end()) fail("m." + id, "unknown vertex");
    if (!(val > 0.0)) fail("m." + id, "measure must be > 0");
    m_[it->second] = val;
  }
  for (int v = 0; v < n; ++v)
    if (m_[v] == 0.0) fail("m." + vertices_[v], "missing entry");

  if (boundary.empty()) fail("boundary", "must be nonempty");
  boundary_mask_.assign(n, false);
  for (std::size_t b = 0; b < boundary.size(); ++b) {
    const auto it = index_.find(boundary[b]);
    if (it == index_.end())
      fail("boundary[" + std::to_string(b) + "]",
           "unknown vertex '" + boundary[b] + "'");
    if (boundary_mask_[it->second])
      fail("boundary[" + std::to_string(b) + "]",
           "duplicate id '" + boundary[b] + "'");
    boundary_mask_[it->second] = true;
  }
  // Boundary rows/columns come first in vertex order in all exported data.
  for (int v = 0; v < n; ++v)
    (boundary_mask_[v] ? boundary_idx_ : interior_idx_).push_back(v);

  mu_ = Vector::Zero(n_boundary());
  for (const auto& [id, val] : mu) {
    const auto it = index_.find(id);
    if (it == index_.end()) fail("mu." + id, "unknown vertex");
    if (!boundary_mask_[it->second]) fail("mu." + id, "not a boundary vertex");
    if (!(val > 0.0)) fail("mu." + id, "boundary measure must be > 0");
    const auto pos = std::find(boundary_idx_.begin(), boundary_idx_.end(),
                               it->second) -
                     boundary_idx_.begin();
    mu_[pos] = val;
  }
  for (int b = 0; b < n_boundary(); ++b)
    if (mu_[b] == 0.0) fail("mu." + vertices_[boundary_idx_[b]], "missing entry");

  energy_ = -weights;
  for (int v = 0; v < n; ++v)
    energy_(v, v) = weights.row(v).sum() + kill_[v];
}

int FormSpec::index_of(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown vertex '" + id + "'");
  return it->second;
}

std::vector<std::string> FormSpec::boundary_ids() const {
  std::vector<std::string> ids;
  ids.reserve(boundary_idx_.size());
  for (int v : boundary_idx_) ids.push_back(vertices_[v]);
  return ids;
}

namespace {

using nlohmann::json;

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(path, "expected a vertex id");
}

ScalarMap as_scalar_map(const json& j, const std::string& path) {
  ScalarMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) fail(path, "expected an object {id: value}");
  for (const auto& [key, val] : j.items())
    out[key] = as_number(val, path + "." + key);
  return out;
}

}  // namespace

FormSpec FormSpec::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("$", "expected a JSON object");

  if (!j.contains("vertices") || !j["vertices"].is_array())
    fail("vertices", "expected an array of ids");
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < j["vertices"].size(); ++v)
    vertices.push_back(
        as_string(j["vertices"][v], "vertices[" + std::to_string(v) + "]"));

  EdgeList edges;
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) fail("edges", "expected an array");
    for (std::size_t e = 0; e < j["edges"].size(); ++e) {
      const auto& je = j["edges"][e];
      const std::string path = "edges[" + std::to_string(e) + "]";
      if (!je.is_object() || !je.contains("i") || !je.contains("j") ||
          !je.contains("w"))
        fail(path, "expected {\"i\":..,\"j\":..,\"w\":..}");
      edges.emplace_back(as_string(je["i"], path + ".i"),
                         as_string(je["j"], path + ".j"),
                         as_number(je["w"], path + ".w"));
    }
  }

  if (!j.contains("boundary") || !j["boundary"].is_array())
    fail("boundary", "expected an array of ids");
  std::vector<std::string> boundary;
  for (std::size_t b = 0; b < j["boundary"].size(); ++b)
    boundary.push_back(
        as_string(j["boundary"][b], "boundary[" + std::to_string(b) + "]"));

  return FormSpec(std::move(vertices), edges,
                  as_scalar_map(j.value("kill", json(nullptr)), "kill"),
                  as_scalar_map(j.value("m", json(nullptr)), "m"), boundary,
                  as_scalar_map(j.value("mu", json(nullptr)), "mu"));
}

FormSpec FormSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

double energy(const FormSpec& form, const Vector& u, const Vector& v) {
  if (u.size() != form.size() || v.size() != form.size())
    throw InputError("energy: vector length does not match vertex count");
  return u.dot(form.energy_matrix() * v);
}

Vector harmonic_extension(const FormSpec& form, const Vector& phi) {
  if (phi.size() != form.n_boundary())
    throw InputError("harmonic_extension: boundary data length mismatch");
  const auto& A = form.energy_matrix();
  const auto& F = form.boundary_idx();
  const auto& G = form.interior_idx();
  Vector u = Vector::Zero(form.size());
  for (int b = 0; b < form.n_boundary(); ++b) u[F[b]] = phi[b];
  if (!G.empty()) {
    SymSolver interior(submatrix(A, G, G));
    const Vector rhs = -submatrix(A, G, F) * phi;
    const Vector ug = interior.solve(rhs);
    for (std::size_t g = 0; g < G.size(); ++g) u[G[g]] = ug[g];
  }
  return u;
}

Decomposition decompose(const FormSpec& form, const Vector& u) {
  if (u.size() != form.size())
    throw InputError("decompose: vector length does not match vertex count");
  Vector phi(form.n_boundary());
  for (int b = 0; b < form.n_boundary(); ++b)
    phi[b] = u[form.boundary_idx()[b]];
  Decomposition d;
  d.harmonic_part = harmonic_extension(form, phi);
  d.interior_part = u - d.harmonic_part;
  return d;
}

bool is_markovian(const Matrix& form_matrix, double rtol) {
  const double scale =
      std::max(form_matrix.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < form_matrix.rows(); ++i)
    for (int j = 0; j < form_matrix.cols(); ++j)
      if (i != j && form_matrix(i, j) > rtol * scale) return false;
  return true;
}

bool is_irreducible(const FormSpec& form) {
  return offdiagonal_connected(form.energy_matrix());
}

}  // namespace dnlab
