#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "dnlab/errors.hpp"

namespace dnlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

using EdgeList = std::vector<std::tuple<std::string, std::string, double>>;
using ScalarMap = std::map<std::string, double>;

/// Finite symmetric Dirichlet form with boundary partition.
///
/// Holds a weighted graph (symmetric jump weights w_ij, long-range pairs
/// allowed), a killing vector k, a reference measure m > 0, a nonempty
/// boundary set F with measure mu > 0, and the interior G = complement.
/// The energy matrix A realizes
///   E(u, v) = sum_{i<j} w_ij (u_i - u_j)(v_i - v_j) + sum_i k_i u_i v_i,
/// so A is positive semidefinite with nonpositive off-diagonal.
///
/// Immutable after construction; safe to share across threads.
class FormSpec {
 public:
  FormSpec(std::vector<std::string> vertices, const EdgeList& edges,
           const ScalarMap& kill, const ScalarMap& m,
           const std::vector<std::string>& boundary, const ScalarMap& mu);

  /// Parse the JSON form-spec schema:
  /// {"vertices":[...], "edges":[{"i":..,"j":..,"w":..}],
  ///  "kill":{id:val}, "m":{id:val}, "boundary":[ids], "mu":{id:val}}
  /// Reports the first invariant violation with its field path.
  static FormSpec from_json(const std::string& text);
  static FormSpec from_json_file(const std::string& path);

  int size() const { return static_cast<int>(vertices_.size()); }
  int n_boundary() const { return static_cast<int>(boundary_idx_.size()); }
  int n_interior() const { return static_cast<int>(interior_idx_.size()); }

  const std::vector<std::string>& vertices() const { return vertices_; }
  int index_of(const std::string& id) const;
  bool is_boundary(int v) const { return boundary_mask_[v]; }

  /// Positions of boundary (resp. interior) vertices in the vertex order;
  /// all boundary-indexed data follows this order.
  const std::vector<int>& boundary_idx() const { return boundary_idx_; }
  const std::vector<int>& interior_idx() const { return interior_idx_; }
  std::vector<std::string> boundary_ids() const;

  const Matrix& energy_matrix() const { return energy_; }
  const Vector& measure() const { return m_; }
  const Vector& kill_weights() const { return kill_; }
  /// Boundary measure, length n_boundary(), in boundary_idx() order.
  const Vector& boundary_measure() const { return mu_; }

 private:
  std::vector<std::string> vertices_;
  std::map<std::string, int> index_;
  std::vector<int> boundary_idx_;
  std::vector<int> interior_idx_;
  std::vector<bool> boundary_mask_;
  Matrix energy_;
  Vector kill_;
  Vector m_;
  Vector mu_;
};

/// E(u, v) = u . A . v over the full vertex set.
double energy(const FormSpec& form, const Vector& u, const Vector& v);

/// Energy-minimizing extension of boundary data phi (length n_boundary):
/// returns u with u|F = phi and (A u)|G = 0.
/// Throws SingularInterior when the interior block fails the spectral
/// cutoff (smallest |eigenvalue| below 1e-10 x largest).
Vector harmonic_extension(const FormSpec& form, const Vector& phi);

/// Unique splitting u = interior_part + harmonic_part with
/// interior_part = 0 on F and harmonic_part energy-orthogonal to every
/// function vanishing on F.
struct Decomposition {
  Vector harmonic_part;
  Vector interior_part;
};
Decomposition decompose(const FormSpec& form, const Vector& u);

/// Sign test for a positivity-preserving generator: true iff every
/// off-diagonal entry is <= tol relative to the largest |entry|.
/// On finite spaces this is equivalent to E(f+, f-) <= 0 for all f.
bool is_markovian(const Matrix& form_matrix, double rtol = 1e-10);

/// Connectivity of the graph of nonzero off-diagonal energy entries;
/// equivalent to the absence of a nontrivial invariant set.
bool is_irreducible(const FormSpec& form);

}  // namespace dnlab
