#pragma once

// Exact linear algebra of V-valued symplectic forms on a finite-dimensional space U.
//
// A form is stored by components: omega_a(x, y) = x^T Omega_a y for a = 0..dim V - 1,
// taken in the coordinate dual basis of V. All checks run over Q (or Q(i) for
// complexified subspaces); floating point appears only in definiteness cross-checks.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polyquant/matrix.hpp"

namespace polyquant {

/// Joint-kernel certificate for nondegeneracy.
struct Nondegeneracy {
  bool nondegenerate = false;
  std::optional<QVector> kernel_vector;  // set iff degenerate
};

class VSymplecticSpace {
 public:
  /// Throws kNotSkew (message carries the component index) or kDimensionMismatch.
  VSymplecticSpace(std::size_t dim_u, std::vector<QMatrix> components);

  std::size_t dim_u() const { return dim_u_; }
  std::size_t dim_v() const { return components_.size(); }
  const std::vector<QMatrix>& components() const { return components_; }
  const QMatrix& component(std::size_t a) const { return components_.at(a); }
  const Nondegeneracy& nondegeneracy() const { return nondegeneracy_; }
  bool nondegenerate() const { return nondegeneracy_.nondegenerate; }

  /// omega(x, y) in V.
  QVector evaluate(const QVector& x, const QVector& y) const;
  /// lambda o omega for a dual vector lambda.
  QMatrix weighted_component(const QVector& lambda) const;
  /// The (dim V * dim U) x dim U matrix stacking Omega_0, Omega_1, ...
  QMatrix stacked() const;

 private:
  std::size_t dim_u_;
  std::vector<QMatrix> components_;
  Nondegeneracy nondegeneracy_;
};

/// Linear subspace given by an independent spanning list; reduced to a canonical
/// echelon basis so that equality of subspaces is equality of bases.
template <typename T>
class BasicSubspace {
 public:
  using Vector = std::vector<T>;

  BasicSubspace(std::size_t ambient_dim, const std::vector<Vector>& spanning) : ambient_(ambient_dim) {
    if (spanning.empty()) return;
    Matrix<T> m = Matrix<T>::from_rows(spanning, ambient_dim);
    auto pivots = m.rref_in_place();
    for (std::size_t r = 0; r < pivots.size(); ++r) basis_.push_back(m.row(r));
  }

  static BasicSubspace whole(std::size_t n) {
    std::vector<Vector> e;
    for (std::size_t i = 0; i < n; ++i) {
      Vector v(n, T(0));
      v[i] = T(1);
      e.push_back(v);
    }
    return BasicSubspace(n, e);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }

  bool contains(const Vector& v) const {
    std::vector<Vector> rows = basis_;
    rows.push_back(v);
    return Matrix<T>::from_rows(rows, ambient_).rank() == basis_.size();
  }

  friend bool operator==(const BasicSubspace& a, const BasicSubspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_;
  std::vector<Vector> basis_;
};

using Subspace = BasicSubspace<Rational>;
using ComplexSubspace = BasicSubspace<GaussianRational>;

/// Affine observable f(x) = value_at_origin + differential * x, valued in V.
struct LinearObservable {
  QVector value_at_origin;  // length dim V
  QMatrix differential;     // dim V x dim U, row a is d f_a
};

class ComplexStructureJ {
 public:
  /// Throws kNotCompatible when J^2 != -1.
  explicit ComplexStructureJ(QMatrix j);
  const QMatrix& matrix() const { return j_; }
  ComplexStructureJ negated() const { return ComplexStructureJ(-j_); }

 private:
  QMatrix j_;
};

/// Canonical model U + Hom(U, V) with coordinates (q_1..q_k, p_{a,j}) where the
/// momentum phi has entries phi_a(e_j) = p_{a,j}; index of p_{a,j} is k + a*k + j.
class CanonicalModel {
 public:
  CanonicalModel(std::size_t dim_q, std::size_t dim_v);

  std::size_t dim_q() const { return dim_q_; }
  std::size_t dim_v() const { return dim_v_; }
  std::size_t dim() const { return dim_q_ * (1 + dim_v_); }
  std::size_t q_index(std::size_t j) const { return j; }
  std::size_t p_index(std::size_t a, std::size_t j) const { return dim_q_ + a * dim_q_ + j; }
  const VSymplecticSpace& space() const { return space_; }

  /// The vertical factor Hom(U, V) and the horizontal factor U as subspaces.
  Subspace momentum_factor() const;
  Subspace position_factor() const;

  /// J_U + (J_U^{-1})^*, i.e. (u, phi) -> (J_U u, phi o J_U^{-1}).
  ComplexStructureJ lift_complex_structure(const QMatrix& j_u) const;
  /// (u, phi) -> (g u, phi o g^{-1}); a linear V-symplectomorphism for invertible g.
  QMatrix lift_linear(const QMatrix& g) const;
  /// (u, phi) -> (u, phi + S(u, .)) for a V-valued symmetric bilinear form S given by
  /// dim V symmetric k x k matrices; a linear V-symplectomorphism.
  QMatrix shear(const std::vector<QMatrix>& symmetric) const;

 private:
  std::size_t dim_q_;
  std::size_t dim_v_;
  VSymplecticSpace space_;
};

VSymplecticSpace make_canonical_model(std::size_t dim_q, std::size_t dim_v);

struct LieModel {
  VSymplecticSpace space;
  std::vector<QVector> center_basis;  // empty iff the model is nondegenerate
  bool degenerate_center() const { return !center_basis.empty(); }
};

/// structure_constants[i][j][k] = c^k_{ij}, i.e. [e_i, e_j] = sum_k c^k_{ij} e_k.
/// Throws kNotSkew or kJacobiViolation.
LieModel make_lie_model(const std::vector<std::vector<QVector>>& structure_constants);

Nondegeneracy is_nondegenerate(const VSymplecticSpace& space);

Subspace poly_orthogonal(const Subspace& w, const VSymplecticSpace& space);
ComplexSubspace poly_orthogonal(const ComplexSubspace& w, const VSymplecticSpace& space);
bool is_lagrangian(const Subspace& w, const VSymplecticSpace& space);
bool is_lagrangian(const ComplexSubspace& w, const VSymplecticSpace& space);

/// Solution X of omega_a(X, .) = -d f_a for every a. Throws kNotHamiltonian; the
/// message names the first component index whose inclusion makes the system
/// inconsistent. The solution sets free variables to zero when the space is degenerate.
QVector hamiltonian_solve(const LinearObservable& f, const VSymplecticSpace& space);

/// {f, h} = omega(X_f, X_h); also verifies it equals X_f h (throws kInvalidArgument
/// on disagreement, which would indicate an inconsistent space).
QVector bracket(const LinearObservable& f, const LinearObservable& h, const VSymplecticSpace& space);

bool compatible_complex_check(const ComplexStructureJ& j, const VSymplecticSpace& space);

struct EigenspaceSplit {
  ComplexSubspace plus;   // +i eigenspace
  ComplexSubspace minus;  // -i eigenspace
  bool plus_lagrangian = false;
  bool minus_lagrangian = false;
};

/// Throws kNotCompatible.
EigenspaceSplit eigenspace_split(const ComplexStructureJ& j, const VSymplecticSpace& space);

enum class Definiteness { kPositiveDefinite, kNegativeDefinite, kIndefinite, kDegenerate };
std::string to_string(Definiteness d);
Definiteness classify(const Inertia& in);

struct WeightDefiniteness {
  QVector weight;
  Inertia form_inertia;           // lambda o <u, u'> = lambda o omega(u, J u') on U
  Definiteness verdict = Definiteness::kDegenerate;
  Definiteness float_verdict = Definiteness::kDegenerate;  // eigenvalue signs, tolerance 1e-9
  Inertia eigenspace_inertia;     // -(i/2) lambda o omega(u, conj u) on U_+
  Definiteness eigenspace_verdict = Definiteness::kDegenerate;
  bool cross_check_agrees = false;
  bool positive = false;          // omega_lambda(X, JX) >= 0 for all X
};

struct DefinitenessReport {
  std::vector<WeightDefiniteness> per_weight;
  bool definite = false;  // every supplied weight gives a definite form
  bool positive = false;  // every supplied weight gives a positive semidefinite form
  bool all_cross_checks_agree = false;
};

/// Throws kNotCompatible.
DefinitenessReport definiteness_report(const ComplexStructureJ& j, const VSymplecticSpace& space,
                                       const std::vector<QVector>& weights);

struct ScalingWitness {
  Rational determinant;
  Rational expected;  // alpha^{dim U (1 - dim V)}
  bool is_symplectomorphism = false;
};

/// The map (u, phi) -> (alpha u, alpha^{-1} phi) on U + Hom(U, V).
ScalingWitness scaling_determinant(const Rational& alpha, std::size_t dim_u, std::size_t dim_v);

/// Alternating multilinear form on R^dim with rational coefficients on sorted index tuples.
class AlternatingForm {
 public:
  AlternatingForm(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree) {}

  std::size_t dim() const { return dim_; }
  std::size_t degree() const { return degree_; }

  /// Sets the coefficient of e^{i_1} ^ ... ^ e^{i_p}; indices in any order (sign applied).
  void set(std::vector<std::size_t> indices, const Rational& value);
  /// Value on basis vectors e_{i_1}, ..., e_{i_p}.
  Rational evaluate_basis(const std::vector<std::size_t>& indices) const;

  const std::vector<std::pair<std::vector<std::size_t>, Rational>>& terms() const { return terms_; }

 private:
  std::size_t dim_;
  std::size_t degree_;
  std::vector<std::pair<std::vector<std::size_t>, Rational>> terms_;  // sorted strictly increasing keys
};

/// Sorted (k-1)-subsets of {0..dim-1} in lexicographic order; the coordinate basis
/// of V = Lambda^{k-1} U^* used by symbol_map.
std::vector<std::vector<std::size_t>> exterior_basis(std::size_t dim, std::size_t degree);

/// (X, Y) -> iota_Y iota_X Omega, i.e. component I of the result is
/// Omega(X, Y, e_I). Returns the V-valued form as a VSymplecticSpace (possibly degenerate).
VSymplecticSpace symbol_map(const AlternatingForm& omega_top);

/// xi -> phi(xi_Q): rows are V components, columns are the generators of g.
/// `phi` is dim V x dim U; `fundamental_fields` are the xi_Q in U.
QMatrix moment_map_linear(const CanonicalModel& model, const std::vector<QVector>& fundamental_fields,
                          const QMatrix& phi);

}  // namespace polyquant
