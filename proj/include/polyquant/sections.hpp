#pragma once

// Polynomial sections of the trivial bundle M x C^r over the canonical model and the
// operators Q_f = L_{X_f} + A_{theta(X_f) + f} acting on them.

#include <cstddef>
#include <map>
#include <vector>

#include "polyquant/prequant.hpp"
#include "polyquant/vsympl.hpp"

namespace polyquant {

/// Exponent vector; ordered graded-lex (total degree first, then lexicographic).
struct Monomial {
  std::vector<unsigned> exponents;

  unsigned degree() const;
  friend bool operator<(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exponents == b.exponents; }
};

Monomial constant_monomial(std::size_t vars);
Monomial variable_monomial(std::size_t vars, std::size_t i);
Monomial operator*(const Monomial& a, const Monomial& b);

/// All monomials of total degree <= degree in graded-lex order.
std::vector<Monomial> monomials_up_to(std::size_t vars, unsigned degree);

using Polynomial = std::map<Monomial, Rational>;

/// Degree of the highest nonzero term; -1 for the zero polynomial.
int degree(const Polynomial& p);
Polynomial derivative(const Polynomial& p, std::size_t i);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator+(const Polynomial& a, const Polynomial& b);

/// V-valued polynomial function on the canonical model.
struct PolyObservable {
  std::size_t vars = 0;
  std::vector<Polynomial> components;  // one per V coordinate

  static PolyObservable from_linear(const LinearObservable& f);
  /// The constant function v.
  static PolyObservable constant(std::size_t vars, const QVector& v);
  int degree() const;
};

using PolyVectorField = std::vector<Polynomial>;  // one polynomial per coordinate

/// Polynomial X with Omega_a X(x) = grad f_a(x) for every a, solved per monomial.
/// Throws kNotHamiltonian naming the component, kDimensionMismatch.
PolyVectorField hamiltonian_field(const PolyObservable& f, const VSymplecticSpace& space);

/// {f, h} = omega(X_f, X_h).
PolyObservable poly_bracket(const PolyObservable& f, const PolyObservable& h, const VSymplecticSpace& space);

/// theta(X)_a = sum_j p_{a,j} X^{q_j}.
PolyObservable tautological(const PolyVectorField& x, const CanonicalModel& model);

struct CommutatorDefect {
  bool exact_arithmetic = false;  // Gaussian rationals rather than doubles
  bool exact_zero = false;        // every coefficient of the defect vanishes
  double operator_norm = 0.0;     // spectral norm of [Q_f, Q_h] - Q_{f,h} on the domain
  std::size_t domain_dim = 0;
  int domain_degree = 0;
};

/// Realizes [Q_f, Q_h] - Q_{f,h} on sections of degree <= degree_cap - s, where s is the
/// largest degree increase among the operators involved, so that every image stays
/// below degree_cap. Exact when the rep carries exact generators.
/// Throws kNotHamiltonian, kDegreeOverflow, kDimensionMismatch.
CommutatorDefect prequantum_commutator_check(const CanonicalModel& model, const PolyObservable& f,
                                             const PolyObservable& h, const AbelianRep& rep, int degree_cap);

/// Constants e_a followed by the linear observables whose Hamiltonian fields are the
/// coordinate vectors. Every affine Hamiltonian observable is a combination of these.
std::vector<PolyObservable> affine_observable_basis(const CanonicalModel& model);

struct SweepReport {
  std::size_t pairs = 0;
  std::size_t exact_zero_pairs = 0;
  double max_norm = 0.0;
  std::size_t max_domain_dim = 0;
  bool all_zero() const { return exact_zero_pairs == pairs; }
};

/// Commutator check over all ordered pairs of the affine basis.
SweepReport commutator_sweep_serial(const CanonicalModel& model, const AbelianRep& rep, int degree_cap);
SweepReport commutator_sweep(const CanonicalModel& model, const AbelianRep& rep, int degree_cap);

}  // namespace polyquant
