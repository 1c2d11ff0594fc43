#pragma once

// Rational lattices in V = Q^l, kept in row Hermite normal form, and the period-lattice
// arithmetic of prequantization.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyquant/rational.hpp"
#include "polyquant/weights.hpp"

namespace polyquant {

using IMatrixRows = std::vector<std::vector<Integer>>;

/// Row Hermite normal form of an integer matrix: nonzero rows only, pivots positive and
/// strictly increasing, entries above each pivot reduced into [0, pivot).
IMatrixRows hermite_normal_form(IMatrixRows rows, std::size_t cols);

/// Subgroup of Q^l generated by finitely many rational vectors.
class RationalLattice {
 public:
  RationalLattice(std::size_t dim_v, const std::vector<QVector>& generators);
  static RationalLattice standard(std::size_t dim_v);

  std::size_t dim_v() const { return dim_v_; }
  std::size_t rank() const { return basis_.size(); }
  bool full() const { return basis_.size() == dim_v_; }
  /// Canonical basis (HNF of the generators scaled to integers, scaled back).
  const std::vector<QVector>& basis() const { return basis_; }

  /// Integer coordinates of v in the basis, when v is a member.
  std::optional<std::vector<Integer>> coordinates(const QVector& v) const;
  bool contains(const QVector& v) const { return coordinates(v).has_value(); }
  bool contains(const RationalLattice& sub) const;

  friend bool operator==(const RationalLattice& a, const RationalLattice& b) {
    return a.dim_v_ == b.dim_v_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t dim_v_;
  std::vector<QVector> basis_;
  std::vector<std::size_t> pivots_;
};

/// Values of <omega, .> on generators of H_2(M, Z).
struct PeriodData {
  std::size_t dim_v = 0;
  std::vector<QVector> periods;
};

RationalLattice span_lattice(const PeriodData& periods);

/// I_omega contained in i. Throws kNotFull when i is not full, kDimensionMismatch.
bool is_prequantum_lattice(const RationalLattice& i, const PeriodData& periods);

struct PrincipalLattice {
  RationalLattice lattice;  // I_omega
  bool full = false;        // false reports NotFullRank
  /// Contained in every tested random prequantum lattice (full case only).
  bool certified = false;
  std::size_t superlattices_tested = 0;
  /// A full prequantum lattice; Z^l when there are no periods.
  std::optional<RationalLattice> witness;
};

/// Certifies minimality against `trials` random full superlattices T^{-1} B with T a random
/// nonsingular integer matrix.
PrincipalLattice principal_lattice(const PeriodData& periods, std::uint64_t seed, std::size_t trials = 10);

struct QuantizabilityVerdict {
  bool quantizable = false;
  bool nonquantizable_by_fiat = false;
  bool periods_discrete = false;                // I_omega is a lattice (always, for rational data)
  bool prequantum_lattice_exists = false;
  bool principal_prequantum_lattice = false;    // I_omega itself is full
  bool minimal_rank_prequantization = false;
  std::optional<RationalLattice> witness;       // a prequantum lattice
};

/// Rational periods always generate a discrete group. The fiat flag marks a model as
/// having irrational period ratios, which this representation cannot carry.
QuantizabilityVerdict is_quantizable(const PeriodData& periods, bool nonquantizable_by_fiat = false);

/// Basis B of a full lattice -> weights 2 pi i B^* (dual basis). Throws kNotABasis.
RationalWeightSet classify_minimal(const std::vector<QVector>& basis, std::size_t dim_v);

/// Weights forming a basis of i V^* (unit 2 pi i) -> the lattice spanned by the dual basis.
/// Throws kNotABasis, kConventionMismatch.
RationalLattice weights_to_lattice(const RationalWeightSet& weights);

/// <lambda, p> in 2 pi i Z for every weight and period.
bool integrality_check(const RationalWeightSet& weights, const PeriodData& periods);

}  // namespace polyquant
