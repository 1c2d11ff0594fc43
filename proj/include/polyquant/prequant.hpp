#pragma once

// Abelian unitary representations of V on finite-dimensional Hermitian spaces:
// the fibre data (E_x, A_x) of a prequantum vector bundle.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "polyquant/matrix.hpp"
#include "polyquant/vsympl.hpp"
#include "polyquant/weights.hpp"

namespace polyquant {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Eigenvalues closer than this are one weight.
inline constexpr double kWeightMergeTolerance = 1e-7;
inline constexpr double kSkewHermitianTolerance = 1e-12;
inline constexpr double kReconstructionTolerance = 1e-9;

/// Pairwise commuting skew-Hermitian generators A_{e_1}, ..., A_{e_l}.
class AbelianRep {
 public:
  /// Floating generators. Throws kNotSkewHermitian, kNotCommuting, kDimensionMismatch.
  AbelianRep(std::size_t dim_v, std::vector<CMatrix> generators);
  /// Gaussian-rational generators; skewness and commutation are checked exactly.
  static AbelianRep exact(std::size_t dim_v, std::vector<GMatrix> generators);
  /// A_{e_a} = i * diag(weights[s][a]) for weights given as lambda / i.
  static AbelianRep diagonal(std::size_t dim_v, const std::vector<QVector>& weights);

  std::size_t dim_v() const { return dim_v_; }
  std::size_t rank() const { return rank_; }
  const std::vector<CMatrix>& generators() const { return generators_; }
  const std::optional<std::vector<GMatrix>>& exact_generators() const { return exact_; }

  /// A_v = sum_a v_a A_{e_a}.
  CMatrix act(const std::vector<double>& v) const;

 private:
  AbelianRep() = default;

  std::size_t dim_v_ = 0;
  std::size_t rank_ = 0;
  std::vector<CMatrix> generators_;
  std::optional<std::vector<GMatrix>> exact_;
};

struct WeightSpace {
  std::vector<double> weight;            // lambda / i per V coordinate
  std::optional<QVector> exact_weight;   // set on the exact path
  std::size_t multiplicity = 0;
  CMatrix basis;                         // rank x multiplicity, orthonormal columns
  std::optional<GMatrix> exact_basis;    // rank x multiplicity, spans the same space
};

struct WeightDecomposition {
  std::size_t dim_v = 0;
  std::size_t rank = 0;
  std::vector<WeightSpace> spaces;  // sorted lexicographically by weight
  double reconstruction_error = 0.0;
  bool exact = false;               // exact diagonalization found and verified
  bool exact_reconstruction = false;

  /// The weight multiset with unit i; requires `exact`.
  RationalWeightSet exact_weights() const;
  /// Rows lambda / i, one per distinct weight.
  RMatrix weight_matrix() const;
};

/// Simultaneous unitary diagonalization. Exact path first when exact generators are
/// present, floating refinement otherwise. Throws kNotCommuting or kNotSkewHermitian
/// (only for inputs that bypassed AbelianRep validation).
WeightDecomposition weight_decomposition(const AbelianRep& rep);

/// Generators rebuilt from a decomposition: sum_lambda i lambda_a P_lambda.
std::vector<CMatrix> rebuild_generators(const WeightDecomposition& dec);

struct Faithfulness {
  bool faithful = false;
  std::optional<std::vector<double>> certificate;  // v with lambda(v) = 0 for all weights
  std::optional<QVector> exact_certificate;
};

Faithfulness is_faithful(const WeightDecomposition& dec);
Faithfulness is_faithful(const AbelianRep& rep);

enum class RankClass { kMinimal, kAboveMinimal };

struct RankReport {
  RankClass rank_class = RankClass::kAboveMinimal;
  std::optional<RMatrix> weight_basis;  // rows, when minimal
};

/// Throws kNotFaithful.
RankReport rank_check(const AbelianRep& rep);

struct TensorProduct {
  std::optional<AbelianRep> rep;     // empty when the weight intersection is empty
  std::vector<std::vector<double>> weights;
  std::vector<std::size_t> multiplicities;
  bool faithful = false;
  bool prequantizable() const { return rep.has_value() && faithful; }
};

/// V-balanced tensor product E (x)_V E'. Throws kDimensionMismatch.
TensorProduct tensor_rep(const AbelianRep& a, const AbelianRep& b);

struct CurvatureForm {
  std::vector<double> weight;           // lambda / i
  RMatrix minus_i_coefficient;          // F_lambda = -i * sum_a weight_a Omega_a
  std::optional<QMatrix> exact_coefficient;
  bool skew = false;
};

/// One scalar curvature 2-form -lambda o omega per weight. Throws kNotFaithful,
/// kDimensionMismatch.
std::vector<CurvatureForm> curvature_components(const AbelianRep& rep, const VSymplecticSpace& space);

}  // namespace polyquant
