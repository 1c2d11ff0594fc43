#pragma once

// Finitely presented models: products of n curves (genus g_j) with a polysymplectic
// form given by its periods, and a weight set in units of 2 pi i. The lambda-weight
// line bundle has degree deg[lambda][j] = <lambda / 2 pi i, period_j> on factor j.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polyquant/matrix.hpp"
#include "polyquant/rational.hpp"
#include "polyquant/weights.hpp"

namespace polyquant {

using DegreeTable = std::vector<std::vector<Integer>>;  // [weight][factor]

class ManifoldPresentation {
 public:
  /// periods[j] is the V-valued period over factor j. When `declared` is given it must
  /// match the derived degree table. Throws kInconsistentDegrees (non-integral or
  /// mismatched degrees), kNotFaithful, kConventionMismatch, kDimensionMismatch.
  ManifoldPresentation(std::size_t dim_v, std::vector<QVector> periods, RationalWeightSet weights,
                       std::vector<unsigned> genus, const std::optional<DegreeTable>& declared = std::nullopt);

  /// V = R^{rows}, weights 2 pi i e_a^*, periods the columns of the table.
  static ManifoldPresentation from_degrees(const DegreeTable& rows, std::vector<unsigned> genus = {});

  std::size_t half_dim() const { return periods_.size(); }
  std::size_t dim_v() const { return dim_v_; }
  std::size_t h2_rank() const { return periods_.size(); }
  const std::vector<QVector>& periods() const { return periods_; }
  const RationalWeightSet& weights() const { return weights_; }
  const std::vector<unsigned>& genus() const { return genus_; }
  /// Rows follow weights().weights().
  const DegreeTable& degrees() const { return degrees_; }
  bool positive() const;

 private:
  std::size_t dim_v_;
  std::vector<QVector> periods_;
  RationalWeightSet weights_;
  std::vector<unsigned> genus_;
  DegreeTable degrees_;
};

/// sum_lambda m_lambda prod_j deg[lambda][j].
Rational adapted_volume(const ManifoldPresentation& model);

/// sum_lambda m_lambda prod_j (k deg[lambda][j] + 1 - g_j).
Integer rr_index(const ManifoldPresentation& model, long k);

/// The same index as the integral of ch(E^k) Td(M) in Q[h_1..h_n]/(h_j^2).
Rational chern_todd_index(const ManifoldPresentation& model, long k);

std::vector<Integer> rr_table_serial(const ManifoldPresentation& model, const std::vector<long>& ks);
std::vector<Integer> rr_table(const ManifoldPresentation& model, const std::vector<long>& ks);

struct GrowthReport {
  std::vector<long> ks;
  std::vector<Integer> dims;
  Rational leading_coefficient;   // n-th finite difference / n!
  Rational volume;
  bool leading_matches = false;
  std::vector<Rational> remainder;  // dims - vol k^n
  bool remainder_lower_order = false;
};

/// ks must be consecutive and at least n + 1 long. Throws kNotPositive, kInvalidArgument.
GrowthReport growth_check(const ManifoldPresentation& model, const std::vector<long>& ks);

class MonodromyPresentation {
 public:
  /// Throws kInvalidArgument for a singular generator, kNotFaithful.
  MonodromyPresentation(std::vector<QMatrix> generators, RationalWeightSet weights);

  const std::vector<QMatrix>& generators() const { return generators_; }
  const RationalWeightSet& weights() const { return weights_; }

 private:
  std::vector<QMatrix> generators_;
  RationalWeightSet weights_;
};

/// perm[i] = index of lambda_i o tau^{-1} among the distinct weights.
using Permutation = std::vector<std::size_t>;

/// One permutation per generator. Throws kWeightsNotPermuted.
std::vector<Permutation> monodromy_weight_action(const MonodromyPresentation& pres);
Permutation compose(const Permutation& a, const Permutation& b);
bool is_identity(const Permutation& p);

struct ProductModel {
  std::optional<ManifoldPresentation> model;  // empty when not prequantizable
  bool prequantizable = false;
};

/// M x M' with omega + omega' valued in V + V'; weights (lambda, 0) and (0, mu).
ProductModel product_doubling(const ManifoldPresentation& a, const ManifoldPresentation& b);
/// M x M' over the same V with weights w(A) cap w(A'). Throws kConventionMismatch.
ProductModel product_same_v(const ManifoldPresentation& a, const ManifoldPresentation& b);
/// E^{(x)_V k} on (M, k omega): same weights, multiplicities m^k, periods scaled by k.
ManifoldPresentation tensor_power(const ManifoldPresentation& model, unsigned k);

}  // namespace polyquant
