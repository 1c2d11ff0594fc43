#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polyquant/rational.hpp"

namespace polyquant {

/// Symbolic unit multiplying rational weight coordinates: lambda = unit * coeffs.
/// 2*pi never appears as a float in exact bookkeeping.
enum class WeightUnit { kI, kTwoPiI };
std::string to_string(WeightUnit unit);

struct RationalWeight {
  QVector coeffs;
  std::size_t multiplicity = 1;
};

/// Multiset of weights in i V^*, kept sorted lexicographically with distinct entries.
class RationalWeightSet {
 public:
  RationalWeightSet(std::size_t dim_v, WeightUnit unit) : dim_v_(dim_v), unit_(unit) {}
  RationalWeightSet(std::size_t dim_v, WeightUnit unit, const std::vector<RationalWeight>& weights);

  /// Adds `multiplicity` copies of coeffs.
  void add(const QVector& coeffs, std::size_t multiplicity = 1);

  std::size_t dim_v() const { return dim_v_; }
  WeightUnit unit() const { return unit_; }
  const std::vector<RationalWeight>& weights() const { return weights_; }
  std::size_t distinct() const { return weights_.size(); }
  std::size_t total_multiplicity() const;
  bool empty() const { return weights_.empty(); }
  std::optional<std::size_t> find(const QVector& coeffs) const;

  /// True iff the weights span V^*.
  bool spans() const;
  /// A nonzero v in V annihilated by every weight, when one exists.
  std::optional<QVector> annihilated_vector() const;
  /// True iff every weight has multiplicity one and the weights form a basis of V^*.
  bool is_basis() const;

  /// Weights shared by both sets; multiplicity m*m' (balanced tensor over V).
  RationalWeightSet intersect(const RationalWeightSet& other) const;

  friend bool operator==(const RationalWeightSet& a, const RationalWeightSet& b);

 private:
  std::size_t dim_v_;
  WeightUnit unit_;
  std::vector<RationalWeight> weights_;
};

std::string format_weight(const QVector& coeffs, WeightUnit unit);

}  // namespace polyquant
