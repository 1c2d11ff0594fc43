#include "polyquant/weights.hpp"

#include <algorithm>

#include "polyquant/error.hpp"
#include "polyquant/matrix.hpp"

namespace polyquant {

std::string to_string(WeightUnit unit) { return unit == WeightUnit::kTwoPiI ? "2πi" : "i"; }

RationalWeightSet::RationalWeightSet(std::size_t dim_v, WeightUnit unit, const std::vector<RationalWeight>& weights)
    : dim_v_(dim_v), unit_(unit) {
  for (const auto& w : weights) add(w.coeffs, w.multiplicity);
}

void RationalWeightSet::add(const QVector& coeffs, std::size_t multiplicity) {
  if (coeffs.size() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "weight length != dim V");
  if (multiplicity == 0) return;
  auto it = std::lower_bound(weights_.begin(), weights_.end(), coeffs,
                             [](const RationalWeight& w, const QVector& key) { return w.coeffs < key; });
  if (it != weights_.end() && it->coeffs == coeffs) {
    it->multiplicity += multiplicity;
  } else {
    weights_.insert(it, RationalWeight{coeffs, multiplicity});
  }
}

std::size_t RationalWeightSet::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& w : weights_) total += w.multiplicity;
  return total;
}

std::optional<std::size_t> RationalWeightSet::find(const QVector& coeffs) const {
  auto it = std::lower_bound(weights_.begin(), weights_.end(), coeffs,
                             [](const RationalWeight& w, const QVector& key) { return w.coeffs < key; });
  if (it != weights_.end() && it->coeffs == coeffs) return static_cast<std::size_t>(it - weights_.begin());
  return std::nullopt;
}

namespace {

QMatrix weight_matrix(const std::vector<RationalWeight>& weights, std::size_t dim_v) {
  std::vector<QVector> rows;
  for (const auto& w : weights) rows.push_back(w.coeffs);
  return rows.empty() ? QMatrix(0, dim_v) : QMatrix::from_rows(rows, dim_v);
}

}  // namespace

bool RationalWeightSet::spans() const { return weight_matrix(weights_, dim_v_).rank() == dim_v_; }

std::optional<QVector> RationalWeightSet::annihilated_vector() const {
  auto kernel = weight_matrix(weights_, dim_v_).nullspace();
  if (kernel.empty()) return std::nullopt;
  return kernel.front();
}

bool RationalWeightSet::is_basis() const {
  if (weights_.size() != dim_v_) return false;
  for (const auto& w : weights_)
    if (w.multiplicity != 1) return false;
  return spans();
}

RationalWeightSet RationalWeightSet::intersect(const RationalWeightSet& other) const {
  if (other.dim_v_ != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "weight sets over different V");
  if (other.unit_ != unit_) throw Error(ErrorCode::kConventionMismatch, "weight sets with different units");
  RationalWeightSet out(dim_v_, unit_);
  for (const auto& w : weights_) {
    if (auto j = other.find(w.coeffs)) out.add(w.coeffs, w.multiplicity * other.weights_[*j].multiplicity);
  }
  return out;
}

bool operator==(const RationalWeightSet& a, const RationalWeightSet& b) {
  if (a.dim_v_ != b.dim_v_ || a.unit_ != b.unit_ || a.weights_.size() != b.weights_.size()) return false;
  for (std::size_t i = 0; i < a.weights_.size(); ++i) {
    if (a.weights_[i].coeffs != b.weights_[i].coeffs || a.weights_[i].multiplicity != b.weights_[i].multiplicity)
      return false;
  }
  return true;
}

std::string format_weight(const QVector& coeffs, WeightUnit unit) {
  return to_string(unit) + "·" + format_vector(coeffs);
}

}  // namespace polyquant
