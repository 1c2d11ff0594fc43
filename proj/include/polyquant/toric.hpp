#pragma once

// Products of projective lines with a circle action: section and invariant-section
// counts by lattice-point enumeration, and the comparison with a reduced model.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyquant/geom.hpp"
#include "polyquant/rational.hpp"

namespace polyquant {

class ToricBundleModel {
 public:
  /// degrees[lambda][j] >= 0; action[j] is the circle weight on factor j; shifts[lambda]
  /// is scaled by k and floored unless pinned[k] supplies the shifts for that k.
  /// Throws kConfigInvalid.
  ToricBundleModel(std::vector<std::vector<long>> degrees, std::vector<long> action, std::vector<Rational> shifts,
                   std::map<long, std::vector<long>> pinned = {});

  std::size_t factors() const { return action_.size(); }
  std::size_t weights() const { return degrees_.size(); }
  const std::vector<std::vector<long>>& degrees() const { return degrees_; }
  const std::vector<long>& action() const { return action_; }
  const std::vector<Rational>& shifts() const { return shifts_; }
  const std::map<long, std::vector<long>>& pinned() const { return pinned_; }

  /// Level of the lambda slice at k.
  long shift_at(std::size_t lambda, long k) const;

 private:
  std::vector<std::vector<long>> degrees_;
  std::vector<long> action_;
  std::vector<Rational> shifts_;
  std::map<long, std::vector<long>> pinned_;
};

/// sum_lambda #{0 <= m_j <= k d_j}.
long holomorphic_dim_serial(const ToricBundleModel& model, long k);
long holomorphic_dim(const ToricBundleModel& model, long k);

/// sum_lambda #{0 <= m_j <= k d_j : sum_j a_j m_j = shift_at(lambda, k)}.
long invariant_dim_serial(const ToricBundleModel& model, long k);
long invariant_dim(const ToricBundleModel& model, long k);

struct ReducedPoint {
  QVector position;                 // in the normalized moment square
  std::vector<std::size_t> weights; // slices passing through the point
  bool inside_square = false;
};

/// Zero-dimensional reduced space: pairwise intersections of the moment lines
/// sum_j a_j d[lambda][j] x_j = s[lambda] in normalized coordinates x_j = m_j / (k d_j).
struct PointReduction {
  std::vector<ReducedPoint> points;
  /// Sections over a point are its fibre: the number of weights carried there.
  long dimension() const;
};

/// Throws kNotTransverse when two moment lines are parallel, kConfigInvalid unless the
/// model has two factors.
PointReduction reduced_point_model(const ToricBundleModel& model);

struct ReducedModel {
  std::optional<PointReduction> points;
  std::optional<ManifoldPresentation> presentation;
  long dimension(long k) const;
};

struct QRConfig {
  std::string name;
  ToricBundleModel model;
  ReducedModel reduced;
  std::vector<long> ks;
};

struct QRRow {
  long k = 0;
  long lhs = 0;  // invariant sections upstairs
  long rhs = 0;  // sections of the reduced model
  bool equal() const { return lhs == rhs; }
};

enum class Asymptotic { kAgrees, kDiverges, kInconclusive };
std::string to_string(Asymptotic a);

struct QRReport {
  std::string name;
  std::vector<QRRow> rows;
  Asymptotic asymptotic = Asymptotic::kInconclusive;
};

/// Throws kConfigInvalid for an empty or non-positive k range.
QRReport qr_experiment(const QRConfig& config);

/// Two weights with degree rows (1,2), (2,1), diagonal action, shift 3k/2 pinned per k
/// for k = 1..10; reduced model is the transverse intersection point.
QRConfig counterexample_config(std::vector<long> ks);
/// One weight, degrees (2,2), diagonal action, shift 2k; reduced model a degree-2 line.
QRConfig control_config(std::vector<long> ks);

}  // namespace polyquant
