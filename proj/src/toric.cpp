#include "polyquant/toric.hpp"

#include <algorithm>

#include "polyquant/error.hpp"
#include "polyquant/matrix.hpp"

namespace polyquant {

ToricBundleModel::ToricBundleModel(std::vector<std::vector<long>> degrees, std::vector<long> action,
                                   std::vector<Rational> shifts, std::map<long, std::vector<long>> pinned)
    : degrees_(std::move(degrees)), action_(std::move(action)), shifts_(std::move(shifts)), pinned_(std::move(pinned)) {
  if (degrees_.empty()) throw Error(ErrorCode::kConfigInvalid, "toric model needs at least one weight");
  if (action_.empty()) throw Error(ErrorCode::kConfigInvalid, "toric model needs at least one factor");
  if (shifts_.size() != degrees_.size()) throw Error(ErrorCode::kConfigInvalid, "one shift per weight");
  for (std::size_t w = 0; w < degrees_.size(); ++w) {
    if (degrees_[w].size() != action_.size())
      throw Error(ErrorCode::kConfigInvalid, "degree row " + std::to_string(w) + " has the wrong length");
    for (long d : degrees_[w])
      if (d < 0) throw Error(ErrorCode::kConfigInvalid, "degree row " + std::to_string(w) + " has a negative degree");
  }
  for (const auto& [k, s] : pinned_) {
    if (k < 1) throw Error(ErrorCode::kConfigInvalid, "pinned shifts need k >= 1");
    if (s.size() != degrees_.size()) throw Error(ErrorCode::kConfigInvalid, "pinned shifts need one entry per weight");
  }
}

long ToricBundleModel::shift_at(std::size_t lambda, long k) const {
  auto it = pinned_.find(k);
  if (it != pinned_.end()) return it->second.at(lambda);
  return floor_integer(shifts_.at(lambda) * k).get_si();
}

namespace {

// Box [0, k d_0] x ... with the first coordinate fixed to m0; visits the remaining
// coordinates and counts those whose weighted sum hits the target.
long count_slice(const std::vector<long>& upper, const std::vector<long>& action, long m0, long target,
                 bool constrained) {
  const std::size_t n = upper.size();
  std::vector<long> m(n, 0);
  m[0] = m0;
  long count = 0;
  while (true) {
    if (!constrained) {
      ++count;
    } else {
      long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += action[j] * m[j];
      if (s == target) ++count;
    }
    std::size_t j = 1;
    while (j < n && m[j] == upper[j]) m[j++] = 0;
    if (j >= n) break;
    ++m[j];
  }
  return count;
}

std::vector<long> box(const ToricBundleModel& model, std::size_t lambda, long k) {
  std::vector<long> upper;
  for (long d : model.degrees()[lambda]) upper.push_back(k * d);
  return upper;
}

long enumerate_serial(const ToricBundleModel& model, long k, bool constrained) {
  long total = 0;
  for (std::size_t w = 0; w < model.weights(); ++w) {
    auto upper = box(model, w, k);
    long target = constrained ? model.shift_at(w, k) : 0;
    for (long m0 = 0; m0 <= upper[0]; ++m0) total += count_slice(upper, model.action(), m0, target, constrained);
  }
  return total;
}

long enumerate_parallel(const ToricBundleModel& model, long k, bool constrained) {
  long total = 0;
  for (std::size_t w = 0; w < model.weights(); ++w) {
    auto upper = box(model, w, k);
    long target = constrained ? model.shift_at(w, k) : 0;
    long sub = 0;
#pragma omp parallel for reduction(+ : sub) schedule(dynamic)
    for (long m0 = 0; m0 <= upper[0]; ++m0) sub += count_slice(upper, model.action(), m0, target, constrained);
    total += sub;
  }
  return total;
}

void check_k(long k) {
  if (k < 1) throw Error(ErrorCode::kConfigInvalid, "k must be positive");
}

}  // namespace

long holomorphic_dim_serial(const ToricBundleModel& model, long k) {
  check_k(k);
  return enumerate_serial(model, k, false);
}

long holomorphic_dim(const ToricBundleModel& model, long k) {
  check_k(k);
  return enumerate_parallel(model, k, false);
}

long invariant_dim_serial(const ToricBundleModel& model, long k) {
  check_k(k);
  return enumerate_serial(model, k, true);
}

long invariant_dim(const ToricBundleModel& model, long k) {
  check_k(k);
  return enumerate_parallel(model, k, true);
}

// ---------------------------------------------------------------------------

long PointReduction::dimension() const {
  long total = 0;
  for (const auto& p : points) total += static_cast<long>(p.weights.size());
  return total;
}

PointReduction reduced_point_model(const ToricBundleModel& model) {
  if (model.factors() != 2) throw Error(ErrorCode::kConfigInvalid, "point reduction needs two factors");
  if (model.weights() < 2) throw Error(ErrorCode::kConfigInvalid, "point reduction needs at least two weights");
  const std::size_t w = model.weights();
  std::vector<QVector> rows;
  for (std::size_t l = 0; l < w; ++l)
    rows.push_back({Rational(model.action()[0] * model.degrees()[l][0]),
                    Rational(model.action()[1] * model.degrees()[l][1])});

  PointReduction out;
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = a + 1; b < w; ++b) {
      QMatrix m = QMatrix::from_rows({rows[a], rows[b]}, 2);
      if (is_zero(m.determinant())) {
        throw Error(ErrorCode::kNotTransverse,
                    "moment lines of weights " + std::to_string(a) + " and " + std::to_string(b) + " are parallel");
      }
      QVector x = *m.solve({model.shifts()[a], model.shifts()[b]});
      auto found = std::find_if(out.points.begin(), out.points.end(),
                                [&](const ReducedPoint& p) { return p.position == x; });
      if (found != out.points.end()) continue;
      ReducedPoint p;
      p.position = x;
      p.inside_square = x[0] >= 0 && x[0] <= 1 && x[1] >= 0 && x[1] <= 1;
      for (std::size_t l = 0; l < w; ++l)
        if (rows[l][0] * x[0] + rows[l][1] * x[1] == model.shifts()[l]) p.weights.push_back(l);
      out.points.push_back(std::move(p));
    }
  return out;
}

long ReducedModel::dimension(long k) const {
  if (presentation) return rr_index(*presentation, k).get_si();
  if (points) return points->dimension();
  throw Error(ErrorCode::kConfigInvalid, "reduced model is empty");
}

std::string to_string(Asymptotic a) {
  switch (a) {
    case Asymptotic::kAgrees: return "agrees";
    case Asymptotic::kDiverges: return "diverges";
    case Asymptotic::kInconclusive: return "inconclusive";
  }
  return "?";
}

QRReport qr_experiment(const QRConfig& config) {
  if (config.ks.empty()) throw Error(ErrorCode::kConfigInvalid, "empty k range");
  for (long k : config.ks) check_k(k);
  QRReport report;
  report.name = config.name;
  for (long k : config.ks) report.rows.push_back(QRRow{k, invariant_dim(config.model, k), config.reduced.dimension(k)});

  bool all_equal = std::all_of(report.rows.begin(), report.rows.end(), [](const QRRow& r) { return r.equal(); });
  bool rhs_constant = std::all_of(report.rows.begin(), report.rows.end(),
                                  [&](const QRRow& r) { return r.rhs == report.rows.front().rhs; });
  bool lhs_increasing = report.rows.size() >= 2;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (report.rows[i].lhs <= report.rows[i - 1].lhs) lhs_increasing = false;
  if (all_equal) report.asymptotic = Asymptotic::kAgrees;
  else if (rhs_constant && lhs_increasing && report.rows.back().lhs > report.rows.back().rhs)
    report.asymptotic = Asymptotic::kDiverges;
  return report;
}

QRConfig counterexample_config(std::vector<long> ks) {
  std::map<long, std::vector<long>> pinned;
  for (long k = 1; k <= 10; ++k) pinned[k] = {3 * k / 2, 3 * k / 2};
  ToricBundleModel model({{1, 2}, {2, 1}}, {1, 1}, {Rational(3, 2), Rational(3, 2)}, pinned);
  ReducedModel reduced{reduced_point_model(model), std::nullopt};
  return QRConfig{"counterexample", std::move(model), std::move(reduced), std::move(ks)};
}

QRConfig control_config(std::vector<long> ks) {
  ToricBundleModel model({{2, 2}}, {1, 1}, {Rational(2)});
  ReducedModel reduced{std::nullopt, ManifoldPresentation::from_degrees({{Integer(2)}})};
  return QRConfig{"control", std::move(model), std::move(reduced), std::move(ks)};
}

}  // namespace polyquant
