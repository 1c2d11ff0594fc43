#include "polyquant/geom.hpp"

#include <algorithm>
#include <exception>
#include <map>

#include "polyquant/error.hpp"

namespace polyquant {

ManifoldPresentation::ManifoldPresentation(std::size_t dim_v, std::vector<QVector> periods, RationalWeightSet weights,
                                           std::vector<unsigned> genus, const std::optional<DegreeTable>& declared)
    : dim_v_(dim_v), periods_(std::move(periods)), weights_(std::move(weights)), genus_(std::move(genus)) {
  if (dim_v_ == 0 || periods_.empty()) throw Error(ErrorCode::kInvalidArgument, "need dim V >= 1 and n >= 1");
  if (weights_.dim_v() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "weights over a different V");
  if (weights_.unit() != WeightUnit::kTwoPiI)
    throw Error(ErrorCode::kConventionMismatch, "presentation weights are in units of 2πi");
  if (genus_.empty()) genus_.assign(periods_.size(), 0);
  if (genus_.size() != periods_.size()) throw Error(ErrorCode::kDimensionMismatch, "one genus per factor");
  for (const auto& p : periods_)
    if (p.size() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "period length != dim V");
  if (!weights_.spans()) throw Error(ErrorCode::kNotFaithful, "weights do not span iV*");

  for (std::size_t w = 0; w < weights_.distinct(); ++w) {
    std::vector<Integer> row;
    for (std::size_t j = 0; j < periods_.size(); ++j) {
      Rational d(0);
      for (std::size_t a = 0; a < dim_v_; ++a) d += weights_.weights()[w].coeffs[a] * periods_[j][a];
      if (d.get_den() != 1) {
        throw Error(ErrorCode::kInconsistentDegrees,
                    "weight " + std::to_string(w) + " has non-integral degree on factor " + std::to_string(j));
      }
      row.push_back(d.get_num());
    }
    degrees_.push_back(std::move(row));
  }
  if (declared && *declared != degrees_)
    throw Error(ErrorCode::kInconsistentDegrees, "declared degree table disagrees with the periods");
}

ManifoldPresentation ManifoldPresentation::from_degrees(const DegreeTable& rows, std::vector<unsigned> genus) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::kInvalidArgument, "empty degree table");
  const std::size_t l = rows.size();
  const std::size_t n = rows.front().size();
  RationalWeightSet weights(l, WeightUnit::kTwoPiI);
  std::vector<QVector> periods(n, QVector(l, Rational(0)));
  for (std::size_t a = 0; a < l; ++a) {
    if (rows[a].size() != n) throw Error(ErrorCode::kDimensionMismatch, "ragged degree table");
    QVector e(l, Rational(0));
    e[a] = 1;
    weights.add(e);
    for (std::size_t j = 0; j < n; ++j) periods[j][a] = Rational(rows[a][j]);
  }
  return ManifoldPresentation(l, std::move(periods), std::move(weights), std::move(genus));
}

bool ManifoldPresentation::positive() const {
  for (const auto& row : degrees_)
    for (const auto& d : row)
      if (sgn(d) <= 0) return false;
  return true;
}

Rational adapted_volume(const ManifoldPresentation& model) {
  Rational vol(0);
  const auto& ws = model.weights().weights();
  for (std::size_t w = 0; w < ws.size(); ++w) {
    Integer prod = 1;
    for (const auto& d : model.degrees()[w]) prod *= d;
    vol += Rational(prod * static_cast<unsigned long>(ws[w].multiplicity));
  }
  return vol;
}

Integer rr_index(const ManifoldPresentation& model, long k) {
  Integer total = 0;
  const auto& ws = model.weights().weights();
  for (std::size_t w = 0; w < ws.size(); ++w) {
    Integer prod = 1;
    for (std::size_t j = 0; j < model.half_dim(); ++j) {
      prod *= model.degrees()[w][j] * k + 1 - static_cast<long>(model.genus()[j]);
    }
    total += prod * static_cast<unsigned long>(ws[w].multiplicity);
  }
  return total;
}

namespace {

// Elements of Q[h_1..h_n]/(h_j^2), keyed by the bitmask of the square-free monomial.
using Exterior = std::map<unsigned long, Rational>;

Exterior multiply(const Exterior& a, const Exterior& b) {
  Exterior out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      if (ma & mb) continue;
      out[ma | mb] += ca * cb;
    }
  return out;
}

Exterior exponential(const Exterior& x, std::size_t n) {
  Exterior out{{0, Rational(1)}};
  Exterior power{{0, Rational(1)}};
  Rational factorial(1);
  for (std::size_t m = 1; m <= n; ++m) {
    power = multiply(power, x);
    factorial *= m;
    for (const auto& [mono, c] : power) out[mono] += c / factorial;
  }
  return out;
}

}  // namespace

Rational chern_todd_index(const ManifoldPresentation& model, long k) {
  const std::size_t n = model.half_dim();
  if (n >= 8 * sizeof(unsigned long)) throw Error(ErrorCode::kInvalidArgument, "too many factors");
  Exterior todd{{0, Rational(1)}};
  for (std::size_t j = 0; j < n; ++j) {
    Exterior factor{{0, Rational(1)}, {1ul << j, Rational(1 - static_cast<long>(model.genus()[j]))}};
    todd = multiply(todd, factor);
  }
  const unsigned long top = (n == 0) ? 0 : ((1ul << n) - 1);
  Rational total(0);
  const auto& ws = model.weights().weights();
  for (std::size_t w = 0; w < ws.size(); ++w) {
    Exterior c1;
    for (std::size_t j = 0; j < n; ++j) c1[1ul << j] = Rational(model.degrees()[w][j] * k);
    Exterior integrand = multiply(exponential(c1, n), todd);
    total += integrand[top] * static_cast<unsigned long>(ws[w].multiplicity);
  }
  return total;
}

std::vector<Integer> rr_table_serial(const ManifoldPresentation& model, const std::vector<long>& ks) {
  std::vector<Integer> out;
  out.reserve(ks.size());
  for (long k : ks) out.push_back(rr_index(model, k));
  return out;
}

std::vector<Integer> rr_table(const ManifoldPresentation& model, const std::vector<long>& ks) {
  std::vector<Integer> out(ks.size());
  const auto size = static_cast<long>(ks.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < size; ++i) out[static_cast<std::size_t>(i)] = rr_index(model, ks[static_cast<std::size_t>(i)]);
  return out;
}

GrowthReport growth_check(const ManifoldPresentation& model, const std::vector<long>& ks) {
  if (!model.positive()) throw Error(ErrorCode::kNotPositive, "growth law needs positive degrees");
  const std::size_t n = model.half_dim();
  if (ks.size() < n + 1) throw Error(ErrorCode::kInvalidArgument, "need at least n + 1 values of k");
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (ks[i] != ks[i - 1] + 1) throw Error(ErrorCode::kInvalidArgument, "k values must be consecutive");
  if (ks.front() < 1) throw Error(ErrorCode::kInvalidArgument, "k must be positive");

  GrowthReport report;
  report.ks = ks;
  report.dims = rr_table(model, ks);
  report.volume = adapted_volume(model);

  std::vector<Rational> diff;
  for (const auto& d : report.dims) diff.emplace_back(d);
  for (std::size_t order = 0; order < n; ++order) {
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  Rational factorial(1);
  for (std::size_t m = 2; m <= n; ++m) factorial *= m;
  report.leading_coefficient = diff.front() / factorial;
  report.leading_matches = report.leading_coefficient == report.volume;
  for (auto& d : diff)
    if (d / factorial != report.leading_coefficient) report.leading_matches = false;

  for (std::size_t i = 0; i < ks.size(); ++i)
    report.remainder.push_back(Rational(report.dims[i]) - report.volume * pow(Rational(ks[i]), static_cast<long>(n)));
  // A remainder of degree < n has vanishing n-th differences.
  std::vector<Rational> rem = report.remainder;
  for (std::size_t order = 0; order < n; ++order) {
    for (std::size_t i = 0; i + 1 < rem.size(); ++i) rem[i] = rem[i + 1] - rem[i];
    rem.pop_back();
  }
  report.remainder_lower_order = std::all_of(rem.begin(), rem.end(), [](const Rational& x) { return is_zero(x); });
  return report;
}

// ---------------------------------------------------------------------------

MonodromyPresentation::MonodromyPresentation(std::vector<QMatrix> generators, RationalWeightSet weights)
    : generators_(std::move(generators)), weights_(std::move(weights)) {
  const std::size_t l = weights_.dim_v();
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    const auto& tau = generators_[g];
    if (tau.rows() != l || tau.cols() != l) throw Error(ErrorCode::kDimensionMismatch, "generator must be l x l");
    if (is_zero(tau.determinant()))
      throw Error(ErrorCode::kInvalidArgument, "generator " + std::to_string(g) + " is not invertible");
  }
  if (!weights_.spans()) throw Error(ErrorCode::kNotFaithful, "weights do not span iV*");
}

std::vector<Permutation> monodromy_weight_action(const MonodromyPresentation& pres) {
  const auto& ws = pres.weights().weights();
  const std::size_t l = pres.weights().dim_v();
  std::vector<Permutation> out;
  for (std::size_t g = 0; g < pres.generators().size(); ++g) {
    QMatrix tau_inv = *pres.generators()[g].inverse();
    Permutation perm;
    for (const auto& w : ws) {
      // (lambda o tau^{-1})(v) = lambda(tau^{-1} v): the row vector c times tau^{-1}.
      QVector pulled(l, Rational(0));
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t a = 0; a < l; ++a) pulled[j] += w.coeffs[a] * tau_inv(a, j);
      auto idx = pres.weights().find(pulled);
      if (!idx || ws[*idx].multiplicity != w.multiplicity) {
        throw Error(ErrorCode::kWeightsNotPermuted,
                    "generator " + std::to_string(g) + " sends " + format_weight(w.coeffs, pres.weights().unit()) +
                        " outside the weight set");
      }
      perm.push_back(*idx);
    }
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error(ErrorCode::kWeightsNotPermuted, "generator " + std::to_string(g) + " merges weights");
    out.push_back(std::move(perm));
  }
  return out;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "permutations of different sizes");
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[b[i]];
  return out;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

// ---------------------------------------------------------------------------

ProductModel product_doubling(const ManifoldPresentation& a, const ManifoldPresentation& b) {
  const std::size_t la = a.dim_v();
  const std::size_t l = la + b.dim_v();
  std::vector<QVector> periods;
  for (const auto& p : a.periods()) {
    QVector v(l, Rational(0));
    std::copy(p.begin(), p.end(), v.begin());
    periods.push_back(v);
  }
  for (const auto& p : b.periods()) {
    QVector v(l, Rational(0));
    std::copy(p.begin(), p.end(), v.begin() + static_cast<std::ptrdiff_t>(la));
    periods.push_back(v);
  }
  RationalWeightSet weights(l, WeightUnit::kTwoPiI);
  for (const auto& w : a.weights().weights()) {
    QVector v(l, Rational(0));
    std::copy(w.coeffs.begin(), w.coeffs.end(), v.begin());
    weights.add(v, w.multiplicity);
  }
  for (const auto& w : b.weights().weights()) {
    QVector v(l, Rational(0));
    std::copy(w.coeffs.begin(), w.coeffs.end(), v.begin() + static_cast<std::ptrdiff_t>(la));
    weights.add(v, w.multiplicity);
  }
  std::vector<unsigned> genus = a.genus();
  genus.insert(genus.end(), b.genus().begin(), b.genus().end());
  return ProductModel{ManifoldPresentation(l, std::move(periods), std::move(weights), std::move(genus)), true};
}

ProductModel product_same_v(const ManifoldPresentation& a, const ManifoldPresentation& b) {
  if (a.dim_v() != b.dim_v()) throw Error(ErrorCode::kConventionMismatch, "same-V product over different V");
  RationalWeightSet weights = a.weights().intersect(b.weights());
  if (weights.empty() || !weights.spans()) return ProductModel{};
  std::vector<QVector> periods = a.periods();
  periods.insert(periods.end(), b.periods().begin(), b.periods().end());
  std::vector<unsigned> genus = a.genus();
  genus.insert(genus.end(), b.genus().begin(), b.genus().end());
  return ProductModel{ManifoldPresentation(a.dim_v(), std::move(periods), std::move(weights), std::move(genus)), true};
}

ManifoldPresentation tensor_power(const ManifoldPresentation& model, unsigned k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "tensor power must be positive");
  RationalWeightSet weights(model.dim_v(), WeightUnit::kTwoPiI);
  for (const auto& w : model.weights().weights()) {
    std::size_t m = 1;
    for (unsigned i = 0; i < k; ++i) m *= w.multiplicity;
    weights.add(w.coeffs, m);
  }
  std::vector<QVector> periods = model.periods();
  for (auto& p : periods)
    for (auto& x : p) x *= k;
  return ManifoldPresentation(model.dim_v(), std::move(periods), std::move(weights), model.genus());
}

}  // namespace polyquant
