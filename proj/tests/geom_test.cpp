#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "polyquant/geom.hpp"
#include "support.hpp"

using namespace polyquant;
using namespace testing_support;

namespace {

DegreeTable table(std::initializer_list<std::initializer_list<long>> rows) {
  DegreeTable t;
  for (const auto& r : rows) {
    std::vector<Integer> row;
    for (long x : r) row.emplace_back(x);
    t.push_back(row);
  }
  return t;
}

QMatrix qmat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<QVector> rs;
  for (const auto& r : rows) {
    QVector v;
    for (long x : r) v.emplace_back(x);
    rs.push_back(v);
  }
  return QMatrix::from_rows(rs, rs.front().size());
}

RationalWeightSet standard_weights(std::size_t l) {
  RationalWeightSet w(l, WeightUnit::kTwoPiI);
  for (std::size_t a = 0; a < l; ++a) {
    QVector e(l, Rational(0));
    e[a] = 1;
    w.add(e);
  }
  return w;
}

// Closed form sum_lambda m prod_j (k d + 1 - g).
Integer euler_oracle(const DegreeTable& rows, const std::vector<std::size_t>& mult, const std::vector<unsigned>& genus,
                     long k) {
  Integer total = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Integer p = static_cast<unsigned long>(mult[r]);
    for (std::size_t j = 0; j < rows[r].size(); ++j) p *= k * rows[r][j] + 1 - static_cast<long>(genus[j]);
    total += p;
  }
  return total;
}

// Number of monomials z^m with 0 <= m_j <= k d_j, by explicit enumeration.
long monomial_count(const std::vector<long>& bounds) {
  long count = 0;
  std::vector<long> m(bounds.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == bounds.size()) {
      ++count;
      return;
    }
    for (m[j] = 0; m[j] <= bounds[j]; ++m[j]) rec(j + 1);
  };
  rec(0);
  return count;
}

DegreeTable random_table(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
  std::uniform_int_distribution<long> d(lo, hi);
  DegreeTable t(rows, std::vector<Integer>(cols));
  for (auto& r : t)
    for (auto& x : r) x = d(rng);
  return t;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(Presentation, DegreesFromPeriods) {
  RationalWeightSet w(2, WeightUnit::kTwoPiI);
  w.add({Rational(1), Rational(0)});
  w.add({Rational(1, 2), Rational(1)});
  ManifoldPresentation m(2, {{Rational(2), Rational(3)}}, w, {0});
  std::set<std::vector<Integer>> rows(m.degrees().begin(), m.degrees().end());
  EXPECT_EQ(rows, (std::set<std::vector<Integer>>{{Integer(2)}, {Integer(4)}}));
  EXPECT_TRUE(m.positive());
}

TEST(Presentation, Errors) {
  RationalWeightSet half(1, WeightUnit::kTwoPiI);
  half.add({Rational(1, 2)});
  EXPECT_EQ(code_of([&] { ManifoldPresentation(1, {{Rational(1)}}, half, {0}); }), ErrorCode::kInconsistentDegrees);
  EXPECT_EQ(code_of([&] { ManifoldPresentation(1, {{Rational(2)}}, half, {0}, table({{2}})); }),
            ErrorCode::kInconsistentDegrees);
  EXPECT_EQ(code_of([] { ManifoldPresentation(2, {{Rational(1), Rational(1)}}, RationalWeightSet(2, WeightUnit::kTwoPiI), {0}); }),
            ErrorCode::kNotFaithful);
  RationalWeightSet unit_i(1, WeightUnit::kI);
  unit_i.add({Rational(1)});
  EXPECT_EQ(code_of([&] { ManifoldPresentation(1, {{Rational(1)}}, unit_i, {0}); }), ErrorCode::kConventionMismatch);
  EXPECT_EQ(code_of([] { ManifoldPresentation::from_degrees(table({{1, 2}}), {0}); }), ErrorCode::kDimensionMismatch);
}

TEST(Volume, Examples) {
  EXPECT_EQ(adapted_volume(ManifoldPresentation::from_degrees(table({{3}}))), Rational(3));
  EXPECT_EQ(adapted_volume(ManifoldPresentation::from_degrees(table({{1, 2}}))), Rational(2));
  EXPECT_EQ(adapted_volume(ManifoldPresentation::from_degrees(table({{1, 2}, {2, 1}}))), Rational(4));
}

TEST(Volume, AdditiveOverWeights) {
  std::mt19937_64 rng(seed() + 40);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 1 + rng() % 3;
    auto a = random_table(rng, 1, n, 1, 4), b = random_table(rng, 1, n, 1, 4);
    if (a == b) continue;
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    EXPECT_EQ(adapted_volume(ManifoldPresentation::from_degrees(ab)),
              adapted_volume(ManifoldPresentation::from_degrees(a)) + adapted_volume(ManifoldPresentation::from_degrees(b)));
  }
}

TEST(Volume, MultiplicativeOverFactors) {
  std::mt19937_64 rng(seed() + 41);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = ManifoldPresentation::from_degrees(random_table(rng, 1, 1 + rng() % 2, 1, 4));
    auto b = ManifoldPresentation::from_degrees(random_table(rng, 1, 1 + rng() % 2, 1, 4));
    auto p = product_same_v(a, b);
    ASSERT_TRUE(p.prequantizable);
    EXPECT_EQ(adapted_volume(*p.model), adapted_volume(a) * adapted_volume(b));
  }
}

TEST(RiemannRoch, Examples) {
  EXPECT_EQ(rr_index(ManifoldPresentation::from_degrees(table({{3}})), 2), 7);
  EXPECT_EQ(rr_index(ManifoldPresentation::from_degrees(table({{2, 2}})), 1), 9);
  auto zero = ManifoldPresentation::from_degrees(table({{0, 2}}));
  for (long k = 1; k <= 4; ++k) EXPECT_EQ(rr_index(zero, k), 2 * k + 1);
}

TEST(RiemannRoch, MatchesClosedFormAndChernTodd) {
  std::mt19937_64 rng(seed() + 42);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 3, rows = 1 + rng() % 2;
    auto t = random_table(rng, rows, n, -2, 4);
    if (rows == 2 && t[0] == t[1]) continue;
    std::vector<unsigned> genus(n);
    for (auto& g : genus) g = static_cast<unsigned>(rng() % 3);
    auto m = ManifoldPresentation::from_degrees(t, genus);
    std::vector<std::size_t> mult(rows, 1);
    // from_degrees orders rows as its weights; map back through the weight coefficients.
    DegreeTable ordered;
    for (const auto& w : m.weights().weights()) {
      std::size_t a = static_cast<std::size_t>(std::find(w.coeffs.begin(), w.coeffs.end(), Rational(1)) - w.coeffs.begin());
      ordered.push_back(t[a]);
    }
    EXPECT_EQ(ordered, m.degrees());
    for (long k = 1; k <= 5; ++k) {
      Integer expected = euler_oracle(t, mult, genus, k);
      EXPECT_EQ(rr_index(m, k), expected);
      EXPECT_EQ(chern_todd_index(m, k), Rational(expected));
    }
  }
}

TEST(RiemannRoch, GenusZeroPositiveIsMonomialCount) {
  for (long d1 = 1; d1 <= 3; ++d1)
    for (long d2 = 1; d2 <= 3; ++d2)
      for (long k = 1; k <= 4; ++k) {
        auto m = ManifoldPresentation::from_degrees(table({{d1, d2}}));
        EXPECT_EQ(rr_index(m, k), monomial_count({k * d1, k * d2}));
      }
}

TEST(RiemannRoch, ParallelTableMatchesSerial) {
  auto m = ManifoldPresentation::from_degrees(table({{1, 2, 3}, {2, 1, 1}}));
  std::vector<long> ks;
  for (long k = 1; k <= 40; ++k) ks.push_back(k);
  EXPECT_EQ(rr_table(m, ks), rr_table_serial(m, ks));
}

TEST(Growth, LineDegreeThree) {
  auto r = growth_check(ManifoldPresentation::from_degrees(table({{3}})), {1, 2, 3, 4});
  EXPECT_EQ(r.dims, (std::vector<Integer>{4, 7, 10, 13}));
  EXPECT_EQ(r.leading_coefficient, Rational(3));
  EXPECT_TRUE(r.leading_matches);
  EXPECT_TRUE(r.remainder_lower_order);
}

TEST(Growth, TwoLines) {
  auto r = growth_check(ManifoldPresentation::from_degrees(table({{1, 2}})), {1, 2, 3, 4, 5});
  EXPECT_EQ(r.leading_coefficient, Rational(2));
  EXPECT_TRUE(r.leading_matches);
  for (std::size_t i = 0; i < r.ks.size(); ++i) {
    long k = r.ks[i];
    EXPECT_EQ(r.dims[i], (k + 1) * (2 * k + 1));
    EXPECT_EQ(r.remainder[i], Rational(3 * k + 1));
  }
}

TEST(Growth, RandomPositiveModels) {
  std::mt19937_64 rng(seed() + 43);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + rng() % 3;
    auto t = random_table(rng, 1 + rng() % 2, n, 1, 4);
    if (t.size() == 2 && t[0] == t[1]) continue;
    auto m = ManifoldPresentation::from_degrees(t);
    std::vector<long> ks;
    for (long k = 1; k <= static_cast<long>(n) + 3; ++k) ks.push_back(k);
    auto r = growth_check(m, ks);
    EXPECT_TRUE(r.leading_matches);
    EXPECT_EQ(r.leading_coefficient, adapted_volume(m));
  }
}

TEST(Growth, Errors) {
  EXPECT_EQ(code_of([] { growth_check(ManifoldPresentation::from_degrees(table({{0, 2}})), {1, 2, 3}); }),
            ErrorCode::kNotPositive);
  EXPECT_EQ(code_of([] { growth_check(ManifoldPresentation::from_degrees(table({{2}})), {1}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { growth_check(ManifoldPresentation::from_degrees(table({{2}})), {1, 3}); }),
            ErrorCode::kInvalidArgument);
  // An empty weight set never reaches growth_check: construction rejects it.
  EXPECT_EQ(code_of([] { ManifoldPresentation(1, {{Rational(1)}}, RationalWeightSet(1, WeightUnit::kTwoPiI), {0}); }),
            ErrorCode::kNotFaithful);
}

TEST(Monodromy, Examples) {
  auto w = standard_weights(2);
  auto id = monodromy_weight_action(MonodromyPresentation({qmat({{1, 0}, {0, 1}})}, w));
  EXPECT_TRUE(is_identity(id[0]));
  auto swap = monodromy_weight_action(MonodromyPresentation({qmat({{0, 1}, {1, 0}})}, w));
  EXPECT_EQ(swap[0], (Permutation{1, 0}));
  EXPECT_TRUE(is_identity(compose(swap[0], swap[0])));
  EXPECT_EQ(code_of([&] { monodromy_weight_action(MonodromyPresentation({qmat({{2, 0}, {0, 2}})}, w)); }),
            ErrorCode::kWeightsNotPermuted);
  EXPECT_EQ(code_of([&] { MonodromyPresentation({qmat({{1, 1}, {1, 1}})}, w); }), ErrorCode::kInvalidArgument);
}

TEST(Monodromy, RandomPermutationMatrices) {
  std::mt19937_64 rng(seed() + 44);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t l = 2 + rng() % 3;
    std::vector<std::size_t> sigma(l);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    QMatrix tau(l, l);
    for (std::size_t a = 0; a < l; ++a) tau(sigma[a], a) = 1;
    auto perm = monodromy_weight_action(MonodromyPresentation({tau, tau * tau}, standard_weights(l)));
    ASSERT_EQ(perm.size(), 2u);
    EXPECT_EQ(perm[1], compose(perm[0], perm[0]));
    std::vector<std::size_t> sorted = perm[0];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < l; ++i) EXPECT_EQ(sorted[i], i);
  }
}

TEST(Products, Doubling) {
  auto a = ManifoldPresentation::from_degrees(table({{2}}));
  auto b = ManifoldPresentation::from_degrees(table({{3}}));
  auto p = product_doubling(a, b);
  ASSERT_TRUE(p.prequantizable);
  EXPECT_EQ(p.model->dim_v(), 2u);
  EXPECT_EQ(p.model->half_dim(), 2u);
  std::set<std::vector<Integer>> rows(p.model->degrees().begin(), p.model->degrees().end());
  EXPECT_EQ(rows, (std::set<std::vector<Integer>>{{Integer(2), Integer(0)}, {Integer(0), Integer(3)}}));
  EXPECT_FALSE(p.model->positive());
}

TEST(Products, SameVKeepsMinimalRank) {
  auto a = ManifoldPresentation::from_degrees(table({{1}, {2}}));
  auto b = ManifoldPresentation::from_degrees(table({{3, 1}, {1, 1}}));
  auto p = product_same_v(a, b);
  ASSERT_TRUE(p.prequantizable);
  EXPECT_TRUE(p.model->weights().is_basis());
  EXPECT_EQ(p.model->weights(), a.weights());
  EXPECT_EQ(p.model->half_dim(), 3u);
}

TEST(Products, SameVDisjointWeights) {
  RationalWeightSet wa(1, WeightUnit::kTwoPiI), wb(1, WeightUnit::kTwoPiI);
  wa.add({Rational(1)});
  wb.add({Rational(2)});
  ManifoldPresentation a(1, {{Rational(1)}}, wa, {0});
  ManifoldPresentation b(1, {{Rational(1)}}, wb, {0});
  auto p = product_same_v(a, b);
  EXPECT_FALSE(p.prequantizable);
  EXPECT_FALSE(p.model.has_value());
  EXPECT_EQ(code_of([] {
              product_same_v(ManifoldPresentation::from_degrees(table({{1}})),
                             ManifoldPresentation::from_degrees(table({{1}, {1}})));
            }),
            ErrorCode::kConventionMismatch);
}

TEST(Products, TensorPowerScalesDegrees) {
  std::mt19937_64 rng(seed() + 45);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_table(rng, 1 + rng() % 2, 1 + rng() % 3, 1, 3);
    if (t.size() == 2 && t[0] == t[1]) continue;
    auto m = ManifoldPresentation::from_degrees(t);
    unsigned k = 1 + static_cast<unsigned>(rng() % 4);
    auto p = tensor_power(m, k);
    ASSERT_EQ(p.weights().distinct(), m.weights().distinct());
    for (std::size_t i = 0; i < m.weights().distinct(); ++i) {
      EXPECT_EQ(p.weights().weights()[i].coeffs, m.weights().weights()[i].coeffs);
      for (std::size_t j = 0; j < m.half_dim(); ++j) EXPECT_EQ(p.degrees()[i][j], m.degrees()[i][j] * k);
    }
    EXPECT_EQ(rr_index(p, 1), rr_index(m, k));
  }
}
