#include <gtest/gtest.h>

#include <algorithm>

#include "polyquant/lattice.hpp"
#include "support.hpp"

using namespace polyquant;
using namespace testing_support;

namespace {

QVector qv(std::initializer_list<Rational> xs) { return QVector(xs); }

PeriodData periods(std::size_t dim_v, std::vector<QVector> ps) { return PeriodData{dim_v, std::move(ps)}; }

std::vector<QVector> random_integer_vectors(std::mt19937_64& rng, std::size_t count, std::size_t dim, long range) {
  std::uniform_int_distribution<long> d(-range, range);
  std::vector<QVector> out(count, QVector(dim));
  for (auto& v : out)
    for (auto& x : v) x = d(rng);
  return out;
}

// Unimodular matrix as a product of random elementary operations.
std::vector<std::vector<long>> random_unimodular(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::vector<long>> u(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  if (n < 2) return u;
  std::uniform_int_distribution<long> c(-2, 2);
  for (int step = 0; step < 6; ++step) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) {
      std::swap(u[i], u[(i + 1) % n]);
      continue;
    }
    long f = c(rng);
    for (std::size_t k = 0; k < n; ++k) u[i][k] += f * u[j][k];
  }
  return u;
}

std::vector<QVector> apply_rows(const std::vector<std::vector<long>>& u, const std::vector<QVector>& rows) {
  std::vector<QVector> out(u.size(), QVector(rows.front().size(), Rational(0)));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (std::size_t j = 0; j < rows[k].size(); ++j) out[i][j] += u[i][k] * rows[k][j];
  return out;
}

}  // namespace

TEST(Hnf, KnownForm) {
  IMatrixRows rows{{Integer(2), Integer(0)}, {Integer(3), Integer(0)}, {Integer(0), Integer(5)}};
  auto h = hermite_normal_form(rows, 2);
  EXPECT_EQ(h, (IMatrixRows{{Integer(1), Integer(0)}, {Integer(0), Integer(5)}}));
}

TEST(Hnf, DeterminantMatchesMinorGcd) {
  std::mt19937_64 rng(seed() + 30);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int trial = 0; trial < 80; ++trial) {
    std::size_t n = 1 + rng() % 3, m = n + rng() % 3;
    IMatrixRows rows(m, std::vector<Integer>(n));
    for (auto& r : rows)
      for (auto& x : r) x = d(rng);
    Integer g = maximal_minor_gcd(rows, n);
    auto h = hermite_normal_form(rows, n);
    if (g == 0) {
      EXPECT_LT(h.size(), n);
      continue;
    }
    ASSERT_EQ(h.size(), n);
    Integer det = 1;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(h[i][i], 0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(h[i][j], 0);
      for (std::size_t r = 0; r < i; ++r) {
        EXPECT_GE(h[r][i], 0);
        EXPECT_LT(h[r][i], h[i][i]);
      }
      det *= h[i][i];
    }
    EXPECT_EQ(det, g);
  }
}

TEST(SpanLattice, Examples) {
  auto l = span_lattice(periods(2, {qv({2, 0}), qv({3, 0}), qv({0, 5})}));
  EXPECT_EQ(l.basis(), (std::vector<QVector>{qv({1, 0}), qv({0, 5})}));
  EXPECT_TRUE(l.full());
  auto zero = span_lattice(periods(2, {}));
  EXPECT_EQ(zero.rank(), 0u);
  EXPECT_FALSE(zero.full());
  auto line = span_lattice(periods(2, {qv({1, 1})}));
  EXPECT_EQ(line.rank(), 1u);
  EXPECT_FALSE(line.full());
}

TEST(SpanLattice, InvariantUnderPermutationAndRecombination) {
  std::mt19937_64 rng(seed() + 31);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t l = 1 + rng() % 3, count = 1 + rng() % 4;
    auto gens = random_integer_vectors(rng, count, l, 5);
    for (auto& v : gens)
      for (auto& x : v) x /= Rational(1 + static_cast<long>(rng() % 3));
    RationalLattice base(l, gens);
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(RationalLattice(l, shuffled), base);
    EXPECT_EQ(RationalLattice(l, apply_rows(random_unimodular(rng, count), gens)), base);
    auto extended = gens;
    extended.push_back(apply_rows({std::vector<long>(count, 1)}, gens).front());
    EXPECT_EQ(RationalLattice(l, extended), base);
  }
}

TEST(SpanLattice, ContainmentIsAPartialOrder) {
  std::mt19937_64 rng(seed() + 32);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t l = 1 + rng() % 3;
    auto a = random_integer_vectors(rng, 1 + rng() % 3, l, 3);
    auto b = random_integer_vectors(rng, 1 + rng() % 3, l, 3);
    RationalLattice la(l, a), lb(l, b);
    auto ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    RationalLattice sum(l, ab);
    EXPECT_TRUE(sum.contains(la));
    EXPECT_TRUE(sum.contains(lb));
    EXPECT_TRUE(la.contains(la));
    if (la.contains(lb) && lb.contains(la)) {
      EXPECT_EQ(la, lb);
    }
    RationalLattice same(l, apply_rows(random_unimodular(rng, a.size()), a));
    EXPECT_TRUE(same.contains(la) && la.contains(same));
    EXPECT_EQ(same.basis(), la.basis());
    for (const auto& v : a) {
      auto c = la.coordinates(v);
      ASSERT_TRUE(c.has_value());
      QVector back(l, Rational(0));
      for (std::size_t i = 0; i < c->size(); ++i)
        for (std::size_t j = 0; j < l; ++j) back[j] += Rational((*c)[i]) * la.basis()[i][j];
      EXPECT_EQ(back, v);
    }
  }
}

TEST(PrequantumLattice, Examples) {
  EXPECT_TRUE(is_prequantum_lattice(RationalLattice::standard(2), periods(2, {qv({1, 0}), qv({0, 5})})));
  RationalLattice two(2, {qv({2, 0}), qv({0, 2})});
  EXPECT_FALSE(is_prequantum_lattice(two, periods(2, {qv({1, 0})})));
  RationalLattice half(2, {qv({1, 0}), qv({Rational(1, 2), Rational(1, 2)})});
  EXPECT_TRUE(is_prequantum_lattice(half, periods(2, {qv({0, 5})})));
  auto c = half.coordinates(qv({0, 5}));
  ASSERT_TRUE(c.has_value());
  try {
    is_prequantum_lattice(RationalLattice(2, {qv({1, 0})}), periods(2, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFull);
  }
}

TEST(PrincipalLattice, Examples) {
  auto p = principal_lattice(periods(2, {qv({1, 0}), qv({0, 5})}), seed());
  EXPECT_TRUE(p.full);
  EXPECT_TRUE(p.certified);
  EXPECT_EQ(p.superlattices_tested, 10u);
  EXPECT_EQ(p.lattice, RationalLattice(2, {qv({1, 0}), qv({0, 5})}));

  auto empty = principal_lattice(periods(2, {}), seed());
  EXPECT_FALSE(empty.full);
  ASSERT_TRUE(empty.witness.has_value());
  EXPECT_EQ(*empty.witness, RationalLattice::standard(2));

  auto three = principal_lattice(periods(1, {qv({3})}), seed());
  EXPECT_TRUE(three.certified);
  EXPECT_EQ(three.lattice.basis(), (std::vector<QVector>{qv({3})}));
}

TEST(PrincipalLattice, ContainedInRandomPrequantumLattices) {
  std::mt19937_64 rng(seed() + 33);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t l = 1 + rng() % 3;
    auto gens = random_integer_vectors(rng, l + 1, l, 4);
    PeriodData pd{l, gens};
    auto p = principal_lattice(pd, seed() + trial);
    if (!p.full) {
      ASSERT_TRUE(p.witness.has_value());
      EXPECT_TRUE(p.witness->full());
      EXPECT_TRUE(is_prequantum_lattice(*p.witness, pd));
      continue;
    }
    EXPECT_TRUE(p.certified);
    // Any full lattice containing the periods contains I_omega.
    auto extra = random_integer_vectors(rng, l, l, 3);
    auto all = gens;
    for (auto& v : extra) {
      for (auto& x : v) x /= Rational(2);
      all.push_back(v);
    }
    RationalLattice super(l, all);
    ASSERT_TRUE(is_prequantum_lattice(super, pd));
    EXPECT_TRUE(super.contains(p.lattice));
  }
}

TEST(Quantizable, Verdicts) {
  auto v = is_quantizable(periods(2, {qv({1, 0}), qv({0, 1})}));
  EXPECT_TRUE(v.quantizable);
  EXPECT_TRUE(v.minimal_rank_prequantization);
  EXPECT_TRUE(v.principal_prequantum_lattice);

  auto exact = is_quantizable(periods(2, {}));
  EXPECT_TRUE(exact.quantizable);
  EXPECT_TRUE(exact.prequantum_lattice_exists);

  auto deficient = is_quantizable(periods(2, {qv({1, 1}), qv({2, 2})}));
  EXPECT_TRUE(deficient.quantizable);
  EXPECT_FALSE(deficient.principal_prequantum_lattice);
  ASSERT_TRUE(deficient.witness.has_value());
  EXPECT_TRUE(deficient.witness->full());

  auto fiat = is_quantizable(periods(1, {qv({1})}), true);
  EXPECT_FALSE(fiat.quantizable);
  EXPECT_TRUE(fiat.nonquantizable_by_fiat);
}

TEST(Classification, Examples) {
  auto w = classify_minimal({qv({1, 0}), qv({0, 1})}, 2);
  EXPECT_EQ(w.unit(), WeightUnit::kTwoPiI);
  ASSERT_EQ(w.distinct(), 2u);
  EXPECT_TRUE(w.find(qv({1, 0})).has_value());
  EXPECT_TRUE(w.find(qv({0, 1})).has_value());

  auto sheared = classify_minimal({qv({2, 0}), qv({1, 1})}, 2);
  EXPECT_TRUE(sheared.find(qv({Rational(1, 2), Rational(-1, 2)})).has_value());
  EXPECT_TRUE(sheared.find(qv({0, 1})).has_value());
  EXPECT_EQ(weights_to_lattice(sheared), RationalLattice(2, {qv({2, 0}), qv({1, 1})}));

  try {
    classify_minimal({qv({1, 1}), qv({2, 2})}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotABasis);
  }
}

TEST(Classification, DualPairingIsIdentity) {
  std::mt19937_64 rng(seed() + 34);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t l = 1 + rng() % 3;
    QMatrix b = random_invertible(rng, l);
    std::vector<QVector> basis;
    for (std::size_t i = 0; i < l; ++i) basis.push_back(b.row(i));
    auto w = classify_minimal(basis, l);
    ASSERT_EQ(w.distinct(), l);
    // Each basis vector pairs to 1 with exactly one weight and to 0 with the others.
    for (const auto& v : basis) {
      std::size_t ones = 0, zeros = 0;
      for (const auto& weight : w.weights()) {
        Rational s = 0;
        for (std::size_t j = 0; j < l; ++j) s += weight.coeffs[j] * v[j];
        ones += s == 1;
        zeros += is_zero(s);
      }
      EXPECT_EQ(ones, 1u);
      EXPECT_EQ(zeros, l - 1);
    }
  }
}

TEST(Classification, RoundTripUnderUnimodularChange) {
  std::mt19937_64 rng(seed() + 35);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t l = 1 + rng() % 3;
    QMatrix b = random_invertible(rng, l);
    std::vector<QVector> basis;
    for (std::size_t i = 0; i < l; ++i) basis.push_back(b.row(i));
    auto changed = apply_rows(random_unimodular(rng, l), basis);
    auto back = weights_to_lattice(classify_minimal(changed, l));
    EXPECT_EQ(back, RationalLattice(l, basis));
  }
}

TEST(Classification, IntegralityOnSubLattices) {
  std::mt19937_64 rng(seed() + 36);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t l = 1 + rng() % 3;
    QMatrix b = random_invertible(rng, l);
    std::vector<QVector> basis;
    for (std::size_t i = 0; i < l; ++i) basis.push_back(b.row(i));
    auto w = classify_minimal(basis, l);
    // Periods drawn from the lattice of B.
    std::vector<QVector> ps;
    std::uniform_int_distribution<long> c(-4, 4);
    for (int k = 0; k < 3; ++k) {
      QVector v(l, Rational(0));
      for (const auto& row : basis) {
        long f = c(rng);
        for (std::size_t j = 0; j < l; ++j) v[j] += f * row[j];
      }
      ps.push_back(v);
    }
    EXPECT_TRUE(integrality_check(w, PeriodData{l, ps}));
    QVector off(l, Rational(0));
    for (std::size_t j = 0; j < l; ++j) off[j] = basis[0][j] / 2;
    ps.push_back(off);
    EXPECT_FALSE(integrality_check(w, PeriodData{l, ps}));
  }
}
