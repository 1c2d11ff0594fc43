#include "polyquant/lattice.hpp"

#include <random>

#include "polyquant/error.hpp"
#include "polyquant/matrix.hpp"

namespace polyquant {

IMatrixRows hermite_normal_form(IMatrixRows rows, std::size_t cols) {
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
    // Euclid on column c among rows top.. until a single nonzero entry remains.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (sgn(rows[r][c]) == 0) continue;
        if (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c])) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool reduced = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (sgn(rows[r][c]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[top][c].get_mpz_t());
        for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[top][j];
        if (sgn(rows[r][c]) != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (sgn(rows[top][c]) == 0) continue;
    if (sgn(rows[top][c]) < 0)
      for (auto& x : rows[top]) x = -x;
    for (std::size_t r = 0; r < top; ++r) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[top][c].get_mpz_t());
      if (sgn(q) == 0) continue;
      for (std::size_t j = c; j < cols; ++j) rows[r][j] -= q * rows[top][j];
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

RationalLattice::RationalLattice(std::size_t dim_v, const std::vector<QVector>& generators) : dim_v_(dim_v) {
  if (dim_v == 0) throw Error(ErrorCode::kInvalidArgument, "dim V must be positive");
  Integer scale = 1;
  for (const auto& g : generators) {
    if (g.size() != dim_v) throw Error(ErrorCode::kDimensionMismatch, "generator length != dim V");
    for (const auto& x : g) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den_mpz_t());
  }
  IMatrixRows rows;
  for (const auto& g : generators) {
    std::vector<Integer> row;
    for (const auto& x : g) row.push_back(Integer(x.get_num() * (scale / x.get_den())));
    rows.push_back(std::move(row));
  }
  for (const auto& row : hermite_normal_form(std::move(rows), dim_v)) {
    QVector v;
    for (const auto& x : row) {
      Rational q(x, scale);
      q.canonicalize();
      v.push_back(q);
    }
    std::size_t p = 0;
    while (is_zero(v[p])) ++p;
    pivots_.push_back(p);
    basis_.push_back(std::move(v));
  }
}

RationalLattice RationalLattice::standard(std::size_t dim_v) {
  std::vector<QVector> e;
  for (std::size_t i = 0; i < dim_v; ++i) {
    QVector v(dim_v, Rational(0));
    v[i] = 1;
    e.push_back(v);
  }
  return RationalLattice(dim_v, e);
}

std::optional<std::vector<Integer>> RationalLattice::coordinates(const QVector& v) const {
  if (v.size() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "vector length != dim V");
  QVector rest = v;
  std::vector<Integer> coords;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    Rational c = rest[pivots_[i]] / basis_[i][pivots_[i]];
    if (c.get_den() != 1) return std::nullopt;
    for (std::size_t j = 0; j < dim_v_; ++j) rest[j] -= c * basis_[i][j];
    coords.push_back(c.get_num());
  }
  for (const auto& x : rest)
    if (!is_zero(x)) return std::nullopt;
  return coords;
}

bool RationalLattice::contains(const RationalLattice& sub) const {
  if (sub.dim_v_ != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "lattices in different V");
  for (const auto& b : sub.basis_)
    if (!contains(b)) return false;
  return true;
}

RationalLattice span_lattice(const PeriodData& periods) { return RationalLattice(periods.dim_v, periods.periods); }

bool is_prequantum_lattice(const RationalLattice& i, const PeriodData& periods) {
  if (!i.full()) throw Error(ErrorCode::kNotFull, "a prequantum lattice must be full");
  if (i.dim_v() != periods.dim_v) throw Error(ErrorCode::kDimensionMismatch, "lattice and periods in different V");
  for (const auto& p : periods.periods)
    if (!i.contains(p)) return false;
  return true;
}

namespace {

// Completes an HNF basis to a full lattice with unit vectors in the non-pivot columns.
RationalLattice complete(const RationalLattice& lattice) {
  std::vector<QVector> gens = lattice.basis();
  std::vector<bool> pivot(lattice.dim_v(), false);
  for (const auto& b : gens) {
    std::size_t p = 0;
    while (is_zero(b[p])) ++p;
    pivot[p] = true;
  }
  for (std::size_t c = 0; c < lattice.dim_v(); ++c) {
    if (pivot[c]) continue;
    QVector e(lattice.dim_v(), Rational(0));
    e[c] = 1;
    gens.push_back(e);
  }
  return RationalLattice(lattice.dim_v(), gens);
}

}  // namespace

PrincipalLattice principal_lattice(const PeriodData& periods, std::uint64_t seed, std::size_t trials) {
  PrincipalLattice out{span_lattice(periods), false, false, 0, std::nullopt};
  out.full = out.lattice.full();
  if (!out.full) {
    out.witness = complete(out.lattice);
    return out;
  }
  out.witness = out.lattice;
  const std::size_t l = periods.dim_v;
  QMatrix b = QMatrix::from_rows(out.lattice.basis(), l);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-3, 3);
  out.certified = true;
  while (out.superlattices_tested < trials) {
    QMatrix t(l, l);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < l; ++j) t(i, j) = entry(rng);
    auto t_inv = t.inverse();
    if (!t_inv) continue;
    QMatrix super = *t_inv * b;
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < l; ++i) rows.push_back(super.row(i));
    RationalLattice candidate(l, rows);
    if (!is_prequantum_lattice(candidate, periods) || !candidate.contains(out.lattice)) out.certified = false;
    ++out.superlattices_tested;
  }
  return out;
}

QuantizabilityVerdict is_quantizable(const PeriodData& periods, bool nonquantizable_by_fiat) {
  QuantizabilityVerdict v;
  v.nonquantizable_by_fiat = nonquantizable_by_fiat;
  if (nonquantizable_by_fiat) return v;
  RationalLattice i_omega = span_lattice(periods);
  v.periods_discrete = true;
  v.principal_prequantum_lattice = i_omega.full();
  v.witness = i_omega.full() ? i_omega : complete(i_omega);
  v.prequantum_lattice_exists = is_prequantum_lattice(*v.witness, periods);
  v.minimal_rank_prequantization = v.prequantum_lattice_exists;
  v.quantizable = v.prequantum_lattice_exists;
  return v;
}

RationalWeightSet classify_minimal(const std::vector<QVector>& basis, std::size_t dim_v) {
  if (basis.size() != dim_v) throw Error(ErrorCode::kNotABasis, "need exactly dim V basis vectors");
  for (const auto& b : basis)
    if (b.size() != dim_v) throw Error(ErrorCode::kDimensionMismatch, "basis vector length != dim V");
  auto dual = QMatrix::from_rows(basis, dim_v).transpose().inverse();
  if (!dual) throw Error(ErrorCode::kNotABasis, "basis vectors are dependent");
  RationalWeightSet out(dim_v, WeightUnit::kTwoPiI);
  for (std::size_t i = 0; i < dim_v; ++i) out.add(dual->row(i));
  return out;
}

RationalLattice weights_to_lattice(const RationalWeightSet& weights) {
  if (weights.unit() != WeightUnit::kTwoPiI)
    throw Error(ErrorCode::kConventionMismatch, "lattice weights must be rational multiples of 2πi");
  if (!weights.is_basis()) throw Error(ErrorCode::kNotABasis, "weights do not form a basis of iV*");
  const std::size_t l = weights.dim_v();
  std::vector<QVector> rows;
  for (const auto& w : weights.weights()) rows.push_back(w.coeffs);
  QMatrix b = *QMatrix::from_rows(rows, l).transpose().inverse();
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < l; ++i) basis.push_back(b.row(i));
  return RationalLattice(l, basis);
}

bool integrality_check(const RationalWeightSet& weights, const PeriodData& periods) {
  if (weights.unit() != WeightUnit::kTwoPiI)
    throw Error(ErrorCode::kConventionMismatch, "integrality is stated for weights in units of 2πi");
  for (const auto& w : weights.weights())
    for (const auto& p : periods.periods) {
      if (p.size() != w.coeffs.size()) throw Error(ErrorCode::kDimensionMismatch, "period length != dim V");
      Rational s(0);
      for (std::size_t a = 0; a < p.size(); ++a) s += w.coeffs[a] * p[a];
      if (s.get_den() != 1) return false;
    }
  return true;
}

}  // namespace polyquant
