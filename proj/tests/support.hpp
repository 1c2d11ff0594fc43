#pragma once

// Shared generators and independent oracles for the test suites.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "polyquant/commands.hpp"
#include "polyquant/matrix.hpp"
#include "polyquant/prequant.hpp"
#include "polyquant/vsympl.hpp"

namespace testing_support {

using namespace polyquant;

inline std::uint64_t seed() { return seed_from_env(); }

inline Rational random_rational(std::mt19937_64& rng, long range = 5, long max_den = 4) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline QMatrix random_qmatrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long range = 3) {
  QMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rational(rng, range, 1);
  return m;
}

inline QMatrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  while (true) {
    QMatrix m = random_qmatrix(rng, n, n);
    if (!is_zero(m.determinant())) return m;
  }
}

inline QMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = random_rational(rng, 2, 2);
  return m;
}

/// A random J_U with J_U^2 = -1 on U = Q^n, n even.
inline QMatrix random_j_u(std::mt19937_64& rng, std::size_t n) {
  QMatrix j0(n, n);
  for (std::size_t b = 0; b + 1 < n; b += 2) {
    j0(b + 1, b) = 1;
    j0(b, b + 1) = -1;
  }
  QMatrix p = random_invertible(rng, n);
  return p * j0 * *p.inverse();
}

/// A compatible complex structure on the canonical model: the lift of a random J_U,
/// conjugated by a random product of linear lifts and shears.
inline ComplexStructureJ random_compatible_j(std::mt19937_64& rng, const CanonicalModel& model) {
  QMatrix j = model.lift_complex_structure(random_j_u(rng, model.dim_q())).matrix();
  QMatrix m = model.lift_linear(random_invertible(rng, model.dim_q()));
  std::vector<QMatrix> forms;
  for (std::size_t a = 0; a < model.dim_v(); ++a) forms.push_back(random_symmetric(rng, model.dim_q()));
  m = model.shear(forms) * m;
  return ComplexStructureJ(m * j * *m.inverse());
}

/// Commuting exact skew-Hermitian family U (i D_a) U^* with U a Cayley transform of a
/// random skew-Hermitian K. `weights[s]` is the weight (over i) of basis vector s.
inline std::vector<GMatrix> random_exact_family(std::mt19937_64& rng, const std::vector<QVector>& weights,
                                                std::size_t dim_v) {
  const std::size_t r = weights.size();
  GMatrix k(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    k(i, i) = GaussianRational(Rational(0), random_rational(rng, 1, 2));
    for (std::size_t j = i + 1; j < r; ++j) {
      GaussianRational z(random_rational(rng, 1, 2), random_rational(rng, 1, 2));
      k(i, j) = z;
      k(j, i) = -conj(z);
    }
  }
  GMatrix id = GMatrix::identity(r);
  GMatrix u = (id - k) * *(id + k).inverse();
  GMatrix u_star = u.adjoint();
  std::vector<GMatrix> gens;
  for (std::size_t a = 0; a < dim_v; ++a) {
    GMatrix d(r, r);
    for (std::size_t s = 0; s < r; ++s) d(s, s) = GaussianRational(Rational(0), weights[s][a]);
    gens.push_back(u * d * u_star);
  }
  return gens;
}

/// Floating family Q diag(i w) Q^* with Q from a Householder QR of a random matrix.
inline std::vector<CMatrix> random_float_family(std::mt19937_64& rng, const std::vector<std::vector<double>>& weights,
                                                std::size_t dim_v) {
  const auto r = static_cast<Eigen::Index>(weights.size());
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) z(i, j) = {g(rng), g(rng)};
  CMatrix q = Eigen::HouseholderQR<CMatrix>(z).householderQ();
  std::vector<CMatrix> gens;
  for (std::size_t a = 0; a < dim_v; ++a) {
    CMatrix d = CMatrix::Zero(r, r);
    for (Eigen::Index s = 0; s < r; ++s) d(s, s) = {0.0, weights[static_cast<std::size_t>(s)][a]};
    CMatrix m = q * d * q.adjoint();
    gens.push_back(0.5 * (m - m.adjoint()));
  }
  return gens;
}

/// Number of m in the box prod [0, upper_j] with sum a_j m_j = target, by dynamic
/// programming over partial sums.
inline long slice_count_dp(const std::vector<long>& upper, const std::vector<long>& action, long target) {
  std::map<long, long> counts{{0, 1}};
  for (std::size_t j = 0; j < upper.size(); ++j) {
    std::map<long, long> next;
    for (const auto& [s, c] : counts)
      for (long m = 0; m <= upper[j]; ++m) next[s + action[j] * m] += c;
    counts = std::move(next);
  }
  auto it = counts.find(target);
  return it == counts.end() ? 0 : it->second;
}

/// gcd of the maximal minors of an integer matrix with `cols` columns and full column
/// rank; equals the index of the lattice it generates in Z^cols.
inline Integer maximal_minor_gcd(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  Integer g = 0;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (pick.size() == cols) {
      QMatrix m(cols, cols);
      for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(rows[pick[i]][j]);
      Integer d = abs(m.determinant().get_num());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return g;
}

}  // namespace testing_support
