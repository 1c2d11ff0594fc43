#include "polyquant/matrix.hpp"

namespace polyquant {

GMatrix complexify(const QMatrix& m) {
  GMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = GaussianRational(m(i, j));
  return out;
}

GVector complexify(const QVector& v) {
  GVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

namespace {

Rational real_part(const Rational& x) { return x; }
Rational real_part(const GaussianRational& z) { return z.re; }

// Symmetric Gaussian elimination H -> P H P^*. Diagonal pivots first; when the active
// block has a zero diagonal, fold an off-diagonal entry onto the diagonal.
template <typename T>
Inertia congruence_inertia(Matrix<T> h) {
  if (!h.is_square()) throw Error(ErrorCode::kDimensionMismatch, "inertia of non-square matrix");
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (h(i, j) != conj(h(j, i))) throw Error(ErrorCode::kNotSymmetric, "form is not Hermitian");

  auto add_multiple = [&](std::size_t target, std::size_t source, const T& c) {
    // row_t += c row_s ; col_t += conj(c) col_s
    for (std::size_t j = 0; j < n; ++j) h(target, j) += c * h(source, j);
    for (std::size_t i = 0; i < n; ++i) h(i, target) += conj(c) * h(i, source);
  };
  auto swap_sym = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    h.swap_rows(a, b);
    for (std::size_t i = 0; i < n; ++i) std::swap(h(i, a), h(i, b));
  };

  Inertia result;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t i = k; i < n; ++i)
      if (!is_zero(h(i, i))) {
        pivot = i;
        break;
      }
    if (pivot == n) {
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = k; j < n && !found; ++j) {
          if (i != j && !is_zero(h(i, j))) {
            T c = h(i, j);  // new diagonal entry is 2|h_ij|^2
            add_multiple(i, j, c);
            found = true;
            pivot = i;
          }
        }
      if (!found) {
        result.zero += n - k;
        break;
      }
    }
    swap_sym(pivot, k);
    T inv = T(1) / h(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (is_zero(h(i, k))) continue;
      T c = -(h(i, k) * inv);
      add_multiple(i, k, c);
    }
    int s = sgn(real_part(h(k, k)));
    if (s > 0) ++result.positive;
    else ++result.negative;
  }
  return result;
}

}  // namespace

Inertia inertia(const QMatrix& symmetric) { return congruence_inertia(symmetric); }
Inertia inertia(const GMatrix& hermitian) { return congruence_inertia(hermitian); }

}  // namespace polyquant
