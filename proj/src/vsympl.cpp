#include "polyquant/vsympl.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace polyquant {

namespace {

QMatrix transpose_times(const QMatrix& a, const QMatrix& b, const QMatrix& c) {
  return a.transpose() * b * c;
}

std::vector<QVector> joint_kernel(const QMatrix& stacked) { return stacked.nullspace(); }

}  // namespace

VSymplecticSpace::VSymplecticSpace(std::size_t dim_u, std::vector<QMatrix> components)
    : dim_u_(dim_u), components_(std::move(components)) {
  if (dim_u_ == 0) throw Error(ErrorCode::kInvalidArgument, "dim U must be positive");
  if (components_.empty()) throw Error(ErrorCode::kInvalidArgument, "dim V must be positive");
  for (std::size_t a = 0; a < components_.size(); ++a) {
    const auto& m = components_[a];
    if (m.rows() != dim_u_ || m.cols() != dim_u_) {
      throw Error(ErrorCode::kDimensionMismatch, "component " + std::to_string(a) + " has wrong shape");
    }
    if (m.transpose() != -m) {
      throw Error(ErrorCode::kNotSkew, "component " + std::to_string(a) + " is not skew-symmetric");
    }
  }
  auto kernel = joint_kernel(stacked());
  nondegeneracy_.nondegenerate = kernel.empty();
  if (!kernel.empty()) nondegeneracy_.kernel_vector = kernel.front();
}

QVector VSymplecticSpace::evaluate(const QVector& x, const QVector& y) const {
  QVector out;
  out.reserve(dim_v());
  for (const auto& m : components_) {
    QVector my = m.apply(y);
    Rational s(0);
    for (std::size_t i = 0; i < dim_u_; ++i) s += x[i] * my[i];
    out.push_back(s);
  }
  return out;
}

QMatrix VSymplecticSpace::weighted_component(const QVector& lambda) const {
  if (lambda.size() != dim_v()) throw Error(ErrorCode::kDimensionMismatch, "weight length != dim V");
  QMatrix out(dim_u_, dim_u_);
  for (std::size_t a = 0; a < dim_v(); ++a) {
    if (is_zero(lambda[a])) continue;
    out += components_[a] * lambda[a];
  }
  return out;
}

QMatrix VSymplecticSpace::stacked() const {
  QMatrix s;
  for (const auto& m : components_) s = QMatrix::vstack(s, m);
  return s;
}

ComplexStructureJ::ComplexStructureJ(QMatrix j) : j_(std::move(j)) {
  if (!j_.is_square()) throw Error(ErrorCode::kDimensionMismatch, "J must be square");
  if (j_ * j_ != -QMatrix::identity(j_.rows())) {
    throw Error(ErrorCode::kNotCompatible, "J^2 != -1");
  }
}

// ---------------------------------------------------------------------------
// Model constructions

namespace {

std::vector<QMatrix> canonical_components(std::size_t k, std::size_t l) {
  std::size_t n = k * (1 + l);
  std::vector<QMatrix> comps;
  for (std::size_t a = 0; a < l; ++a) {
    QMatrix m(n, n);
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t p = k + a * k + j;
      m(j, p) = 1;
      m(p, j) = -1;
    }
    comps.push_back(std::move(m));
  }
  return comps;
}

}  // namespace

CanonicalModel::CanonicalModel(std::size_t dim_q, std::size_t dim_v)
    : dim_q_(dim_q), dim_v_(dim_v), space_(dim_q * (1 + dim_v), canonical_components(dim_q, dim_v)) {
  if (dim_q == 0 || dim_v == 0) throw Error(ErrorCode::kInvalidArgument, "canonical model dims must be >= 1");
}

Subspace CanonicalModel::momentum_factor() const {
  std::vector<QVector> basis;
  for (std::size_t i = dim_q_; i < dim(); ++i) {
    QVector v(dim(), Rational(0));
    v[i] = 1;
    basis.push_back(v);
  }
  return Subspace(dim(), basis);
}

Subspace CanonicalModel::position_factor() const {
  std::vector<QVector> basis;
  for (std::size_t i = 0; i < dim_q_; ++i) {
    QVector v(dim(), Rational(0));
    v[i] = 1;
    basis.push_back(v);
  }
  return Subspace(dim(), basis);
}

QMatrix CanonicalModel::lift_linear(const QMatrix& g) const {
  if (g.rows() != dim_q_ || g.cols() != dim_q_) throw Error(ErrorCode::kDimensionMismatch, "g must be dim_q square");
  auto g_inv = g.inverse();
  if (!g_inv) throw Error(ErrorCode::kInvalidArgument, "g is not invertible");
  QMatrix m(dim(), dim());
  for (std::size_t i = 0; i < dim_q_; ++i)
    for (std::size_t j = 0; j < dim_q_; ++j) m(q_index(i), q_index(j)) = g(i, j);
  for (std::size_t a = 0; a < dim_v_; ++a)
    for (std::size_t j = 0; j < dim_q_; ++j)
      for (std::size_t i = 0; i < dim_q_; ++i) m(p_index(a, j), p_index(a, i)) = (*g_inv)(i, j);
  return m;
}

ComplexStructureJ CanonicalModel::lift_complex_structure(const QMatrix& j_u) const {
  ComplexStructureJ check(j_u);  // validates J_U^2 = -1
  return ComplexStructureJ(lift_linear(check.matrix()));
}

QMatrix CanonicalModel::shear(const std::vector<QMatrix>& symmetric) const {
  if (symmetric.size() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "one symmetric form per V component");
  QMatrix m = QMatrix::identity(dim());
  for (std::size_t a = 0; a < dim_v_; ++a) {
    const auto& s = symmetric[a];
    if (s.rows() != dim_q_ || s.cols() != dim_q_ || s.transpose() != s) {
      throw Error(ErrorCode::kInvalidArgument, "shear form " + std::to_string(a) + " is not symmetric");
    }
    for (std::size_t j = 0; j < dim_q_; ++j)
      for (std::size_t i = 0; i < dim_q_; ++i) m(p_index(a, j), q_index(i)) += s(j, i);
  }
  return m;
}

VSymplecticSpace make_canonical_model(std::size_t dim_q, std::size_t dim_v) {
  return CanonicalModel(dim_q, dim_v).space();
}

LieModel make_lie_model(const std::vector<std::vector<QVector>>& c) {
  const std::size_t n = c.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty Lie algebra");
  for (const auto& plane : c) {
    if (plane.size() != n) throw Error(ErrorCode::kDimensionMismatch, "structure constants must be n x n x n");
    for (const auto& line : plane)
      if (line.size() != n) throw Error(ErrorCode::kDimensionMismatch, "structure constants must be n x n x n");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (c[i][j][k] != -c[j][i][k]) {
          throw Error(ErrorCode::kNotSkew, "c^" + std::to_string(k) + "_{" + std::to_string(i) + std::to_string(j) +
                                               "} is not antisymmetric");
        }
  // [[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j] = 0
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          Rational s(0);
          for (std::size_t m = 0; m < n; ++m) {
            s += c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l];
          }
          if (!is_zero(s)) {
            throw Error(ErrorCode::kJacobiViolation, "Jacobi identity fails for (" + std::to_string(i) + "," +
                                                         std::to_string(j) + "," + std::to_string(k) + ")");
          }
        }
  std::vector<QMatrix> comps;
  for (std::size_t l = 0; l < n; ++l) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = c[i][j][l];
    comps.push_back(std::move(m));
  }
  VSymplecticSpace space(n, std::move(comps));
  auto center = joint_kernel(space.stacked());
  return LieModel{std::move(space), std::move(center)};
}

// ---------------------------------------------------------------------------
// Orthogonals and Hamiltonian data

Nondegeneracy is_nondegenerate(const VSymplecticSpace& space) { return space.nondegeneracy(); }

namespace {

template <typename T>
BasicSubspace<T> orthogonal_impl(const BasicSubspace<T>& w, const std::vector<Matrix<T>>& comps, std::size_t n) {
  if (w.ambient_dim() != n) throw Error(ErrorCode::kDimensionMismatch, "subspace ambient dim != dim U");
  std::vector<std::vector<T>> rows;
  for (const auto& om : comps)
    for (const auto& v : w.basis()) rows.push_back(om.apply(v));
  Matrix<T> system = rows.empty() ? Matrix<T>(0, n) : Matrix<T>::from_rows(rows, n);
  return BasicSubspace<T>(n, system.nullspace());
}

std::vector<GMatrix> complex_components(const VSymplecticSpace& space) {
  std::vector<GMatrix> out;
  for (const auto& m : space.components()) out.push_back(complexify(m));
  return out;
}

}  // namespace

Subspace poly_orthogonal(const Subspace& w, const VSymplecticSpace& space) {
  return orthogonal_impl(w, space.components(), space.dim_u());
}

ComplexSubspace poly_orthogonal(const ComplexSubspace& w, const VSymplecticSpace& space) {
  return orthogonal_impl(w, complex_components(space), space.dim_u());
}

bool is_lagrangian(const Subspace& w, const VSymplecticSpace& space) { return poly_orthogonal(w, space) == w; }

bool is_lagrangian(const ComplexSubspace& w, const VSymplecticSpace& space) {
  return poly_orthogonal(w, space) == w;
}

QVector hamiltonian_solve(const LinearObservable& f, const VSymplecticSpace& space) {
  const std::size_t n = space.dim_u();
  const std::size_t l = space.dim_v();
  if (f.differential.rows() != l || f.differential.cols() != n || f.value_at_origin.size() != l) {
    throw Error(ErrorCode::kDimensionMismatch, "observable shape does not match the space");
  }
  // Omega_a X = (d f_a)^T, accumulated one component at a time to locate the obstruction.
  QMatrix system;
  QVector rhs;
  for (std::size_t a = 0; a < l; ++a) {
    system = QMatrix::vstack(system, space.component(a));
    for (std::size_t i = 0; i < n; ++i) rhs.push_back(f.differential(a, i));
    if (!system.solve(rhs)) {
      throw Error(ErrorCode::kNotHamiltonian,
                  "df is not in the image of iota omega (component " + std::to_string(a) + ")");
    }
  }
  return *system.solve(rhs);
}

QVector bracket(const LinearObservable& f, const LinearObservable& h, const VSymplecticSpace& space) {
  QVector xf = hamiltonian_solve(f, space);
  QVector xh = hamiltonian_solve(h, space);
  QVector value = space.evaluate(xf, xh);
  QVector derivative = h.differential.apply(xf);
  if (value != derivative) throw Error(ErrorCode::kInvalidArgument, "omega(X_f, X_h) != X_f h");
  return value;
}

bool compatible_complex_check(const ComplexStructureJ& j, const VSymplecticSpace& space) {
  const auto& m = j.matrix();
  if (m.rows() != space.dim_u()) return false;
  for (const auto& om : space.components()) {
    if (transpose_times(m, om, m) != om) return false;
  }
  return true;
}

EigenspaceSplit eigenspace_split(const ComplexStructureJ& j, const VSymplecticSpace& space) {
  if (!compatible_complex_check(j, space)) throw Error(ErrorCode::kNotCompatible, "J is not a V-symplectomorphism");
  const std::size_t n = space.dim_u();
  GMatrix jc = complexify(j.matrix());
  GMatrix shift = GMatrix::identity(n) * GaussianRational::i();
  ComplexSubspace plus(n, (jc - shift).nullspace());
  ComplexSubspace minus(n, (jc + shift).nullspace());
  EigenspaceSplit out{plus, minus};
  out.plus_lagrangian = is_lagrangian(out.plus, space);
  out.minus_lagrangian = is_lagrangian(out.minus, space);
  return out;
}

// ---------------------------------------------------------------------------
// Definiteness

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::kPositiveDefinite: return "positive-definite";
    case Definiteness::kNegativeDefinite: return "negative-definite";
    case Definiteness::kIndefinite: return "indefinite";
    case Definiteness::kDegenerate: return "degenerate";
  }
  return "?";
}

// Any form taking both signs is indefinite, kernel or not; a singular semidefinite
// form is degenerate.
Definiteness classify(const Inertia& in) {
  if (in.positive > 0 && in.negative > 0) return Definiteness::kIndefinite;
  if (in.zero > 0) return Definiteness::kDegenerate;
  return in.positive > 0 ? Definiteness::kPositiveDefinite : Definiteness::kNegativeDefinite;
}

namespace {

Definiteness float_classify(const QMatrix& g) {
  const auto n = static_cast<Eigen::Index>(g.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(i, j).get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  Inertia in;
  for (Eigen::Index i = 0; i < n; ++i) {
    double ev = solver.eigenvalues()(i);
    if (ev > 1e-9) ++in.positive;
    else if (ev < -1e-9) ++in.negative;
    else ++in.zero;
  }
  return classify(in);
}

}  // namespace

DefinitenessReport definiteness_report(const ComplexStructureJ& j, const VSymplecticSpace& space,
                                       const std::vector<QVector>& weights) {
  if (!compatible_complex_check(j, space)) throw Error(ErrorCode::kNotCompatible, "J is not a V-symplectomorphism");
  EigenspaceSplit split = eigenspace_split(j, space);
  const auto& plus_basis = split.plus.basis();
  const std::size_t m = plus_basis.size();

  DefinitenessReport report;
  report.definite = !weights.empty();
  report.positive = !weights.empty();
  report.all_cross_checks_agree = true;
  for (const auto& lambda : weights) {
    WeightDefiniteness wd;
    wd.weight = lambda;
    QMatrix om = space.weighted_component(lambda);
    QMatrix gram = om * j.matrix();  // <u, u'>_lambda = u^T Omega_lambda J u'
    if (gram.transpose() != gram) throw Error(ErrorCode::kNotSymmetric, "omega(u, J u') is not symmetric");
    wd.form_inertia = inertia(gram);
    wd.verdict = classify(wd.form_inertia);
    wd.float_verdict = float_classify(gram);

    // N(u, w) = -(i/2) omega_lambda(u, conj w) on U_+; N(Ju + iu) = <u, u>.
    GMatrix omc = complexify(om);
    GMatrix hermitian(m, m);
    const GaussianRational factor(Rational(0), Rational(-1, 2));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        GVector wbar;
        for (const auto& z : plus_basis[b]) wbar.push_back(conj(z));
        GVector ow = omc.apply(wbar);
        GaussianRational s(0);
        for (std::size_t i = 0; i < ow.size(); ++i) s += plus_basis[a][i] * ow[i];
        hermitian(a, b) = factor * s;
      }
    wd.eigenspace_inertia = inertia(hermitian);
    wd.eigenspace_verdict = classify(wd.eigenspace_inertia);
    wd.cross_check_agrees = wd.eigenspace_verdict == wd.verdict;
    wd.positive = wd.form_inertia.negative == 0;

    bool definite = wd.verdict == Definiteness::kPositiveDefinite || wd.verdict == Definiteness::kNegativeDefinite;
    report.definite = report.definite && definite;
    report.positive = report.positive && wd.positive;
    report.all_cross_checks_agree = report.all_cross_checks_agree && wd.cross_check_agrees;
    report.per_weight.push_back(std::move(wd));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Scaling witness, symbol map, moment map

ScalingWitness scaling_determinant(const Rational& alpha, std::size_t dim_u, std::size_t dim_v) {
  if (alpha <= 1) throw Error(ErrorCode::kInvalidArgument, "alpha must exceed 1");
  CanonicalModel model(dim_u, dim_v);
  QMatrix map(model.dim(), model.dim());
  Rational inv = 1 / alpha;
  for (std::size_t i = 0; i < model.dim(); ++i) map(i, i) = i < dim_u ? alpha : inv;
  ScalingWitness w;
  w.is_symplectomorphism = true;
  for (const auto& om : model.space().components()) {
    if (transpose_times(map, om, map) != om) w.is_symplectomorphism = false;
  }
  w.determinant = map.determinant();
  long exponent = static_cast<long>(dim_u) * (1 - static_cast<long>(dim_v));
  w.expected = pow(alpha, exponent);
  return w;
}

namespace {

// Sorts a copy of the indices; returns the permutation sign, 0 on a repeated index.
int sort_with_sign(std::vector<std::size_t>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

}  // namespace

void AlternatingForm::set(std::vector<std::size_t> indices, const Rational& value) {
  if (indices.size() != degree_) throw Error(ErrorCode::kDimensionMismatch, "index tuple length != degree");
  for (auto i : indices)
    if (i >= dim_) throw Error(ErrorCode::kDimensionMismatch, "index out of range");
  int sign = sort_with_sign(indices);
  if (sign == 0) {
    if (!is_zero(value)) throw Error(ErrorCode::kNotSkew, "alternating form with repeated index");
    return;
  }
  Rational v = sign > 0 ? value : Rational(-value);
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const auto& t) { return t.first == indices; });
  if (it != terms_.end()) it->second = v;
  else {
    terms_.emplace_back(indices, v);
    std::sort(terms_.begin(), terms_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
}

Rational AlternatingForm::evaluate_basis(const std::vector<std::size_t>& indices) const {
  if (indices.size() != degree_) throw Error(ErrorCode::kDimensionMismatch, "index tuple length != degree");
  std::vector<std::size_t> idx = indices;
  int sign = sort_with_sign(idx);
  if (sign == 0) return Rational(0);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), idx,
                             [](const auto& t, const std::vector<std::size_t>& key) { return t.first < key; });
  if (it == terms_.end() || it->first != idx) return Rational(0);
  return sign > 0 ? it->second : Rational(-it->second);
}

std::vector<std::vector<std::size_t>> exterior_basis(std::size_t dim, std::size_t degree) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == degree) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < dim; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

VSymplecticSpace symbol_map(const AlternatingForm& omega_top) {
  if (omega_top.degree() < 2) throw Error(ErrorCode::kInvalidArgument, "symbol map needs a form of degree >= 2");
  const std::size_t n = omega_top.dim();
  const std::size_t k = omega_top.degree() - 1;
  std::vector<QMatrix> comps;
  for (const auto& subset : exterior_basis(n, k - 1)) {
    QMatrix m(n, n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        std::vector<std::size_t> idx{x, y};
        idx.insert(idx.end(), subset.begin(), subset.end());
        m(x, y) = omega_top.evaluate_basis(idx);
      }
    comps.push_back(std::move(m));
  }
  return VSymplecticSpace(n, std::move(comps));
}

QMatrix moment_map_linear(const CanonicalModel& model, const std::vector<QVector>& fundamental_fields,
                          const QMatrix& phi) {
  if (phi.rows() != model.dim_v() || phi.cols() != model.dim_q()) {
    throw Error(ErrorCode::kDimensionMismatch, "phi must be dim V x dim U");
  }
  QMatrix out(model.dim_v(), fundamental_fields.size());
  for (std::size_t g = 0; g < fundamental_fields.size(); ++g) {
    QVector value = phi.apply(fundamental_fields[g]);
    for (std::size_t a = 0; a < model.dim_v(); ++a) out(a, g) = value[a];
  }
  return out;
}

}  // namespace polyquant
