#include "polyquant/prequant.hpp"

#include <algorithm>
#include <cmath>

namespace polyquant {

namespace {

using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CMatrix to_cmatrix(const GMatrix& g) {
  CMatrix m(static_cast<Eigen::Index>(g.rows()), static_cast<Eigen::Index>(g.cols()));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_complex(g(i, j));
  return m;
}

void validate_floating(std::size_t dim_v, const std::vector<CMatrix>& gens) {
  if (dim_v == 0) throw Error(ErrorCode::kInvalidArgument, "dim V must be positive");
  if (gens.size() != dim_v) throw Error(ErrorCode::kDimensionMismatch, "need one generator per V coordinate");
  const auto r = gens.front().rows();
  for (std::size_t a = 0; a < gens.size(); ++a) {
    const auto& g = gens[a];
    if (g.rows() != r || g.cols() != r) throw Error(ErrorCode::kDimensionMismatch, "generators must be rank x rank");
    double scale = std::max(1.0, max_abs(g));
    if (max_abs(g + g.adjoint()) > kSkewHermitianTolerance * scale) {
      throw Error(ErrorCode::kNotSkewHermitian, "generator " + std::to_string(a) + " is not skew-Hermitian");
    }
  }
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      double scale = std::max(1.0, max_abs(gens[a]) * max_abs(gens[b]));
      if (max_abs(gens[a] * gens[b] - gens[b] * gens[a]) > 1e-10 * scale) {
        throw Error(ErrorCode::kNotCommuting,
                    "generators " + std::to_string(a) + " and " + std::to_string(b) + " do not commute");
      }
    }
}

}  // namespace

AbelianRep::AbelianRep(std::size_t dim_v, std::vector<CMatrix> generators)
    : dim_v_(dim_v), generators_(std::move(generators)) {
  validate_floating(dim_v_, generators_);
  rank_ = static_cast<std::size_t>(generators_.front().rows());
  if (rank_ == 0) throw Error(ErrorCode::kInvalidArgument, "rank must be positive");
}

AbelianRep AbelianRep::exact(std::size_t dim_v, std::vector<GMatrix> generators) {
  if (generators.size() != dim_v || dim_v == 0)
    throw Error(ErrorCode::kDimensionMismatch, "need one generator per V coordinate");
  const std::size_t r = generators.front().rows();
  for (std::size_t a = 0; a < generators.size(); ++a) {
    const auto& g = generators[a];
    if (g.rows() != r || g.cols() != r) throw Error(ErrorCode::kDimensionMismatch, "generators must be rank x rank");
    if (g.adjoint() != -g)
      throw Error(ErrorCode::kNotSkewHermitian, "generator " + std::to_string(a) + " is not skew-Hermitian");
  }
  for (std::size_t a = 0; a < generators.size(); ++a)
    for (std::size_t b = a + 1; b < generators.size(); ++b)
      if (generators[a] * generators[b] != generators[b] * generators[a])
        throw Error(ErrorCode::kNotCommuting,
                    "generators " + std::to_string(a) + " and " + std::to_string(b) + " do not commute");
  std::vector<CMatrix> floating;
  for (const auto& g : generators) floating.push_back(to_cmatrix(g));
  AbelianRep rep(dim_v, std::move(floating));
  rep.exact_ = std::move(generators);
  return rep;
}

AbelianRep AbelianRep::diagonal(std::size_t dim_v, const std::vector<QVector>& weights) {
  const std::size_t r = weights.size();
  std::vector<GMatrix> gens(dim_v, GMatrix(r, r));
  for (std::size_t s = 0; s < r; ++s) {
    if (weights[s].size() != dim_v) throw Error(ErrorCode::kDimensionMismatch, "weight length != dim V");
    for (std::size_t a = 0; a < dim_v; ++a) gens[a](s, s) = GaussianRational(Rational(0), weights[s][a]);
  }
  return exact(dim_v, std::move(gens));
}

CMatrix AbelianRep::act(const std::vector<double>& v) const {
  if (v.size() != dim_v_) throw Error(ErrorCode::kDimensionMismatch, "v length != dim V");
  const auto r = static_cast<Eigen::Index>(rank_);
  CMatrix out = CMatrix::Zero(r, r);
  for (std::size_t a = 0; a < dim_v_; ++a) out += v[a] * generators_[a];
  return out;
}

// ---------------------------------------------------------------------------

RationalWeightSet WeightDecomposition::exact_weights() const {
  if (!exact) throw Error(ErrorCode::kInvalidArgument, "decomposition has no exact weights");
  RationalWeightSet out(dim_v, WeightUnit::kI);
  for (const auto& s : spaces) out.add(*s.exact_weight, s.multiplicity);
  return out;
}

RMatrix WeightDecomposition::weight_matrix() const {
  RMatrix w(static_cast<Eigen::Index>(spaces.size()), static_cast<Eigen::Index>(dim_v));
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (std::size_t a = 0; a < dim_v; ++a)
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = spaces[i].weight[a];
  return w;
}

namespace {

// Refines an orthonormal block decomposition by the eigenspaces of one Hermitian
// generator at a time. Each final block is a joint eigenspace.
std::vector<CMatrix> refine_blocks(const std::vector<CMatrix>& gens, Eigen::Index r) {
  std::vector<CMatrix> blocks{CMatrix::Identity(r, r)};
  for (const auto& g : gens) {
    CMatrix hermitian = -kI * g;
    std::vector<CMatrix> next;
    for (const auto& b : blocks) {
      CMatrix restricted = b.adjoint() * hermitian * b;
      restricted = 0.5 * (restricted + restricted.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> solver(restricted);
      const auto& evals = solver.eigenvalues();
      const auto& evecs = solver.eigenvectors();
      Eigen::Index start = 0;
      for (Eigen::Index i = 1; i <= evals.size(); ++i) {
        if (i == evals.size() || evals(i) - evals(i - 1) > kWeightMergeTolerance) {
          next.push_back(b * evecs.middleCols(start, i - start));
          start = i;
        }
      }
    }
    blocks = std::move(next);
  }
  return blocks;
}

// Joint kernel of (A_a - i q_a) over Q(i).
std::vector<GVector> exact_weight_space(const std::vector<GMatrix>& gens, const QVector& q) {
  const std::size_t r = gens.front().rows();
  GMatrix stacked;
  for (std::size_t a = 0; a < gens.size(); ++a) {
    GMatrix shifted = gens[a] - GMatrix::identity(r) * GaussianRational(Rational(0), q[a]);
    stacked = GMatrix::vstack(stacked, shifted);
  }
  return stacked.nullspace();
}

bool try_exact(const AbelianRep& rep, WeightDecomposition& dec) {
  const auto& gens = *rep.exact_generators();
  const std::size_t r = rep.rank();
  std::vector<GVector> columns;
  std::vector<QVector> exact_weights;
  for (auto& space : dec.spaces) {
    QVector q;
    for (double w : space.weight) {
      Rational guess = rationalize(w, 1000000);
      if (std::fabs(guess.get_d() - w) > kWeightMergeTolerance) return false;
      q.push_back(guess);
    }
    auto kernel = exact_weight_space(gens, q);
    if (kernel.size() != space.multiplicity) return false;
    exact_weights.push_back(q);
    columns.insert(columns.end(), kernel.begin(), kernel.end());
  }
  if (columns.size() != r) return false;
  GMatrix p = GMatrix::from_columns(columns, r);
  if (p.rank() != r) return false;
  // A_a P = P D_a with P invertible gives A_a = P D_a P^{-1} exactly.
  std::size_t offset = 0;
  std::vector<GMatrix> diag(rep.dim_v(), GMatrix(r, r));
  for (std::size_t s = 0; s < dec.spaces.size(); ++s) {
    for (std::size_t c = 0; c < dec.spaces[s].multiplicity; ++c, ++offset)
      for (std::size_t a = 0; a < rep.dim_v(); ++a)
        diag[a](offset, offset) = GaussianRational(Rational(0), exact_weights[s][a]);
  }
  for (std::size_t a = 0; a < rep.dim_v(); ++a)
    if (gens[a] * p != p * diag[a]) return false;

  offset = 0;
  for (std::size_t s = 0; s < dec.spaces.size(); ++s) {
    auto& space = dec.spaces[s];
    std::vector<GVector> cols(columns.begin() + static_cast<std::ptrdiff_t>(offset),
                              columns.begin() + static_cast<std::ptrdiff_t>(offset + space.multiplicity));
    space.exact_basis = GMatrix::from_columns(cols, r);
    space.exact_weight = exact_weights[s];
    for (std::size_t a = 0; a < rep.dim_v(); ++a) space.weight[a] = exact_weights[s][a].get_d();
    offset += space.multiplicity;
  }
  return true;
}

}  // namespace

WeightDecomposition weight_decomposition(const AbelianRep& rep) {
  const auto r = static_cast<Eigen::Index>(rep.rank());
  WeightDecomposition dec;
  dec.dim_v = rep.dim_v();
  dec.rank = rep.rank();
  for (const auto& block : refine_blocks(rep.generators(), r)) {
    WeightSpace space;
    space.basis = block;
    space.multiplicity = static_cast<std::size_t>(block.cols());
    for (const auto& g : rep.generators()) {
      Complex t = (block.adjoint() * (-kI * g) * block).trace();
      space.weight.push_back(t.real() / static_cast<double>(space.multiplicity));
    }
    dec.spaces.push_back(std::move(space));
  }
  std::sort(dec.spaces.begin(), dec.spaces.end(),
            [](const WeightSpace& a, const WeightSpace& b) { return a.weight < b.weight; });

  if (rep.exact_generators()) dec.exact = try_exact(rep, dec);
  dec.exact_reconstruction = dec.exact;

  auto rebuilt = rebuild_generators(dec);
  for (std::size_t a = 0; a < rebuilt.size(); ++a)
    dec.reconstruction_error = std::max(dec.reconstruction_error, max_abs(rebuilt[a] - rep.generators()[a]));
  return dec;
}

std::vector<CMatrix> rebuild_generators(const WeightDecomposition& dec) {
  const auto r = static_cast<Eigen::Index>(dec.rank);
  std::vector<CMatrix> out(dec.dim_v, CMatrix::Zero(r, r));
  for (const auto& s : dec.spaces) {
    CMatrix projector = s.basis * s.basis.adjoint();
    for (std::size_t a = 0; a < dec.dim_v; ++a) out[a] += (kI * s.weight[a]) * projector;
  }
  return out;
}

// ---------------------------------------------------------------------------

Faithfulness is_faithful(const WeightDecomposition& dec) {
  Faithfulness out;
  if (dec.exact) {
    RationalWeightSet ws = dec.exact_weights();
    out.faithful = ws.spans();
    if (!out.faithful) {
      out.exact_certificate = ws.annihilated_vector();
      std::vector<double> v;
      for (const auto& x : *out.exact_certificate) v.push_back(x.get_d());
      out.certificate = v;
    }
    return out;
  }
  RMatrix w = dec.weight_matrix();
  Eigen::FullPivLU<RMatrix> lu(w);
  lu.setThreshold(1e-9);
  out.faithful = static_cast<std::size_t>(lu.rank()) == dec.dim_v;
  if (!out.faithful) {
    RMatrix kernel = lu.kernel();
    Eigen::VectorXd v = kernel.col(0).normalized();
    out.certificate = std::vector<double>(v.data(), v.data() + v.size());
  }
  return out;
}

Faithfulness is_faithful(const AbelianRep& rep) { return is_faithful(weight_decomposition(rep)); }

RankReport rank_check(const AbelianRep& rep) {
  WeightDecomposition dec = weight_decomposition(rep);
  if (!is_faithful(dec).faithful) throw Error(ErrorCode::kNotFaithful, "representation is not faithful");
  RankReport out;
  if (rep.rank() == rep.dim_v()) {
    // Faithful with rank = dim V forces dim V distinct weights of multiplicity one.
    out.rank_class = RankClass::kMinimal;
    out.weight_basis = dec.weight_matrix();
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool same_weight(const WeightSpace& a, const WeightSpace& b) {
  if (a.exact_weight && b.exact_weight) return *a.exact_weight == *b.exact_weight;
  for (std::size_t i = 0; i < a.weight.size(); ++i)
    if (std::fabs(a.weight[i] - b.weight[i]) > kWeightMergeTolerance) return false;
  return true;
}

// A (x) 1_n
CMatrix kron_identity(const CMatrix& a, Eigen::Index n) {
  CMatrix out = CMatrix::Zero(a.rows() * n, a.cols() * n);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * n, j * n, n, n) = a(i, j) * CMatrix::Identity(n, n);
  return out;
}

CMatrix kron_columns(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      auto col = out.col(i * b.cols() + j);
      for (Eigen::Index s = 0; s < a.rows(); ++s) col.segment(s * b.rows(), b.rows()) = a(s, i) * b.col(j);
    }
  return out;
}

}  // namespace

TensorProduct tensor_rep(const AbelianRep& a, const AbelianRep& b) {
  if (a.dim_v() != b.dim_v()) throw Error(ErrorCode::kDimensionMismatch, "tensor over different V");
  WeightDecomposition da = weight_decomposition(a);
  WeightDecomposition db = weight_decomposition(b);
  TensorProduct out;

  std::vector<CMatrix> blocks;
  std::vector<QVector> exact_diag;
  bool exact = da.exact && db.exact;
  for (const auto& sa : da.spaces) {
    for (const auto& sb : db.spaces) {
      if (!same_weight(sa, sb)) continue;
      blocks.push_back(kron_columns(sa.basis, sb.basis));
      out.weights.push_back(sa.weight);
      out.multiplicities.push_back(sa.multiplicity * sb.multiplicity);
      if (exact)
        for (std::size_t k = 0; k < sa.multiplicity * sb.multiplicity; ++k) exact_diag.push_back(*sa.exact_weight);
    }
  }
  if (blocks.empty()) return out;

  if (exact) {
    out.rep = AbelianRep::diagonal(a.dim_v(), exact_diag);
  } else {
    Eigen::Index total = 0;
    for (const auto& bl : blocks) total += bl.cols();
    CMatrix basis(blocks.front().rows(), total);
    Eigen::Index c = 0;
    for (const auto& bl : blocks) {
      basis.middleCols(c, bl.cols()) = bl;
      c += bl.cols();
    }
    const auto rb = static_cast<Eigen::Index>(b.rank());
    std::vector<CMatrix> gens;
    for (std::size_t v = 0; v < a.dim_v(); ++v) {
      CMatrix big = kron_identity(a.generators()[v], rb);
      CMatrix g = basis.adjoint() * big * basis;
      gens.push_back(0.5 * (g - g.adjoint()));
    }
    out.rep = AbelianRep(a.dim_v(), std::move(gens));
  }
  out.faithful = is_faithful(*out.rep).faithful;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<CurvatureForm> curvature_components(const AbelianRep& rep, const VSymplecticSpace& space) {
  if (space.dim_v() != rep.dim_v()) throw Error(ErrorCode::kDimensionMismatch, "rep and space over different V");
  WeightDecomposition dec = weight_decomposition(rep);
  if (!is_faithful(dec).faithful) throw Error(ErrorCode::kNotFaithful, "representation is not faithful");
  const auto n = static_cast<Eigen::Index>(space.dim_u());
  std::vector<CurvatureForm> out;
  for (const auto& s : dec.spaces) {
    CurvatureForm form;
    form.weight = s.weight;
    form.minus_i_coefficient = RMatrix::Zero(n, n);
    for (std::size_t a = 0; a < rep.dim_v(); ++a)
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          form.minus_i_coefficient(i, j) +=
              s.weight[a] * space.component(a)(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
    if (s.exact_weight) {
      form.exact_coefficient = space.weighted_component(*s.exact_weight);
      form.skew = form.exact_coefficient->transpose() == -*form.exact_coefficient;
    } else {
      form.skew = (form.minus_i_coefficient + form.minus_i_coefficient.transpose()).cwiseAbs().maxCoeff() == 0.0;
    }
    out.push_back(std::move(form));
  }
  return out;
}

}  // namespace polyquant
