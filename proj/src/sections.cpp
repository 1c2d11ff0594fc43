#include "polyquant/sections.hpp"

#include <algorithm>
#include <complex>
#include <exception>
#include <numeric>

namespace polyquant {

unsigned Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0u); }

bool operator<(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree();
  unsigned db = b.degree();
  if (da != db) return da < db;
  return a.exponents > b.exponents;  // x_0 > x_1 > ... within a degree
}

Monomial constant_monomial(std::size_t vars) { return Monomial{std::vector<unsigned>(vars, 0)}; }

Monomial variable_monomial(std::size_t vars, std::size_t i) {
  Monomial m = constant_monomial(vars);
  m.exponents.at(i) = 1;
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m = a;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += b.exponents[i];
  return m;
}

std::vector<Monomial> monomials_up_to(std::size_t vars, unsigned degree) {
  std::vector<Monomial> out;
  std::vector<unsigned> cur(vars, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == vars) {
      out.push_back(Monomial{cur});
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

int degree(const Polynomial& p) {
  int d = -1;
  for (const auto& [m, c] : p)
    if (!is_zero(c)) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

namespace {

void add_term(Polynomial& p, const Monomial& m, const Rational& c) {
  if (is_zero(c)) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second)) p.erase(it);
  }
}

}  // namespace

Polynomial derivative(const Polynomial& p, std::size_t i) {
  Polynomial out;
  for (const auto& [m, c] : p) {
    if (m.exponents.at(i) == 0) continue;
    Monomial d = m;
    --d.exponents[i];
    add_term(out, d, c * m.exponents[i]);
  }
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, ma * mb, ca * cb);
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  for (const auto& [m, c] : b) add_term(out, m, c);
  return out;
}

PolyObservable PolyObservable::from_linear(const LinearObservable& f) {
  PolyObservable out;
  out.vars = f.differential.cols();
  for (std::size_t a = 0; a < f.value_at_origin.size(); ++a) {
    Polynomial p;
    add_term(p, constant_monomial(out.vars), f.value_at_origin[a]);
    for (std::size_t i = 0; i < out.vars; ++i) add_term(p, variable_monomial(out.vars, i), f.differential(a, i));
    out.components.push_back(std::move(p));
  }
  return out;
}

PolyObservable PolyObservable::constant(std::size_t vars, const QVector& v) {
  PolyObservable out;
  out.vars = vars;
  for (const auto& c : v) {
    Polynomial p;
    add_term(p, constant_monomial(vars), c);
    out.components.push_back(std::move(p));
  }
  return out;
}

int PolyObservable::degree() const {
  int d = -1;
  for (const auto& p : components) d = std::max(d, polyquant::degree(p));
  return d;
}

PolyVectorField hamiltonian_field(const PolyObservable& f, const VSymplecticSpace& space) {
  const std::size_t n = space.dim_u();
  const std::size_t l = space.dim_v();
  if (f.vars != n || f.components.size() != l)
    throw Error(ErrorCode::kDimensionMismatch, "observable shape does not match the space");

  std::vector<std::vector<Polynomial>> grads(l);
  std::vector<Monomial> keys;
  for (std::size_t a = 0; a < l; ++a)
    for (std::size_t i = 0; i < n; ++i) {
      grads[a].push_back(derivative(f.components[a], i));
      for (const auto& [m, c] : grads[a].back()) keys.push_back(m);
    }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  PolyVectorField field(n);
  for (const auto& m : keys) {
    QMatrix system;
    QVector rhs;
    for (std::size_t a = 0; a < l; ++a) {
      system = QMatrix::vstack(system, space.component(a));
      for (std::size_t i = 0; i < n; ++i) {
        auto it = grads[a][i].find(m);
        rhs.push_back(it == grads[a][i].end() ? Rational(0) : it->second);
      }
      if (!system.solve(rhs)) {
        throw Error(ErrorCode::kNotHamiltonian,
                    "df is not in the image of iota omega (component " + std::to_string(a) + ")");
      }
    }
    QVector x = *system.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) add_term(field[i], m, x[i]);
  }
  return field;
}

PolyObservable poly_bracket(const PolyObservable& f, const PolyObservable& h, const VSymplecticSpace& space) {
  PolyVectorField xf = hamiltonian_field(f, space);
  PolyVectorField xh = hamiltonian_field(h, space);
  const std::size_t n = space.dim_u();
  PolyObservable out;
  out.vars = n;
  for (const auto& om : space.components()) {
    Polynomial p;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (is_zero(om(i, j)) || xf[i].empty() || xh[j].empty()) continue;
        Polynomial scale;
        add_term(scale, constant_monomial(n), om(i, j));
        p = p + scale * xf[i] * xh[j];
      }
    out.components.push_back(std::move(p));
  }
  return out;
}

PolyObservable tautological(const PolyVectorField& x, const CanonicalModel& model) {
  const std::size_t n = model.dim();
  if (x.size() != n) throw Error(ErrorCode::kDimensionMismatch, "vector field length != model dim");
  PolyObservable out;
  out.vars = n;
  for (std::size_t a = 0; a < model.dim_v(); ++a) {
    Polynomial p;
    for (std::size_t j = 0; j < model.dim_q(); ++j) {
      Polynomial coord;
      add_term(coord, variable_monomial(n, model.p_index(a, j)), Rational(1));
      p = p + coord * x[model.q_index(j)];
    }
    out.components.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator realization

namespace {

template <typename T>
T from_rational(const Rational& q);
template <>
GaussianRational from_rational<GaussianRational>(const Rational& q) {
  return GaussianRational(q);
}
template <>
std::complex<double> from_rational<std::complex<double>>(const Rational& q) {
  return {q.get_d(), 0.0};
}

std::complex<double> to_cd(const GaussianRational& z) { return to_complex(z); }
std::complex<double> to_cd(const std::complex<double>& z) { return z; }

template <typename T>
using Section = std::map<Monomial, std::vector<T>>;

template <typename T>
struct Operator {
  std::vector<std::vector<std::pair<Monomial, T>>> field;  // X^i
  std::vector<std::vector<std::pair<Monomial, T>>> mult;   // (theta(X) + f)_a
  int raise = 0;
};

template <typename T>
std::vector<std::pair<Monomial, T>> convert(const Polynomial& p) {
  std::vector<std::pair<Monomial, T>> out;
  for (const auto& [m, c] : p) out.emplace_back(m, from_rational<T>(c));
  return out;
}

template <typename T>
Operator<T> make_operator(const CanonicalModel& model, const PolyObservable& f) {
  PolyVectorField x = hamiltonian_field(f, model.space());
  PolyObservable theta = tautological(x, model);
  Operator<T> op;
  int field_degree = -1;
  for (const auto& p : x) {
    op.field.push_back(convert<T>(p));
    field_degree = std::max(field_degree, degree(p));
  }
  int mult_degree = -1;
  for (std::size_t a = 0; a < f.components.size(); ++a) {
    Polynomial g = theta.components[a] + f.components[a];
    mult_degree = std::max(mult_degree, degree(g));
    op.mult.push_back(convert<T>(g));
  }
  op.raise = std::max({field_degree - 1, mult_degree, 0});
  return op;
}

template <typename T>
struct Fiber {
  std::size_t rank;
  std::vector<std::vector<T>> gens;  // row-major rank x rank

  std::vector<T> act(std::size_t a, const std::vector<T>& v) const {
    std::vector<T> out(rank, T(0));
    const auto& g = gens[a];
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        if (!is_zero(g[i * rank + j]) && !is_zero(v[j])) out[i] += g[i * rank + j] * v[j];
    return out;
  }
};

template <typename T>
void accumulate(Section<T>& s, const Monomial& m, const T& scale, const std::vector<T>& v) {
  auto it = s.find(m);
  if (it == s.end()) it = s.emplace(m, std::vector<T>(v.size(), T(0))).first;
  for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += scale * v[i];
}

template <typename T>
Section<T> apply(const Operator<T>& op, const Fiber<T>& fiber, const Section<T>& psi) {
  Section<T> out;
  for (const auto& [m, v] : psi) {
    for (std::size_t i = 0; i < op.field.size(); ++i) {
      if (m.exponents[i] == 0 || op.field[i].empty()) continue;
      Monomial d = m;
      --d.exponents[i];
      T power = from_rational<T>(Rational(m.exponents[i]));
      for (const auto& [mx, cx] : op.field[i]) accumulate(out, mx * d, cx * power, v);
    }
    for (std::size_t a = 0; a < op.mult.size(); ++a) {
      if (op.mult[a].empty()) continue;
      std::vector<T> w = fiber.act(a, v);
      for (const auto& [mg, cg] : op.mult[a]) accumulate(out, mg * m, cg, w);
    }
  }
  return out;
}

template <typename T>
void subtract(Section<T>& a, const Section<T>& b) {
  T minus_one = from_rational<T>(Rational(-1));
  for (const auto& [m, v] : b) accumulate(a, m, minus_one, v);
}

template <typename T>
CommutatorDefect run_check(const CanonicalModel& model, const PolyObservable& f, const PolyObservable& h,
                           const Fiber<T>& fiber, int degree_cap) {
  Operator<T> qf = make_operator<T>(model, f);
  Operator<T> qh = make_operator<T>(model, h);
  Operator<T> qfh = make_operator<T>(model, poly_bracket(f, h, model.space()));

  CommutatorDefect out;
  out.domain_degree = degree_cap - std::max(qf.raise + qh.raise, qfh.raise);
  if (out.domain_degree < 0) {
    throw Error(ErrorCode::kDegreeOverflow, "commutator raises degree beyond the cap " + std::to_string(degree_cap));
  }
  const std::size_t n = model.dim();
  auto domain = monomials_up_to(n, static_cast<unsigned>(out.domain_degree));
  out.domain_dim = domain.size() * fiber.rank;

  std::vector<std::vector<std::pair<std::pair<Monomial, std::size_t>, std::complex<double>>>> columns;
  bool all_zero = true;
  for (const auto& m : domain) {
    for (std::size_t s = 0; s < fiber.rank; ++s) {
      std::vector<T> e(fiber.rank, T(0));
      e[s] = T(1);
      Section<T> psi{{m, e}};
      Section<T> d = apply(qf, fiber, apply(qh, fiber, psi));
      subtract(d, apply(qh, fiber, apply(qf, fiber, psi)));
      subtract(d, apply(qfh, fiber, psi));
      std::vector<std::pair<std::pair<Monomial, std::size_t>, std::complex<double>>> col;
      for (const auto& [mm, v] : d)
        for (std::size_t i = 0; i < v.size(); ++i)
          if (!is_zero(v[i])) {
            all_zero = false;
            col.push_back({{mm, i}, to_cd(v[i])});
          }
      columns.push_back(std::move(col));
    }
  }
  out.exact_zero = all_zero;
  if (!all_zero) {
    std::map<std::pair<Monomial, std::size_t>, Eigen::Index> rows;
    for (const auto& col : columns)
      for (const auto& [key, v] : col) rows.emplace(key, 0);
    Eigen::Index next = 0;
    for (auto& [key, idx] : rows) idx = next++;
    CMatrix dm = CMatrix::Zero(next, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (const auto& [key, v] : columns[c]) dm(rows[key], static_cast<Eigen::Index>(c)) = v;
    CMatrix gram = dm.adjoint() * dm;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(gram, Eigen::EigenvaluesOnly);
    out.operator_norm = std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
  }
  return out;
}

Fiber<GaussianRational> exact_fiber(const AbelianRep& rep) {
  Fiber<GaussianRational> fiber{rep.rank(), {}};
  for (const auto& g : *rep.exact_generators()) {
    std::vector<GaussianRational> flat;
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) flat.push_back(g(i, j));
    fiber.gens.push_back(std::move(flat));
  }
  return fiber;
}

Fiber<std::complex<double>> floating_fiber(const AbelianRep& rep) {
  Fiber<std::complex<double>> fiber{rep.rank(), {}};
  const auto r = static_cast<Eigen::Index>(rep.rank());
  for (const auto& g : rep.generators()) {
    std::vector<std::complex<double>> flat;
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < r; ++j) flat.push_back(g(i, j));
    fiber.gens.push_back(std::move(flat));
  }
  return fiber;
}

}  // namespace

CommutatorDefect prequantum_commutator_check(const CanonicalModel& model, const PolyObservable& f,
                                             const PolyObservable& h, const AbelianRep& rep, int degree_cap) {
  if (rep.dim_v() != model.dim_v()) throw Error(ErrorCode::kDimensionMismatch, "rep and model over different V");
  if (rep.exact_generators()) {
    CommutatorDefect out = run_check(model, f, h, exact_fiber(rep), degree_cap);
    out.exact_arithmetic = true;
    return out;
  }
  return run_check(model, f, h, floating_fiber(rep), degree_cap);
}

std::vector<PolyObservable> affine_observable_basis(const CanonicalModel& model) {
  const std::size_t n = model.dim();
  const std::size_t l = model.dim_v();
  std::vector<PolyObservable> out;
  for (std::size_t a = 0; a < l; ++a) {
    QVector e(l, Rational(0));
    e[a] = 1;
    out.push_back(PolyObservable::constant(n, e));
  }
  // f_a(x) = omega_a(x, e_i) has X_f = e_i.
  for (std::size_t i = 0; i < n; ++i) {
    LinearObservable f{QVector(l, Rational(0)), QMatrix(l, n)};
    for (std::size_t a = 0; a < l; ++a)
      for (std::size_t j = 0; j < n; ++j) f.differential(a, j) = model.space().component(a)(j, i);
    out.push_back(PolyObservable::from_linear(f));
  }
  return out;
}

namespace {

void merge(SweepReport& report, const CommutatorDefect& d) {
  ++report.pairs;
  if (d.exact_zero) ++report.exact_zero_pairs;
  report.max_norm = std::max(report.max_norm, d.operator_norm);
  report.max_domain_dim = std::max(report.max_domain_dim, d.domain_dim);
}

}  // namespace

SweepReport commutator_sweep_serial(const CanonicalModel& model, const AbelianRep& rep, int degree_cap) {
  auto basis = affine_observable_basis(model);
  SweepReport report;
  for (const auto& f : basis)
    for (const auto& h : basis) merge(report, prequantum_commutator_check(model, f, h, rep, degree_cap));
  return report;
}

SweepReport commutator_sweep(const CanonicalModel& model, const AbelianRep& rep, int degree_cap) {
  auto basis = affine_observable_basis(model);
  const auto m = static_cast<long>(basis.size());
  std::vector<CommutatorDefect> results(static_cast<std::size_t>(m * m));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < m * m; ++idx) {
    try {
      results[static_cast<std::size_t>(idx)] = prequantum_commutator_check(
          model, basis[static_cast<std::size_t>(idx / m)], basis[static_cast<std::size_t>(idx % m)], rep, degree_cap);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  SweepReport report;
  for (const auto& d : results) merge(report, d);
  return report;
}

}  // namespace polyquant
