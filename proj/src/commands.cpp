#include "polyquant/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "polyquant/error.hpp"
#include "polyquant/geom.hpp"
#include "polyquant/lattice.hpp"
#include "polyquant/prequant.hpp"
#include "polyquant/sections.hpp"
#include "polyquant/toric.hpp"
#include "polyquant/vsympl.hpp"

namespace polyquant {

using Json = nlohmann::ordered_json;

bool RunReport::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

namespace {

Json results_json(const RunReport& r) {
  Json tables = Json::array();
  for (const auto& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  return {{"tables", tables}, {"verdicts", verdicts}, {"notes", r.notes}};
}

}  // namespace

std::string RunReport::result_digest() const { return sha256_hex(results_json(*this).dump()); }

std::string RunReport::to_json() const {
  Json j;
  j["command"] = command;
  j["schema_version"] = kSchemaVersion;
  j["input_sha256"] = input_digest;
  Json body = results_json(*this);
  j["tables"] = body["tables"];
  j["verdicts"] = body["verdicts"];
  j["notes"] = body["notes"];
  j["all_pass"] = all_pass();
  j["result_sha256"] = result_digest();
  j["elapsed_ms"] = elapsed_ms;
  return j.dump(2) + "\n";
}

std::string RunReport::to_csv() const {
  std::ostringstream os;
  for (const auto& t : tables) {
    os << "# " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        const auto& cell = row[i];
        bool quote = cell.find_first_of(",\"") != std::string::npos;
        os << (i ? "," : "");
        if (!quote) {
          os << cell;
          continue;
        }
        os << '"';
        for (char c : cell) os << (c == '"' ? "\"\"" : std::string(1, c));
        os << '"';
      }
      os << "\n";
    }
  }
  return os.str();
}

std::vector<long> parse_k_range(const std::string& text) {
  auto bad = [&]() { return Error(ErrorCode::kConfigInvalid, "bad k range '" + text + "'"); };
  auto to_long = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
    return std::stol(s);
  };
  std::vector<long> ks;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    long a = to_long(text.substr(0, dots));
    long b = to_long(text.substr(dots + 2));
    for (long k = a; k <= b; ++k) ks.push_back(k);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) ks.push_back(to_long(item));
  }
  if (ks.empty()) throw Error(ErrorCode::kConfigInvalid, "empty k range");
  for (long k : ks)
    if (k < 1) throw Error(ErrorCode::kConfigInvalid, "k must be positive");
  return ks;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("POLYQUANT_SEED");
  if (!s || !*s) return fallback;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kConfigInvalid, std::string("POLYQUANT_SEED is not an integer: ") + s);
  }
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

RunReport start(const std::string& command, const std::string& bytes) {
  RunReport r;
  r.command = command;
  r.input_digest = sha256_hex(bytes);
  return r;
}

void finish(RunReport& r, Clock::time_point t0) {
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename P>
const P& expect_kind(const ModelFile& file, ModelKind kind, const std::string& command) {
  if (file.kind() != kind)
    throw Error(ErrorCode::kConfigInvalid, command + " needs a " + to_string(kind) + " file, got " + to_string(file.kind()));
  return std::get<P>(file.payload);
}

std::vector<long> resolve_ks(const CommandOptions& options, const std::vector<long>& from_file) {
  if (!options.ks.empty()) return options.ks;
  if (!from_file.empty()) {
    for (long k : from_file)
      if (k < 1) throw Error(ErrorCode::kConfigInvalid, "k must be positive");
    return from_file;
  }
  std::vector<long> ks;
  for (long k = 1; k <= 10; ++k) ks.push_back(k);
  return ks;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out + ")";
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

VSymplecticSpace build_space(const VSpaceFile& f) {
  if (f.canonical) return make_canonical_model(f.canonical->dim_q, f.canonical->dim_v);
  if (f.lie_algebra) return make_lie_model(*f.lie_algebra).space;
  return VSymplecticSpace(f.dim_u, *f.components);
}

ManifoldPresentation build_presentation(const PresentationFile& f) {
  return ManifoldPresentation(f.dim_v, f.periods, f.weights, f.genus, f.degrees);
}

QRConfig build_qr(const ToricFile& f, std::vector<long> ks) {
  ToricBundleModel model(f.degrees, f.action, f.shifts, f.pinned_shifts);
  ReducedModel reduced;
  if (f.reduced_presentation) reduced.presentation = build_presentation(*f.reduced_presentation);
  else reduced.points = reduced_point_model(model);
  return QRConfig{f.name, std::move(model), std::move(reduced), std::move(ks)};
}

Table lattice_table(const std::string& name, const RationalLattice& l) {
  Table t{name, {"basis_vector"}, {}};
  for (const auto& b : l.basis()) t.rows.push_back({format_vector(b)});
  return t;
}

Table weight_table(const std::string& name, const RationalWeightSet& ws) {
  Table t{name, {"weight", "multiplicity"}, {}};
  for (const auto& w : ws.weights()) t.rows.push_back({format_weight(w.coeffs, ws.unit()), std::to_string(w.multiplicity)});
  return t;
}

// ---------------------------------------------------------------------------

void check_vspace(const VSpaceFile& f, RunReport& r) {
  std::optional<VSymplecticSpace> space;
  try {
    space = build_space(f);
    r.verdicts.push_back({"form_valid", true, "components skew-symmetric"});
  } catch (const Error& e) {
    r.verdicts.push_back({"form_valid", false, e.what()});
    return;
  }
  const auto& nd = space->nondegeneracy();
  r.verdicts.push_back({"nondegenerate", nd.nondegenerate,
                        nd.nondegenerate ? "joint kernel is zero" : "kernel vector " + format_vector(*nd.kernel_vector)});
  r.tables.push_back(Table{"space", {"dim_u", "dim_v"}, {{std::to_string(space->dim_u()), std::to_string(space->dim_v())}}});
  if (!f.complex_structure) return;

  QMatrix j = *f.complex_structure;
  if (f.canonical) {
    // A structure on U is lifted to the model.
    CanonicalModel model(f.canonical->dim_q, f.canonical->dim_v);
    if (j.rows() == model.dim_q()) j = model.lift_linear(j);
  }
  try {
    ComplexStructureJ cj(j);
    bool compatible = compatible_complex_check(cj, *space);
    r.verdicts.push_back({"complex_structure_compatible", compatible, compatible ? "J^T Omega_a J = Omega_a" : "not a V-symplectomorphism"});
    if (!compatible) return;
    auto split = eigenspace_split(cj, *space);
    bool lag = split.plus_lagrangian && split.minus_lagrangian;
    r.verdicts.push_back({"eigenspaces_lagrangian", lag,
                          "dim U+ = " + std::to_string(split.plus.dim()) + ", dim U- = " + std::to_string(split.minus.dim())});
    if (f.weights.empty()) return;
    auto report = definiteness_report(cj, *space, f.weights);
    Table t{"definiteness", {"weight", "form", "eigenspace_form", "float", "agree"}, {}};
    for (const auto& w : report.per_weight)
      t.rows.push_back({"i·" + format_vector(w.weight), to_string(w.verdict), to_string(w.eigenspace_verdict),
                        to_string(w.float_verdict), w.cross_check_agrees ? "yes" : "no"});
    r.tables.push_back(std::move(t));
    r.verdicts.push_back({"definiteness_cross_check", report.all_cross_checks_agree,
                          std::string("definite per weight: ") + (report.definite ? "yes" : "no")});
    r.notes.push_back("definiteness is read per weight; V carries no order of its own");
  } catch (const Error& e) {
    r.verdicts.push_back({"complex_structure_compatible", false, e.what()});
  }
}

void check_rep(const RepFile& f, RunReport& r) {
  std::optional<AbelianRep> rep;
  try {
    rep = AbelianRep::exact(f.dim_v, f.generators);
    r.verdicts.push_back({"skew_hermitian_commuting", true, "generators valid"});
  } catch (const Error& e) {
    r.verdicts.push_back({"skew_hermitian_commuting", false, e.what()});
    return;
  }
  auto dec = weight_decomposition(*rep);
  Table t{"weights", {"weight_over_i", "multiplicity"}, {}};
  for (const auto& s : dec.spaces)
    t.rows.push_back({s.exact_weight ? format_vector(*s.exact_weight) : "~", std::to_string(s.multiplicity)});
  r.tables.push_back(std::move(t));
  r.verdicts.push_back({"reconstruction", dec.exact_reconstruction || dec.reconstruction_error <= kReconstructionTolerance,
                        dec.exact ? "exact diagonalization" : "floating, error " + fmt_double(dec.reconstruction_error)});
  auto faithful = is_faithful(dec);
  r.verdicts.push_back({"faithful", faithful.faithful,
                        faithful.faithful ? "weights span iV*"
                                          : "annihilated vector " +
                                                (faithful.exact_certificate ? format_vector(*faithful.exact_certificate) : "~")});
  if (!f.model_dim_q) return;
  CanonicalModel model(*f.model_dim_q, f.dim_v);
  try {
    auto sweep = commutator_sweep(model, *rep, f.degree_cap);
    r.verdicts.push_back({"commutator_defect_zero", sweep.all_zero(),
                          std::to_string(sweep.exact_zero_pairs) + "/" + std::to_string(sweep.pairs) +
                              " affine pairs exact zero"});
  } catch (const Error& e) {
    r.verdicts.push_back({"commutator_defect_zero", false, e.what()});
  }
}

void check_lattice(const LatticeFile& f, RunReport& r, std::uint64_t seed) {
  PeriodData periods{f.dim_v, f.periods};
  RationalLattice lattice = span_lattice(periods);
  r.tables.push_back(lattice_table("period_lattice", lattice));
  PeriodData shuffled{f.dim_v, {f.periods.rbegin(), f.periods.rend()}};
  if (f.periods.size() >= 2) {
    // p_0 -> p_0 + p_1 is unimodular on the generator list.
    for (std::size_t a = 0; a < f.dim_v; ++a) shuffled.periods.back()[a] += shuffled.periods.front()[a];
  }
  bool canonical = span_lattice(shuffled) == lattice;
  r.verdicts.push_back({"hnf_canonical", canonical, "reordered and recombined periods give the same basis"});
  auto principal = principal_lattice(periods, seed);
  if (principal.full) {
    r.verdicts.push_back({"principal", principal.certified,
                          "contained in " + std::to_string(principal.superlattices_tested) + " random prequantum lattices"});
  } else {
    r.notes.push_back("NotFullRank: the period lattice has rank " + std::to_string(lattice.rank()) +
                      " < dim V; full prequantum lattices still exist");
  }
  if (f.basis) {
    try {
      auto weights = classify_minimal(*f.basis, f.dim_v);
      bool round = weights_to_lattice(weights) == RationalLattice(f.dim_v, *f.basis);
      r.verdicts.push_back({"classification_round_trip", round, "basis -> weights -> lattice"});
    } catch (const Error& e) {
      r.verdicts.push_back({"classification_round_trip", false, e.what()});
    }
  }
}

void check_presentation(const PresentationFile& f, RunReport& r, const std::vector<long>& ks) {
  try {
    auto model = build_presentation(f);
    r.verdicts.push_back({"presentation_consistent", true, "degrees integral and consistent with periods"});
    bool agree = true;
    for (long k : ks)
      if (Rational(rr_index(model, k)) != chern_todd_index(model, k)) agree = false;
    r.verdicts.push_back({"index_integral_agrees", agree, "closed form vs ch·Td integral"});
  } catch (const Error& e) {
    r.verdicts.push_back({"presentation_consistent", false, e.what()});
  }
}

void check_toric(const ToricFile& f, RunReport& r, const std::vector<long>& ks) {
  std::optional<QRConfig> config;
  try {
    config = build_qr(f, ks);
    r.verdicts.push_back({"config_valid", true, "degrees nonnegative, shapes consistent"});
  } catch (const Error& e) {
    r.verdicts.push_back({"config_valid", false, e.what()});
    return;
  }
  DegreeTable table;
  for (const auto& row : f.degrees) table.emplace_back(row.begin(), row.end());
  auto presentation = ManifoldPresentation::from_degrees(table);
  bool oracle = true;
  bool kernels = true;
  for (long k : ks) {
    long h = holomorphic_dim(config->model, k);
    if (Integer(h) != rr_index(presentation, k)) oracle = false;
    if (h != holomorphic_dim_serial(config->model, k) ||
        invariant_dim(config->model, k) != invariant_dim_serial(config->model, k))
      kernels = false;
  }
  r.verdicts.push_back({"section_count_matches_index", oracle, "enumeration vs closed form"});
  r.verdicts.push_back({"parallel_matches_serial", kernels, "enumeration kernels agree"});
}

void check_monodromy(const MonodromyFile& f, RunReport& r) {
  try {
    MonodromyPresentation pres(f.generators, f.weights);
    auto perms = monodromy_weight_action(pres);
    Table t{"permutations", {"generator", "image_indices"}, {}};
    bool involutions_ok = true;
    for (std::size_t g = 0; g < perms.size(); ++g) {
      t.rows.push_back({std::to_string(g), join(perms[g])});
      const auto& tau = f.generators[g];
      if (tau * tau == QMatrix::identity(tau.rows()) && !is_identity(compose(perms[g], perms[g])))
        involutions_ok = false;
    }
    r.tables.push_back(std::move(t));
    r.verdicts.push_back({"weights_permuted", true, "every generator permutes the weights"});
    r.verdicts.push_back({"involutions_square_to_identity", involutions_ok, ""});
  } catch (const Error& e) {
    r.verdicts.push_back({"weights_permuted", false, e.what()});
  }
}

}  // namespace

RunReport cmd_check(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options) {
  auto t0 = Clock::now();
  RunReport r = start("check", input_bytes);
  r.tables.push_back(Table{"model", {"kind"}, {{to_string(file.kind())}}});
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, VSpaceFile>) check_vspace(p, r);
        else if constexpr (std::is_same_v<P, RepFile>) check_rep(p, r);
        else if constexpr (std::is_same_v<P, LatticeFile>) check_lattice(p, r, options.seed);
        else if constexpr (std::is_same_v<P, PresentationFile>) check_presentation(p, r, resolve_ks(options, p.ks));
        else if constexpr (std::is_same_v<P, ToricFile>) check_toric(p, r, resolve_ks(options, p.ks));
        else check_monodromy(p, r);
      },
      file.payload);
  finish(r, t0);
  return r;
}

RunReport cmd_classify(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options) {
  auto t0 = Clock::now();
  const auto& f = expect_kind<LatticeFile>(file, ModelKind::kLattice, "classify");
  RunReport r = start("classify", input_bytes);
  PeriodData periods{f.dim_v, f.periods};
  RationalLattice i_omega = span_lattice(periods);
  r.tables.push_back(lattice_table("period_lattice", i_omega));

  auto verdict = is_quantizable(periods, f.nonquantizable_by_fiat);
  auto yes = [](bool b) { return std::string(b ? "yes" : "no"); };
  r.tables.push_back(Table{"quantizability",
                           {"condition", "holds"},
                           {{"minimal rank prequantization exists", yes(verdict.minimal_rank_prequantization)},
                            {"prequantum lattice exists", yes(verdict.prequantum_lattice_exists)},
                            {"period lattice is a principal prequantum lattice", yes(verdict.principal_prequantum_lattice)},
                            {"period group is a lattice", yes(verdict.periods_discrete)}}});
  r.verdicts.push_back({"quantizable", verdict.quantizable,
                        verdict.nonquantizable_by_fiat ? "marked non-quantizable by fiat (irrational period ratios)"
                                                       : "rational periods generate a lattice"});

  auto principal = principal_lattice(periods, options.seed);
  if (principal.full) {
    r.verdicts.push_back({"principal", principal.certified,
                          "contained in " + std::to_string(principal.superlattices_tested) + " random prequantum lattices"});
  } else {
    r.notes.push_back("NotFullRank: no full principal lattice; every full lattice containing the periods is prequantum");
    r.tables.push_back(lattice_table("witness_prequantum_lattice", *principal.witness));
  }

  if (f.basis) {
    try {
      auto weights = classify_minimal(*f.basis, f.dim_v);
      r.tables.push_back(weight_table("minimal_weights", weights));
      RationalLattice basis_lattice(f.dim_v, *f.basis);
      bool prequantum = is_prequantum_lattice(basis_lattice, periods);
      r.verdicts.push_back({"basis_spans_prequantum_lattice", prequantum, "periods contained in the lattice of the basis"});
      r.verdicts.push_back({"weights_integral_on_periods", integrality_check(weights, periods), "<w, p> in 2πi Z"});
      r.verdicts.push_back({"classification_round_trip", weights_to_lattice(weights) == basis_lattice, ""});
    } catch (const Error& e) {
      r.verdicts.push_back({"classification", false, e.what()});
    }
  }
  finish(r, t0);
  return r;
}

RunReport cmd_quantize(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options) {
  auto t0 = Clock::now();
  const auto& f = expect_kind<PresentationFile>(file, ModelKind::kPresentation, "quantize");
  RunReport r = start("quantize", input_bytes);
  auto ks = resolve_ks(options, f.ks);
  std::optional<ManifoldPresentation> model;
  try {
    model = build_presentation(f);
  } catch (const Error& e) {
    r.verdicts.push_back({"presentation_consistent", false, e.what()});
    finish(r, t0);
    return r;
  }
  Rational vol = adapted_volume(*model);
  r.tables.push_back(Table{"volume", {"adapted_volume", "half_dim"}, {{vol.get_str(), std::to_string(model->half_dim())}}});
  auto dims = rr_table(*model, ks);
  Table t{"dimensions", {"k", "rr_index", "chern_todd"}, {}};
  bool agree = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    Rational integral = chern_todd_index(*model, ks[i]);
    if (integral != Rational(dims[i])) agree = false;
    t.rows.push_back({std::to_string(ks[i]), dims[i].get_str(), integral.get_str()});
  }
  r.tables.push_back(std::move(t));
  r.verdicts.push_back({"index_integral_agrees", agree, "closed form vs ch·Td integral"});
  try {
    auto growth = growth_check(*model, ks);
    Table rem{"remainder", {"k", "dim_minus_vol_k^n"}, {}};
    for (std::size_t i = 0; i < ks.size(); ++i) rem.rows.push_back({std::to_string(ks[i]), growth.remainder[i].get_str()});
    r.tables.push_back(std::move(rem));
    r.verdicts.push_back({"growth_leading_coefficient", growth.leading_matches && growth.remainder_lower_order,
                          "leading coefficient " + growth.leading_coefficient.get_str() + ", volume " +
                              growth.volume.get_str()});
  } catch (const Error& e) {
    r.verdicts.push_back({"growth_leading_coefficient", false, e.what()});
  }
  if (!model->positive()) r.notes.push_back("degrees are not all positive: rr_index is an index, not a section count");
  finish(r, t0);
  return r;
}

RunReport cmd_qr(const ModelFile& file, const std::string& input_bytes, const CommandOptions& options) {
  auto t0 = Clock::now();
  const auto& f = expect_kind<ToricFile>(file, ModelKind::kToric, "qr");
  RunReport r = start("qr", input_bytes);
  QRConfig config = build_qr(f, resolve_ks(options, f.ks));
  QRReport report = qr_experiment(config);
  Table t{"comparison", {"k", "invariant_sections", "reduced_sections", "relation"}, {}};
  for (const auto& row : report.rows)
    t.rows.push_back({std::to_string(row.k), std::to_string(row.lhs), std::to_string(row.rhs), row.equal() ? "=" : "≠"});
  r.tables.push_back(std::move(t));
  r.notes.push_back("asymptotic: " + to_string(report.asymptotic));
  if (config.reduced.points) {
    Table p{"reduced_points", {"position", "weights", "inside_square"}, {}};
    for (const auto& pt : config.reduced.points->points)
      p.rows.push_back({format_vector(pt.position), join(pt.weights), pt.inside_square ? "yes" : "no"});
    r.tables.push_back(std::move(p));
  }
  if (f.expect) {
    bool ok = to_string(report.asymptotic) == *f.expect;
    r.verdicts.push_back({"expected_" + *f.expect, ok, "observed " + to_string(report.asymptotic)});
  }
  finish(r, t0);
  return r;
}

}  // namespace polyquant
