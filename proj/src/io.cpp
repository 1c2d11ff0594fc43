#include "polyquant/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "polyquant/error.hpp"

namespace polyquant {

using Json = nlohmann::ordered_json;

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kVSpace: return "vspace";
    case ModelKind::kRep: return "rep";
    case ModelKind::kLattice: return "lattice";
    case ModelKind::kPresentation: return "presentation";
    case ModelKind::kToric: return "toric";
    case ModelKind::kMonodromy: return "monodromy";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& text) {
  for (auto k : {ModelKind::kVSpace, ModelKind::kRep, ModelKind::kLattice, ModelKind::kPresentation,
                 ModelKind::kToric, ModelKind::kMonodromy})
    if (to_string(k) == text) return k;
  throw Error(ErrorCode::kParseError, "unknown model kind '" + text + "'");
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParseError, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing '") + key + "'");
  return j.at(key);
}

std::size_t read_size(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long>() >= 0)) fail(where, "expected a count");
  return j.get<std::size_t>();
}

long read_long(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long>();
}

Rational read_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(where, "expected a rational string \"p/q\"");
  return parse_rational(j.get<std::string>());
}

Json write_rational(const Rational& q) { return q.get_str(); }

GaussianRational read_gaussian(const Json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) fail(where, "expected [re, im]");
    return GaussianRational(read_rational(j[0], where), read_rational(j[1], where));
  }
  return GaussianRational(read_rational(j, where));
}

Json write_gaussian(const GaussianRational& z) {
  if (is_zero(z.im)) return write_rational(z.re);
  return Json::array({write_rational(z.re), write_rational(z.im)});
}

template <typename T, typename F>
std::vector<T> read_list(const Json& j, const std::string& where, F read) {
  if (!j.is_array()) fail(where, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

QVector read_qvector(const Json& j, const std::string& where) { return read_list<Rational>(j, where, read_rational); }

Json write_qvector(const QVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(write_rational(x));
  return out;
}

template <typename T, typename F>
Matrix<T> read_matrix(const Json& j, const std::string& where, F read) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty list of rows");
  std::vector<std::vector<T>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(read_list<T>(j[i], where + "[" + std::to_string(i) + "]", read));
    if (rows.back().size() != rows.front().size()) fail(where, "ragged matrix");
  }
  return Matrix<T>::from_rows(rows, rows.front().size());
}

QMatrix read_qmatrix(const Json& j, const std::string& where) { return read_matrix<Rational>(j, where, read_rational); }

template <typename T, typename F>
Json write_matrix(const Matrix<T>& m, F write) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(write(m(i, j)));
    out.push_back(row);
  }
  return out;
}

Json write_qmatrix(const QMatrix& m) { return write_matrix(m, write_rational); }

WeightUnit read_unit(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a unit token");
  auto s = j.get<std::string>();
  if (s == to_string(WeightUnit::kTwoPiI)) return WeightUnit::kTwoPiI;
  if (s == to_string(WeightUnit::kI)) return WeightUnit::kI;
  fail(where, "unknown unit '" + s + "'");
}

RationalWeightSet read_weights(const Json& j, std::size_t dim_v, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of weights");
  RationalWeightSet out(dim_v, WeightUnit::kTwoPiI);
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string at = where + "[" + std::to_string(i) + "]";
    const Json& w = j[i];
    if (read_unit(field(w, "unit", at), at) != WeightUnit::kTwoPiI)
      throw Error(ErrorCode::kConventionMismatch, at + ": presentation weights are in units of 2πi");
    QVector c = read_qvector(field(w, "coeffs", at), at + ".coeffs");
    if (c.size() != dim_v) fail(at, "weight length != dim_v");
    std::size_t m = w.contains("multiplicity") ? read_size(w["multiplicity"], at) : 1;
    out.add(c, m);
  }
  return out;
}

Json write_weights(const RationalWeightSet& ws) {
  Json out = Json::array();
  for (const auto& w : ws.weights()) {
    Json e;
    e["unit"] = to_string(ws.unit());
    e["coeffs"] = write_qvector(w.coeffs);
    e["multiplicity"] = w.multiplicity;
    out.push_back(e);
  }
  return out;
}

std::vector<long> read_longs(const Json& j, const std::string& where) { return read_list<long>(j, where, read_long); }

// ---------------------------------------------------------------------------

VSpaceFile read_vspace(const Json& j) {
  VSpaceFile f;
  int forms = 0;
  if (j.contains("canonical")) {
    const Json& c = j["canonical"];
    f.canonical = CanonicalSpec{read_size(field(c, "dim_q", "canonical"), "canonical.dim_q"),
                                read_size(field(c, "dim_v", "canonical"), "canonical.dim_v")};
    ++forms;
  }
  if (j.contains("lie_algebra")) {
    f.lie_algebra = read_list<std::vector<QVector>>(j["lie_algebra"], "lie_algebra", [](const Json& p, const std::string& w) {
      return read_list<QVector>(p, w, read_qvector);
    });
    ++forms;
  }
  if (j.contains("components")) {
    f.dim_u = read_size(field(j, "dim_u", "vspace"), "dim_u");
    f.components = read_list<QMatrix>(j["components"], "components", read_qmatrix);
    ++forms;
  }
  if (forms != 1) fail("vspace", "give exactly one of canonical, lie_algebra, components");
  if (j.contains("complex_structure")) f.complex_structure = read_qmatrix(j["complex_structure"], "complex_structure");
  if (j.contains("weights")) f.weights = read_list<QVector>(j["weights"], "weights", read_qvector);
  return f;
}

Json write_vspace(const VSpaceFile& f) {
  Json j;
  if (f.canonical) j["canonical"] = {{"dim_q", f.canonical->dim_q}, {"dim_v", f.canonical->dim_v}};
  if (f.lie_algebra) {
    Json c = Json::array();
    for (const auto& plane : *f.lie_algebra) {
      Json p = Json::array();
      for (const auto& line : plane) p.push_back(write_qvector(line));
      c.push_back(p);
    }
    j["lie_algebra"] = c;
  }
  if (f.components) {
    j["dim_u"] = f.dim_u;
    Json c = Json::array();
    for (const auto& m : *f.components) c.push_back(write_qmatrix(m));
    j["components"] = c;
  }
  if (f.complex_structure) j["complex_structure"] = write_qmatrix(*f.complex_structure);
  if (!f.weights.empty()) {
    Json w = Json::array();
    for (const auto& v : f.weights) w.push_back(write_qvector(v));
    j["weights"] = w;
  }
  return j;
}

RepFile read_rep(const Json& j) {
  RepFile f;
  f.dim_v = read_size(field(j, "dim_v", "rep"), "dim_v");
  if (j.contains("generators")) {
    f.generators = read_list<GMatrix>(j["generators"], "generators", [](const Json& m, const std::string& w) {
      return read_matrix<GaussianRational>(m, w, read_gaussian);
    });
  } else if (j.contains("diagonal_weights")) {
    // A_{e_a} = i diag(weights[s][a]).
    auto ws = read_list<QVector>(j["diagonal_weights"], "diagonal_weights", read_qvector);
    std::vector<GMatrix> gens(f.dim_v, GMatrix(ws.size(), ws.size()));
    for (std::size_t s = 0; s < ws.size(); ++s) {
      if (ws[s].size() != f.dim_v) fail("diagonal_weights", "weight length != dim_v");
      for (std::size_t a = 0; a < f.dim_v; ++a) gens[a](s, s) = GaussianRational(Rational(0), ws[s][a]);
    }
    f.generators = std::move(gens);
  } else {
    fail("rep", "missing 'generators'");
  }
  if (j.contains("model_dim_q")) f.model_dim_q = read_size(j["model_dim_q"], "model_dim_q");
  if (j.contains("degree_cap")) f.degree_cap = static_cast<int>(read_long(j["degree_cap"], "degree_cap"));
  return f;
}

Json write_rep(const RepFile& f) {
  Json j;
  j["dim_v"] = f.dim_v;
  Json g = Json::array();
  for (const auto& m : f.generators) g.push_back(write_matrix(m, write_gaussian));
  j["generators"] = g;
  if (f.model_dim_q) j["model_dim_q"] = *f.model_dim_q;
  j["degree_cap"] = f.degree_cap;
  return j;
}

LatticeFile read_lattice(const Json& j) {
  LatticeFile f;
  f.dim_v = read_size(field(j, "dim_v", "lattice"), "dim_v");
  f.periods = read_list<QVector>(field(j, "periods", "lattice"), "periods", read_qvector);
  for (const auto& p : f.periods)
    if (p.size() != f.dim_v) fail("periods", "period length != dim_v");
  if (j.contains("basis")) f.basis = read_list<QVector>(j["basis"], "basis", read_qvector);
  if (j.contains("nonquantizable_by_fiat")) {
    if (!j["nonquantizable_by_fiat"].is_boolean()) fail("nonquantizable_by_fiat", "expected a boolean");
    f.nonquantizable_by_fiat = j["nonquantizable_by_fiat"].get<bool>();
  }
  return f;
}

Json write_lattice(const LatticeFile& f) {
  Json j;
  j["dim_v"] = f.dim_v;
  Json p = Json::array();
  for (const auto& v : f.periods) p.push_back(write_qvector(v));
  j["periods"] = p;
  if (f.basis) {
    Json b = Json::array();
    for (const auto& v : *f.basis) b.push_back(write_qvector(v));
    j["basis"] = b;
  }
  j["nonquantizable_by_fiat"] = f.nonquantizable_by_fiat;
  return j;
}

PresentationFile read_presentation(const Json& j) {
  PresentationFile f;
  if (j.contains("degree_table")) {
    // Shorthand: V = R^rows, weights 2 pi i e_a^*, periods the table columns.
    auto rows = read_list<std::vector<long>>(j["degree_table"], "degree_table", read_longs);
    if (rows.empty() || rows.front().empty()) fail("degree_table", "empty table");
    f.dim_v = rows.size();
    f.weights = RationalWeightSet(f.dim_v, WeightUnit::kTwoPiI);
    f.periods.assign(rows.front().size(), QVector(f.dim_v, Rational(0)));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != f.periods.size()) fail("degree_table", "ragged table");
      QVector e(f.dim_v, Rational(0));
      e[a] = 1;
      f.weights.add(e);
      for (std::size_t c = 0; c < rows[a].size(); ++c) f.periods[c][a] = rows[a][c];
    }
  } else {
    f.dim_v = read_size(field(j, "dim_v", "presentation"), "dim_v");
    f.periods = read_list<QVector>(field(j, "periods", "presentation"), "periods", read_qvector);
    f.weights = read_weights(field(j, "weights", "presentation"), f.dim_v, "weights");
  }
  if (j.contains("genus")) {
    for (long g : read_longs(j["genus"], "genus")) {
      if (g < 0) fail("genus", "genus must be nonnegative");
      f.genus.push_back(static_cast<unsigned>(g));
    }
  }
  if (j.contains("degrees")) {
    auto rows = read_list<std::vector<long>>(j["degrees"], "degrees", read_longs);
    std::vector<std::vector<Integer>> table;
    for (const auto& r : rows) table.emplace_back(r.begin(), r.end());
    f.degrees = table;
  }
  if (j.contains("k")) f.ks = read_longs(j["k"], "k");
  return f;
}

Json write_presentation(const PresentationFile& f) {
  Json j;
  j["dim_v"] = f.dim_v;
  Json p = Json::array();
  for (const auto& v : f.periods) p.push_back(write_qvector(v));
  j["periods"] = p;
  j["weights"] = write_weights(f.weights);
  if (!f.genus.empty()) j["genus"] = f.genus;
  if (f.degrees) {
    Json d = Json::array();
    for (const auto& row : *f.degrees) {
      Json r = Json::array();
      for (const auto& x : row) r.push_back(x.get_si());
      d.push_back(r);
    }
    j["degrees"] = d;
  }
  if (!f.ks.empty()) j["k"] = f.ks;
  return j;
}

ToricFile read_toric(const Json& j) {
  ToricFile f;
  if (j.contains("name")) f.name = j["name"].get<std::string>();
  f.degrees = read_list<std::vector<long>>(field(j, "degrees", "toric"), "degrees", read_longs);
  f.action = read_longs(field(j, "action", "toric"), "action");
  f.shifts = read_list<Rational>(field(j, "shifts", "toric"), "shifts", read_rational);
  if (j.contains("pinned_shifts")) {
    const Json& p = j["pinned_shifts"];
    if (!p.is_object()) fail("pinned_shifts", "expected an object keyed by k");
    for (auto it = p.begin(); it != p.end(); ++it) {
      long k = 0;
      try {
        k = std::stol(it.key());
      } catch (const std::exception&) {
        fail("pinned_shifts", "key '" + it.key() + "' is not an integer");
      }
      f.pinned_shifts[k] = read_longs(it.value(), "pinned_shifts." + it.key());
    }
  }
  const Json& reduced = field(j, "reduced", "toric");
  if (reduced.is_string()) {
    if (reduced.get<std::string>() != "points") fail("reduced", "expected \"points\" or a presentation");
  } else {
    f.reduced_presentation = read_presentation(reduced);
  }
  if (j.contains("k")) f.ks = read_longs(j["k"], "k");
  if (j.contains("expect")) {
    auto e = j["expect"].get<std::string>();
    if (e != "agrees" && e != "diverges") fail("expect", "expected \"agrees\" or \"diverges\"");
    f.expect = e;
  }
  return f;
}

Json write_toric(const ToricFile& f) {
  Json j;
  if (!f.name.empty()) j["name"] = f.name;
  j["degrees"] = f.degrees;
  j["action"] = f.action;
  Json s = Json::array();
  for (const auto& x : f.shifts) s.push_back(write_rational(x));
  j["shifts"] = s;
  if (!f.pinned_shifts.empty()) {
    Json p = Json::object();
    for (const auto& [k, v] : f.pinned_shifts) p[std::to_string(k)] = v;
    j["pinned_shifts"] = p;
  }
  if (f.reduced_presentation) j["reduced"] = write_presentation(*f.reduced_presentation);
  else j["reduced"] = "points";
  if (!f.ks.empty()) j["k"] = f.ks;
  if (f.expect) j["expect"] = *f.expect;
  return j;
}

MonodromyFile read_monodromy(const Json& j) {
  MonodromyFile f;
  std::size_t dim_v = read_size(field(j, "dim_v", "monodromy"), "dim_v");
  f.generators = read_list<QMatrix>(field(j, "generators", "monodromy"), "generators", read_qmatrix);
  f.weights = read_weights(field(j, "weights", "monodromy"), dim_v, "weights");
  return f;
}

Json write_monodromy(const MonodromyFile& f) {
  Json j;
  j["dim_v"] = f.weights.dim_v();
  Json g = Json::array();
  for (const auto& m : f.generators) g.push_back(write_qmatrix(m));
  j["generators"] = g;
  j["weights"] = write_weights(f.weights);
  return j;
}

}  // namespace

ModelFile parse_model(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("invalid JSON: ") + e.what());
  }
  try {
    ModelFile file;
    const Json& version = field(j, "schema_version", "file");
    if (!version.is_string()) fail("schema_version", "expected a string");
    file.schema_version = version.get<std::string>();
    if (file.schema_version != kSchemaVersion) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  "file has schema " + file.schema_version + ", expected " + kSchemaVersion);
    }
    const Json& kind = field(j, "kind", "file");
    if (!kind.is_string()) fail("kind", "expected a string");
    const Json& payload = field(j, "payload", "file");
    switch (parse_model_kind(kind.get<std::string>())) {
      case ModelKind::kVSpace: file.payload = read_vspace(payload); break;
      case ModelKind::kRep: file.payload = read_rep(payload); break;
      case ModelKind::kLattice: file.payload = read_lattice(payload); break;
      case ModelKind::kPresentation: file.payload = read_presentation(payload); break;
      case ModelKind::kToric: file.payload = read_toric(payload); break;
      case ModelKind::kMonodromy: file.payload = read_monodromy(payload); break;
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed payload: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string emit_model(const ModelFile& file) {
  Json j;
  j["schema_version"] = file.schema_version;
  j["kind"] = to_string(file.kind());
  j["payload"] = std::visit(
      [](const auto& p) -> Json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, VSpaceFile>) return write_vspace(p);
        else if constexpr (std::is_same_v<P, RepFile>) return write_rep(p);
        else if constexpr (std::is_same_v<P, LatticeFile>) return write_lattice(p);
        else if constexpr (std::is_same_v<P, PresentationFile>) return write_presentation(p);
        else if constexpr (std::is_same_v<P, ToricFile>) return write_toric(p);
        else return write_monodromy(p);
      },
      file.payload);
  return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::kInvalidArgument, "sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

}  // namespace polyquant
