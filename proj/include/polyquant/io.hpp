#pragma once

// JSON model files. Rationals travel as "p/q" strings, Gaussian rationals as a string
// (real) or a ["re", "im"] pair, weights as rational coefficients of a unit token.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyquant/matrix.hpp"
#include "polyquant/rational.hpp"
#include "polyquant/weights.hpp"

namespace polyquant {

inline constexpr const char* kSchemaVersion = "1";

enum class ModelKind { kVSpace, kRep, kLattice, kPresentation, kToric, kMonodromy };
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct CanonicalSpec {
  std::size_t dim_q = 0;
  std::size_t dim_v = 0;
  friend bool operator==(const CanonicalSpec&, const CanonicalSpec&) = default;
};

/// Exactly one of canonical, lie_algebra, components describes the form.
struct VSpaceFile {
  std::optional<CanonicalSpec> canonical;
  std::optional<std::vector<std::vector<QVector>>> lie_algebra;  // c^k_{ij} as [i][j][k]
  std::optional<std::vector<QMatrix>> components;
  std::size_t dim_u = 0;                      // with components
  std::optional<QMatrix> complex_structure;   // on U
  std::vector<QVector> weights;               // lambda / i, for definiteness
  friend bool operator==(const VSpaceFile&, const VSpaceFile&) = default;
};

struct RepFile {
  std::size_t dim_v = 0;
  std::vector<GMatrix> generators;
  std::optional<std::size_t> model_dim_q;  // canonical model for the commutator sweep
  int degree_cap = 4;
  friend bool operator==(const RepFile&, const RepFile&) = default;
};

struct LatticeFile {
  std::size_t dim_v = 0;
  std::vector<QVector> periods;
  std::optional<std::vector<QVector>> basis;  // for the minimal classification
  bool nonquantizable_by_fiat = false;
  friend bool operator==(const LatticeFile&, const LatticeFile&) = default;
};

struct PresentationFile {
  std::size_t dim_v = 0;
  std::vector<QVector> periods;
  RationalWeightSet weights{1, WeightUnit::kTwoPiI};
  std::vector<unsigned> genus;
  std::optional<std::vector<std::vector<Integer>>> degrees;
  std::vector<long> ks;
  friend bool operator==(const PresentationFile&, const PresentationFile&) = default;
};

struct ToricFile {
  std::string name;
  std::vector<std::vector<long>> degrees;
  std::vector<long> action;
  std::vector<Rational> shifts;
  std::map<long, std::vector<long>> pinned_shifts;
  /// "points" for the transverse point reduction, otherwise a reduced presentation.
  std::optional<PresentationFile> reduced_presentation;
  std::vector<long> ks;
  std::optional<std::string> expect;  // "agrees" or "diverges"
  friend bool operator==(const ToricFile&, const ToricFile&) = default;
};

struct MonodromyFile {
  std::vector<QMatrix> generators;
  RationalWeightSet weights{1, WeightUnit::kTwoPiI};
  friend bool operator==(const MonodromyFile&, const MonodromyFile&) = default;
};

using Payload = std::variant<VSpaceFile, RepFile, LatticeFile, PresentationFile, ToricFile, MonodromyFile>;

struct ModelFile {
  std::string schema_version = kSchemaVersion;
  Payload payload;
  ModelKind kind() const { return static_cast<ModelKind>(payload.index()); }
  friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

/// Throws kParseError, kSchemaVersionMismatch.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);
/// Canonical form: fixed key order, two-space indent, reduced rationals.
std::string emit_model(const ModelFile& file);

std::string sha256_hex(const std::string& bytes);

}  // namespace polyquant
