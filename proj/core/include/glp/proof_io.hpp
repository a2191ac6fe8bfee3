#pragma once

#include <iosfwd>
#include <string>

#include "glp/algebra.hpp"
#include "glp/derivation.hpp"
#include "glp/topology.hpp"

namespace glp {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Proof files are JSON documents with a node table:
///   { "kind": "hilbert" | "cyclic" | "omega" | "graph",
///     "root": id,
///     "nodes": [ { "id": n, "formula": "...",
///                  "rule": "ax" | "asm" | "mp" | "nec" | "omega",
///                  "children": [ids],            (omitted for omega nodes)
///                  "backlink": id,               (cyclic leaves only)
///                  "omega": { "phi_prefix": [...], "phi_cycle": [...],
///                             "prem_prefix": [ids], "prem_cycle": [ids] } },
///                ... ],
///     "sigma": ["..."], "gamma": ["..."] }       (omitted when empty)
/// A back-linked leaf is stored with rule "asm" plus its "backlink" field.
/// The canonical writer renumbers nodes 0..n-1 in table order, prints
/// formulas canonically and indents by two spaces, so writing is bit-exact
/// reproducible and read(write(d)) is the identity.
enum class ProofKind : std::uint8_t { Hilbert, Cyclic, Omega, Graph };

std::string_view proof_kind_name(ProofKind k);

struct ProofDocument {
  ProofKind kind = ProofKind::Hilbert;
  Derivation derivation;
  FormulaSet sigma;
  FormulaSet gamma;
};

std::string write_proof(const ProofDocument& doc);
ProofDocument read_proof(const std::string& text);
ProofDocument load_proof_file(const std::string& path);
void save_proof_file(const std::string& path, const ProofDocument& doc);

/// Algebra files: { "atoms": ["a", ...],
///                  "boxes": [ { "0": image, "1": image, ... }, ... ] }
/// with elements encoded little-endian over the atom order.
std::string write_algebra(const FiniteGLPAlgebra& a);
FiniteGLPAlgebra read_algebra(const std::string& text);
FiniteGLPAlgebra load_algebra_file(const std::string& path);

/// Model files: { "points": ["x0", ...],
///                "topologies": [[mask, ...], ...],
///                "valuation": { "p": mask, ... } }
struct ModelDocument {
  std::vector<std::string> point_names;
  TopoModel model;
};

std::string write_model(const ModelDocument& m);
ModelDocument read_model(const std::string& text);
ModelDocument load_model_file(const std::string& path);
void save_model_file(const std::string& path, const ModelDocument& m);

}  // namespace glp
