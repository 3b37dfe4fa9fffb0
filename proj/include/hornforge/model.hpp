#pragma once

// Solutions and refutations of Horn systems, plus the textual model syntax:
//
//   inv(x) := x >= 0 && -x >= -10;
//   round(x, x') := x >= 1 && x' = x - 1;
//   rank round := x;
//   rank round := lex(x, y);
//   rank round := table { (0): 5, (1): 4 };

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hornforge/formula.hpp"
#include "hornforge/horn.hpp"

namespace hornforge {

/// Affine function of the first-half (pre-state) parameters.
struct AffineRank {
    LinTerm term;
};

struct LexRank {
    std::vector<AffineRank> components;
};

/// Explicit ranks of integer states, keyed by pre-state parameter values.
struct TableRank {
    std::map<std::vector<std::int64_t>, std::int64_t> values;
};

using RankWitness = std::variant<AffineRank, LexRank, TableRank>;

/// Interpretations over each predicate's canonical parameter names.
struct Model {
    std::map<std::string, Formula> interp;
    std::map<std::string, RankWitness> ranks;
};

struct DerivationNode {
    std::size_t clause = 0;
    Assignment assignment;  // over the clause's universals
    std::vector<DerivationNode> children;  // one per body atom
};

/// Ground refutation: a derivation of a False-headed clause.
struct Derivation {
    std::optional<DerivationNode> root;
};

/// Derivations of wf-predicate facts chaining into a cycle.
struct Lasso {
    std::string pred;
    std::vector<DerivationNode> cycle;
};

/// Finite evidence that no ∀∃ model exists: a set of states containing an
/// initial state that the proponent cannot leave towards its target.
struct TrapEvidence {
    std::vector<std::string> vars;
    std::vector<std::vector<std::int64_t>> losing;
    std::vector<std::int64_t> initial;
    /// Opponent answers (reach games): state -> environment move.
    std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> counter;
};

using Refutation = std::variant<Derivation, Lasso, TrapEvidence>;

enum class Status { Solved, Refuted, Unknown };
std::string_view status_name(Status s);

struct Verdict {
    Status status = Status::Unknown;
    std::optional<Model> model;
    std::optional<Refutation> refutation;
    std::string reason;
    std::string strategy;  // which engine produced the result
    std::map<std::string, std::uint64_t> counters;  // deterministic effort counters
};

/// Renders the model in the model syntax (deterministic).
std::string model_to_text(const HornSystem& hs, const Model& m);
/// Reads the model syntax; parameters are renamed positionally to the
/// canonical ones. Throws InputError on syntax errors, unknown predicates or
/// an empty model.
Model parse_model(std::string_view text, const HornSystem& hs);

/// Variables of the pre-state half of a binary predicate.
std::vector<SortedVar> pre_state(const PredicateSymbol& p);
std::vector<SortedVar> post_state(const PredicateSymbol& p);

/// Atom instance under a ground assignment.
std::vector<Rational> atom_values(const Atom& a, const Assignment& env);
Assignment bind_params(const PredicateSymbol& p, const std::vector<Rational>& values);

/// Disjunction of equality cubes over `vars`, one per point.
Formula point_set(const std::vector<std::string>& vars, const std::vector<std::vector<std::int64_t>>& points);

} // namespace hornforge
