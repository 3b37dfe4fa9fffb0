#pragma once

// Constrained Horn clauses with existential heads and well-foundedness marks.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hornforge/formula.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

enum class PredKind { Unknown, Defined };

struct PredicateSymbol {
    std::string name;
    std::vector<SortedVar> params;  // canonical parameter names
    PredKind kind = PredKind::Unknown;

    std::size_t arity() const { return params.size(); }
};

struct Atom {
    std::string pred;
    std::vector<std::string> args;

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct FalseHead {
    friend bool operator==(const FalseHead&, const FalseHead&) = default;
};

/// exists vars. atoms && constraint
struct ExistsHead {
    std::vector<SortedVar> vars;
    std::vector<Atom> atoms;
    Formula constraint;

    friend bool operator==(const ExistsHead&, const ExistsHead&) = default;
};

using Head = std::variant<FalseHead, Atom, ExistsHead>;

struct Clause {
    std::vector<SortedVar> universals;
    std::vector<Atom> body_atoms;
    Formula body_constraint;
    Head head;

    bool has_exists() const { return std::holds_alternative<ExistsHead>(head); }
    bool is_query() const { return std::holds_alternative<FalseHead>(head); }
    const SortedVar* find_universal(const std::string& name) const;
};

struct HornSystem {
    std::vector<PredicateSymbol> predicates;
    std::vector<Clause> clauses;
    std::vector<std::string> wf_marks;
    std::string schema;  // provenance
    std::string system;

    const PredicateSymbol* find(const std::string& name) const;
    bool has_exists() const;
    bool has_wf() const { return !wf_marks.empty(); }
    bool is_wf(const std::string& pred) const;
};

/// Declared bounds of the given variables as a conjunction.
Formula bounds_formula(const std::vector<SortedVar>& vars);
VarSet int_vars_of(const std::vector<SortedVar>& vars);
Box box_of(const std::vector<SortedVar>& vars);
bool all_bounded_int(const std::vector<SortedVar>& vars);

/// Empty when well formed.
std::vector<std::string> well_formed(const HornSystem& hs);

/// Human-readable clause listing (deterministic).
std::string to_text(const HornSystem& hs);
std::string to_text(const Atom& a);

/// SMT-LIB2 HORN text. Throws UnsupportedFragment for existential heads and wf marks.
std::string emit_smtlib(const HornSystem& hs);
/// Reads back the subset produced by emit_smtlib. Throws InputError otherwise.
HornSystem parse_smtlib_horn(std::string_view text);

/// Structural equality that ignores predicate parameter names.
bool isomorphic(const HornSystem& a, const HornSystem& b);

} // namespace hornforge
