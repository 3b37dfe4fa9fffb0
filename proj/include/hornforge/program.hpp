#pragma once

// Transition systems and their surface syntax:
//
//   system NAME {
//     var x: int[0,20];
//     var r: rat;
//     init: x = 0;
//     next: x < 10 && x' = x + 1;
//     safe: x <= 10;
//   }

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hornforge/formula.hpp"

namespace hornforge {

enum class Sort { Int, Rat };

struct SortedVar {
    std::string name;
    Sort sort = Sort::Int;
    std::optional<std::pair<std::int64_t, std::int64_t>> bounds;

    friend bool operator==(const SortedVar&, const SortedVar&) = default;
};

enum class Role { Init, Next, Safe, Final, P, Q, Env, Goal };

std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);
/// Roles whose formulas range over current and next-state variables.
bool is_relational(Role r);

enum class Schema { SafetyFwd, SafetyBwd, SafetyComb, Termination, Noninterference, ExistsUntil, ReachGame };

std::string_view schema_name(Schema s);
/// Throws InputError for unknown names.
Schema schema_from_name(std::string_view name);
const std::vector<Schema>& all_schemas();

struct TransitionSystem {
    std::string name;
    std::vector<SortedVar> vars;
    std::map<Role, Formula> assertions;

    bool has(Role r) const { return assertions.count(r) > 0; }
    /// The assertion, or True when absent.
    Formula get(Role r) const;
    const SortedVar* find_var(const std::string& name) const;
    std::vector<std::string> var_names() const;
    bool all_bounded_int() const;

    friend bool operator==(const TransitionSystem&, const TransitionSystem&) = default;
};

/// Appends `count` primes to a state variable name.
std::string primed(const std::string& name, int count = 1);

/// Parses the surface syntax; text without a `system` header is accepted as an
/// anonymous system named "main". Throws InputError with line and column.
TransitionSystem parse_program(std::string_view text);
/// Parses a standalone formula over the given variables (primes allowed).
Formula parse_formula(std::string_view text);

/// Renders a system back into the surface syntax.
std::string to_source(const TransitionSystem& ts);

/// Uniform renaming of free variables.
Formula rename(const Formula& f, const RenameMap& map);

/// Roles required by `schema` that `ts` lacks.
std::vector<Role> validate_for(const TransitionSystem& ts, Schema schema);
std::vector<Role> required_roles(Schema schema);

} // namespace hornforge
