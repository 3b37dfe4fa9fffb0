#pragma once

// Translations from transition systems to Horn systems, one per proof rule.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hornforge/horn.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

enum class Variant { Corrected, Literal };

struct SchemaConfig {
    Variant variant = Variant::Corrected;
    std::vector<std::string> low_in;   // noninterference projections
    std::vector<std::string> low_out;
    /// reach-game without a `next` sys candidate: |x'' - x'| <= step per variable.
    std::optional<std::int64_t> sys_step;
};

HornSystem gen_safety_forward(const TransitionSystem& ts);
HornSystem gen_safety_backward(const TransitionSystem& ts, Variant variant = Variant::Corrected);
HornSystem gen_safety_combined(const TransitionSystem& ts);
HornSystem gen_termination(const TransitionSystem& ts, Variant variant = Variant::Corrected);
HornSystem gen_noninterference(const TransitionSystem& ts, const SchemaConfig& cfg);
HornSystem gen_exists_until(const TransitionSystem& ts, Variant variant = Variant::Corrected);
HornSystem gen_reach_game(const TransitionSystem& ts, const SchemaConfig& cfg = {});

/// Validates roles and projections, then dispatches. Throws InputError naming
/// the missing roles.
HornSystem generate(const TransitionSystem& ts, Schema schema, const SchemaConfig& cfg = {});

/// Name of the second copy of a state variable in self-composition (x -> x.w).
std::string shadow(const std::string& name);

/// Unknown-predicate name for `base`, suffixed when a state variable uses it.
std::string unknown_name(const TransitionSystem& ts, const std::string& base);

/// The sys move relation over (x, x') used by reach-game, if any.
std::optional<Formula> sys_candidate(const TransitionSystem& ts, const SchemaConfig& cfg);

} // namespace hornforge
