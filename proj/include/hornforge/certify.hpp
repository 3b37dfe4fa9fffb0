#pragma once

// Independent certificate checking and the explicit-state ground-truth oracle.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/model.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

struct ClauseReport {
    std::string label;  // "c2" or "wf(round)"
    bool holds = false;
    std::optional<Assignment> counterwitness;
    std::string reason;
};

std::vector<ClauseReport> check_model(const HornSystem& hs, const Model& m, const Caps& caps = default_caps());
bool all_hold(const std::vector<ClauseReport>& reports);

/// Empty when the derivation is a valid ground refutation.
std::string derivation_error(const HornSystem& hs, const Derivation& d);
bool check_derivation(const HornSystem& hs, const Derivation& d);
/// Height of the derivation below its root (0 for a bare query instance).
std::size_t derivation_height(const Derivation& d);

std::string lasso_error(const HornSystem& hs, const Lasso& l);
bool check_lasso(const HornSystem& hs, const Lasso& l);

/// Checks a trap against the fact, existential and query clauses of hs.
std::string trap_error(const HornSystem& hs, const TrapEvidence& t, const Caps& caps = default_caps());
bool check_trap(const HornSystem& hs, const TrapEvidence& t, const Caps& caps = default_caps());

/// Dispatches on the refutation kind.
bool check_refutation(const HornSystem& hs, const Refutation& r, const Caps& caps = default_caps());

// ---------------------------------------------------------------------------
// Oracle

enum class Query { Safety, Termination, Eu, Game, Noninterference };

std::string_view query_name(Query q);
Query query_from_name(std::string_view name);
Query query_for(Schema s);

using State = std::vector<std::int64_t>;

struct OracleVerdict {
    Query query = Query::Safety;
    bool holds = false;
    std::vector<std::string> vars;
    std::size_t states = 0;       // explored state count
    std::size_t reachable = 0;    // safety / termination
    std::vector<State> trace;     // safety: init .. bad state; eu: witness path
    std::size_t loop_start = 0;   // termination: trace[loop_start..] repeats
    std::vector<State> trace_b;   // noninterference: second run
    std::vector<State> winning;   // eu / game
    std::vector<State> counter_play;  // game: env-move play staying outside the winning set
};

/// Throws ResourceError when a variable is unbounded or not Int, or when the
/// explored space exceeds the caps.
OracleVerdict oracle(const TransitionSystem& ts, Query q, const SchemaConfig& cfg = {},
                     const Caps& caps = default_caps());

} // namespace hornforge
