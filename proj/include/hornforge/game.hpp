#pragma once

// Explicit-state solving of ∀∃ Horn systems: E(p U q) and reachability games
// over the bounded integer box of a transition system.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/model.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

using StateVec = std::vector<std::int64_t>;

struct ExplicitSpace {
    std::vector<std::string> vars;
    std::vector<StateVec> states;  // lexicographic order
    std::vector<std::vector<std::size_t>> next, env, sys;  // successor lists (sorted)
    std::vector<char> init, p, q, goal;
    bool has_sys = false;  // sys moves restricted by a candidate relation

    std::size_t size() const { return states.size(); }
    std::optional<std::size_t> index_of(const StateVec& s) const;
};

struct AttractorResult {
    std::vector<char> winning;
    std::vector<std::int64_t> distance;  // -1 outside the winning set
    /// eu: state -> next-successors in the winning set with smaller distance;
    /// game: intermediate state -> sys-successors with smaller distance.
    std::map<std::size_t, std::vector<std::size_t>> strategy_edges;
};

/// Throws ResourceError for unbounded or rational variables and oversized boxes.
ExplicitSpace enumerate(const TransitionSystem& ts, const SchemaConfig& cfg = {}, const Caps& caps = default_caps());

AttractorResult eu_attractor(const ExplicitSpace& space);
AttractorResult game_attractor(const ExplicitSpace& space);

/// One successor per strategy state: minimal distance, then lexicographically
/// smallest successor.
std::map<std::size_t, std::size_t> extract_strategy(const ExplicitSpace& space, const AttractorResult& r);

/// Solved with a finite-table model, or Refuted with a trap.
Verdict solve_eu(const ExplicitSpace& space, const HornSystem& hs);
Verdict solve_reach_game(const ExplicitSpace& space, const HornSystem& hs);

} // namespace hornforge
