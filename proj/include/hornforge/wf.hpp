#pragma once

// Linear and lexicographic ranking functions for relations over (v, v').
// A state variable x has successor copy x'.

#include <optional>
#include <vector>

#include "hornforge/formula.hpp"
#include "hornforge/model.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

/// Podelski-Rybalchenko synthesis over the closure of a conjunctive relation.
/// Integer-sorted variables are tightened first. The result passes check_rank.
std::optional<AffineRank> pr_synthesize(const Cube& rel, const VarSet& int_vars = {},
                                        const Caps& caps = default_caps());
/// Rejects disjunctive relations with InputError.
std::optional<AffineRank> pr_synthesize(const Formula& rel, const VarSet& int_vars = {},
                                        const Caps& caps = default_caps());

/// Greedy lexicographic composition.
std::optional<LexRank> lex_synthesize(const std::vector<Cube>& disjuncts, const VarSet& int_vars = {},
                                      const Caps& caps = default_caps());

/// Boundedness (>= 0) and decrease (>= 1) on every DNF cube of `round`.
/// `state` lists the pre-state variables with sorts (and bounds, needed for
/// table ranks); when empty it is inferred from the witness.
bool check_rank(const Formula& round, const RankWitness& rank, const std::vector<SortedVar>& state = {},
                const Caps& caps = default_caps());

} // namespace hornforge
