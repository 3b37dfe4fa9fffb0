#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hornforge/solve.hpp"

namespace hornforge::detail {

/// Derivable fact sets, one cube per entry, grown one height at a time.
class Unfolder {
public:
    struct Entry {
        std::string pred;
        Cube cube;  // over the predicate's parameters
        std::size_t height = 0;
        std::size_t clause = 0;
        Cube body;  // clause constraint cube with bounds
        std::vector<std::size_t> children;
    };

    Unfolder(const HornSystem& hs, const Caps& caps, const Deadline* deadline = nullptr);

    /// Adds the entries of the next height. Returns a refutation when a
    /// query clause fires on entries of at most that height.
    std::optional<Derivation> step();

    std::size_t height() const { return height_; }
    /// No new entries appeared in the last step.
    bool saturated() const { return saturated_; }
    /// Union of the entries per unknown; exact when saturated.
    Model saturation_model() const;
    const std::vector<Entry>& entries() const { return entries_; }
    /// Ground derivation of pred(values) from some entry, if one is found.
    std::optional<DerivationNode> ground_fact(const std::string& pred, const std::vector<Rational>& values);

    std::string reason;  // set when a cap stopped the search

private:
    std::optional<DerivationNode> ground(std::size_t clause, const Cube& body, const std::vector<std::size_t>& children,
                                         const std::optional<std::vector<Rational>>& target, std::size_t& budget);
    Cube instance(std::size_t entry, const Atom& a) const;
    bool subsumed(const std::string& pred, const Cube& c) const;
    bool fire_queries(std::size_t min_height, std::optional<Derivation>& out);

    const HornSystem& hs_;
    Caps caps_;
    const Deadline* deadline_;
    std::vector<std::vector<Cube>> clause_cubes_;  // DNF of bounds && constraint per clause
    std::vector<Entry> entries_;
    std::size_t height_ = 0;
    bool saturated_ = false;
};

std::optional<Model> kleene_impl(const HornSystem& hs, const Budget& budget, const Caps& caps, const Deadline& dl);
std::optional<Model> templates_impl(const HornSystem& hs, const Budget& budget, const Caps& caps, const Deadline& dl);

/// Conjunction of the interpretations of a clause's body atoms with its bounds and constraint.
Formula clause_body(const HornSystem& hs, const Clause& c, const Model& m);

} // namespace hornforge::detail
