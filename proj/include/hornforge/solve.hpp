#pragma once

// Portfolio solver: clause unfolding for refutations, interval iteration and
// grid Farkas templates for models, with wf and ∀∃ systems dispatched to the
// ranking and explicit-state engines.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>

#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/model.hpp"
#include "hornforge/program.hpp"

namespace hornforge {

struct Budget {
    std::size_t max_depth = 25;
    std::size_t max_iterations = 100;
    std::size_t widening_delay = 3;
    int coeff_min = -2, coeff_max = 2;
    int const_min = -16, const_max = 16;
    std::size_t template_size = 2;
    double time_limit = 30.0;  // seconds
};

/// Wall-clock cap plus an optional cancellation flag.
class Deadline {
public:
    explicit Deadline(double seconds = 30.0, const std::atomic<bool>* cancel = nullptr);
    bool expired() const;

private:
    std::chrono::steady_clock::time_point end_;
    const std::atomic<bool>* cancel_;
};

/// A refutation of height at most k, or nothing. Resource failures are
/// reported through `reason`.
std::optional<Derivation> bmc(const HornSystem& hs, std::size_t k, const Caps& caps = default_caps(),
                              std::string* reason = nullptr);

/// Interval model (checked against every clause), or nothing.
std::optional<Model> kleene_intervals(const HornSystem& hs, const Budget& budget = {},
                                      const Caps& caps = default_caps());

/// First grid template model in lexicographic order, or nothing.
std::optional<Model> farkas_templates(const HornSystem& hs, const Budget& budget = {},
                                      const Caps& caps = default_caps());

struct SolveOptions {
    Budget budget;
    bool deterministic = true;
    /// Source program; needed for systems with existential heads.
    const TransitionSystem* ts = nullptr;
    SchemaConfig cfg;
    Caps caps = default_caps();
};

/// Never returns an uncertified Solved or Refuted verdict.
Verdict solve(const HornSystem& hs, const SolveOptions& opts = {});

} // namespace hornforge
