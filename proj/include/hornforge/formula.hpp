#pragma once

// Exact linear arithmetic over the rationals: terms, constraints, NNF
// formulas, cube satisfiability with Farkas certificates, projection.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hornforge/limits.hpp"

namespace hornforge {

using Rational = mpq_class;
using BigInt = mpz_class;
using Assignment = std::map<std::string, Rational>;
using VarSet = std::set<std::string>;
using RenameMap = std::map<std::string, std::string>;

std::string to_string(const Rational& q);
bool is_integer(const Rational& q);
BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

class LinTerm {
public:
    LinTerm() = default;
    explicit LinTerm(Rational constant) : constant_(std::move(constant)) {}
    static LinTerm var(const std::string& name, const Rational& coeff = 1);

    const std::map<std::string, Rational>& coeffs() const { return coeffs_; }
    const Rational& constant() const { return constant_; }
    Rational coeff(const std::string& name) const;
    bool is_constant() const { return coeffs_.empty(); }
    VarSet vars() const;

    void add(const std::string& name, const Rational& coeff);
    void set_constant(Rational c) { constant_ = std::move(c); }

    LinTerm& operator+=(const LinTerm& other);
    LinTerm& operator-=(const LinTerm& other);
    LinTerm& operator*=(const Rational& k);
    LinTerm operator-() const;
    friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
    friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
    friend LinTerm operator*(LinTerm a, const Rational& k) { return a *= k; }
    friend bool operator==(const LinTerm& a, const LinTerm& b);
    friend bool operator<(const LinTerm& a, const LinTerm& b);

    /// Throws std::out_of_range if a variable has no value.
    Rational eval(const Assignment& env) const;
    /// Simultaneous renaming; colliding targets have their coefficients summed.
    LinTerm renamed(const RenameMap& map) const;
    /// Replaces assigned variables by their values.
    LinTerm partial_eval(const Assignment& env) const;
    LinTerm substituted(const std::string& name, const LinTerm& replacement) const;

private:
    std::map<std::string, Rational> coeffs_;
    Rational constant_;
};

enum class Rel { Ge, Gt, Eq };

/// term REL 0
struct LinConstraint {
    LinTerm term;
    Rel rel = Rel::Ge;

    bool holds(const Assignment& env) const;
    /// Positive rescaling to primitive integer coefficients; equalities also
    /// get a positive leading coefficient. Semantics are unchanged.
    LinConstraint canonical() const;
    /// For constant-only terms: whether the relation holds.
    bool constant_truth() const;
    LinConstraint renamed(const RenameMap& map) const { return {term.renamed(map), rel}; }

    friend bool operator==(const LinConstraint& a, const LinConstraint& b) {
        return a.rel == b.rel && a.term == b.term;
    }
    friend bool operator<(const LinConstraint& a, const LinConstraint& b);
};

/// Negation table: !(t>=0) = -t>0, !(t>0) = -t>=0, !(t=0) = t>0 || -t>0.
std::vector<LinConstraint> negate(const LinConstraint& c);

/// Negation-free boolean combination of linear constraints. Immutable and
/// cheap to copy; children are shared.
class Formula {
public:
    enum class Kind { True, False, Atom, And, Or };

    Formula();  // True
    static Formula top();
    static Formula bottom();
    /// Canonicalizes the constraint; constant constraints fold to True/False.
    static Formula atom(const LinConstraint& c);
    static Formula atom(LinTerm term, Rel rel) { return atom(LinConstraint{std::move(term), rel}); }
    /// Flattens nested conjunctions, drops True, folds False.
    static Formula conj(const std::vector<Formula>& parts);
    static Formula disj(const std::vector<Formula>& parts);

    Kind kind() const;
    bool is_true() const { return kind() == Kind::True; }
    bool is_false() const { return kind() == Kind::False; }
    const std::vector<Formula>& children() const;
    const LinConstraint& constraint() const;

    bool eval(const Assignment& env) const;
    VarSet vars() const;
    Formula renamed(const RenameMap& map) const;
    Formula partial_eval(const Assignment& env) const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);
Formula negate(const Formula& f);
Formula implies(const Formula& a, const Formula& b);

/// Surface-syntax rendering (`x - y >= 3 && (z = 0 || z > 1)`).
std::string to_string(const LinTerm& t);
std::string to_string(const LinConstraint& c);
std::string to_string(const Formula& f);

// ---------------------------------------------------------------------------
// Raw input formulas (with negation, arbitrary comparisons, nonlinear products)

struct RawTerm {
    enum class Op { Const, Var, Add, Sub, Mul, Neg };
    Op op = Op::Const;
    Rational value;
    std::string name;
    std::vector<RawTerm> args;

    static RawTerm constant(Rational v);
    static RawTerm variable(std::string n);
    static RawTerm binary(Op op, RawTerm a, RawTerm b);
    static RawTerm negated(RawTerm a);
};

enum class CmpOp { Le, Lt, Eq, Ne, Ge, Gt };

struct RawFormula {
    enum class Op { True, False, Cmp, Not, And, Or };
    Op op = Op::True;
    CmpOp cmp = CmpOp::Eq;
    RawTerm lhs, rhs;
    std::vector<RawFormula> args;

    static RawFormula boolean(bool b);
    static RawFormula compare(RawTerm lhs, CmpOp op, RawTerm rhs);
    static RawFormula negation(RawFormula f);
    static RawFormula conjunction(std::vector<RawFormula> fs);
    static RawFormula disjunction(std::vector<RawFormula> fs);
    /// Embeds an NNF formula (used to check that nnf is stable on NNF input).
    static RawFormula from(const Formula& f);
};

/// Throws InputError on a product of two non-constant terms.
LinTerm linearize(const RawTerm& t);
Formula nnf(const RawFormula& f);

// ---------------------------------------------------------------------------
// Cubes and decision procedures

struct Cube {
    std::vector<LinConstraint> constraints;

    VarSet vars() const;
    bool holds(const Assignment& env) const;
    Formula to_formula() const;
    Cube renamed(const RenameMap& map) const;
    /// Sorted, deduplicated canonical constraints.
    Cube normalized() const;
    friend bool operator==(const Cube& a, const Cube& b) { return a.constraints == b.constraints; }
};

/// Purely syntactic distribution; throws ResourceError above the cube cap.
std::vector<Cube> dnf(const Formula& f, const Caps& caps = default_caps());

/// Multipliers over constraint indices of a cube. Inequality multipliers are
/// nonnegative; equality multipliers may carry either sign.
struct FarkasCertificate {
    std::vector<std::pair<std::size_t, Rational>> multipliers;
};

/// Recomputes the weighted sum and checks that it is a violated constant
/// constraint.
bool check_farkas(const Cube& cube, const FarkasCertificate& cert);

using CubeResult = std::variant<Assignment, FarkasCertificate>;

/// Rational feasibility by Fourier-Motzkin with provenance tracking. The
/// witness is total on cube.vars() and prefers small integer values.
CubeResult sat_cube(const Cube& cube, const Caps& caps = default_caps());

/// Rational satisfiability of a formula: a witness total on f.vars(), or none.
std::optional<Assignment> sat(const Formula& f, const Caps& caps = default_caps());
bool valid(const Formula& f, const Caps& caps = default_caps());

/// Projection: the result mentions none of `vars` and is rationally
/// equisatisfiable with the existential closure of `cube` over them.
Cube eliminate(const std::vector<std::string>& vars, const Cube& cube,
               const Caps& caps = default_caps());

// ---------------------------------------------------------------------------
// Integer reasoning

using Box = std::map<std::string, std::pair<std::int64_t, std::int64_t>>;

/// Rewrites constraints whose variables are all integer-sorted: primitive
/// integer coefficients, strict to non-strict, gcd-rounded constants.
/// Returns nullopt if an equality has no integer solution.
std::optional<Cube> tighten_integer(const Cube& cube, const VarSet& int_vars);

/// Integer point in the box satisfying the cube (branch and bound over the
/// rational relaxation, then exhaustive scan of small boxes).
std::optional<Assignment> int_sat(const Cube& cube, const Box& bounds,
                                  const Caps& caps = default_caps());

/// Mixed satisfiability: variables in int_vars must take integer values.
/// Throws ResourceError when branch and bound runs out of nodes.
std::optional<Assignment> sat_mixed(const Cube& cube, const VarSet& int_vars,
                                    const Caps& caps = default_caps());
std::optional<Assignment> find_model(const Formula& f, const VarSet& int_vars,
                                     const Caps& caps = default_caps());
bool valid_mixed(const Formula& f, const VarSet& int_vars, const Caps& caps = default_caps());
/// A model of body && !head, found by subtracting the cubes of head from each
/// cube of body (avoids distributing the negation of large disjunctions).
std::optional<Assignment> find_counter(const Formula& body, const Formula& head, const VarSet& int_vars,
                                       const Caps& caps = default_caps());

/// Enumerates integer solutions of `f` over `vars` within `box`, calling
/// `visit` for each (stop by returning false). Variables of f outside `vars`
/// must be absent. Throws ResourceError if more than `max_nodes` partial
/// assignments are explored.
void enumerate_solutions(const Formula& f, const std::vector<std::string>& vars, const Box& box,
                         const std::function<bool(const Assignment&)>& visit,
                         std::uint64_t max_nodes, const Caps& caps = default_caps());

} // namespace hornforge
