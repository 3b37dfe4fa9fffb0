#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hornforge/certify.hpp"
#include "hornforge/errors.hpp"
#include "hornforge/formula.hpp"
#include "hornforge/generate.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/program.hpp"
#include "hornforge/solve.hpp"

namespace hf_test {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline hornforge::Cube cube_of(const std::string& text) {
    auto cubes = hornforge::dnf(hornforge::parse_formula(text));
    if (cubes.size() != 1) throw std::runtime_error("not a single cube: " + text);
    return cubes.front();
}

// Weighted sum of the cube rows; a contradiction is a constant term that
// violates its relation.
inline bool farkas_resums(const hornforge::Cube& c, const hornforge::FarkasCertificate& cert) {
    using namespace hornforge;
    LinTerm sum;
    bool strict = false, any_ineq = false;
    for (const auto& [i, w] : cert.multipliers) {
        if (i >= c.constraints.size()) return false;
        const auto& row = c.constraints[i];
        if (row.rel != Rel::Eq) {
            if (w < 0) return false;
            if (w > 0) {
                any_ineq = true;
                if (row.rel == Rel::Gt) strict = true;
            }
        }
        sum += row.term * w;
    }
    if (!sum.is_constant()) return false;
    const Rational& k = sum.constant();
    if (!any_ineq) return k != 0;
    return strict ? k <= 0 : k < 0;
}

} // namespace hf_test

#ifdef HORN_FORGE_CORPUS
namespace hf_test {
inline hornforge::TransitionSystem corpus(const std::string& file) {
    return hornforge::parse_program(slurp(std::string(HORN_FORGE_CORPUS) + "/" + file));
}
} // namespace hf_test
#endif
