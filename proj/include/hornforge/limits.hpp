#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace hornforge {

/// Resource caps shared by the kernel, the explicit-state engines and the oracle.
struct Caps {
    std::size_t dnf_cubes = 4096;
    std::size_t fm_rows = 100000;
    std::size_t states = 100000;
    std::uint64_t box_points = 10000000;
    std::uint64_t product_points = 10000000;
    std::size_t bnb_nodes = 2000;
};

/// Parses "key=value,key=value" (keys: dnf, fm, states, box, product, bnb).
/// Unknown keys or malformed numbers throw InputError.
Caps parse_caps(const std::string& text, Caps base = {});

/// Process-wide defaults; HORN_FORGE_CAPS is read once on first use.
const Caps& default_caps();

} // namespace hornforge
