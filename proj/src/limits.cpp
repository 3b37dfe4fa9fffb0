#include "hornforge/limits.hpp"

#include <cstdlib>
#include <sstream>

#include "hornforge/errors.hpp"

namespace hornforge {

Caps parse_caps(const std::string& text, Caps base) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("caps: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string num = item.substr(eq + 1);
        char* end = nullptr;
        unsigned long long value = std::strtoull(num.c_str(), &end, 10);
        if (num.empty() || *end != '\0' || value == 0) throw InputError("caps: bad value for '" + key + "'");
        if (key == "dnf") base.dnf_cubes = value;
        else if (key == "fm") base.fm_rows = value;
        else if (key == "states") base.states = value;
        else if (key == "box") base.box_points = value;
        else if (key == "product") base.product_points = value;
        else if (key == "bnb") base.bnb_nodes = value;
        else throw InputError("caps: unknown key '" + key + "'");
    }
    return base;
}

const Caps& default_caps() {
    static const Caps caps = [] {
        const char* env = std::getenv("HORN_FORGE_CAPS");
        return env ? parse_caps(env) : Caps{};
    }();
    return caps;
}

} // namespace hornforge
