#pragma once

// Human and JSON renderings of verdicts, clause reports and oracle answers.
// JSON documents have a fixed key order and embed certificates verbatim.

#include <string>
#include <string_view>
#include <vector>

#include "hornforge/certify.hpp"
#include "hornforge/horn.hpp"
#include "hornforge/model.hpp"

namespace hornforge {

struct RunInfo {
    std::string file;
    std::string schema;
    std::string variant;
};

std::string verdict_json(const HornSystem& hs, const Verdict& v, const RunInfo& info);
std::string verdict_human(const HornSystem& hs, const Verdict& v);

std::string reports_json(const std::vector<ClauseReport>& reports, const RunInfo& info);
std::string reports_human(const std::vector<ClauseReport>& reports);

std::string oracle_json(const OracleVerdict& o, const std::string& file);
std::string oracle_human(const OracleVerdict& o);

/// Facts along the first-child spine of a derivation, leaf first
/// ("inv(0)", "inv(1)", ...).
std::vector<std::string> derivation_trace(const HornSystem& hs, const Derivation& d);

/// Certificate embedded in a verdict_json document. Throws InputError if the
/// text is not such a document.
struct EmbeddedCertificate {
    std::string status;
    std::optional<Model> model;
    std::optional<Refutation> refutation;
};
EmbeddedCertificate read_verdict_json(std::string_view text, const HornSystem& hs);

} // namespace hornforge
