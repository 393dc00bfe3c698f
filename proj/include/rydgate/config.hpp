#ifndef RYDGATE_CONFIG_HPP
#define RYDGATE_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "rydgate/model.hpp"
#include "rydgate/pulses.hpp"

namespace rydgate {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Command-line overrides applied on top of the config document.
struct RunOverrides {
    std::optional<std::string> out;
    std::optional<int> workers;
    bool resume = false;
};

// Validates the document against the published schema (docs/config.schema.json):
// required keys present, types correct, unknown fields rejected.
void validate_config(const nlohmann::json& config);

// Runs one batch task; writes artifacts and a manifest into the output
// directory. Returns 0 on success, 2 when some sweep points failed, 3 when
// all failed. Throws ConfigError for invalid configs.
int run_task(const nlohmann::json& config, const RunOverrides& overrides);

// Shared parsing helpers (also used by the test suite).
ExcitationScheme scheme_from_json(const nlohmann::json& j);
InteractionSpec interaction_from_json(const nlohmann::json& j);
std::vector<double> grid_from_json(const nlohmann::json& j);

nlohmann::json gate_report_json(const struct GateReport& rep);

}  // namespace rydgate

#endif
