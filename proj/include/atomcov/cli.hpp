#ifndef ATOMCOV_CLI_HPP
#define ATOMCOV_CLI_HPP

#include <string>

#include <json.hpp>

namespace atomcov {

/// Commands return process exit codes: 0 on success/convergence, 2 when an
/// iterative method exits on its iteration cap (result still written), 1 on
/// input or configuration errors (nothing written).
int cmd_estimate(const nlohmann::json& config, int jobs = 1);
int cmd_simulate(const nlohmann::json& config);
int cmd_bench(const std::string& task, const nlohmann::json& config, int jobs = 1);
int cmd_crb(const nlohmann::json& config);

/// Load a JSON config file.
nlohmann::json load_config(const std::string& path);

/// Apply one "dotted.path=value" override; the value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Default worker count: ATOMCOV_JOBS when set, otherwise 1.
int default_jobs();

}  // namespace atomcov

#endif
