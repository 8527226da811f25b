#pragma once

#include <string>

#include "ovkron/channel.hpp"

namespace ovkron {

/// Parses a model configuration (versioned JSON schema, unknown fields are
/// errors). Throws ConfigError with a field path on malformed input.
ModelSpec parse_model_config(const std::string& json_text);

ModelSpec load_model_config(const std::string& path);

/// Normalized form of a built model: measures expanded to explicit atoms,
/// covariance expanded to blocks, gamma folded into the variances (emitted
/// as 1). Re-parsing yields an identical ChannelModel.
std::string dump_normalized(const ChannelModel& model);

/// Single-line JSON summary of the normalized parameters, for CSV comments.
std::string normalized_params_line(const ChannelModel& model);

}  // namespace ovkron
