#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "varnet/network.hpp"

namespace varnet {

inline constexpr int kCheckpointFormatVersion = 1;

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VersionMismatchError : CheckpointError {
    using CheckpointError::CheckpointError;
};
struct MalformedDocumentError : CheckpointError {
    using CheckpointError::CheckpointError;
};
struct ShapeError : CheckpointError {
    using CheckpointError::CheckpointError;
};

/// Versioned JSON document {format_version, layer_widths, activation,
/// weights}. Weights round-trip bit-exactly (shortest-round-trip decimal
/// encoding).
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace varnet
