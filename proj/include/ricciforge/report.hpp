// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include <json.hpp>

#include "ricciforge/identities.hpp"

namespace ricciforge {

/// Writes content atomically (temp file in the same directory, then rename).
void atomic_write(const std::string& path, const std::string& content);

nlohmann::ordered_json identity_rows_to_json(const std::vector<IdentityRow>& rows);
std::string identity_rows_to_csv(const std::vector<IdentityRow>& rows);

/// Wraps a payload into the versioned report envelope:
/// {"schema": 1, "command": ..., "generated_at": ..., ...payload}.
nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config_echo);

}  // namespace ricciforge
