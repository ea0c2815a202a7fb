// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace ricciforge {

/// Batch entry point behind the `ricciforge` binary. Returns the process
/// exit status: 0 when every suite in the run passed, 1 on suite failure,
/// 2 on invalid configuration or usage.
int cli_main(const std::vector<std::string>& args);

}  // namespace ricciforge
