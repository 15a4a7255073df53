// Copyright 2026 The semimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semimo {

class ExternalCommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replaces every `{key}` in `command_template`.
std::string substitute_placeholders(
    std::string command_template,
    const std::vector<std::pair<std::string, std::string>>& values);

/// Unique file path in the system temp directory.
std::filesystem::path scratch_path(std::string_view stem, std::string_view extension);

/// Runs through /bin/sh. Returns the exit status.
int run_command(const std::string& command);

/// Runs through /bin/sh and returns standard output; throws
/// ExternalCommandError on a nonzero exit status.
std::string run_command_capture(const std::string& command);

/// Caps how many external commands run at once, process-wide.
void set_external_concurrency(int limit);

}  // namespace semimo
