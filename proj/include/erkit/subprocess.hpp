// Copyright 2026 The erkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace erkit {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Spawn argv[0] with the given arguments, feed `stdin_data`, capture stdout
/// and stderr. `extra_env` entries override the inherited environment.
/// Throws Error(IoError) when the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& stdin_data = {},
                          const std::map<std::string, std::string>& extra_env = {});

/// Resolve a program name against PATH (names containing '/' are used as-is).
/// Returns the absolute path or nullopt when no executable is found.
std::optional<std::string> find_executable(const std::string& name);

}  // namespace erkit
