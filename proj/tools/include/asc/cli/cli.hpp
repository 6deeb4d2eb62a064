// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asc/error.hpp"

namespace asc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitValidation = 4;

int exit_code(ErrorCode code);

struct KeySpec {
  std::string key;
  std::string default_value;
  std::string help;
};

/// Every key a config file or flag may set.
const std::vector<KeySpec>& config_keys();

/// Key/value settings. Unknown keys are rejected with ConfigError.
class RunConfig {
 public:
  /// All keys at their defaults.
  RunConfig();

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  double get_double(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<std::size_t> get_size_list(const std::string& key) const;

  /// "key = value" lines for the given keys, in the given order.
  std::string dump(const std::vector<std::string>& keys) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Applies "key = value" lines; '#' starts a comment, blank lines are skipped.
void apply_config_text(RunConfig& cfg, std::string_view text, const std::string& source);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Runs one command line (without the program name). Diagnostics go to err
/// as a single "error[Code]: message" line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asc::cli
