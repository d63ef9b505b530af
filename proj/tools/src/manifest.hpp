// Copyright 2026 The wlpca Authors
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
#ifndef WLPCA_TOOLS_MANIFEST_HPP_
#define WLPCA_TOOLS_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace wlpca::cli {

inline constexpr int kManifestVersion = 1;

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

std::string tool_version();

// Everything needed to rerun a command: the canonical argument list (all
// options spelled out, defaults included, output prefix excluded), the
// configuration it resolved to, and digests of inputs and outputs.
struct Manifest {
  std::string command;
  std::vector<std::string> arguments;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json extra = nlohmann::json::object();

  struct File {
    std::string role;
    std::string path;
    std::string sha256;
  };
  std::vector<File> inputs;
  std::vector<File> outputs;

  nlohmann::json to_json() const;
  std::string serialize() const;
  static Manifest from_json(const nlohmann::json& j);
  static Manifest load(const std::filesystem::path& path);
};

}  // namespace wlpca::cli

#endif  // WLPCA_TOOLS_MANIFEST_HPP_
