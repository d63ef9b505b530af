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
#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "wlpca/errors.hpp"

namespace wlpca::cli {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("sha256: initialisation failed");
    }
  }

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) {
      throw std::runtime_error("sha256: update failed");
    }
  }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) {
      throw std::runtime_error("sha256: finalisation failed");
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kDigits[md[i] >> 4]);
      out.push_back(kDigits[md[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

nlohmann::json files_to_json(const std::vector<Manifest::File>& files) {
  auto arr = nlohmann::json::array();
  for (const auto& f : files) {
    arr.push_back({{"role", f.role}, {"path", f.path}, {"sha256", f.sha256}});
  }
  return arr;
}

std::vector<Manifest::File> files_from_json(const nlohmann::json& arr) {
  std::vector<Manifest::File> files;
  for (const auto& f : arr) {
    files.push_back({f.at("role").get<std::string>(),
                     f.at("path").get<std::string>(),
                     f.at("sha256").get<std::string>()});
  }
  return files;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = in.gcount();
    if (got > 0) h.update(buf.data(), static_cast<std::size_t>(got));
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  return h.hex();
}

std::string tool_version() { return WLPCA_VERSION; }

nlohmann::json Manifest::to_json() const {
  return {
      {"manifest_version", kManifestVersion},
      {"tool", "wlpca"},
      {"tool_version", tool_version()},
      {"command", command},
      {"arguments", arguments},
      {"config", config},
      {"formats",
       {{"cooc", "LXF1"},
        {"checkpoint", "LXM1"},
        {"vocab", "tsv/1"},
        {"log", "tsv/1"}}},
      {"inputs", files_to_json(inputs)},
      {"outputs", files_to_json(outputs)},
      {"extra", extra},
  };
}

std::string Manifest::serialize() const { return to_json().dump(2) + "\n"; }

Manifest Manifest::from_json(const nlohmann::json& j) {
  try {
    if (j.at("manifest_version").get<int>() != kManifestVersion) {
      throw FormatError("unsupported manifest version");
    }
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.arguments = j.at("arguments").get<std::vector<std::string>>();
    m.config = j.at("config");
    m.extra = j.value("extra", nlohmann::json::object());
    m.inputs = files_from_json(j.at("inputs"));
    m.outputs = files_from_json(j.at("outputs"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace wlpca::cli
