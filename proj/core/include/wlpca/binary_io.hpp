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

#ifndef WLPCA_BINARY_IO_HPP_
#define WLPCA_BINARY_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wlpca {

// Little-endian fixed-width encoding, independent of host byte order.
void write_u8(std::ostream& out, std::uint8_t value);
void write_u32(std::ostream& out, std::uint32_t value);
void write_u64(std::ostream& out, std::uint64_t value);
void write_f64(std::ostream& out, double value);
void write_magic(std::ostream& out, std::string_view magic);

std::uint8_t read_u8(std::istream& in);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
// Throws FormatError if the next bytes are not `magic`.
void expect_magic(std::istream& in, std::string_view magic);

// Writes a group of files so that either all of them appear at their final
// paths or none do. Each file is written to a sibling temporary and renamed
// on commit(); temporaries left uncommitted are removed on destruction.
class StagedOutputs {
 public:
  StagedOutputs() = default;
  StagedOutputs(const StagedOutputs&) = delete;
  StagedOutputs& operator=(const StagedOutputs&) = delete;
  ~StagedOutputs();

  void add(const std::filesystem::path& path, bool binary,
           const std::function<void(std::ostream&)>& writer);
  void commit();

 private:
  struct Pending {
    std::filesystem::path temp;
    std::filesystem::path final_path;
  };
  std::vector<Pending> pending_;
};

// Single-file convenience wrapper around StagedOutputs.
void write_file_atomically(const std::filesystem::path& path, bool binary,
                           const std::function<void(std::ostream&)>& writer);

}  // namespace wlpca

#endif  // WLPCA_BINARY_IO_HPP_
