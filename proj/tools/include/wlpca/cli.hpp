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
#ifndef WLPCA_CLI_HPP_
#define WLPCA_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace wlpca::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadArguments = 2,
  kIoError = 3,
  kEmptyInput = 4,
  kNonFiniteLoss = 5,
  kUnknownToken = 6,
};

// Runs one command line (without the program name). Normal output goes to
// `out`, diagnostics to `err`. Never throws; every failure maps to an
// ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace wlpca::cli

#endif  // WLPCA_CLI_HPP_
