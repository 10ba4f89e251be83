// Copyright 2026 The qdisco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qdisco/hardware.hpp"
#include "qdisco/optimizer.hpp"

namespace qdisco {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Invalid command line or run configuration.
class UsageError : public Error {
   public:
    using Error::Error;
};

/// Inclusive layer range written "p" or "a..b".
std::pair<int, int> parse_layer_range(const std::string& text);

/// Run configuration file; relative paths are resolved against the file's directory.
///   {"problem": path, "fleet": [{"calibration": path, "prior_hscore": x?}, ...],
///    "eta": x, "layers": p, "shots": n, "seed": s?, "noise": bool?,
///    "noisy_optimize": bool?, "trajectories": n?, "optimizer": {...}?}
struct RunConfig {
    std::filesystem::path problem;
    Fleet fleet;
    double eta = 0.01;
    int layers = 1;
    std::int64_t shots = 1024;
    std::optional<std::uint64_t> seed;
    bool noise = true;
    bool noisy_optimize = false;
    int trajectories = 64;
    OptimizerConfig optimizer;
};

/// Throws UsageError on schema or range violations and missing files.
RunConfig load_run_config(const std::filesystem::path& path);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdisco
