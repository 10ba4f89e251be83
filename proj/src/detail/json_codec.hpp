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

#include <json.hpp>

#include "qdisco/serialization.hpp"

namespace qdisco::detail {

using nlohmann::json;

json encode(const QaoaParams& params);
json encode(const SamplingRegion& region);
json encode(const Placement& placement);
json encode(const Partition& partition);
json encode(const ExecutionPlan& plan);
json encode(const SpeedupReport& report);
json encode(const RunResult& result);
json encode(const HScoreReport& report);
json encode(const ReferenceDistribution& ref);
json encode(const ShotCounts& counts);
json encode(const OptimizationTrace& trace);

QaoaParams decode_params(const json& j);
SamplingRegion decode_region(const json& j);
Placement decode_placement(const json& j);
Partition decode_partition(const json& j);
ExecutionPlan decode_plan(const json& j);
SpeedupReport decode_speedup(const json& j);
RunResult decode_run_result(const json& j);
HScoreReport decode_hscore_report(const json& j);
ReferenceDistribution decode_reference(const json& j);
ShotCounts decode_shot_counts(const json& j);
OptimizationTrace decode_trace(const json& j);

/// Two-space indent plus trailing newline.
std::string dump(const json& j);

}  // namespace qdisco::detail
