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

#include <string>
#include <string_view>

#include "qdisco/compiler.hpp"
#include "qdisco/decomposer.hpp"
#include "qdisco/hscore.hpp"
#include "qdisco/optimizer.hpp"
#include "qdisco/orchestrator.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

// Canonical JSON documents (sorted keys, two-space indent). Every writer has a
// loader that reproduces an equal value.

std::string to_json(const Placement& placement);
std::string to_json(const Partition& partition);
std::string to_json(const ExecutionPlan& plan);
std::string to_json(const RunResult& result);
std::string to_json(const HScoreReport& report);
std::string to_json(const ReferenceDistribution& ref);
std::string to_json(const ShotCounts& counts);
std::string to_json(const OptimizationTrace& trace);

Placement placement_from_json(std::string_view text);
Partition partition_from_json(std::string_view text);
ExecutionPlan plan_from_json(std::string_view text);
RunResult run_result_from_json(std::string_view text);
HScoreReport hscore_report_from_json(std::string_view text);
ReferenceDistribution reference_from_json(std::string_view text);
ShotCounts shot_counts_from_json(std::string_view text);
OptimizationTrace trace_from_json(std::string_view text);

}  // namespace qdisco
