// Copyright 2026 The qcomb developers
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
#include <string>

#include "qcomb/comb.hpp"
#include "qcomb/scenarios.hpp"

namespace qcomb {

// Structured text formats, all JSON with an explicit schema_version and
// complex entries as [re, im] pairs. Write/read round-trips are bit-exact
// for finite values. Parse and validation failures throw
// std::invalid_argument / std::runtime_error.

inline constexpr int kSchemaVersion = 1;

void write_matrix_file(const std::string& path, const MultiLegMatrix& m,
                       const std::map<std::string, std::string>& metadata = {});
MultiLegMatrix read_matrix_file(const std::string& path);

// A process is stored as a matrix file plus a slot-structure sidecar
// (<base>.slots.json next to <base>.json).
std::string slots_sidecar_path(const std::string& process_path);
void write_process(const std::string& path, const ProcessTensor& t,
                   const std::map<std::string, std::string>& metadata = {});
ProcessTensor read_process(const std::string& path);

void write_comb(const std::string& path, const ControlComb& z);
ControlComb read_comb(const std::string& path);

void write_scenario(const std::string& path, const ScenarioSpec& spec);
ScenarioSpec read_scenario(const std::string& path);

}  // namespace qcomb
