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

#include "qcomb/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qcomb {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("parse error in '" + path + "': " + e.what());
  }
  return j;
}

void dump_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(1) << "\n";
}

void require_schema(const json& j, const std::string& path) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    throw std::runtime_error("unsupported schema_version in '" + path + "'");
  }
}

json matrix_to_json(const MultiLegMatrix& m) {
  json legs = json::array();
  for (const auto& leg : m.legs()) legs.push_back({leg.label, leg.dim});
  json entries = json::array();
  const int d = m.dim();
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const Complex v = m.entries()(r, c);
      entries.push_back({v.real(), v.imag()});
    }
  }
  return json{{"schema_version", kSchemaVersion},
              {"legs", std::move(legs)},
              {"entries", std::move(entries)}};
}

MultiLegMatrix matrix_from_json(const json& j, const std::string& path) {
  std::vector<LegSpec> legs;
  for (const auto& leg : j.at("legs")) {
    legs.push_back({leg.at(0).get<std::string>(), leg.at(1).get<int>()});
  }
  long long d = 1;
  for (const auto& leg : legs) d *= leg.dim;
  const auto& entries = j.at("entries");
  if (static_cast<long long>(entries.size()) != d * d) {
    throw std::runtime_error("entry count does not match legs in '" + path +
                             "'");
  }
  Matrix m(d, d);
  long long idx = 0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c, ++idx) {
      m(r, c) = Complex(entries[idx].at(0).get<double>(),
                        entries[idx].at(1).get<double>());
    }
  }
  return MultiLegMatrix(std::move(m), std::move(legs));
}

json channel_to_json(const Channel& ch) {
  json entries = json::array();
  const int d = ch.choi().dim();
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const Complex v = ch.choi().entries()(r, c);
      entries.push_back({v.real(), v.imag()});
    }
  }
  return json{{"out_dim", ch.out_dim()},
              {"in_dim", ch.in_dim()},
              {"entries", std::move(entries)}};
}

Channel channel_from_json(const json& j, const std::string& path) {
  const int out_dim = j.at("out_dim").get<int>();
  const int in_dim = j.at("in_dim").get<int>();
  const int d = out_dim * in_dim;
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != d * d) {
    throw std::runtime_error("channel entry count mismatch in '" + path + "'");
  }
  Matrix m(d, d);
  int idx = 0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c, ++idx) {
      m(r, c) = Complex(entries[idx].at(0).get<double>(),
                        entries[idx].at(1).get<double>());
    }
  }
  return Channel(std::move(m), out_dim, in_dim);
}

}  // namespace

void write_matrix_file(const std::string& path, const MultiLegMatrix& m,
                       const std::map<std::string, std::string>& metadata) {
  json j = matrix_to_json(m);
  j["metadata"] = metadata;
  dump_json(path, j);
}

MultiLegMatrix read_matrix_file(const std::string& path) {
  const json j = load_json(path);
  require_schema(j, path);
  return matrix_from_json(j, path);
}

std::string slots_sidecar_path(const std::string& process_path) {
  const std::string suffix = ".json";
  if (process_path.size() > suffix.size() &&
      process_path.substr(process_path.size() - suffix.size()) == suffix) {
    return process_path.substr(0, process_path.size() - suffix.size()) +
           ".slots.json";
  }
  return process_path + ".slots.json";
}

void write_process(const std::string& path, const ProcessTensor& t,
                   const std::map<std::string, std::string>& metadata) {
  write_matrix_file(path, t.choi(), metadata);
  const SlotStructure& sl = t.slots();
  json out_dims = json::array();
  json in_dims = json::array();
  for (int k = 0; k <= sl.n_slots(); ++k) out_dims.push_back(sl.out_dim(k));
  for (int k = 1; k <= sl.n_slots() + 1; ++k) in_dims.push_back(sl.in_dim(k));
  dump_json(slots_sidecar_path(path),
            json{{"schema_version", kSchemaVersion},
                 {"n_slots", sl.n_slots()},
                 {"out_dims", std::move(out_dims)},
                 {"in_dims", std::move(in_dims)}});
}

ProcessTensor read_process(const std::string& path) {
  const MultiLegMatrix choi = read_matrix_file(path);
  const std::string sidecar = slots_sidecar_path(path);
  const json j = load_json(sidecar);
  require_schema(j, sidecar);
  std::vector<int> out_dims, in_dims;
  for (const auto& d : j.at("out_dims")) out_dims.push_back(d.get<int>());
  for (const auto& d : j.at("in_dims")) in_dims.push_back(d.get<int>());
  SlotStructure slots(std::move(out_dims), std::move(in_dims));
  if (j.at("n_slots").get<int>() != slots.n_slots()) {
    throw std::runtime_error("inconsistent slot count in '" + sidecar + "'");
  }
  return ProcessTensor(permute_legs(choi, slots.leg_order()), slots);
}

void write_comb(const std::string& path, const ControlComb& z) {
  json pre = json::array();
  json post = json::array();
  for (int k = 0; k <= z.n_slots(); ++k) pre.push_back(channel_to_json(z.pre(k)));
  for (int k = 1; k <= z.n_slots() + 1; ++k) {
    post.push_back(channel_to_json(z.post(k)));
  }
  dump_json(path, json{{"schema_version", kSchemaVersion},
                       {"n_slots", z.n_slots()},
                       {"coarse_mask", z.coarse_mask()},
                       {"pre", std::move(pre)},
                       {"post", std::move(post)}});
}

ControlComb read_comb(const std::string& path) {
  const json j = load_json(path);
  require_schema(j, path);
  std::vector<Channel> pre, post;
  for (const auto& c : j.at("pre")) pre.push_back(channel_from_json(c, path));
  for (const auto& c : j.at("post")) post.push_back(channel_from_json(c, path));
  std::vector<int> mask;
  for (const auto& m : j.at("coarse_mask")) mask.push_back(m.get<int>());
  ControlComb comb(std::move(pre), std::move(post), std::move(mask));
  if (j.at("n_slots").get<int>() != comb.n_slots()) {
    throw std::runtime_error("inconsistent slot count in '" + path + "'");
  }
  return comb;
}

void write_scenario(const std::string& path, const ScenarioSpec& spec) {
  dump_json(path, json{{"schema_version", kSchemaVersion},
                       {"kind", to_string(spec.kind)},
                       {"sys_dim", spec.sys_dim},
                       {"env_dim", spec.env_dim},
                       {"n_slots", spec.n_slots},
                       {"seed", spec.seed},
                       {"params", spec.params}});
}

ScenarioSpec read_scenario(const std::string& path) {
  const json j = load_json(path);
  require_schema(j, path);
  ScenarioSpec spec;
  spec.kind = scenario_kind_from_string(j.at("kind").get<std::string>());
  spec.sys_dim = j.value("sys_dim", 2);
  spec.env_dim = j.value("env_dim", 2);
  spec.n_slots = j.value("n_slots", 1);
  spec.seed = j.value("seed", static_cast<std::uint64_t>(0));
  if (j.contains("params")) {
    for (const auto& p : j["params"]) spec.params.push_back(p.get<double>());
  }
  if (spec.sys_dim < 2 && spec.kind != ScenarioKind::kUncorrelatedRandom) {
    throw std::runtime_error("sys_dim must be >= 2 in '" + path + "'");
  }
  if (spec.n_slots < 0) {
    throw std::runtime_error("n_slots must be >= 0 in '" + path + "'");
  }
  return spec;
}

}  // namespace qcomb
