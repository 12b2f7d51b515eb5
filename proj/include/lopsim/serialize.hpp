// Copyright 2026 The lopsim Authors
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

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "lopsim/mesh.hpp"

namespace lopsim {

/// NetworkSpec interchange document:
///   {"modes": m, "elements": [
///      {"kind": "mzi", "modes": [i, i+1], "t": ..., "phi": ...},
///      {"kind": "swap", "modes": [i, i+1]},
///      {"kind": "hardware_mzi", "modes": [i, i+1],
///       "theta1": ..., "theta2": ..., "phi1": ..., "phi2": ...},
///      {"kind": "beamsplitter", "modes": [i, i+1], "t": ..., "r": ...}]}
/// Doubles round-trip exactly (shortest-representation output).
inline nlohmann::json to_json(const NetworkSpec& spec) {
  nlohmann::json elements = nlohmann::json::array();
  for (const NetworkElement& e : spec.elements) {
    nlohmann::json j;
    j["modes"] = {e.mode, e.mode + 1};
    std::visit(
        [&j](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, MziSetting>) {
            j["kind"] = "mzi";
            j["t"] = s.t;
            j["phi"] = s.phi;
          } else if constexpr (std::is_same_v<T, SwapSetting>) {
            j["kind"] = "swap";
          } else if constexpr (std::is_same_v<T, HardwareMziSetting>) {
            j["kind"] = "hardware_mzi";
            j["theta1"] = s.theta1;
            j["theta2"] = s.theta2;
            j["phi1"] = s.phi1;
            j["phi2"] = s.phi2;
          } else if constexpr (std::is_same_v<T, BeamSplitterSetting>) {
            j["kind"] = "beamsplitter";
            j["t"] = s.t;
            j["r"] = s.r;
          }
        },
        e.setting);
    elements.push_back(std::move(j));
  }
  return {{"modes", spec.modes}, {"elements", std::move(elements)}};
}

inline NetworkSpec network_from_json(const nlohmann::json& j) {
  NetworkSpec spec(j.at("modes").get<int>());
  for (const auto& je : j.at("elements")) {
    const auto& modes = je.at("modes");
    const int lo = modes.at(0).get<int>();
    if (modes.at(1).get<int>() != lo + 1)
      throw std::invalid_argument(
          "network_from_json: elements must couple adjacent modes");
    const std::string kind = je.at("kind").get<std::string>();
    if (kind == "mzi") {
      spec.add(lo, MziSetting{je.at("t").get<double>(),
                              je.value("phi", 0.0)});
    } else if (kind == "swap") {
      spec.add(lo, SwapSetting{});
    } else if (kind == "hardware_mzi") {
      spec.add(lo, HardwareMziSetting{
                       je.at("theta1").get<double>(),
                       je.at("theta2").get<double>(),
                       je.at("phi1").get<double>(),
                       je.at("phi2").get<double>()});
    } else if (kind == "beamsplitter") {
      spec.add(lo, BeamSplitterSetting{je.at("t").get<double>(),
                                       je.at("r").get<double>()});
    } else {
      throw std::invalid_argument("network_from_json: unknown kind " + kind);
    }
  }
  return spec;
}

}  // namespace lopsim
