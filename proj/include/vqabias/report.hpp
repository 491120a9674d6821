/*
 * Copyright 2026 the vqabias authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "vqabias/adversarial.hpp"
#include "vqabias/bias.hpp"
#include "vqabias/metrics.hpp"

namespace vqabias {

inline constexpr const char *kToolName = "vqabias";
inline constexpr const char *kToolVersion = "0.1.0";

// The bundle is the contract: a JSON document holding every number the tool
// produced (with exact integer counts next to the rendered percentages).
// Markdown is a pure projection of the bundle, so identical bundles render
// to identical bytes.

nlohmann::ordered_json ratio_json(const Ratio &r);
nlohmann::ordered_json bias_report_json(const BiasReport &report);
nlohmann::ordered_json run_aggregate_json(const RunAggregate &agg,
                                          const std::vector<std::string> &warnings = {});
nlohmann::ordered_json io_table_json(const IoTable &table);
nlohmann::ordered_json delta_table_json(const DeltaTable &delta);

/// Envelope: {"tool", "version", "kind"}. Sections are attached by callers.
nlohmann::ordered_json make_bundle(const std::string &kind);

/// Provenance block: input paths, seed, creation timestamp. Attached only
/// when provenance is enabled; it is the sole impure part of a bundle.
nlohmann::ordered_json provenance_json(const std::map<std::string, std::string> &inputs,
                                       std::optional<std::uint64_t> seed);

/// Parses and checks a bundle document (tool marker present).
nlohmann::ordered_json load_bundle(const std::filesystem::path &path);

/// Renders the bundle's sections as Markdown tables. Bias tables follow the
/// column order: Question Type | N_s | |A_q| | Most common answer |
/// Prior_Acc | Uni_Acc | RSVQA_Acc | IO_Prior | IO_AdTest (the last three
/// appear when an eval section at the same granularity is present).
std::string render_markdown(const nlohmann::ordered_json &bundle);

}  // namespace vqabias
