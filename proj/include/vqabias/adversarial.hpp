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

#include <cstdint>
#include <string>
#include <vector>

#include "vqabias/metrics.hpp"
#include "vqabias/sample.hpp"

namespace vqabias {

enum class SwapMode { random_swap, white_out, black_out };

SwapMode swap_mode_from_string(const std::string &s);
std::string to_string(SwapMode m);

/// Where random substitutes come from: images of the sample's own split, or
/// of the whole dataset.
enum class SwapPool { split, all };

struct SwapEntry {
    std::string sample_id;
    std::string original_image_id;
    std::string substitute_image_id;  // image id, or "WHITE"/"BLACK" sentinel
};

struct SwapManifest {
    SwapMode mode = SwapMode::random_swap;
    std::uint64_t seed = 0;
    std::vector<SwapEntry> entries;  // dataset order
};

/// Deterministic manifest generation. random_swap draws each substitute
/// uniformly from the pool's image ids excluding the sample's own image
/// (per-sample stream derived from seed + sample_id, so order and thread
/// count cannot change the result).
SwapManifest generate_swap_manifest(const SampleSet &set, SwapMode mode, std::uint64_t seed,
                                    SwapPool pool = SwapPool::split);

std::string manifest_to_jsonl(const SwapManifest &manifest);

struct AdversarialEvaluation {
    RunAggregate reference;
    RunAggregate adversarial;
    DeltaTable deltas;
    IoTable io_adtest;  // from run means
};

/// Aggregates reference and adversarial prediction runs over one partition
/// and derives the delta table and relative metric.
AdversarialEvaluation evaluate_adversarial(const std::vector<PredictionSet> &reference_runs,
                                           const std::vector<PredictionSet> &adversarial_runs,
                                           const SampleSet &truth, const Partition &partition,
                                           const Lexicon *lexicon = nullptr);

}  // namespace vqabias
