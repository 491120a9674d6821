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

#include "vqabias/adversarial.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "vqabias/common.hpp"
#include "vqabias/rng.hpp"

namespace vqabias {

SwapMode swap_mode_from_string(const std::string &s) {
    if (s == "random" || s == "random_swap") return SwapMode::random_swap;
    if (s == "white" || s == "white_out") return SwapMode::white_out;
    if (s == "black" || s == "black_out") return SwapMode::black_out;
    throw ValidationError("unknown swap mode '" + s + "' (expected random|white|black)");
}

std::string to_string(SwapMode m) {
    switch (m) {
        case SwapMode::random_swap: return "random_swap";
        case SwapMode::white_out: return "white_out";
        case SwapMode::black_out: return "black_out";
    }
    return "random_swap";
}

SwapManifest generate_swap_manifest(const SampleSet &set, SwapMode mode, std::uint64_t seed,
                                    SwapPool pool) {
    if (set.empty()) throw ValidationError("generate_swap_manifest: empty dataset");
    SwapManifest manifest;
    manifest.mode = mode;
    manifest.seed = seed;
    manifest.entries.reserve(set.size());

    if (mode != SwapMode::random_swap) {
        const char *sentinel = mode == SwapMode::white_out ? "WHITE" : "BLACK";
        for (const Sample &s : set.samples)
            manifest.entries.push_back({s.sample_id, s.image_id, sentinel});
        return manifest;
    }

    // Sorted unique image ids per pool; sorting makes the pool independent of
    // dataset file order.
    std::map<Split, std::vector<std::string>> pools;
    if (pool == SwapPool::all) {
        std::set<std::string> ids;
        for (const Sample &s : set.samples) ids.insert(s.image_id);
        pools[Split::unsplit].assign(ids.begin(), ids.end());
    } else {
        std::map<Split, std::set<std::string>> by_split;
        for (const Sample &s : set.samples) by_split[s.split].insert(s.image_id);
        for (auto &[split, ids] : by_split) pools[split].assign(ids.begin(), ids.end());
    }
    for (const auto &[split, ids] : pools) {
        if (ids.size() < 2)
            throw ValidationError("generate_swap_manifest: random_swap needs >=2 distinct images"
                                  " in pool '" + to_string(split) + "'");
    }

    for (const Sample &s : set.samples) {
        const auto &ids = pool == SwapPool::all ? pools[Split::unsplit] : pools[s.split];
        Rng rng = derive_stream(seed, s.sample_id);
        // Rejection against the sample's own image keeps the draw uniform
        // over the remaining ids.
        std::string substitute;
        for (;;) {
            const std::string &candidate = ids[rng.below(ids.size())];
            if (candidate != s.image_id) {
                substitute = candidate;
                break;
            }
        }
        manifest.entries.push_back({s.sample_id, s.image_id, std::move(substitute)});
    }
    return manifest;
}

std::string manifest_to_jsonl(const SwapManifest &manifest) {
    std::string out;
    for (const SwapEntry &entry : manifest.entries) {
        nlohmann::ordered_json obj;
        obj["sample_id"] = entry.sample_id;
        obj["original_image_id"] = entry.original_image_id;
        obj["substitute_image_id"] = entry.substitute_image_id;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

AdversarialEvaluation evaluate_adversarial(const std::vector<PredictionSet> &reference_runs,
                                           const std::vector<PredictionSet> &adversarial_runs,
                                           const SampleSet &truth, const Partition &partition,
                                           const Lexicon *lexicon) {
    if (reference_runs.empty() || adversarial_runs.empty())
        throw ValidationError("evaluate_adversarial: need at least one run per condition");
    auto eval_all = [&](const std::vector<PredictionSet> &runs) {
        std::vector<EvalResult> results;
        results.reserve(runs.size());
        for (const PredictionSet &preds : runs)
            results.push_back(accuracy_eval(preds, truth, partition, lexicon));
        return results;
    };
    AdversarialEvaluation out;
    out.reference = aggregate_runs(eval_all(reference_runs));
    out.adversarial = aggregate_runs(eval_all(adversarial_runs));
    out.deltas = delta_table(out.reference, out.adversarial);
    out.io_adtest = io_adtest_from_means(out.reference, out.adversarial);
    return out;
}

}  // namespace vqabias
