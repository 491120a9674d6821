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
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vqabias/lexicon.hpp"
#include "vqabias/sample.hpp"

namespace vqabias {

/// Abstract scene: object counts plus an area class. No pixels — every
/// statistic downstream depends only on question/answer distributions.
struct SceneSpec {
    std::string scene_id;
    std::map<std::string, std::int64_t> object_counts;
    std::string area_class;  // "rural" or "urban"
};

/// The five categorical count ranges, coarsest data type in the toolkit.
const std::vector<std::string> &count_bucket_labels();

/// Maps a count to its range label. Boundaries are inclusive as named:
/// 10 -> "between 1 and 10", 11 -> "between 11 and 100".
std::string quantize_count(std::int64_t n);

struct GeneratorObject {
    std::string singular;
    std::string plural;
};

struct GeneratorTemplate {
    std::string id;
    std::string pattern;  // {obj}/{obj2} slots, filled with plural surface forms
};

/// Target modal share for one question type.
struct BiasKnob {
    std::string modal_answer;
    double proportion = 0.5;
};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::int64_t n_scenes = 1000;

    struct SplitFractions {
        double train = 0.6, val = 0.2, test = 0.2;
    } split_fractions;

    // 33+33+33+1 = 100 questions per scene by default, roughly the density
    // of the real corpora this mimics (~100 questions per image).
    struct QuestionsPerScene {
        std::int64_t presence = 33, counting = 33, comparison = 33, rural_urban = 1;
        std::int64_t total() const { return presence + counting + comparison + rural_urban; }
    } questions_per_scene;

    // Disjoint pools: each question type owns its objects, so the per-type
    // count distributions that realize the bias knobs cannot conflict.
    std::vector<GeneratorObject> presence_objects;
    std::vector<GeneratorObject> counting_objects;
    std::vector<GeneratorObject> comparison_objects;

    GeneratorTemplate presence_template{"presence", "are there any {obj} in the image?"};
    GeneratorTemplate counting_template{"counting", "how many {obj} are there in the image?"};
    GeneratorTemplate comparison_template{"comparison",
                                          "are there more {obj} than {obj2} in the image?"};
    GeneratorTemplate rural_urban_template{"rural_urban", "is it a rural or an urban area?"};

    BiasKnob presence_bias{"yes", 0.7503};
    BiasKnob counting_bias{"between 1 and 10", 0.2738};
    BiasKnob comparison_bias{"no", 0.6674};  // modal answer must be "no"
    BiasKnob rural_urban_bias{"rural", 0.56};
};

/// Fills defaults, validates ranges (split fractions sum to 1, each knob at
/// or above its uniform floor, pools non-empty) and rejects unknown knobs.
GeneratorConfig config_from_json(const nlohmann::json &doc, const std::string &origin);
GeneratorConfig default_generator_config();
nlohmann::ordered_json config_to_json(const GeneratorConfig &config);
void validate_config(const GeneratorConfig &config);

enum class QuestionKind { presence, counting, comparison, rural_urban };

/// Where each emitted question came from: enough to check that parsing the
/// question recovers exactly this template and these slots.
struct QuestionProvenance {
    QuestionKind kind = QuestionKind::presence;
    std::string template_id;
    std::string object;   // canonical singular, empty when the template has no slot
    std::string object2;  // second slot (comparison), else empty
};

struct GeneratedDataset {
    SampleSet train, val, test;
    std::vector<SceneSpec> scenes;
    std::unordered_map<std::string, QuestionProvenance> provenance;  // by sample_id
    GeneratorConfig config;  // resolved

    const SampleSet &split(Split s) const;
};

/// Deterministic generation: per-scene streams derived from (seed, scene_id),
/// counts drawn from per-type distributions solved analytically from the
/// bias knobs, answers derived from the counts (never the other way around).
GeneratedDataset generate_dataset(const GeneratorConfig &config);

/// The lexicon matching a config's templates and object pools; generated
/// corpora parse 100% under it.
nlohmann::ordered_json lexicon_json_for(const GeneratorConfig &config);
Lexicon lexicon_for(const GeneratorConfig &config);

/// Emits train/val/test JSONL, scenes.jsonl, lexicon.json and the resolved
/// config.json into a directory.
void write_generated(const GeneratedDataset &data, const std::filesystem::path &out_dir);

/// Recomputes a sample's answer from its scene by the generation rules
/// (presence: any count > 0; counting: quantized count; comparison: strictly
/// more; rural/urban: the area class).
std::string answer_from_scene(const SceneSpec &scene, const QuestionProvenance &prov);

}  // namespace vqabias
