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

#include "vqabias/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "vqabias/common.hpp"
#include "vqabias/jsonl.hpp"
#include "vqabias/rng.hpp"

namespace vqabias {

const std::vector<std::string> &count_bucket_labels() {
    static const std::vector<std::string> labels = {
        "0", "between 1 and 10", "between 11 and 100", "between 101 and 1000", "more than 1000",
    };
    return labels;
}

std::string quantize_count(std::int64_t n) {
    if (n < 0) throw ValidationError("quantize_count: negative count " + std::to_string(n));
    if (n == 0) return count_bucket_labels()[0];
    if (n <= 10) return count_bucket_labels()[1];
    if (n <= 100) return count_bucket_labels()[2];
    if (n <= 1000) return count_bucket_labels()[3];
    return count_bucket_labels()[4];
}

namespace {

std::vector<GeneratorObject> default_pool(int which) {
    switch (which) {
        case 0:
            return {{"river", "rivers"},         {"bridge", "bridges"}, {"harbor", "harbors"},
                    {"lighthouse", "lighthouses"}, {"windmill", "windmills"}, {"castle", "castles"},
                    {"marsh", "marshes"},         {"quarry", "quarries"}};
        case 1:
            return {{"house", "houses"}, {"tree", "trees"}, {"car", "cars"}, {"boat", "boats"},
                    {"tower", "towers"}, {"tent", "tents"}, {"silo", "silos"}, {"barn", "barns"}};
        default:
            return {{"road", "roads"}, {"field", "fields"}, {"lake", "lakes"}, {"hill", "hills"},
                    {"dune", "dunes"}, {"canal", "canals"}, {"vineyard", "vineyards"},
                    {"orchard", "orchards"}};
    }
}

std::vector<GeneratorObject> pool_from_json(const nlohmann::json &arr, const std::string &origin) {
    std::vector<GeneratorObject> pool;
    for (const auto &entry : arr) {
        GeneratorObject obj;
        if (entry.is_string()) {
            obj.singular = entry.get<std::string>();
            obj.plural = obj.singular + "s";
        } else if (entry.is_object()) {
            obj.singular = entry.value("singular", "");
            obj.plural = entry.value("plural", "");
        }
        if (obj.singular.empty() || obj.plural.empty())
            throw ValidationError(origin + ": generator objects need singular and plural forms");
        pool.push_back(std::move(obj));
    }
    return pool;
}

nlohmann::ordered_json pool_to_json(const std::vector<GeneratorObject> &pool) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const GeneratorObject &obj : pool)
        arr.push_back({{"singular", obj.singular}, {"plural", obj.plural}});
    return arr;
}

BiasKnob knob_from_json(const nlohmann::json &doc, const char *type, const BiasKnob &fallback,
                        const std::string &origin) {
    if (!doc.contains(type)) return fallback;
    const auto &entry = doc.at(type);
    if (!entry.is_object())
        throw ValidationError(origin + ": bias." + type + " must be an object");
    BiasKnob knob = fallback;
    knob.modal_answer = entry.value("modal_answer", fallback.modal_answer);
    knob.proportion = entry.value("proportion", fallback.proportion);
    return knob;
}

GeneratorTemplate template_from_json(const nlohmann::json &doc, const char *type,
                                     const GeneratorTemplate &fallback) {
    if (!doc.contains(type)) return fallback;
    GeneratorTemplate tpl = fallback;
    tpl.id = doc.at(type).value("id", fallback.id);
    tpl.pattern = doc.at(type).value("pattern", fallback.pattern);
    return tpl;
}

void check_knob(const BiasKnob &knob, double uniform, const char *type) {
    if (knob.proportion < uniform - 1e-12 || knob.proportion > 1.0)
        throw ValidationError(std::string("bias knob for ") + type + " targets " +
                              std::to_string(knob.proportion) + ", outside [" +
                              std::to_string(uniform) + ", 1] (below uniform is unsatisfiable)");
}

}  // namespace

GeneratorConfig default_generator_config() {
    GeneratorConfig config;
    config.presence_objects = default_pool(0);
    config.counting_objects = default_pool(1);
    config.comparison_objects = default_pool(2);
    return config;
}

void validate_config(const GeneratorConfig &config) {
    if (config.n_scenes < 1) throw ValidationError("generator config: n_scenes must be >= 1");
    double total = config.split_fractions.train + config.split_fractions.val +
                   config.split_fractions.test;
    if (config.split_fractions.train < 0 || config.split_fractions.val < 0 ||
        config.split_fractions.test < 0 || std::abs(total - 1.0) > 1e-9)
        throw ValidationError("generator config: split fractions must be non-negative and sum to 1");
    const auto &qps = config.questions_per_scene;
    if (qps.presence < 0 || qps.counting < 0 || qps.comparison < 0 || qps.rural_urban < 0 ||
        qps.total() < 1)
        throw ValidationError("generator config: questions_per_scene must be non-negative with a positive total");
    if (qps.presence > 0 && config.presence_objects.empty())
        throw ValidationError("generator config: presence questions need a non-empty object pool");
    if (qps.counting > 0 && config.counting_objects.empty())
        throw ValidationError("generator config: counting questions need a non-empty object pool");
    if (qps.comparison > 0 && config.comparison_objects.size() < 2)
        throw ValidationError("generator config: comparison questions need at least 2 objects");

    if (config.presence_bias.modal_answer != "yes" && config.presence_bias.modal_answer != "no")
        throw ValidationError("generator config: presence modal answer must be yes or no");
    check_knob(config.presence_bias, 0.5, "presence");
    const auto &labels = count_bucket_labels();
    if (std::find(labels.begin(), labels.end(), config.counting_bias.modal_answer) == labels.end())
        throw ValidationError("generator config: counting modal answer '" +
                              config.counting_bias.modal_answer + "' is not a count range label");
    check_knob(config.counting_bias, 1.0 / static_cast<double>(labels.size()), "counting");
    if (config.comparison_bias.modal_answer != "no")
        throw ValidationError("generator config: comparison modal answer must be 'no' "
                              "(strictly-more questions cannot be majority-yes under iid counts)");
    check_knob(config.comparison_bias, 0.5, "comparison");
    if (config.rural_urban_bias.modal_answer != "rural" &&
        config.rural_urban_bias.modal_answer != "urban")
        throw ValidationError("generator config: rural_urban modal answer must be rural or urban");
    check_knob(config.rural_urban_bias, 0.5, "rural_urban");
}

GeneratorConfig config_from_json(const nlohmann::json &doc, const std::string &origin) {
    if (!doc.is_object()) throw ValidationError(origin + ": generator config must be a JSON object");
    GeneratorConfig config = default_generator_config();
    config.seed = doc.value("seed", config.seed);
    config.n_scenes = doc.value("n_scenes", config.n_scenes);
    if (doc.contains("split_fractions")) {
        const auto &sf = doc.at("split_fractions");
        config.split_fractions.train = sf.value("train", config.split_fractions.train);
        config.split_fractions.val = sf.value("val", config.split_fractions.val);
        config.split_fractions.test = sf.value("test", config.split_fractions.test);
    }
    if (doc.contains("questions_per_scene")) {
        const auto &qps = doc.at("questions_per_scene");
        config.questions_per_scene.presence = qps.value("presence", config.questions_per_scene.presence);
        config.questions_per_scene.counting = qps.value("counting", config.questions_per_scene.counting);
        config.questions_per_scene.comparison = qps.value("comparison", config.questions_per_scene.comparison);
        config.questions_per_scene.rural_urban = qps.value("rural_urban", config.questions_per_scene.rural_urban);
    }
    if (doc.contains("objects")) {
        const auto &objects = doc.at("objects");
        if (objects.contains("presence"))
            config.presence_objects = pool_from_json(objects.at("presence"), origin);
        if (objects.contains("counting"))
            config.counting_objects = pool_from_json(objects.at("counting"), origin);
        if (objects.contains("comparison"))
            config.comparison_objects = pool_from_json(objects.at("comparison"), origin);
    }
    if (doc.contains("templates")) {
        const auto &templates = doc.at("templates");
        config.presence_template = template_from_json(templates, "presence", config.presence_template);
        config.counting_template = template_from_json(templates, "counting", config.counting_template);
        config.comparison_template = template_from_json(templates, "comparison", config.comparison_template);
        config.rural_urban_template =
            template_from_json(templates, "rural_urban", config.rural_urban_template);
    }
    if (doc.contains("bias")) {
        const auto &bias = doc.at("bias");
        if (!bias.is_object()) throw ValidationError(origin + ": bias must be an object");
        for (const auto &[key, value] : bias.items()) {
            (void)value;
            if (key != "presence" && key != "counting" && key != "comparison" &&
                key != "rural_urban")
                throw ValidationError(origin + ": unknown bias knob '" + key + "'");
        }
        config.presence_bias = knob_from_json(bias, "presence", config.presence_bias, origin);
        config.counting_bias = knob_from_json(bias, "counting", config.counting_bias, origin);
        config.comparison_bias = knob_from_json(bias, "comparison", config.comparison_bias, origin);
        config.rural_urban_bias = knob_from_json(bias, "rural_urban", config.rural_urban_bias, origin);
    }
    validate_config(config);
    return config;
}

nlohmann::ordered_json config_to_json(const GeneratorConfig &config) {
    nlohmann::ordered_json doc;
    doc["seed"] = config.seed;
    doc["n_scenes"] = config.n_scenes;
    doc["split_fractions"] = {{"train", config.split_fractions.train},
                              {"val", config.split_fractions.val},
                              {"test", config.split_fractions.test}};
    doc["questions_per_scene"] = {{"presence", config.questions_per_scene.presence},
                                  {"counting", config.questions_per_scene.counting},
                                  {"comparison", config.questions_per_scene.comparison},
                                  {"rural_urban", config.questions_per_scene.rural_urban}};
    doc["objects"] = {{"presence", pool_to_json(config.presence_objects)},
                      {"counting", pool_to_json(config.counting_objects)},
                      {"comparison", pool_to_json(config.comparison_objects)}};
    auto tpl = [](const GeneratorTemplate &t) {
        return nlohmann::ordered_json{{"id", t.id}, {"pattern", t.pattern}};
    };
    doc["templates"] = {{"presence", tpl(config.presence_template)},
                        {"counting", tpl(config.counting_template)},
                        {"comparison", tpl(config.comparison_template)},
                        {"rural_urban", tpl(config.rural_urban_template)}};
    auto knob = [](const BiasKnob &k) {
        return nlohmann::ordered_json{{"modal_answer", k.modal_answer}, {"proportion", k.proportion}};
    };
    doc["bias"] = {{"presence", knob(config.presence_bias)},
                   {"counting", knob(config.counting_bias)},
                   {"comparison", knob(config.comparison_bias)},
                   {"rural_urban", knob(config.rural_urban_bias)}};
    return doc;
}

const SampleSet &GeneratedDataset::split(Split s) const {
    switch (s) {
        case Split::train: return train;
        case Split::val: return val;
        case Split::test: return test;
        default: throw ValidationError("generated datasets only carry train/val/test splits");
    }
}

namespace {

// ---- distributions solved from the bias knobs ------------------------------

// Counting: the modal range gets probability c, the other four share 1 - c.
struct CountingDist {
    double modal = 0.2;
    std::size_t modal_index = 1;
};

// Comparison: counts take one of k values; value 0 has probability q, the
// remaining k-1 values share 1 - q. Two iid draws collide with probability
// S = q^2 + (1-q)^2/(k-1), and "no" (X <= Y) has probability (1 + S)/2, so a
// target modal share p fixes S = 2p - 1, then k and q:
//     k q^2 - 2q + 1 - S(k-1) = 0  =>  q = (1 + sqrt(1 - k + k(k-1)S)) / k.
struct ComparisonDist {
    int k = 5;
    double q = 0.5;
};

ComparisonDist solve_comparison(double modal_share) {
    double s = 2.0 * modal_share - 1.0;
    // A tie probability this small realizes "uniform within noise"; it keeps
    // k (the count alphabet) bounded.
    const double kMinS = 1.0 / 64.0;
    if (s < kMinS) s = kMinS;
    if (s > 1.0) s = 1.0;
    ComparisonDist dist;
    dist.k = std::max(2, static_cast<int>(std::ceil(1.0 / s)) + 1);
    double discriminant = 1.0 - dist.k + dist.k * (dist.k - 1.0) * s;
    dist.q = (1.0 + std::sqrt(std::max(0.0, discriminant))) / dist.k;
    return dist;
}

std::int64_t draw_bucket_value(std::size_t bucket, Rng &rng) {
    switch (bucket) {
        case 0: return 0;
        case 1: return 1 + static_cast<std::int64_t>(rng.below(10));
        case 2: return 11 + static_cast<std::int64_t>(rng.below(90));
        case 3: return 101 + static_cast<std::int64_t>(rng.below(900));
        default: return 1001 + static_cast<std::int64_t>(rng.below(1000));
    }
}

std::string instantiate(const std::string &pattern, const std::string &obj_plural,
                        const std::string &obj2_plural) {
    std::string out;
    out.reserve(pattern.size() + obj_plural.size() + obj2_plural.size());
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        std::size_t open = pattern.find('{', pos);
        if (open == std::string::npos) {
            out += pattern.substr(pos);
            break;
        }
        out += pattern.substr(pos, open - pos);
        std::size_t close = pattern.find('}', open);
        std::string slot = pattern.substr(open + 1, close - open - 1);
        if (slot == "obj") {
            out += obj_plural;
        } else if (slot == "obj2") {
            out += obj2_plural;
        } else {
            throw ValidationError("generator template slot '{" + slot + "}' is not supported");
        }
        pos = close + 1;
    }
    return out;
}

}  // namespace

GeneratedDataset generate_dataset(const GeneratorConfig &config) {
    validate_config(config);
    GeneratedDataset data;
    data.config = config;
    data.train.source_split = Split::train;
    data.val.source_split = Split::val;
    data.test.source_split = Split::test;

    auto n_train = static_cast<std::int64_t>(
        std::llround(config.split_fractions.train * static_cast<double>(config.n_scenes)));
    auto n_val = static_cast<std::int64_t>(
        std::llround(config.split_fractions.val * static_cast<double>(config.n_scenes)));
    if (n_train + n_val > config.n_scenes) n_val = config.n_scenes - n_train;

    const double p_zero = config.presence_bias.modal_answer == "yes"
                              ? 1.0 - config.presence_bias.proportion
                              : config.presence_bias.proportion;
    CountingDist counting;
    counting.modal = config.counting_bias.proportion;
    const auto &labels = count_bucket_labels();
    counting.modal_index = static_cast<std::size_t>(
        std::find(labels.begin(), labels.end(), config.counting_bias.modal_answer) -
        labels.begin());
    const ComparisonDist comparison = solve_comparison(config.comparison_bias.proportion);
    const double p_rural = config.rural_urban_bias.modal_answer == "rural"
                               ? config.rural_urban_bias.proportion
                               : 1.0 - config.rural_urban_bias.proportion;

    data.scenes.reserve(static_cast<std::size_t>(config.n_scenes));
    for (std::int64_t scene_idx = 0; scene_idx < config.n_scenes; ++scene_idx) {
        char id_buf[32];
        std::snprintf(id_buf, sizeof(id_buf), "scene_%06lld", static_cast<long long>(scene_idx));
        SceneSpec scene;
        scene.scene_id = id_buf;
        Rng rng = derive_stream(config.seed, scene.scene_id);

        // Draw order is part of the byte-stability contract; do not reorder.
        scene.area_class = rng.unit() < p_rural ? "rural" : "urban";
        for (const GeneratorObject &obj : config.presence_objects) {
            std::int64_t count = 0;
            if (rng.unit() >= p_zero) count = 1 + static_cast<std::int64_t>(rng.below(200));
            scene.object_counts[obj.singular] = count;
        }
        for (const GeneratorObject &obj : config.counting_objects) {
            double r = rng.unit();
            std::size_t bucket = counting.modal_index;
            double cumulative = 0;
            double rest = (1.0 - counting.modal) / static_cast<double>(labels.size() - 1);
            for (std::size_t b = 0; b < labels.size(); ++b) {
                cumulative += b == counting.modal_index ? counting.modal : rest;
                if (r < cumulative) {
                    bucket = b;
                    break;
                }
            }
            scene.object_counts[obj.singular] = draw_bucket_value(bucket, rng);
        }
        for (const GeneratorObject &obj : config.comparison_objects) {
            std::int64_t value = 0;
            if (rng.unit() >= comparison.q)
                value = 1 + static_cast<std::int64_t>(rng.below(
                            static_cast<std::uint64_t>(comparison.k - 1)));
            scene.object_counts[obj.singular] = value;
        }

        Split split = scene_idx < n_train          ? Split::train
                      : scene_idx < n_train + n_val ? Split::val
                                                    : Split::test;
        SampleSet &target = split == Split::train ? data.train
                            : split == Split::val ? data.val
                                                  : data.test;

        std::int64_t q_idx = 0;
        auto emit = [&](const std::string &question, const std::string &answer,
                        const std::string &type, QuestionProvenance prov) {
            char q_buf[16];
            std::snprintf(q_buf, sizeof(q_buf), "_q%03lld", static_cast<long long>(q_idx++));
            Sample s;
            s.sample_id = scene.scene_id + q_buf;
            s.image_id = scene.scene_id;
            s.question = question;
            s.answer = answer;
            s.question_type = type;
            s.split = split;
            data.provenance.emplace(s.sample_id, std::move(prov));
            target.samples.push_back(std::move(s));
        };

        for (std::int64_t j = 0; j < config.questions_per_scene.presence; ++j) {
            const GeneratorObject &obj =
                config.presence_objects[rng.below(config.presence_objects.size())];
            std::string question = instantiate(config.presence_template.pattern, obj.plural, "");
            std::string answer = scene.object_counts.at(obj.singular) > 0 ? "yes" : "no";
            emit(question, answer, "Presence",
                 {QuestionKind::presence, config.presence_template.id, obj.singular, ""});
        }
        for (std::int64_t j = 0; j < config.questions_per_scene.counting; ++j) {
            const GeneratorObject &obj =
                config.counting_objects[rng.below(config.counting_objects.size())];
            std::string question = instantiate(config.counting_template.pattern, obj.plural, "");
            std::string answer = quantize_count(scene.object_counts.at(obj.singular));
            emit(question, answer, "Counting",
                 {QuestionKind::counting, config.counting_template.id, obj.singular, ""});
        }
        for (std::int64_t j = 0; j < config.questions_per_scene.comparison; ++j) {
            std::size_t first = rng.below(config.comparison_objects.size());
            std::size_t second = rng.below(config.comparison_objects.size() - 1);
            if (second >= first) ++second;  // uniform over ordered pairs, no self-pairs
            const GeneratorObject &a = config.comparison_objects[first];
            const GeneratorObject &b = config.comparison_objects[second];
            std::string question = instantiate(config.comparison_template.pattern, a.plural, b.plural);
            bool more = scene.object_counts.at(a.singular) > scene.object_counts.at(b.singular);
            emit(question, more ? "yes" : "no", "Comparison",
                 {QuestionKind::comparison, config.comparison_template.id, a.singular, b.singular});
        }
        for (std::int64_t j = 0; j < config.questions_per_scene.rural_urban; ++j) {
            emit(config.rural_urban_template.pattern, scene.area_class, "Rural/urban",
                 {QuestionKind::rural_urban, config.rural_urban_template.id, "", ""});
        }
        data.scenes.push_back(std::move(scene));
    }
    return data;
}

nlohmann::ordered_json lexicon_json_for(const GeneratorConfig &config) {
    nlohmann::ordered_json doc;
    doc["name"] = "synthetic";
    nlohmann::ordered_json objects = nlohmann::ordered_json::array();
    for (const auto *pool :
         {&config.presence_objects, &config.counting_objects, &config.comparison_objects})
        for (const GeneratorObject &obj : *pool)
            objects.push_back({{"singular", obj.singular}, {"plural", obj.plural}});
    doc["objects"] = std::move(objects);
    doc["attributes"] = nlohmann::ordered_json::array();
    nlohmann::ordered_json templates = nlohmann::ordered_json::array();
    auto add = [&](const GeneratorTemplate &tpl, const char *type, const char *relation) {
        nlohmann::ordered_json t;
        t["id"] = tpl.id;
        t["pattern"] = tpl.pattern;
        t["question_type"] = type;
        if (relation[0] != '\0') t["relation"] = relation;
        templates.push_back(std::move(t));
    };
    add(config.presence_template, "Presence", "");
    add(config.counting_template, "Counting", "");
    add(config.comparison_template, "Comparison", "more");
    add(config.rural_urban_template, "Rural/urban", "");
    doc["templates"] = std::move(templates);
    doc["answer_aliases"] = {{"between 0 and 10", "between 1 and 10"}};
    return doc;
}

Lexicon lexicon_for(const GeneratorConfig &config) {
    return lexicon_from_json(lexicon_json_for(config), "generator lexicon");
}

void write_generated(const GeneratedDataset &data, const std::filesystem::path &out_dir) {
    write_dataset(data.train, out_dir / "train.jsonl");
    write_dataset(data.val, out_dir / "val.jsonl");
    write_dataset(data.test, out_dir / "test.jsonl");

    std::string scenes;
    for (const SceneSpec &scene : data.scenes) {
        nlohmann::ordered_json obj;
        obj["scene_id"] = scene.scene_id;
        obj["area_class"] = scene.area_class;
        obj["object_counts"] = scene.object_counts;
        scenes += obj.dump();
        scenes += '\n';
    }
    write_text_file(out_dir / "scenes.jsonl", scenes);
    write_text_file(out_dir / "lexicon.json", lexicon_json_for(data.config).dump(2) + "\n");
    write_text_file(out_dir / "config.json", config_to_json(data.config).dump(2) + "\n");
}

std::string answer_from_scene(const SceneSpec &scene, const QuestionProvenance &prov) {
    switch (prov.kind) {
        case QuestionKind::rural_urban:
            return scene.area_class;
        case QuestionKind::presence:
            return scene.object_counts.at(prov.object) > 0 ? "yes" : "no";
        case QuestionKind::counting:
            return quantize_count(scene.object_counts.at(prov.object));
        case QuestionKind::comparison:
            return scene.object_counts.at(prov.object) > scene.object_counts.at(prov.object2)
                       ? "yes"
                       : "no";
    }
    throw ValidationError("answer_from_scene: unknown question kind");
}

}  // namespace vqabias
