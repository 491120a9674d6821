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

// Shared test data. The two large fixtures are built in code so every count
// is visible where the expectations live:
//  - lr_table_fixture(): 10004 samples over four question types whose modal
//    answer shares match the reference remote-sensing statistics
//    (Comparison 66.74, Counting 27.38, Presence 75.03, Rural/urban 56.00).
//  - floodnet_fixture(): 4511 samples over fifteen distinct questions with
//    per-question modal counts summing to 2931 (overall 64.97).

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqabias/bias.hpp"
#include "vqabias/lexicon.hpp"
#include "vqabias/partition.hpp"
#include "vqabias/rng.hpp"
#include "vqabias/sample.hpp"

namespace vqabias::testsupport {

/// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<std::uint64_t> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("vqabias-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
};

inline Lexicon lr_lexicon() { return load_lexicon(resolve_lexicon_path("rsvqa-lr")); }
inline Lexicon floodnet_lexicon() { return load_lexicon(resolve_lexicon_path("floodnet")); }

inline Sample make_sample(std::string id, std::string image, std::string question,
                          std::string answer, std::string type = "", Split split = Split::test) {
    Sample s;
    s.sample_id = std::move(id);
    s.image_id = std::move(image);
    s.question = std::move(question);
    s.answer = std::move(answer);
    s.question_type = std::move(type);
    s.split = split;
    return s;
}

/// 10004-sample set reproducing the low-resolution benchmark's modal shares:
///   Comparison 4002 ("no" 2671), Counting 2947 ("between 0 and 10" 807,
///   remainder split evenly over the other four ranges), Presence 2955
///   ("yes" 2217), Rural/urban 100 ("rural" 56).
inline SampleSet lr_table_fixture() {
    SampleSet set;
    set.source_split = Split::test;
    set.samples.reserve(10004);
    std::int64_t next_id = 0;
    auto add = [&](const std::string &question, const std::string &answer, const std::string &type) {
        char id[32];
        std::snprintf(id, sizeof(id), "lr_%05lld", static_cast<long long>(next_id));
        char img[32];
        std::snprintf(img, sizeof(img), "img_%03lld", static_cast<long long>(next_id % 32));
        ++next_id;
        set.samples.push_back(make_sample(id, img, question, answer, type));
    };

    static const char *pairs[4][2] = {{"roads", "water areas"},
                                      {"buildings", "forests"},
                                      {"roads", "buildings"},
                                      {"water areas", "forests"}};
    for (std::int64_t i = 0; i < 4002; ++i) {
        const auto &p = pairs[i % 4];
        add("Are there more " + std::string(p[0]) + " than " + p[1] + "?",
            i < 2671 ? "no" : "yes", "Comparison");
    }

    static const char *count_objects[3] = {"roads", "buildings", "forests"};
    static const char *count_rest[4] = {"0", "between 10 and 100", "between 100 and 1000",
                                        "more than 1000"};
    for (std::int64_t i = 0; i < 2947; ++i) {
        std::string answer =
            i < 807 ? "between 0 and 10" : count_rest[(i - 807) / 535];
        add("How many " + std::string(count_objects[i % 3]) + " are there?", answer, "Counting");
    }

    static const char *presence_objects[3] = {"water area", "road", "forest"};
    for (std::int64_t i = 0; i < 2955; ++i)
        add("Is there a " + std::string(presence_objects[i % 3]) + "?",
            i < 2217 ? "yes" : "no", "Presence");

    for (std::int64_t i = 0; i < 100; ++i)
        add("Is it a rural or an urban area?", i < 56 ? "rural" : "urban", "Rural/urban");

    return set;
}

/// 4511-sample set over fifteen distinct questions. Per-question sizes and
/// modal counts sum to 4511 and 2931 (overall modal-prior accuracy 64.97).
/// Counting questions use "1" as the modal answer with losing answers spread
/// round-robin over "21".."32" so no filler ever rivals the modal count.
inline SampleSet floodnet_fixture() {
    struct Row {
        const char *question;
        const char *type;
        std::int64_t n;
        const char *modal;
        std::int64_t modal_count;
        const char *filler;  // null -> numeric round-robin fillers
    };
    static const Row rows[] = {
        {"How many flooded buildings can be seen in this image?", "Complex Counting", 179, "1", 44, nullptr},
        {"How many buildings are in this image?", "Simple Counting", 151, "1", 31, nullptr},
        {"How many roads can be seen in this image?", "Simple Counting", 173, "1", 32, nullptr},
        {"How many non flooded buildings can be seen in this image?", "Complex Counting", 183, "1", 43, nullptr},
        {"How many buildings can be seen in this image?", "Simple Counting", 169, "1", 30, nullptr},
        {"How many flooded roads can be seen in this image?", "Complex Counting", 179, "1", 45, nullptr},
        {"How many roads are in this image?", "Simple Counting", 143, "1", 30, nullptr},
        {"How many buildings are flooded in this image?", "Complex Counting", 48, "1", 5, nullptr},
        {"How many roads are flooded in this image?", "Complex Counting", 49, "1", 5, nullptr},
        {"How many buildings are non flooded in this image?", "Complex Counting", 55, "1", 7, nullptr},
        {"Is the entire road flooded?", "Condition Recognition - Yes/No", 426, "no", 350, "yes"},
        {"Is the entire building flooded?", "Condition Recognition - Yes/No", 441, "yes", 359, "no"},
        {"What is the condition of the road in this image?", "Condition Recognition - Road", 452, "non flooded", 371, "flooded"},
        {"What is the condition of road?", "Condition Recognition - Road", 415, "non flooded", 332, "flooded"},
        {"What is the overall condition of the given image?", "Condition Recognition - Scene", 1448, "non flooded", 1247, "flooded"},
    };

    SampleSet set;
    set.source_split = Split::test;
    set.samples.reserve(4511);
    std::int64_t next_id = 0;
    for (const Row &row : rows) {
        for (std::int64_t i = 0; i < row.n; ++i) {
            std::string answer;
            if (i < row.modal_count) {
                answer = row.modal;
            } else if (row.filler) {
                answer = row.filler;
            } else {
                answer = std::to_string(21 + (i - row.modal_count) % 12);
            }
            char id[32];
            std::snprintf(id, sizeof(id), "fn_%05lld", static_cast<long long>(next_id));
            char img[32];
            std::snprintf(img, sizeof(img), "img_%03lld", static_cast<long long>(next_id % 8));
            ++next_id;
            set.samples.push_back(make_sample(id, img, row.question, answer, row.type));
        }
    }
    return set;
}

/// Predictions hitting an exact number of matches per group: the first
/// `hits[key]` members of each group get the true answer, the rest a string
/// that cannot collide with any real answer.
inline PredictionSet make_predictions(const SampleSet &set, const Partition &partition,
                                      const std::map<std::string, std::int64_t> &hits,
                                      const std::string &run_id = "run0") {
    PredictionSet preds;
    preds.run_id = run_id;
    for (const auto &[key, members] : partition.groups) {
        std::int64_t want = hits.count(key) ? hits.at(key) : 0;
        std::int64_t correct = 0;
        for (std::size_t idx : members) {
            const Sample &s = set.samples[idx];
            if (correct < want) {
                preds.entries.emplace(s.sample_id, s.answer);
                ++correct;
            } else {
                preds.entries.emplace(s.sample_id, s.answer + " wrong");
            }
        }
    }
    return preds;
}

// ---- random question sets (for invariant sweeps) ----------------------------

/// Minimal lexicon over a handful of nouns with one template per question
/// type; random sets built from it parse at every granularity.
inline Lexicon tiny_lexicon() {
    static const char *json = R"({
      "name": "tiny",
      "objects": [
        {"singular": "river", "plural": "rivers"},
        {"singular": "bridge", "plural": "bridges"},
        {"singular": "harbor", "plural": "harbors"},
        {"singular": "castle", "plural": "castles"},
        {"singular": "marsh", "plural": "marshes"}
      ],
      "attributes": ["small", "large"],
      "templates": [
        {"id": "presence_attr", "pattern": "is there a {attr} {obj}?", "question_type": "Presence"},
        {"id": "presence", "pattern": "is there a {obj}?", "question_type": "Presence"},
        {"id": "counting", "pattern": "how many {obj} are there?", "question_type": "Counting"},
        {"id": "comparison", "pattern": "are there more {obj} than {obj2}?", "question_type": "Comparison", "relation": "more"},
        {"id": "rural_urban", "pattern": "is it a rural or an urban area?", "question_type": "Rural/urban"}
      ],
      "answer_aliases": {}
    })";
    return lexicon_from_json(nlohmann::json::parse(json), "tiny lexicon");
}

/// Random dataset whose questions all parse under tiny_lexicon(). Splits are
/// assigned round-robin so both train and test views are non-empty.
inline SampleSet random_parsable_set(Rng &rng, std::int64_t n, bool mixed_splits = false) {
    static const char *nouns[5] = {"river", "bridge", "harbor", "castle", "marsh"};
    static const char *plurals[5] = {"rivers", "bridges", "harbors", "castles", "marshes"};
    static const char *attrs[2] = {"small", "large"};
    static const char *ranges[5] = {"0", "between 1 and 10", "between 11 and 100",
                                    "between 101 and 1000", "more than 1000"};
    SampleSet set;
    set.source_split = mixed_splits ? Split::unsplit : Split::test;
    set.samples.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        std::string question, answer;
        switch (rng.below(4)) {
            case 0: {
                const char *noun = nouns[rng.below(5)];
                question = rng.below(2) == 0
                               ? "is there a " + std::string(noun) + "?"
                               : "is there a " + std::string(attrs[rng.below(2)]) + " " + noun + "?";
                answer = rng.below(2) == 0 ? "yes" : "no";
                break;
            }
            case 1:
                question = "how many " + std::string(plurals[rng.below(5)]) + " are there?";
                answer = ranges[rng.below(5)];
                break;
            case 2: {
                std::size_t a = rng.below(5);
                std::size_t b = rng.below(4);
                if (b >= a) ++b;
                question = "are there more " + std::string(plurals[a]) + " than " + plurals[b] + "?";
                answer = rng.below(2) == 0 ? "yes" : "no";
                break;
            }
            default:
                question = "is it a rural or an urban area?";
                answer = rng.below(2) == 0 ? "rural" : "urban";
                break;
        }
        Split split = mixed_splits ? (i % 2 == 0 ? Split::train : Split::test) : Split::test;
        set.samples.push_back(make_sample("s" + std::to_string(i), "img" + std::to_string(rng.below(6)),
                                          question, answer, "", split));
    }
    return set;
}

}  // namespace vqabias::testsupport
