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

#include "vqabias/sample.hpp"

#include <unordered_set>

#include "vqabias/common.hpp"
#include "vqabias/text.hpp"

namespace vqabias {

Split split_from_string(const std::string &s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    if (s == "test2") return Split::test2;
    if (s == "unsplit" || s.empty()) return Split::unsplit;
    throw ValidationError("unknown split value: '" + s + "'");
}

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
        case Split::test2: return "test2";
        case Split::unsplit: return "unsplit";
    }
    return "unsplit";
}

std::int64_t AnswerVocabulary::total() const {
    std::int64_t n = 0;
    for (const auto &[answer, count] : counts) n += count;
    return n;
}

std::string AnswerVocabulary::modal_answer() const {
    std::string best;
    std::int64_t best_count = -1;
    // counts is ordered by answer, so the first maximum is the smallest answer.
    for (const auto &[answer, count] : counts) {
        if (count > best_count) {
            best = answer;
            best_count = count;
        }
    }
    return best;
}

AnswerVocabulary answer_vocabulary(const SampleSet &set) {
    if (set.empty()) throw ValidationError("cannot build an answer vocabulary from an empty dataset");
    AnswerVocabulary vocab;
    for (const Sample &s : set.samples) ++vocab.counts[normalize_answer(s.answer)];
    return vocab;
}

ValidationReport validate_dataset(const SampleSet &set) {
    ValidationReport report;
    std::unordered_set<std::string> seen;
    seen.reserve(set.size());
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const Sample &s = set.samples[i];
        auto flag = [&](const std::string &what) {
            report.issues.push_back({i, s.sample_id, what});
        };
        if (s.sample_id.empty()) flag("empty sample_id");
        if (s.image_id.empty()) flag("empty image_id");
        if (normalize_text(s.question).empty()) flag("empty question");
        if (normalize_answer(s.answer).empty()) flag("empty answer");
        if (!s.sample_id.empty() && !seen.insert(s.sample_id).second)
            flag("duplicate sample_id '" + s.sample_id + "'");
        if (s.question_type.empty()) ++report.missing_question_type;
    }
    return report;
}

}  // namespace vqabias
