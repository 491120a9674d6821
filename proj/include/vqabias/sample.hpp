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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace vqabias {

enum class Split { train, val, test, test2, unsplit };

Split split_from_string(const std::string &s);
std::string to_string(Split s);

struct Sample {
    std::string sample_id;
    std::string image_id;
    std::string question;
    std::string answer;
    std::string question_type;  // optional; empty when the source did not tag it
    Split split = Split::unsplit;

    friend bool operator==(const Sample &, const Sample &) = default;
};

struct SampleSet {
    std::vector<Sample> samples;
    /// Split shared by every sample, or unsplit when mixed/untagged.
    Split source_split = Split::unsplit;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

/// Distinct normalized answers with their occurrence counts.
struct AnswerVocabulary {
    std::map<std::string, std::int64_t> counts;

    std::size_t size() const { return counts.size(); }
    std::int64_t total() const;
    /// Most frequent answer; ties broken toward the lexicographically
    /// smallest answer so results never depend on input order.
    std::string modal_answer() const;
};

enum class PredictionCondition { reference, blind, adversarial };

struct PredictionSet {
    std::string run_id;  // empty when the file did not carry one
    PredictionCondition condition = PredictionCondition::reference;
    std::unordered_map<std::string, std::string> entries;  // sample_id -> raw predicted answer

    std::size_t size() const { return entries.size(); }
};

struct ValidationIssue {
    std::size_t index = 0;  // position in SampleSet::samples
    std::string sample_id;
    std::string what;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    std::int64_t missing_question_type = 0;

    bool clean() const { return issues.empty(); }
    /// True when at least one sample lacks a stored question_type, i.e. type
    /// grouping must go through the template parser.
    bool needs_type_inference() const { return missing_question_type > 0; }
};

/// Builds the answer vocabulary over normalized answers. Empty input is an
/// error: a vocabulary of nothing has no modal answer and no cardinality.
AnswerVocabulary answer_vocabulary(const SampleSet &set);

/// Reports structural problems (empty required fields, duplicate sample ids)
/// and whether type inference is needed. Loaders already reject malformed
/// records; this pass covers sets assembled in memory as well.
ValidationReport validate_dataset(const SampleSet &set);

}  // namespace vqabias
