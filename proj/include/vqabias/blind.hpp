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
#include <vector>

#include "vqabias/bias.hpp"
#include "vqabias/partition.hpp"
#include "vqabias/sample.hpp"

namespace vqabias {

/// Question-only predictor. Two kinds:
///  - prior: answers each question with its group's most common training
///    answer (wraps the prior table).
///  - bow: multinomial bag-of-words classifier with additive smoothing; a
///    desk-scale stand-in for learned question-only models.
struct BlindModel {
    enum class Kind { prior, bow };

    Kind kind = Kind::prior;
    std::string lexicon_name;  // informational; prior models need a lexicon at predict time

    // kind == prior
    PriorTable priors;

    // kind == bow
    struct BowClass {
        std::string answer;
        std::int64_t doc_count = 0;
        std::int64_t token_total = 0;
        std::map<std::string, std::int64_t> token_counts;
    };
    double alpha = 1.0;
    std::vector<BowClass> classes;  // sorted by answer
    std::int64_t vocab_size = 0;    // distinct training tokens
    std::int64_t total_docs = 0;
};

BlindModel train_prior_predictor(const SampleSet &train, const Partition &train_partition,
                                 const Lexicon &lexicon);

BlindModel train_bow_classifier(const SampleSet &train, double alpha = 1.0,
                                const Lexicon *lexicon = nullptr);

/// Log-posterior of one answer class for a tokenized question (exposed for
/// verification against hand-computed probability tables).
double bow_log_posterior(const BlindModel &model, const BlindModel::BowClass &cls,
                         const std::vector<std::string> &tokens);

/// One prediction per eval sample, condition tagged "blind". Prior models
/// need the lexicon to recompute group keys; bow models ignore it.
PredictionSet predict_blind(const BlindModel &model, const SampleSet &eval,
                            const Lexicon *lexicon);

void save_blind_model(const BlindModel &model, const std::filesystem::path &path);
BlindModel load_blind_model(const std::filesystem::path &path);

}  // namespace vqabias
