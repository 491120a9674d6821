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
#include <vector>

#include "vqabias/common.hpp"
#include "vqabias/partition.hpp"

namespace vqabias {

/// Counting summary of one group: size, distinct answers, modal answer and
/// its frequency. All integers; nothing here has been divided yet.
struct GroupStats {
    std::string key;
    std::int64_t n = 0;
    std::int64_t answer_card = 0;
    std::string modal_answer;
    std::int64_t n_prior = 0;  // occurrences of the modal answer
};

/// Most-common-answer table fitted on one set. Groups unseen at fit time are
/// answered with fallback_answer (the fit-set-wide modal answer).
struct PriorTable {
    Split fitted_on = Split::unsplit;
    Granularity granularity = Granularity::all;
    std::map<std::string, std::string> entries;
    std::string fallback_answer;
};

struct PriorAccuracyResult {
    struct Group {
        std::int64_t n = 0;
        std::int64_t matches = 0;
        std::string answer;  // the prior actually scored against this group
        bool used_fallback = false;
        Ratio acc;  // matches / n
    };
    std::map<std::string, Group> per_group;
    Ratio overall;       // sample-weighted: total matches / total samples
    double average = 0;  // unweighted mean over groups
};

struct UniformAccuracyResult {
    std::map<std::string, Ratio> per_group;  // 1 / answers present in group
    double overall = 0;                      // sample-weighted mean
    double average = 0;                      // unweighted mean
    std::int64_t full_set_card = 0;          // distinct answers in the whole set
};

/// Answer shares of one (group, split) cell. basis_points are hundredths of
/// a percent allocated by largest remainder, so each row sums to exactly
/// 10000 (= 100.00%).
struct AnswerShare {
    std::string answer;
    std::int64_t count = 0;
    std::int64_t basis_points = 0;
};

struct DistributionRow {
    std::string key;
    Split split = Split::unsplit;
    std::int64_t n = 0;
    std::vector<AnswerShare> shares;  // by descending count, ties by answer
};

struct AnswerDistribution {
    Granularity granularity = Granularity::all;
    std::vector<DistributionRow> rows;
};

struct BiasRow {
    std::string key;
    std::int64_t n = 0;
    std::int64_t answer_card = 0;
    std::string modal_answer;  // prior answer scored against this group
    std::int64_t prior_matches = 0;
    Ratio prior_acc;
    Ratio uni_acc;
    bool used_fallback = false;
};

struct BiasAggregates {
    double average_prior = 0;  // unweighted over groups
    Ratio overall_prior;       // sample-weighted, exact
    double average_uni = 0;
    double overall_uni = 0;  // sample-weighted mean of 1/|A_s|
};

struct BiasReport {
    Granularity granularity = Granularity::all;
    bool same_split = false;
    Split fitted_on = Split::unsplit;
    std::string fallback_answer;
    std::vector<BiasRow> rows;  // sorted by group key
    BiasRow all_row;            // the whole eval set as a single group
    BiasAggregates aggregates;
    AnswerDistribution distribution;
    std::vector<std::string> notes;
};

struct BiasOptions {
    bool same_split = false;
    /// Groups smaller than this draw a note in the report (they enter the
    /// unweighted average on equal footing, which can mislead).
    std::int64_t small_group_note = 50;
};

/// Per-group counting. `lexicon` may be null; it only supplies answer
/// aliases on top of base normalization.
std::map<std::string, GroupStats> group_stats(const SampleSet &set, const Partition &partition,
                                              const Lexicon *lexicon);

/// Modal answer per group, ties toward the lexicographically smallest
/// normalized answer. Errors on an empty fit set.
PriorTable fit_priors(const SampleSet &train, const Partition &train_partition,
                      const Lexicon *lexicon);

/// Scores the prior table against an eval set partitioned at the same
/// granularity. Groups missing from the table fall back to the global modal.
PriorAccuracyResult prior_accuracy(const PriorTable &priors, const SampleSet &eval,
                                   const Partition &eval_partition, const Lexicon *lexicon);

UniformAccuracyResult uniform_accuracy(const SampleSet &eval, const Partition &eval_partition,
                                       const Lexicon *lexicon);

AnswerDistribution answer_distribution(const SampleSet &set, const Partition &partition,
                                       const Lexicon *lexicon);

/// Full pipeline for one granularity: fit on `train`, evaluate on `eval`
/// (or fit and evaluate on `eval` with options.same_split).
BiasReport bias_report_one(const SampleSet &train, const SampleSet &eval, const Lexicon &lexicon,
                           Granularity g, const BiasOptions &options = {});

std::vector<BiasReport> bias_reports(const SampleSet &train, const SampleSet &eval,
                                     const Lexicon &lexicon,
                                     const std::vector<Granularity> &granularities,
                                     const BiasOptions &options = {});

}  // namespace vqabias
