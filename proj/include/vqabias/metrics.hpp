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

#include "vqabias/bias.hpp"
#include "vqabias/common.hpp"
#include "vqabias/partition.hpp"
#include "vqabias/sample.hpp"

namespace vqabias {

struct EvalResult {
    Granularity granularity = Granularity::all;
    std::map<std::string, Ratio> per_group;  // exact matches / N_s
    double aa = 0;  // unweighted mean over groups
    Ratio oa;       // sample-weighted: total matches / total samples
    std::int64_t n_evaluated = 0;
    std::int64_t n_missing = 0;
    std::vector<std::string> warnings;
};

/// One relative metric cell: how much of the headroom above the lower bound
/// the model actually realized.
struct MetricValue {
    std::string name;  // "IO_Prior" or "IO_AdTest"
    double lower_bound = 0;
    double model_acc = 0;
    double value = 0;
    bool degenerate = false;  // lower bound at 1: no headroom to measure

    bool negative() const { return !degenerate && value < 0; }
};

struct IoTable {
    std::string name;
    Granularity granularity = Granularity::all;
    std::map<std::string, MetricValue> per_group;
    MetricValue average;  // AA against the unweighted-average lower bound
    MetricValue overall;  // OA against the sample-weighted lower bound
};

struct MeanStd {
    double mean = 0;
    double stddev = 0;
};

struct RunAggregate {
    Granularity granularity = Granularity::all;
    std::size_t n_runs = 0;
    std::map<std::string, MeanStd> per_group;
    MeanStd aa;
    MeanStd oa;
};

struct DeltaTable {
    Granularity granularity = Granularity::all;
    std::map<std::string, double> per_group;  // reference mean − disturbed mean
    double aa = 0;
    double oa = 0;
};

/// Scores a prediction file against ground truth over a partition. Samples
/// without a prediction are scored wrong and counted in n_missing (dropping
/// them would inflate accuracy); a warning records how many.
EvalResult accuracy_eval(const PredictionSet &preds, const SampleSet &truth,
                         const Partition &partition, const Lexicon *lexicon = nullptr);

/// value = (model_acc − lower_bound) / (1 − lower_bound). Negative when the
/// model sits below its lower bound; that is reported, never clamped.
MetricValue io_lower_bound(double model_acc, double lower_bound, const std::string &name = "IO");

/// IO with each group's Prior_Acc as the lower bound; overall pairs OA with
/// the report's sample-weighted overall prior.
IoTable io_prior(const EvalResult &eval, const BiasReport &bias);

/// IO table from already-aggregated accuracies (e.g. run means) against a
/// per-group lower-bound table over the same group set. Lower bounds at 1
/// yield degenerate cells rather than an error for the whole table.
IoTable io_from_means(const std::string &name, Granularity granularity,
                      const std::map<std::string, double> &model, double model_aa, double model_oa,
                      const std::map<std::string, double> &lower, double lower_aa, double lower_oa);

/// IO with adversarial accuracy as the lower bound. A group whose adversarial
/// accuracy is 1 yields a degenerate entry (flagged, value undefined) rather
/// than an error for the whole table.
IoTable io_adtest(const EvalResult &reference, const EvalResult &adversarial);

/// Per-cell mean and population standard deviation across runs. All runs
/// must cover the same groups.
RunAggregate aggregate_runs(const std::vector<EvalResult> &runs);

/// io_adtest over run means (the aggregate view of multi-run experiments).
IoTable io_adtest_from_means(const RunAggregate &reference, const RunAggregate &adversarial);

/// reference mean − disturbed mean, per cell.
DeltaTable delta_table(const RunAggregate &reference, const RunAggregate &disturbed);

/// "84.90 (0.05)" — mean and std as two-decimal percentages.
std::string format_mean_std(const MeanStd &ms);

}  // namespace vqabias
