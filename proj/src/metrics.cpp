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

#include "vqabias/metrics.hpp"

#include <cmath>
#include <limits>

#include "vqabias/text.hpp"

namespace vqabias {

EvalResult accuracy_eval(const PredictionSet &preds, const SampleSet &truth,
                         const Partition &partition, const Lexicon *lexicon) {
    if (truth.empty() || partition.groups.empty())
        throw ValidationError("accuracy_eval: empty truth set or partition");

    auto canon = [&](const std::string &raw) {
        return lexicon ? lexicon->canonical_answer(raw) : normalize_answer(raw);
    };

    EvalResult result;
    result.granularity = partition.granularity;
    std::int64_t total_n = 0;
    std::int64_t total_matches = 0;
    std::int64_t covered = 0;
    double acc_sum = 0;
    for (const auto &[key, members] : partition.groups) {
        std::int64_t matches = 0;
        for (std::size_t idx : members) {
            const Sample &s = truth.samples[idx];
            auto it = preds.entries.find(s.sample_id);
            if (it == preds.entries.end()) {
                ++result.n_missing;  // scored wrong
                continue;
            }
            ++covered;
            if (canon(it->second) == canon(s.answer)) ++matches;
        }
        Ratio acc{matches, static_cast<std::int64_t>(members.size())};
        total_n += acc.den;
        total_matches += matches;
        acc_sum += acc.value();
        result.per_group.emplace(key, acc);
    }
    if (covered == 0)
        throw ValidationError("accuracy_eval: no prediction covers any truth sample_id");
    result.n_evaluated = total_n;
    result.oa = Ratio{total_matches, total_n};
    result.aa = acc_sum / static_cast<double>(result.per_group.size());
    if (result.n_missing > 0)
        result.warnings.push_back(std::to_string(result.n_missing) +
                                  " truth samples had no prediction and were scored wrong");
    return result;
}

MetricValue io_lower_bound(double model_acc, double lower_bound, const std::string &name) {
    if (std::isnan(model_acc) || model_acc < 0.0 || model_acc > 1.0)
        throw ValidationError(name + ": model accuracy " + std::to_string(model_acc) +
                              " outside [0, 1]");
    if (std::isnan(lower_bound) || lower_bound < 0.0 || lower_bound > 1.0)
        throw ValidationError(name + ": lower bound " + std::to_string(lower_bound) +
                              " outside [0, 1]");
    if (lower_bound == 1.0)
        throw ValidationError(name + ": degenerate lower bound (no headroom above 1)");
    MetricValue v;
    v.name = name;
    v.model_acc = model_acc;
    v.lower_bound = lower_bound;
    v.value = (model_acc - lower_bound) / (1.0 - lower_bound);
    return v;
}

IoTable io_prior(const EvalResult &eval, const BiasReport &bias) {
    if (eval.granularity != bias.granularity)
        throw ValidationError("io_prior: evaluation granularity (" + to_string(eval.granularity) +
                              ") does not match bias report (" + to_string(bias.granularity) + ")");
    std::map<std::string, Ratio> priors;
    for (const BiasRow &row : bias.rows) priors.emplace(row.key, row.prior_acc);

    IoTable table;
    table.name = "IO_Prior";
    table.granularity = eval.granularity;
    for (const auto &[key, acc] : eval.per_group) {
        auto it = priors.find(key);
        if (it == priors.end())
            throw ValidationError("io_prior: group '" + key + "' missing from the bias report");
        table.per_group.emplace(key, io_lower_bound(acc.value(), it->second.value(), "IO_Prior"));
    }
    for (const auto &[key, prior] : priors) {
        if (!eval.per_group.count(key))
            throw ValidationError("io_prior: bias report group '" + key +
                                  "' missing from the evaluation");
        (void)prior;
    }
    table.average = io_lower_bound(eval.aa, bias.aggregates.average_prior, "IO_Prior");
    table.overall =
        io_lower_bound(eval.oa.value(), bias.aggregates.overall_prior.value(), "IO_Prior");
    return table;
}

namespace {

MetricValue degenerate_entry(const std::string &name, double model_acc) {
    MetricValue v;
    v.name = name;
    v.model_acc = model_acc;
    v.lower_bound = 1.0;
    v.value = std::numeric_limits<double>::quiet_NaN();
    v.degenerate = true;
    return v;
}

void check_same_groups(const std::map<std::string, Ratio> &a, const std::map<std::string, Ratio> &b,
                       const std::string &what) {
    if (a.size() != b.size())
        throw ValidationError(what + ": group sets differ in size");
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first)
            throw ValidationError(what + ": group mismatch ('" + ia->first + "' vs '" + ib->first + "')");
}

}  // namespace

IoTable io_from_means(const std::string &name, Granularity granularity,
                      const std::map<std::string, double> &model, double model_aa, double model_oa,
                      const std::map<std::string, double> &lower, double lower_aa,
                      double lower_oa) {
    if (model.size() != lower.size())
        throw ValidationError(name + ": group sets differ in size");
    for (const auto &[key, value] : model) {
        (void)value;
        if (!lower.count(key))
            throw ValidationError(name + ": group '" + key + "' missing from the lower bounds");
    }
    IoTable table;
    table.name = name;
    table.granularity = granularity;
    auto cell = [&name](double model_acc, double lb) {
        return lb == 1.0 ? degenerate_entry(name, model_acc) : io_lower_bound(model_acc, lb, name);
    };
    for (const auto &[key, model_acc] : model)
        table.per_group.emplace(key, cell(model_acc, lower.at(key)));
    table.average = cell(model_aa, lower_aa);
    table.overall = cell(model_oa, lower_oa);
    return table;
}

IoTable io_adtest(const EvalResult &reference, const EvalResult &adversarial) {
    if (reference.granularity != adversarial.granularity)
        throw ValidationError("io_adtest: granularity mismatch");
    check_same_groups(reference.per_group, adversarial.per_group, "io_adtest");
    std::map<std::string, double> ref, low;
    for (const auto &[key, acc] : reference.per_group) ref[key] = acc.value();
    for (const auto &[key, acc] : adversarial.per_group) low[key] = acc.value();
    return io_from_means("IO_AdTest", reference.granularity, ref, reference.aa,
                         reference.oa.value(), low, adversarial.aa, adversarial.oa.value());
}

IoTable io_adtest_from_means(const RunAggregate &reference, const RunAggregate &adversarial) {
    if (reference.granularity != adversarial.granularity)
        throw ValidationError("io_adtest: granularity mismatch");
    std::map<std::string, double> ref, low;
    for (const auto &[key, ms] : reference.per_group) ref[key] = ms.mean;
    for (const auto &[key, ms] : adversarial.per_group) low[key] = ms.mean;
    return io_from_means("IO_AdTest", reference.granularity, ref, reference.aa.mean,
                         reference.oa.mean, low, adversarial.aa.mean, adversarial.oa.mean);
}

namespace {

MeanStd mean_std(const std::vector<double> &xs) {
    MeanStd ms;
    double n = static_cast<double>(xs.size());
    for (double x : xs) ms.mean += x;
    ms.mean /= n;
    double var = 0;
    for (double x : xs) var += (x - ms.mean) * (x - ms.mean);
    // Population variance: the k runs reported are the whole population,
    // not a sample from one, and it stays well defined for k = 1.
    ms.stddev = std::sqrt(var / n);
    return ms;
}

}  // namespace

RunAggregate aggregate_runs(const std::vector<EvalResult> &runs) {
    if (runs.empty()) throw ValidationError("aggregate_runs: no runs given");
    const EvalResult &first = runs.front();
    for (const EvalResult &run : runs) {
        if (run.granularity != first.granularity)
            throw ValidationError("aggregate_runs: runs use different granularities");
        check_same_groups(first.per_group, run.per_group, "aggregate_runs");
    }
    RunAggregate agg;
    agg.granularity = first.granularity;
    agg.n_runs = runs.size();
    for (const auto &[key, acc] : first.per_group) {
        (void)acc;
        std::vector<double> xs;
        xs.reserve(runs.size());
        for (const EvalResult &run : runs) xs.push_back(run.per_group.at(key).value());
        agg.per_group.emplace(key, mean_std(xs));
    }
    std::vector<double> aas, oas;
    for (const EvalResult &run : runs) {
        aas.push_back(run.aa);
        oas.push_back(run.oa.value());
    }
    agg.aa = mean_std(aas);
    agg.oa = mean_std(oas);
    return agg;
}

DeltaTable delta_table(const RunAggregate &reference, const RunAggregate &disturbed) {
    if (reference.granularity != disturbed.granularity)
        throw ValidationError("delta_table: granularity mismatch");
    if (reference.per_group.size() != disturbed.per_group.size())
        throw ValidationError("delta_table: group sets differ in size");
    DeltaTable delta;
    delta.granularity = reference.granularity;
    for (const auto &[key, ms] : reference.per_group) {
        auto it = disturbed.per_group.find(key);
        if (it == disturbed.per_group.end())
            throw ValidationError("delta_table: group '" + key + "' missing from disturbed runs");
        delta.per_group[key] = ms.mean - it->second.mean;
    }
    delta.aa = reference.aa.mean - disturbed.aa.mean;
    delta.oa = reference.oa.mean - disturbed.oa.mean;
    return delta;
}

std::string format_mean_std(const MeanStd &ms) {
    return format_percent(ms.mean) + " (" + format_percent(ms.stddev) + ")";
}

}  // namespace vqabias
