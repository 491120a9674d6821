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

#include "vqabias/bias.hpp"

#include <algorithm>
#include <set>

#include "vqabias/text.hpp"

namespace vqabias {

namespace {

std::string canon(const Lexicon *lexicon, const std::string &raw) {
    return lexicon ? lexicon->canonical_answer(raw) : normalize_answer(raw);
}

// Canonical answer per sample, computed once per call.
std::vector<std::string> canonical_answers(const SampleSet &set, const Lexicon *lexicon) {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (const Sample &s : set.samples) out.push_back(canon(lexicon, s.answer));
    return out;
}

// Modal = highest count, ties toward smallest answer; map iteration order
// delivers the tie-break for free.
std::pair<std::string, std::int64_t> modal_of(const std::map<std::string, std::int64_t> &counts) {
    std::string best;
    std::int64_t best_count = -1;
    for (const auto &[answer, count] : counts) {
        if (count > best_count) {
            best = answer;
            best_count = count;
        }
    }
    return {best, best_count};
}

}  // namespace

std::map<std::string, GroupStats> group_stats(const SampleSet &set, const Partition &partition,
                                              const Lexicon *lexicon) {
    std::vector<std::string> answers = canonical_answers(set, lexicon);
    std::map<std::string, GroupStats> stats;
    for (const auto &[key, members] : partition.groups) {
        std::map<std::string, std::int64_t> counts;
        for (std::size_t idx : members) ++counts[answers[idx]];
        GroupStats gs;
        gs.key = key;
        gs.n = static_cast<std::int64_t>(members.size());
        gs.answer_card = static_cast<std::int64_t>(counts.size());
        auto [modal, modal_count] = modal_of(counts);
        gs.modal_answer = modal;
        gs.n_prior = modal_count;
        stats.emplace(key, std::move(gs));
    }
    return stats;
}

PriorTable fit_priors(const SampleSet &train, const Partition &train_partition,
                      const Lexicon *lexicon) {
    if (train.empty()) throw ValidationError("cannot fit priors on an empty dataset");
    PriorTable table;
    table.fitted_on = train.source_split;
    table.granularity = train_partition.granularity;

    std::vector<std::string> answers = canonical_answers(train, lexicon);
    std::map<std::string, std::int64_t> global_counts;
    for (const std::string &a : answers) ++global_counts[a];
    table.fallback_answer = modal_of(global_counts).first;

    for (const auto &[key, members] : train_partition.groups) {
        std::map<std::string, std::int64_t> counts;
        for (std::size_t idx : members) ++counts[answers[idx]];
        table.entries[key] = modal_of(counts).first;
    }
    return table;
}

PriorAccuracyResult prior_accuracy(const PriorTable &priors, const SampleSet &eval,
                                   const Partition &eval_partition, const Lexicon *lexicon) {
    if (eval_partition.groups.empty())
        throw ValidationError("prior_accuracy: evaluation partition has no groups");
    if (priors.granularity != eval_partition.granularity)
        throw ValidationError("prior_accuracy: prior table granularity (" +
                              to_string(priors.granularity) + ") does not match partition (" +
                              to_string(eval_partition.granularity) + ")");

    std::vector<std::string> answers = canonical_answers(eval, lexicon);
    PriorAccuracyResult result;
    std::int64_t total_n = 0;
    std::int64_t total_matches = 0;
    double acc_sum = 0;
    for (const auto &[key, members] : eval_partition.groups) {
        PriorAccuracyResult::Group g;
        auto it = priors.entries.find(key);
        if (it == priors.entries.end()) {
            g.answer = priors.fallback_answer;
            g.used_fallback = true;
        } else {
            g.answer = it->second;
        }
        g.n = static_cast<std::int64_t>(members.size());
        for (std::size_t idx : members)
            if (answers[idx] == g.answer) ++g.matches;
        g.acc = Ratio{g.matches, g.n};
        total_n += g.n;
        total_matches += g.matches;
        acc_sum += g.acc.value();
        result.per_group.emplace(key, std::move(g));
    }
    result.overall = Ratio{total_matches, total_n};
    result.average = acc_sum / static_cast<double>(result.per_group.size());
    return result;
}

UniformAccuracyResult uniform_accuracy(const SampleSet &eval, const Partition &eval_partition,
                                       const Lexicon *lexicon) {
    if (eval.empty() || eval_partition.groups.empty())
        throw ValidationError("uniform_accuracy: empty input");
    std::vector<std::string> answers = canonical_answers(eval, lexicon);
    UniformAccuracyResult result;
    std::set<std::string> full_set;
    std::int64_t total_n = 0;
    double weighted_sum = 0;
    double plain_sum = 0;
    for (const auto &[key, members] : eval_partition.groups) {
        std::set<std::string> distinct;
        for (std::size_t idx : members) distinct.insert(answers[idx]);
        auto card = static_cast<std::int64_t>(distinct.size());
        Ratio uni{1, card};
        result.per_group.emplace(key, uni);
        total_n += static_cast<std::int64_t>(members.size());
        weighted_sum += static_cast<double>(members.size()) * uni.value();
        plain_sum += uni.value();
    }
    for (const std::string &a : answers) full_set.insert(a);
    result.full_set_card = static_cast<std::int64_t>(full_set.size());
    result.overall = weighted_sum / static_cast<double>(total_n);
    result.average = plain_sum / static_cast<double>(result.per_group.size());
    return result;
}

namespace {

// Integer percentage allocation: floor everything to hundredths of a percent,
// then hand the leftover basis points to the largest remainders. Guarantees
// the row sums to exactly 10000 while staying within half a unit of the true
// share, and reduces to plain rounding when nothing conflicts.
void allocate_basis_points(std::vector<AnswerShare> &shares, std::int64_t n) {
    std::int64_t allocated = 0;
    std::vector<std::pair<std::int64_t, std::size_t>> remainders;  // (remainder, index)
    remainders.reserve(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
        __int128 basis = static_cast<__int128>(shares[i].count) * 10000;
        shares[i].basis_points = static_cast<std::int64_t>(basis / n);
        remainders.emplace_back(static_cast<std::int64_t>(basis % n), i);
        allocated += shares[i].basis_points;
    }
    std::int64_t leftover = 10000 - allocated;
    std::sort(remainders.begin(), remainders.end(), [&](const auto &a, const auto &b) {
        if (a.first != b.first) return a.first > b.first;
        return shares[a.second].answer < shares[b.second].answer;
    });
    for (std::int64_t i = 0; i < leftover; ++i) ++shares[remainders[static_cast<std::size_t>(i)].second].basis_points;
}

}  // namespace

AnswerDistribution answer_distribution(const SampleSet &set, const Partition &partition,
                                       const Lexicon *lexicon) {
    std::vector<std::string> answers = canonical_answers(set, lexicon);
    AnswerDistribution dist;
    dist.granularity = partition.granularity;
    for (const auto &[key, members] : partition.groups) {
        // One row per split present in the group, in enum order.
        std::map<Split, std::map<std::string, std::int64_t>> by_split;
        for (std::size_t idx : members) ++by_split[set.samples[idx].split][answers[idx]];
        for (const auto &[split, counts] : by_split) {
            DistributionRow row;
            row.key = key;
            row.split = split;
            for (const auto &[answer, count] : counts) {
                row.n += count;
                row.shares.push_back({answer, count, 0});
            }
            std::sort(row.shares.begin(), row.shares.end(), [](const AnswerShare &a, const AnswerShare &b) {
                if (a.count != b.count) return a.count > b.count;
                return a.answer < b.answer;
            });
            allocate_basis_points(row.shares, row.n);
            dist.rows.push_back(std::move(row));
        }
    }
    return dist;
}

BiasReport bias_report_one(const SampleSet &train, const SampleSet &eval, const Lexicon &lexicon,
                           Granularity g, const BiasOptions &options) {
    const SampleSet &fit_set = options.same_split ? eval : train;
    Partition fit_partition = build_partition(fit_set, lexicon, g);
    PriorTable priors = fit_priors(fit_set, fit_partition, &lexicon);

    Partition eval_partition =
        options.same_split ? fit_partition : build_partition(eval, lexicon, g);
    PriorAccuracyResult pa = prior_accuracy(priors, eval, eval_partition, &lexicon);
    UniformAccuracyResult ua = uniform_accuracy(eval, eval_partition, &lexicon);

    BiasReport report;
    report.granularity = g;
    report.same_split = options.same_split;
    report.fitted_on = priors.fitted_on;
    report.fallback_answer = priors.fallback_answer;

    for (const auto &[key, group] : pa.per_group) {
        BiasRow row;
        row.key = key;
        row.n = group.n;
        row.answer_card = ua.per_group.at(key).den;
        row.modal_answer = group.answer;
        row.prior_matches = group.matches;
        row.prior_acc = group.acc;
        row.uni_acc = ua.per_group.at(key);
        row.used_fallback = group.used_fallback;
        if (row.used_fallback)
            report.notes.push_back("group '" + key + "' unseen at fit time; scored with fallback '" +
                                   priors.fallback_answer + "'");
        if (row.n < options.small_group_note)
            report.notes.push_back("group '" + key + "' has only " + std::to_string(row.n) +
                                   " samples; it enters the unweighted average on equal footing");
        report.rows.push_back(std::move(row));
    }

    // Whole-set row: the eval set treated as a single group, scored with the
    // fit set's global modal answer.
    std::vector<std::string> eval_answers;
    eval_answers.reserve(eval.size());
    for (const Sample &s : eval.samples) eval_answers.push_back(lexicon.canonical_answer(s.answer));
    BiasRow all_row;
    all_row.key = "All";
    all_row.n = static_cast<std::int64_t>(eval.size());
    all_row.answer_card = ua.full_set_card;
    all_row.modal_answer = priors.fallback_answer;
    for (const std::string &a : eval_answers)
        if (a == priors.fallback_answer) ++all_row.prior_matches;
    all_row.prior_acc = Ratio{all_row.prior_matches, all_row.n};
    all_row.uni_acc = Ratio{1, all_row.answer_card};
    report.all_row = std::move(all_row);

    report.aggregates.average_prior = pa.average;
    report.aggregates.overall_prior = pa.overall;
    report.aggregates.average_uni = ua.average;
    report.aggregates.overall_uni = ua.overall;

    report.distribution = answer_distribution(eval, eval_partition, &lexicon);
    return report;
}

std::vector<BiasReport> bias_reports(const SampleSet &train, const SampleSet &eval,
                                     const Lexicon &lexicon,
                                     const std::vector<Granularity> &granularities,
                                     const BiasOptions &options) {
    std::vector<BiasReport> reports;
    reports.reserve(granularities.size());
    for (Granularity g : granularities)
        reports.push_back(bias_report_one(train, eval, lexicon, g, options));
    return reports;
}

}  // namespace vqabias
