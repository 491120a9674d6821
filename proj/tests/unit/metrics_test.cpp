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

#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "vqabias/bias.hpp"
#include "vqabias/metrics.hpp"
#include "vqabias/partition.hpp"

using namespace vqabias;
using namespace vqabias::testsupport;

namespace {

// Two groups: "is there a river?" x10, "is there a marsh?" x2.
SampleSet two_group_set() {
    SampleSet set;
    for (int i = 0; i < 10; ++i)
        set.samples.push_back(
            make_sample("r" + std::to_string(i), "img", "is there a river?", "yes"));
    set.samples.push_back(make_sample("m0", "img", "is there a marsh?", "no"));
    set.samples.push_back(make_sample("m1", "img", "is there a marsh?", "no"));
    return set;
}

EvalResult eval_of(const SampleSet &set, const Partition &partition, const Lexicon &lex,
                   const std::map<std::string, std::int64_t> &hits) {
    return accuracy_eval(make_predictions(set, partition, hits), set, partition, &lex);
}

}  // namespace

TEST_CASE("overall accuracy weighs samples, average weighs groups") {
    Lexicon tiny = tiny_lexicon();
    SampleSet set = two_group_set();
    Partition p = build_partition(set, tiny, Granularity::question_text);
    // Large group all right, small group all wrong: OA 10/12, AA 1/2.
    EvalResult result = eval_of(set, p, tiny, {{"is there a river?", 10}, {"is there a marsh?", 0}});
    CHECK(result.oa == Ratio{10, 12});
    CHECK(result.aa == doctest::Approx(0.5));
    CHECK(result.per_group.at("is there a river?") == Ratio{10, 10});
    CHECK(result.per_group.at("is there a marsh?") == Ratio{0, 2});
    CHECK(result.n_missing == 0);
    CHECK(result.warnings.empty());

    // All correct.
    EvalResult full = eval_of(set, p, tiny, {{"is there a river?", 10}, {"is there a marsh?", 2}});
    CHECK(full.oa == Ratio{12, 12});
    CHECK(full.aa == doctest::Approx(1.0));
}

TEST_CASE("missing predictions score wrong and produce a warning") {
    Lexicon tiny = tiny_lexicon();
    SampleSet set = two_group_set();
    Partition p = build_partition(set, tiny, Granularity::question_text);
    PredictionSet preds = make_predictions(set, p, {{"is there a river?", 10}, {"is there a marsh?", 2}});
    preds.entries.erase("m0");
    preds.entries.erase("m1");
    EvalResult result = accuracy_eval(preds, set, p, &tiny);
    CHECK(result.n_missing == 2);
    CHECK(result.per_group.at("is there a marsh?") == Ratio{0, 2});
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("2 truth samples had no prediction") != std::string::npos);

    PredictionSet unrelated;
    unrelated.entries["nobody"] = "yes";
    CHECK_THROWS_WITH_AS((void)accuracy_eval(unrelated, set, p, &tiny),
                         doctest::Contains("no prediction covers any truth sample_id"),
                         ValidationError);
}

TEST_CASE("prediction answers are compared after canonicalization") {
    Lexicon lr = lr_lexicon();
    SampleSet set;
    set.samples.push_back(make_sample("a", "img", "How many roads are there?", "between 0 and 10"));
    Partition p = build_partition(set, lr, Granularity::question_type);
    PredictionSet preds;
    preds.entries["a"] = "Between 1 and 10";  // alias + case of the truth
    EvalResult result = accuracy_eval(preds, set, p, &lr);
    CHECK(result.oa == Ratio{1, 1});
}

TEST_CASE("headroom rescaling matches its hand-computed values") {
    CHECK(io_lower_bound(0.9076, 0.6674, "io").value == doctest::Approx(0.722189).epsilon(1e-5));
    CHECK(io_lower_bound(0.9104, 0.7302, "io").value == doctest::Approx(0.667903).epsilon(1e-5));
    CHECK(io_lower_bound(0.3, 0.3, "io").value == doctest::Approx(0.0));
    CHECK(io_lower_bound(1.0, 0.3, "io").value == doctest::Approx(1.0));
    // Below the floor: negative and flagged as such.
    MetricValue below = io_lower_bound(0.5, 0.6, "io");
    CHECK(below.value < 0);
    CHECK(below.negative());
    CHECK_FALSE(below.degenerate);
}

TEST_CASE("headroom rescaling rejects out-of-range inputs") {
    CHECK_THROWS_WITH_AS((void)io_lower_bound(1.2, 0.5, "io"), doctest::Contains("outside [0, 1]"),
                         ValidationError);
    CHECK_THROWS_WITH_AS((void)io_lower_bound(0.5, -0.1, "io"), doctest::Contains("outside [0, 1]"),
                         ValidationError);
    CHECK_THROWS_WITH_AS((void)io_lower_bound(0.5, 1.0, "io"),
                         doctest::Contains("degenerate lower bound"), ValidationError);
}

TEST_CASE("prior-normalized scores line up against the bias report") {
    SampleSet set = lr_table_fixture();
    Lexicon lr = lr_lexicon();
    BiasReport bias =
        bias_report_one(set, set, lr, Granularity::question_type, BiasOptions{.same_split = true});

    EvalResult eval;
    eval.granularity = Granularity::question_type;
    eval.per_group["Comparison"] = Ratio{9076, 10000};
    eval.per_group["Counting"] = Ratio{7059, 10000};
    eval.per_group["Presence"] = Ratio{9104, 10000};
    eval.per_group["Rural/urban"] = Ratio{9000, 10000};
    eval.aa = 0.855975;
    eval.oa = Ratio{8490, 10000};

    IoTable table = io_prior(eval, bias);
    CHECK(format_percent(table.per_group.at("Comparison").value) == "72.22");
    CHECK(format_percent(table.per_group.at("Counting").value) == "59.50");
    CHECK(format_percent(table.per_group.at("Presence").value) == "64.12");
    CHECK(format_percent(table.per_group.at("Rural/urban").value) == "77.27");
    CHECK(format_percent(table.overall.value) == "64.48");
    CHECK(format_percent(table.average.value) == "67.05");

    SUBCASE("group sets must agree in both directions") {
        EvalResult missing = eval;
        missing.per_group.erase("Counting");
        CHECK_THROWS_WITH_AS((void)io_prior(missing, bias),
                             doctest::Contains("missing from the evaluation"), ValidationError);
        EvalResult extra = eval;
        extra.per_group["Mystery"] = Ratio{1, 2};
        CHECK_THROWS_WITH_AS((void)io_prior(extra, bias),
                             doctest::Contains("missing from the bias report"), ValidationError);
    }
}

TEST_CASE("adversarial-normalized scores from two evaluation conditions") {
    auto eval_with = [](std::map<std::string, Ratio> groups, double aa, Ratio oa) {
        EvalResult e;
        e.granularity = Granularity::question_type;
        e.per_group = std::move(groups);
        e.aa = aa;
        e.oa = oa;
        return e;
    };
    EvalResult reference = eval_with({{"Comparison", {9076, 10000}},
                                      {"Counting", {7059, 10000}},
                                      {"Presence", {9104, 10000}},
                                      {"Rural/urban", {9000, 10000}}},
                                     0.855975, Ratio{8490, 10000});
    EvalResult adversarial = eval_with({{"Comparison", {7954, 10000}},
                                        {"Counting", {3887, 10000}},
                                        {"Presence", {7302, 10000}},
                                        {"Rural/urban", {5600, 10000}}},
                                       0.618575, Ratio{6540, 10000});
    IoTable table = io_adtest(reference, adversarial);
    CHECK(format_percent(table.per_group.at("Comparison").value) == "54.84");
    CHECK(format_percent(table.per_group.at("Counting").value) == "51.89");
    CHECK(format_percent(table.per_group.at("Presence").value) == "66.79");
    CHECK(format_percent(table.per_group.at("Rural/urban").value) == "77.27");
    CHECK(format_percent(table.overall.value) == "56.36");
    CHECK(format_percent(table.average.value) == "62.24");

    SUBCASE("identical conditions zero out") {
        IoTable zero = io_adtest(reference, reference);
        for (const auto &[key, value] : zero.per_group)
            CHECK(value.value == doctest::Approx(0.0));
    }
    SUBCASE("a perfect adversarial group is degenerate, not an error") {
        EvalResult perfect = adversarial;
        perfect.per_group["Presence"] = Ratio{1, 1};
        IoTable table2 = io_adtest(reference, perfect);
        CHECK(table2.per_group.at("Presence").degenerate);
        CHECK_FALSE(table2.per_group.at("Comparison").degenerate);
    }
    SUBCASE("mismatched group sets are rejected") {
        EvalResult missing = adversarial;
        missing.per_group.erase("Counting");
        CHECK_THROWS_WITH_AS((void)io_adtest(reference, missing),
                             doctest::Contains("group sets differ"), ValidationError);
    }
}

TEST_CASE("run aggregation reports mean and population spread") {
    auto eval_at = [](double acc) {
        EvalResult e;
        e.granularity = Granularity::question_type;
        auto to_ratio = [&](double v) { return Ratio{static_cast<std::int64_t>(v * 10000), 10000}; };
        e.per_group["G"] = to_ratio(acc);
        e.aa = acc;
        e.oa = to_ratio(acc);
        return e;
    };
    RunAggregate agg = aggregate_runs({eval_at(0.80), eval_at(0.82), eval_at(0.84)});
    CHECK(agg.n_runs == 3);
    CHECK(agg.aa.mean == doctest::Approx(0.82));
    CHECK(agg.aa.stddev == doctest::Approx(std::sqrt(0.0008 / 3)));
    CHECK(format_mean_std(agg.per_group.at("G")) == "82.00 (1.63)");

    RunAggregate flat = aggregate_runs({eval_at(0.82), eval_at(0.82), eval_at(0.82)});
    CHECK(flat.per_group.at("G").stddev == doctest::Approx(0.0));
    CHECK(format_mean_std(flat.per_group.at("G")) == "82.00 (0.00)");

    RunAggregate tight = aggregate_runs({eval_at(0.8484), eval_at(0.8490), eval_at(0.8496)});
    CHECK(format_mean_std(tight.oa) == "84.90 (0.05)");

    RunAggregate single = aggregate_runs({eval_at(0.75)});
    CHECK(single.oa.stddev == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)aggregate_runs({}), ValidationError);
    EvalResult other = eval_at(0.5);
    other.per_group.clear();
    other.per_group["H"] = Ratio{1, 2};
    CHECK_THROWS_WITH_AS((void)aggregate_runs({eval_at(0.5), other}),
                         doctest::Contains("group mismatch"), ValidationError);
}

TEST_CASE("delta tables subtract disturbed from reference means") {
    auto agg_at = [](double acc) {
        RunAggregate a;
        a.granularity = Granularity::question_type;
        a.per_group["G"] = MeanStd{acc, 0.0};
        a.aa = MeanStd{acc, 0.0};
        a.oa = MeanStd{acc, 0.0};
        return a;
    };
    DeltaTable delta = delta_table(agg_at(0.8490), agg_at(0.6540));
    CHECK(delta.oa == doctest::Approx(0.195));
    CHECK(format_percent(delta.oa) == "19.50");
    DeltaTable small = delta_table(agg_at(0.8473), agg_at(0.8053));
    CHECK(format_percent(small.per_group.at("G")) == "4.20");
    DeltaTable zero = delta_table(agg_at(0.5), agg_at(0.5));
    CHECK(zero.oa == doctest::Approx(0.0));
}

TEST_CASE("overall accuracy does not depend on the grouping") {
    Lexicon lr = lr_lexicon();
    SampleSet set = lr_table_fixture();
    Partition by_type = build_partition(set, lr, Granularity::question_type);
    Partition by_pattern = build_partition(set, lr, Granularity::pattern);
    std::map<std::string, std::int64_t> hits;
    for (const auto &[key, members] : by_type.groups)
        hits[key] = static_cast<std::int64_t>(members.size() / 3);
    PredictionSet preds = make_predictions(set, by_type, hits);
    EvalResult coarse = accuracy_eval(preds, set, by_type, &lr);
    EvalResult fine = accuracy_eval(preds, set, by_pattern, &lr);
    CHECK(coarse.oa == fine.oa);
}

TEST_CASE("mean-based tables accept explicit lower bounds") {
    std::map<std::string, double> model{{"A", 0.9}, {"B", 0.8}};
    std::map<std::string, double> lower{{"A", 0.5}, {"B", 1.0}};
    IoTable table = io_from_means("IO_AdTest", Granularity::question_type, model, 0.85, 0.85,
                                  lower, 0.75, 0.75);
    CHECK(table.per_group.at("A").value == doctest::Approx(0.8));
    CHECK(table.per_group.at("B").degenerate);
    CHECK(table.average.value == doctest::Approx(0.4));

    std::map<std::string, double> misnamed{{"A", 0.5}, {"C", 0.5}};
    CHECK_THROWS_WITH_AS((void)io_from_means("io", Granularity::question_type, model, 0.85, 0.85,
                                             misnamed, 0.75, 0.75),
                         doctest::Contains("missing from the lower bounds"), ValidationError);
}
