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

#include <string>

#include "support/fixtures.hpp"
#include "vqabias/common.hpp"
#include "vqabias/jsonl.hpp"
#include "vqabias/sample.hpp"

using namespace vqabias;
using testsupport::TempDir;
using testsupport::make_sample;

namespace {

const char *kTwoLines =
    R"({"sample_id":"a","image_id":"i1","question":"Is there a road?","answer":"yes","question_type":"Presence","split":"train"})"
    "\n"
    R"({"sample_id":"b","image_id":"i2","question":"Is there a road?","answer":"no"})"
    "\n";

}  // namespace

TEST_CASE("datasets round-trip through JSONL") {
    SampleSet set = dataset_from_jsonl(kTwoLines, "mem");
    REQUIRE(set.size() == 2);
    CHECK(set.samples[0].sample_id == "a");
    CHECK(set.samples[0].split == Split::train);
    CHECK(set.samples[0].question_type == "Presence");
    CHECK(set.samples[1].question_type == "");
    CHECK(set.samples[1].split == Split::unsplit);
    // Mixed splits leave the set-level split unset.
    CHECK(set.source_split == Split::unsplit);

    SampleSet again = dataset_from_jsonl(dataset_to_jsonl(set), "mem2");
    REQUIRE(again.size() == 2);
    CHECK(again.samples[0] == set.samples[0]);
    CHECK(again.samples[1] == set.samples[1]);
}

TEST_CASE("serialized samples keep a stable field order") {
    SampleSet set;
    set.samples.push_back(make_sample("a", "i", "Q?", "yes", "Presence", Split::val));
    CHECK(dataset_to_jsonl(set) ==
          R"({"sample_id":"a","image_id":"i","question":"Q?","answer":"yes","question_type":"Presence","split":"val"})"
          "\n");
    // Optional fields are omitted, not emitted empty.
    set.samples[0].question_type = "";
    set.samples[0].split = Split::unsplit;
    CHECK(dataset_to_jsonl(set) ==
          R"({"sample_id":"a","image_id":"i","question":"Q?","answer":"yes"})"
          "\n");
}

TEST_CASE("dataset loader reports the offending line") {
    auto line_two_broken = [](const std::string &text, const char *needle) {
        try {
            dataset_from_jsonl(text, "mem");
            FAIL("expected ValidationError");
        } catch (const ValidationError &e) {
            std::string what = e.what();
            CHECK(what.find("mem:2") != std::string::npos);
            CHECK(what.find(needle) != std::string::npos);
        }
    };
    std::string good =
        R"({"sample_id":"a","image_id":"i","question":"Q?","answer":"yes"})" "\n";
    line_two_broken(good + "{not json}\n", "not valid JSON");
    line_two_broken(good + "[1,2]\n", "not a JSON object");
    line_two_broken(good + R"({"sample_id":"b","image_id":"i","question":"Q?"})" "\n",
                    "missing field 'answer'");
    line_two_broken(good + R"({"sample_id":"b","image_id":"i","question":"Q?","answer":3})" "\n",
                    "field 'answer' must be a string");
    line_two_broken(good + R"({"sample_id":"a","image_id":"i","question":"Q?","answer":"no"})" "\n",
                    "duplicate sample_id 'a'");
    line_two_broken(
        good + R"({"sample_id":"b","image_id":"i","question":"Q?","answer":"no","split":"dev"})" "\n",
        "unknown split");
}

TEST_CASE("blank lines are skipped, not counted as records") {
    std::string text = "\n" + std::string(kTwoLines) + "   \n";
    CHECK(dataset_from_jsonl(text, "mem").size() == 2);
}

TEST_CASE("prediction files carry one run id") {
    PredictionSet preds = predictions_from_jsonl(
        R"({"sample_id":"a","predicted_answer":"yes","run_id":"r1"})" "\n"
        R"({"sample_id":"b","predicted_answer":"no"})" "\n",
        "mem");
    CHECK(preds.run_id == "r1");
    CHECK(preds.size() == 2);

    CHECK_THROWS_WITH_AS(
        predictions_from_jsonl(
            R"({"sample_id":"a","predicted_answer":"yes","run_id":"r1"})" "\n"
            R"({"sample_id":"b","predicted_answer":"no","run_id":"r2"})" "\n",
            "mem"),
        doctest::Contains("conflicting run_id 'r2'"), ValidationError);

    CHECK_THROWS_WITH_AS(predictions_from_jsonl(
                             R"({"sample_id":"a","predicted_answer":"yes"})" "\n"
                             R"({"sample_id":"a","predicted_answer":"no"})" "\n",
                             "mem"),
                         doctest::Contains("duplicate sample_id"), ValidationError);
}

TEST_CASE("prediction serialization is sorted by sample id") {
    PredictionSet preds;
    preds.run_id = "r";
    preds.entries["b"] = "no";
    preds.entries["a"] = "yes";
    CHECK(predictions_to_jsonl(preds) ==
          R"({"sample_id":"a","predicted_answer":"yes","run_id":"r"})" "\n"
          R"({"sample_id":"b","predicted_answer":"no","run_id":"r"})" "\n");
}

TEST_CASE("file round-trip and IoError on missing paths") {
    TempDir tmp;
    SampleSet set = dataset_from_jsonl(kTwoLines, "mem");
    write_dataset(set, tmp.path / "d.jsonl");
    CHECK(load_dataset(tmp.path / "d.jsonl").size() == 2);
    CHECK_THROWS_AS((void)load_dataset(tmp.path / "absent.jsonl"), IoError);
    CHECK_THROWS_AS((void)read_text_file(tmp.path / "absent.txt"), IoError);
    // Parent directories are created on write.
    write_text_file(tmp.path / "deep" / "nested" / "f.txt", "x");
    CHECK(read_text_file(tmp.path / "deep" / "nested" / "f.txt") == "x");
}

TEST_CASE("answer vocabulary counts normalized answers with ordered ties") {
    SampleSet set;
    set.samples.push_back(make_sample("a", "i", "q", "Yes"));
    set.samples.push_back(make_sample("b", "i", "q", "yes"));
    set.samples.push_back(make_sample("c", "i", "q", "no"));
    set.samples.push_back(make_sample("d", "i", "q", "NO "));
    AnswerVocabulary vocab = answer_vocabulary(set);
    CHECK(vocab.size() == 2);
    CHECK(vocab.counts.at("yes") == 2);
    CHECK(vocab.total() == 4);
    // 2-2 tie: lexicographically smaller answer wins.
    CHECK(vocab.modal_answer() == "no");

    CHECK_THROWS_AS((void)answer_vocabulary(SampleSet{}), ValidationError);
}

TEST_CASE("dataset validation flags missing fields and duplicate ids") {
    SampleSet set;
    set.samples.push_back(make_sample("a", "i", "q?", "yes", "Presence"));
    set.samples.push_back(make_sample("a", "i", "q?", "no"));
    set.samples.push_back(make_sample("", "i", "q?", "no"));
    set.samples.push_back(make_sample("b", "", "q?", ""));
    ValidationReport report = validate_dataset(set);
    CHECK_FALSE(report.clean());
    // Duplicate id, empty id, empty image id, empty answer.
    CHECK(report.issues.size() == 4);
    CHECK(report.missing_question_type == 3);
    CHECK(report.needs_type_inference());

    SampleSet clean;
    clean.samples.push_back(make_sample("a", "i", "q?", "yes", "Presence"));
    CHECK(validate_dataset(clean).clean());
    CHECK_FALSE(validate_dataset(clean).needs_type_inference());
}
