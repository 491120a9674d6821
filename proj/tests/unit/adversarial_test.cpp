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

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "vqabias/adversarial.hpp"
#include "vqabias/partition.hpp"

using namespace vqabias;
using namespace vqabias::testsupport;

namespace {

SampleSet set_with_images(const std::vector<std::string> &images, int per_image,
                          Split split = Split::test) {
    SampleSet set;
    set.source_split = split;
    int i = 0;
    for (const std::string &image : images)
        for (int k = 0; k < per_image; ++k)
            set.samples.push_back(
                make_sample("s" + std::to_string(i++), image, "is there a river?", "yes", "", split));
    return set;
}

}  // namespace

TEST_CASE("swap mode names parse in both spellings") {
    CHECK(swap_mode_from_string("random") == SwapMode::random_swap);
    CHECK(swap_mode_from_string("random_swap") == SwapMode::random_swap);
    CHECK(swap_mode_from_string("white") == SwapMode::white_out);
    CHECK(swap_mode_from_string("black_out") == SwapMode::black_out);
    CHECK_THROWS_WITH_AS((void)swap_mode_from_string("sepia"),
                         doctest::Contains("unknown swap mode"), ValidationError);
}

TEST_CASE("white/black modes substitute the sentinel for every sample") {
    SampleSet set = set_with_images({"a", "b"}, 3);
    SwapManifest white = generate_swap_manifest(set, SwapMode::white_out, 7, SwapPool::split);
    REQUIRE(white.entries.size() == set.size());
    for (const SwapEntry &entry : white.entries) {
        CHECK(entry.substitute_image_id == "WHITE");
        CHECK_FALSE(entry.original_image_id.empty());
    }
    SwapManifest black = generate_swap_manifest(set, SwapMode::black_out, 7, SwapPool::split);
    for (const SwapEntry &entry : black.entries) CHECK(entry.substitute_image_id == "BLACK");
}

TEST_CASE("random swaps never return the original image") {
    for (int n_images : {2, 3, 5, 9}) {
        std::vector<std::string> images;
        for (int i = 0; i < n_images; ++i) images.push_back("img" + std::to_string(i));
        SampleSet set = set_with_images(images, 4);
        SwapManifest manifest = generate_swap_manifest(set, SwapMode::random_swap, 42, SwapPool::split);
        REQUIRE(manifest.entries.size() == set.size());
        std::set<std::string> pool(images.begin(), images.end());
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const SwapEntry &entry = manifest.entries[i];
            CHECK(entry.sample_id == set.samples[i].sample_id);
            CHECK(entry.original_image_id == set.samples[i].image_id);
            CHECK(entry.substitute_image_id != entry.original_image_id);
            CHECK(pool.count(entry.substitute_image_id) == 1);
        }
    }
}

TEST_CASE("a single-image pool cannot be swapped") {
    SampleSet set = set_with_images({"only"}, 5);
    CHECK_THROWS_WITH_AS((void)generate_swap_manifest(set, SwapMode::random_swap, 1, SwapPool::split),
                         doctest::Contains("needs >=2 distinct images"), ValidationError);
    // Sentinel modes do not care.
    CHECK_NOTHROW((void)generate_swap_manifest(set, SwapMode::white_out, 1, SwapPool::split));
    CHECK_THROWS_AS((void)generate_swap_manifest(SampleSet{}, SwapMode::white_out, 1, SwapPool::split),
                    ValidationError);
}

TEST_CASE("manifests are a pure function of dataset, mode and seed") {
    SampleSet set = set_with_images({"a", "b", "c", "d"}, 6);
    SwapManifest first = generate_swap_manifest(set, SwapMode::random_swap, 11, SwapPool::split);
    SwapManifest second = generate_swap_manifest(set, SwapMode::random_swap, 11, SwapPool::split);
    CHECK(manifest_to_jsonl(first) == manifest_to_jsonl(second));

    SwapManifest other_seed = generate_swap_manifest(set, SwapMode::random_swap, 12, SwapPool::split);
    CHECK(manifest_to_jsonl(first) != manifest_to_jsonl(other_seed));
}

TEST_CASE("substitutes do not depend on dataset file order") {
    SampleSet forward = set_with_images({"a", "b", "c"}, 2);
    SampleSet reversed = forward;
    std::reverse(reversed.samples.begin(), reversed.samples.end());
    SwapManifest fwd = generate_swap_manifest(forward, SwapMode::random_swap, 5, SwapPool::split);
    SwapManifest rev = generate_swap_manifest(reversed, SwapMode::random_swap, 5, SwapPool::split);
    std::map<std::string, std::string> by_id;
    for (const SwapEntry &entry : fwd.entries) by_id[entry.sample_id] = entry.substitute_image_id;
    for (const SwapEntry &entry : rev.entries) CHECK(by_id.at(entry.sample_id) == entry.substitute_image_id);
}

TEST_CASE("the split pool keeps substitutions within each sample's split") {
    SampleSet set;
    set.source_split = Split::unsplit;
    set.samples.push_back(make_sample("t0", "a", "q?", "yes", "", Split::train));
    set.samples.push_back(make_sample("t1", "b", "q?", "yes", "", Split::train));
    set.samples.push_back(make_sample("e0", "c", "q?", "yes", "", Split::test));
    set.samples.push_back(make_sample("e1", "d", "q?", "yes", "", Split::test));

    SwapManifest within = generate_swap_manifest(set, SwapMode::random_swap, 3, SwapPool::split);
    std::map<std::string, std::string> by_id;
    for (const SwapEntry &entry : within.entries) by_id[entry.sample_id] = entry.substitute_image_id;
    CHECK(by_id.at("t0") == "b");
    CHECK(by_id.at("t1") == "a");
    CHECK(by_id.at("e0") == "d");
    CHECK(by_id.at("e1") == "c");

    // The shared pool may cross splits; with seeds this is observable.
    bool crossed = false;
    for (std::uint64_t seed = 0; seed < 32 && !crossed; ++seed) {
        SwapManifest shared = generate_swap_manifest(set, SwapMode::random_swap, seed, SwapPool::all);
        for (const SwapEntry &entry : shared.entries) {
            bool train_side = entry.sample_id[0] == 't';
            bool substitute_in_train = entry.substitute_image_id == "a" || entry.substitute_image_id == "b";
            if (train_side != substitute_in_train) crossed = true;
        }
    }
    CHECK(crossed);
}

TEST_CASE("substitute draws are uniform over the other images") {
    // Five images, 2500 samples each: every (original -> substitute) cell has
    // expectation 625. The statistic is compared against the 0.999 quantile
    // of chi-square with 5*(4-1) = 15 degrees of freedom.
    std::vector<std::string> images = {"v", "w", "x", "y", "z"};
    SampleSet set = set_with_images(images, 2500);
    SwapManifest manifest = generate_swap_manifest(set, SwapMode::random_swap, 2718, SwapPool::split);
    std::map<std::string, std::map<std::string, std::int64_t>> cells;
    for (const SwapEntry &entry : manifest.entries)
        ++cells[entry.original_image_id][entry.substitute_image_id];
    std::vector<std::int64_t> observed;
    for (const std::string &from : images) {
        CHECK(cells.at(from).size() == 4);
        for (const auto &[to, count] : cells.at(from)) observed.push_back(count);
    }
    REQUIRE(observed.size() == 20);
    double stat = testoracle::chi_square_uniform(observed, 625.0);
    CHECK(stat < 37.697);  // chi-square 0.999 quantile, 15 df
}

TEST_CASE("manifest serialization carries the three id fields per line") {
    SampleSet set = set_with_images({"a", "b"}, 1);
    SwapManifest manifest = generate_swap_manifest(set, SwapMode::white_out, 0, SwapPool::split);
    CHECK(manifest_to_jsonl(manifest) ==
          R"({"sample_id":"s0","original_image_id":"a","substitute_image_id":"WHITE"})" "\n"
          R"({"sample_id":"s1","original_image_id":"b","substitute_image_id":"WHITE"})" "\n");
}

TEST_CASE("adversarial evaluation aggregates both conditions and their gap") {
    Lexicon tiny = tiny_lexicon();
    SampleSet truth = set_with_images({"a", "b"}, 5);  // one group of ten
    Partition p = build_partition(truth, tiny, Granularity::question_type);

    auto run_with_hits = [&](std::int64_t hits, const std::string &run_id) {
        return make_predictions(truth, p, {{"Presence", hits}}, run_id);
    };
    std::vector<PredictionSet> reference = {run_with_hits(9, "r1"), run_with_hits(8, "r2")};
    std::vector<PredictionSet> adversarial = {run_with_hits(5, "a1"), run_with_hits(6, "a2")};
    AdversarialEvaluation out = evaluate_adversarial(reference, adversarial, truth, p, &tiny);
    CHECK(out.reference.n_runs == 2);
    CHECK(out.reference.oa.mean == doctest::Approx(0.85));
    CHECK(out.adversarial.oa.mean == doctest::Approx(0.55));
    CHECK(out.deltas.oa == doctest::Approx(0.30));
    // (0.85 - 0.55) / (1 - 0.55)
    CHECK(out.io_adtest.overall.value == doctest::Approx(0.30 / 0.45));

    CHECK_THROWS_AS((void)evaluate_adversarial({}, adversarial, truth, p, &tiny), ValidationError);
}
