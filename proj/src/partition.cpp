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

#include "vqabias/partition.hpp"

#include <unordered_map>

#include "vqabias/common.hpp"

namespace vqabias {

std::size_t Partition::covered() const {
    std::size_t n = 0;
    for (const auto &[key, members] : groups) n += members.size();
    return n;
}

Partition build_partition(const SampleSet &set, const Lexicon &lexicon, Granularity g) {
    Partition p;
    p.granularity = g;
    // Question text repeats heavily in template datasets; cache parses.
    std::unordered_map<std::string, std::string> key_cache;
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const std::string &question = set.samples[i].question;
        auto it = key_cache.find(question);
        if (it == key_cache.end()) {
            ParsedQuestion parsed = parse_question(question, lexicon);
            it = key_cache.emplace(question, group_key(parsed, g)).first;
        }
        p.groups[it->second].push_back(i);
    }
    return p;
}

Partition partition_by_stored_type(const SampleSet &set) {
    Partition p;
    p.granularity = Granularity::question_type;
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const std::string &type = set.samples[i].question_type;
        p.groups[type.empty() ? kUnparsedType : type].push_back(i);
    }
    return p;
}

bool refines(const Partition &fine, const Partition &coarse) {
    if (fine.covered() != coarse.covered()) return false;
    std::unordered_map<std::size_t, const std::string *> coarse_of;
    coarse_of.reserve(coarse.covered());
    for (const auto &[key, members] : coarse.groups)
        for (std::size_t idx : members) coarse_of[idx] = &key;
    for (const auto &[key, members] : fine.groups) {
        const std::string *target = nullptr;
        for (std::size_t idx : members) {
            auto it = coarse_of.find(idx);
            if (it == coarse_of.end()) return false;
            if (target == nullptr) {
                target = it->second;
            } else if (*target != *it->second) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace vqabias
