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

#include "vqabias/parser.hpp"
#include "vqabias/sample.hpp"

namespace vqabias {

/// Disjoint grouping of a SampleSet. Group values are indexes into
/// SampleSet::samples (file order preserved inside each group).
struct Partition {
    Granularity granularity = Granularity::all;
    std::map<std::string, std::vector<std::size_t>> groups;

    std::size_t group_count() const { return groups.size(); }
    std::size_t covered() const;
};

/// Partitions by parsing each question against the lexicon. Unparsed
/// questions form their own bucket ("Unparsed" at type level, "unparsed"
/// below) rather than being dropped.
Partition build_partition(const SampleSet &set, const Lexicon &lexicon, Granularity g);

/// Partitions by the stored question_type field (samples without one land in
/// the Unparsed bucket). Only meaningful at question_type granularity; used
/// when no lexicon is available.
Partition partition_by_stored_type(const SampleSet &set);

/// True when every group of `fine` is contained in a single group of
/// `coarse` (partition refinement over the same sample set).
bool refines(const Partition &fine, const Partition &coarse);

}  // namespace vqabias
