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

#include <string>
#include <string_view>
#include <vector>

#include "vqabias/lexicon.hpp"

namespace vqabias {

/// Type / pattern id assigned to questions no template matches.
inline constexpr const char *kUnparsedType = "Unparsed";
/// Group key used for unparsed questions at granularities finer than type.
inline constexpr const char *kUnparsedKey = "unparsed";

struct ParsedObject {
    std::string object;     // canonical singular form
    std::string attribute;  // empty when the template had no attribute slot
};

struct ParsedQuestion {
    std::string question_type;        // template's type, or kUnparsedType
    std::string pattern_id;           // template id, or kUnparsedKey
    std::vector<ParsedObject> objects;  // 0, 1 or 2 entries in slot order
    std::string relation;             // from the template, e.g. "more"
    std::string normalized_text;

    bool parsed() const { return pattern_id != kUnparsedKey; }
};

/// Matches the normalized question against the lexicon's templates in order;
/// the first template that matches wins. Slots are filled longest-form-first.
/// Questions that match nothing come back with type "Unparsed" — never an
/// error, unanalyzable text is itself a finding.
ParsedQuestion parse_question(std::string_view question, const Lexicon &lexicon);

enum class Granularity { all, question_type, pattern, object, object_with_attribute, question_text };

Granularity granularity_from_string(const std::string &s);
std::string to_string(Granularity g);
/// The six granularities from coarsest to finest.
const std::vector<Granularity> &all_granularities();

/// Group key of a parsed question at the requested granularity. Keys nest:
/// refining the granularity only ever splits groups, never merges them.
std::string group_key(const ParsedQuestion &q, Granularity g);

}  // namespace vqabias
