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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace vqabias {

/// Noun with its explicit plural. Plurals are spelled out in the lexicon
/// rather than derived: real datasets contain irregular spellings that no
/// stemmer reproduces, so guessing would silently change group keys.
struct ObjectEntry {
    std::string singular;
    std::string plural;  // may be empty when the form never occurs
};

/// One compiled piece of a template pattern: either literal text or a slot.
struct PatternSegment {
    enum class Kind { literal, object_slot, attribute_slot } kind = Kind::literal;
    std::string text;       // literal text (normalized)
    std::string slot_name;  // "obj", "obj2", "attr", "attr2"
};

struct TemplateSpec {
    std::string id;
    std::string pattern;        // normalized pattern string
    std::string question_type;  // type assigned to questions matching this template
    std::string relation;       // optional comparison relation, e.g. "more"
    std::vector<PatternSegment> segments;
};

/// Dataset-specific vocabulary: objects, attributes, question templates and
/// answer aliases. Everything the parser needs to turn free text into keys.
struct Lexicon {
    std::string name;
    std::vector<ObjectEntry> objects;
    std::vector<std::string> attributes;
    std::vector<TemplateSpec> templates;
    std::map<std::string, std::string> answer_aliases;  // normalized variant -> canonical

    /// (form, canonical singular) pairs sorted by descending form length,
    /// ties by lexicon order; built once at load time. Longest-match slot
    /// filling walks this list so "residential building" beats "building".
    struct FormEntry {
        std::string form;
        std::string canonical;
    };
    std::vector<FormEntry> object_forms;
    std::vector<FormEntry> attribute_forms;  // canonical == form for attributes

    /// Normalizes an answer and folds aliases to the canonical spelling.
    std::string canonical_answer(const std::string &raw) const;
};

/// Parses and validates a lexicon JSON document. Throws ValidationError on
/// structural problems (empty object list, duplicate template ids, slots that
/// name no known kind, templates without patterns).
Lexicon lexicon_from_json(const nlohmann::json &doc, const std::string &origin);
Lexicon load_lexicon(const std::filesystem::path &path);

/// Resolves a lexicon argument: an explicit path wins; otherwise `name.json`
/// is looked up under the directory given by the VQABIAS_LEXICON_DIR
/// environment variable, then under the built-in data directory if compiled
/// in. Throws IoError when nothing matches.
std::filesystem::path resolve_lexicon_path(const std::string &name_or_path);

}  // namespace vqabias
