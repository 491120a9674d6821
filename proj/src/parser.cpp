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

#include "vqabias/parser.hpp"

#include <utility>

#include "vqabias/common.hpp"
#include "vqabias/text.hpp"

namespace vqabias {

namespace {

using Fill = std::pair<std::string, std::string>;  // slot name -> canonical value

// Recursive descent over the compiled segments with backtracking across slot
// candidates. Candidate lists are pre-sorted longest form first, so the first
// full match realizes the longest-match tie-break.
bool match_segments(const std::vector<PatternSegment> &segs, std::size_t seg_idx,
                    const std::string &text, std::size_t pos, const Lexicon &lex,
                    std::vector<Fill> &fills) {
    if (seg_idx == segs.size()) return pos == text.size();
    const PatternSegment &seg = segs[seg_idx];
    if (seg.kind == PatternSegment::Kind::literal) {
        if (text.compare(pos, seg.text.size(), seg.text) != 0) return false;
        return match_segments(segs, seg_idx + 1, text, pos + seg.text.size(), lex, fills);
    }
    const auto &forms = seg.kind == PatternSegment::Kind::object_slot ? lex.object_forms
                                                                      : lex.attribute_forms;
    for (const Lexicon::FormEntry &entry : forms) {
        if (text.compare(pos, entry.form.size(), entry.form) != 0) continue;
        fills.emplace_back(seg.slot_name, entry.canonical);
        if (match_segments(segs, seg_idx + 1, text, pos + entry.form.size(), lex, fills))
            return true;
        fills.pop_back();
    }
    return false;
}

std::string fill_value(const std::vector<Fill> &fills, const std::string &name) {
    for (const Fill &f : fills)
        if (f.first == name) return f.second;
    return "";
}

}  // namespace

ParsedQuestion parse_question(std::string_view question, const Lexicon &lexicon) {
    ParsedQuestion result;
    result.normalized_text = normalize_text(question);
    result.question_type = kUnparsedType;
    result.pattern_id = kUnparsedKey;

    for (const TemplateSpec &tpl : lexicon.templates) {
        std::vector<Fill> fills;
        if (!match_segments(tpl.segments, 0, result.normalized_text, 0, lexicon, fills)) continue;
        result.question_type = tpl.question_type;
        result.pattern_id = tpl.id;
        result.relation = tpl.relation;
        std::string obj = fill_value(fills, "obj");
        if (!obj.empty()) result.objects.push_back({obj, fill_value(fills, "attr")});
        std::string obj2 = fill_value(fills, "obj2");
        if (!obj2.empty()) result.objects.push_back({obj2, fill_value(fills, "attr2")});
        break;  // first matching template wins
    }
    return result;
}

Granularity granularity_from_string(const std::string &s) {
    if (s == "all") return Granularity::all;
    if (s == "question_type") return Granularity::question_type;
    if (s == "pattern") return Granularity::pattern;
    if (s == "object") return Granularity::object;
    if (s == "object_with_attribute") return Granularity::object_with_attribute;
    if (s == "question_text") return Granularity::question_text;
    throw ValidationError("unknown granularity '" + s +
                          "' (expected all|question_type|pattern|object|object_with_attribute|question_text)");
}

std::string to_string(Granularity g) {
    switch (g) {
        case Granularity::all: return "all";
        case Granularity::question_type: return "question_type";
        case Granularity::pattern: return "pattern";
        case Granularity::object: return "object";
        case Granularity::object_with_attribute: return "object_with_attribute";
        case Granularity::question_text: return "question_text";
    }
    return "all";
}

const std::vector<Granularity> &all_granularities() {
    static const std::vector<Granularity> order = {
        Granularity::all,           Granularity::question_type,
        Granularity::pattern,       Granularity::object,
        Granularity::object_with_attribute, Granularity::question_text,
    };
    return order;
}

std::string group_key(const ParsedQuestion &q, Granularity g) {
    if (g == Granularity::all) return "all";
    if (g == Granularity::question_type) return q.question_type;
    if (!q.parsed()) return kUnparsedKey;
    switch (g) {
        case Granularity::pattern:
            return q.pattern_id;
        case Granularity::object: {
            // Embeds the pattern id so object keys refine pattern keys even
            // when several templates share a question type.
            std::string key = q.pattern_id;
            for (std::size_t i = 0; i < q.objects.size(); ++i)
                key += (i == 0 ? "|" : "+") + q.objects[i].object;
            return key;
        }
        case Granularity::object_with_attribute: {
            std::string key = q.pattern_id;
            for (std::size_t i = 0; i < q.objects.size(); ++i) {
                const ParsedObject &obj = q.objects[i];
                key += (i == 0 ? "|" : "+");
                if (!obj.attribute.empty()) key += obj.attribute + " ";
                key += obj.object;
            }
            return key;
        }
        case Granularity::question_text:
            return q.normalized_text;
        default:
            return "all";
    }
}

}  // namespace vqabias
