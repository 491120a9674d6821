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

#include "vqabias/lexicon.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "vqabias/common.hpp"
#include "vqabias/jsonl.hpp"
#include "vqabias/text.hpp"

namespace vqabias {

namespace {

std::vector<PatternSegment> compile_pattern(const std::string &pattern, const std::string &context) {
    std::vector<PatternSegment> segments;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        std::size_t open = pattern.find('{', pos);
        if (open == std::string::npos) {
            segments.push_back({PatternSegment::Kind::literal, pattern.substr(pos), ""});
            break;
        }
        if (open > pos)
            segments.push_back({PatternSegment::Kind::literal, pattern.substr(pos, open - pos), ""});
        std::size_t close = pattern.find('}', open);
        if (close == std::string::npos)
            throw ValidationError(context + ": unterminated slot in pattern '" + pattern + "'");
        std::string slot = pattern.substr(open + 1, close - open - 1);
        PatternSegment seg;
        seg.slot_name = slot;
        if (slot == "obj" || slot == "obj2") {
            seg.kind = PatternSegment::Kind::object_slot;
        } else if (slot == "attr" || slot == "attr2") {
            seg.kind = PatternSegment::Kind::attribute_slot;
        } else {
            throw ValidationError(context + ": unknown slot '{" + slot + "}' in pattern '" + pattern + "'");
        }
        segments.push_back(std::move(seg));
        pos = close + 1;
    }
    if (segments.empty())
        throw ValidationError(context + ": empty pattern");
    // Adjacent slots with no separating literal would make matches ambiguous.
    for (std::size_t i = 1; i < segments.size(); ++i) {
        bool prev_slot = segments[i - 1].kind != PatternSegment::Kind::literal;
        bool this_slot = segments[i].kind != PatternSegment::Kind::literal;
        if (prev_slot && this_slot)
            throw ValidationError(context + ": adjacent slots without literal text in pattern '" + pattern + "'");
    }
    return segments;
}

void build_form_index(Lexicon &lex) {
    for (const ObjectEntry &obj : lex.objects) {
        lex.object_forms.push_back({obj.singular, obj.singular});
        if (!obj.plural.empty()) lex.object_forms.push_back({obj.plural, obj.singular});
    }
    for (const std::string &attr : lex.attributes) lex.attribute_forms.push_back({attr, attr});
    auto by_length = [](const Lexicon::FormEntry &a, const Lexicon::FormEntry &b) {
        return a.form.size() > b.form.size();
    };
    // stable: equal lengths keep lexicon order
    std::stable_sort(lex.object_forms.begin(), lex.object_forms.end(), by_length);
    std::stable_sort(lex.attribute_forms.begin(), lex.attribute_forms.end(), by_length);
}

}  // namespace

std::string Lexicon::canonical_answer(const std::string &raw) const {
    std::string norm = normalize_answer(raw);
    auto it = answer_aliases.find(norm);
    return it == answer_aliases.end() ? norm : it->second;
}

Lexicon lexicon_from_json(const nlohmann::json &doc, const std::string &origin) {
    if (!doc.is_object()) throw ValidationError(origin + ": lexicon document must be a JSON object");
    Lexicon lex;
    lex.name = doc.value("name", "");

    if (!doc.contains("objects") || !doc["objects"].is_array() || doc["objects"].empty())
        throw ValidationError(origin + ": lexicon needs a non-empty 'objects' array");
    std::set<std::string> seen_forms;
    for (const auto &entry : doc["objects"]) {
        ObjectEntry obj;
        if (entry.is_string()) {
            obj.singular = normalize_text(entry.get<std::string>());
        } else if (entry.is_object()) {
            obj.singular = normalize_text(entry.value("singular", ""));
            obj.plural = normalize_text(entry.value("plural", ""));
        } else {
            throw ValidationError(origin + ": object entries must be strings or {singular, plural} objects");
        }
        if (obj.singular.empty()) throw ValidationError(origin + ": object with empty singular form");
        if (!seen_forms.insert(obj.singular).second)
            throw ValidationError(origin + ": duplicate object form '" + obj.singular + "'");
        if (!obj.plural.empty() && obj.plural != obj.singular && !seen_forms.insert(obj.plural).second)
            throw ValidationError(origin + ": duplicate object form '" + obj.plural + "'");
        lex.objects.push_back(std::move(obj));
    }

    if (doc.contains("attributes")) {
        for (const auto &entry : doc["attributes"]) {
            if (!entry.is_string()) throw ValidationError(origin + ": attributes must be strings");
            std::string attr = normalize_text(entry.get<std::string>());
            if (attr.empty()) throw ValidationError(origin + ": empty attribute");
            lex.attributes.push_back(std::move(attr));
        }
    }

    if (!doc.contains("templates") || !doc["templates"].is_array() || doc["templates"].empty())
        throw ValidationError(origin + ": lexicon needs a non-empty 'templates' array");
    std::set<std::string> seen_ids;
    for (const auto &entry : doc["templates"]) {
        if (!entry.is_object()) throw ValidationError(origin + ": template entries must be objects");
        TemplateSpec tpl;
        tpl.id = entry.value("id", "");
        tpl.pattern = normalize_text(entry.value("pattern", ""));
        tpl.question_type = entry.value("question_type", "");
        tpl.relation = entry.value("relation", "");
        if (tpl.id.empty()) throw ValidationError(origin + ": template without id");
        if (!seen_ids.insert(tpl.id).second)
            throw ValidationError(origin + ": duplicate template id '" + tpl.id + "'");
        if (tpl.question_type.empty())
            throw ValidationError(origin + ": template '" + tpl.id + "' without question_type");
        tpl.segments = compile_pattern(tpl.pattern, origin + ": template '" + tpl.id + "'");
        lex.templates.push_back(std::move(tpl));
    }

    if (doc.contains("answer_aliases")) {
        if (!doc["answer_aliases"].is_object())
            throw ValidationError(origin + ": answer_aliases must be an object");
        for (const auto &[variant, canonical] : doc["answer_aliases"].items()) {
            if (!canonical.is_string())
                throw ValidationError(origin + ": alias target for '" + variant + "' must be a string");
            lex.answer_aliases[normalize_answer(variant)] = normalize_answer(canonical.get<std::string>());
        }
    }

    build_form_index(lex);
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path &path) {
    std::string text = read_text_file(path);
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ValidationError(path.string() + ": not valid JSON");
    return lexicon_from_json(doc, path.string());
}

std::filesystem::path resolve_lexicon_path(const std::string &name_or_path) {
    namespace fs = std::filesystem;
    fs::path direct(name_or_path);
    if (fs::exists(direct) && fs::is_regular_file(direct)) return direct;

    std::vector<fs::path> dirs;
    if (const char *env = std::getenv("VQABIAS_LEXICON_DIR")) dirs.emplace_back(env);
#ifdef VQABIAS_DATA_DIR
    dirs.emplace_back(fs::path(VQABIAS_DATA_DIR) / "lexicons");
#endif
    std::string file = name_or_path;
    if (file.size() < 5 || file.substr(file.size() - 5) != ".json") file += ".json";
    for (const fs::path &dir : dirs) {
        fs::path candidate = dir / file;
        if (fs::exists(candidate) && fs::is_regular_file(candidate)) return candidate;
    }
    throw IoError("lexicon not found: '" + name_or_path +
                  "' (tried the literal path and VQABIAS_LEXICON_DIR)");
}

}  // namespace vqabias
