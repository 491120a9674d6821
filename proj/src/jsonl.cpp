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

#include "vqabias/jsonl.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "vqabias/common.hpp"

namespace vqabias {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void line_error(const std::string &origin, std::size_t line_no, const std::string &what) {
    throw ValidationError(origin + ":" + std::to_string(line_no) + ": " + what);
}

std::string require_string(const ordered_json &obj, const char *field, const std::string &origin,
                           std::size_t line_no) {
    auto it = obj.find(field);
    if (it == obj.end()) line_error(origin, line_no, std::string("missing field '") + field + "'");
    if (!it->is_string()) line_error(origin, line_no, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

std::string optional_string(const ordered_json &obj, const char *field, const std::string &origin,
                            std::size_t line_no) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) return "";
    if (!it->is_string()) line_error(origin, line_no, std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
}

ordered_json parse_line(const std::string &line, const std::string &origin, std::size_t line_no) {
    ordered_json obj = ordered_json::parse(line, nullptr, false);
    if (obj.is_discarded()) line_error(origin, line_no, "not valid JSON");
    if (!obj.is_object()) line_error(origin, line_no, "line is not a JSON object");
    return obj;
}

// Iterates non-empty lines of `text`, calling fn(line, line_no).
template <typename Fn>
void for_each_line(const std::string &text, Fn &&fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        ++line_no;
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (!blank) fn(line, line_no);
        if (end == text.size()) break;
        start = end + 1;
    }
}

}  // namespace

SampleSet dataset_from_jsonl(const std::string &text, const std::string &origin) {
    SampleSet set;
    std::unordered_set<std::string> seen;
    bool first = true;
    bool uniform_split = true;
    for_each_line(text, [&](const std::string &line, std::size_t line_no) {
        ordered_json obj = parse_line(line, origin, line_no);
        Sample s;
        s.sample_id = require_string(obj, "sample_id", origin, line_no);
        s.image_id = require_string(obj, "image_id", origin, line_no);
        s.question = require_string(obj, "question", origin, line_no);
        s.answer = require_string(obj, "answer", origin, line_no);
        s.question_type = optional_string(obj, "question_type", origin, line_no);
        std::string split = optional_string(obj, "split", origin, line_no);
        try {
            s.split = split_from_string(split);
        } catch (const ValidationError &e) {
            line_error(origin, line_no, e.what());
        }
        if (!seen.insert(s.sample_id).second)
            line_error(origin, line_no, "duplicate sample_id '" + s.sample_id + "'");
        if (first) {
            set.source_split = s.split;
            first = false;
        } else if (s.split != set.source_split) {
            uniform_split = false;
        }
        set.samples.push_back(std::move(s));
    });
    if (!uniform_split) set.source_split = Split::unsplit;
    return set;
}

SampleSet load_dataset(const std::filesystem::path &path) {
    return dataset_from_jsonl(read_text_file(path), path.string());
}

PredictionSet predictions_from_jsonl(const std::string &text, const std::string &origin) {
    PredictionSet preds;
    for_each_line(text, [&](const std::string &line, std::size_t line_no) {
        ordered_json obj = parse_line(line, origin, line_no);
        std::string id = require_string(obj, "sample_id", origin, line_no);
        std::string answer = require_string(obj, "predicted_answer", origin, line_no);
        std::string run = optional_string(obj, "run_id", origin, line_no);
        if (!run.empty()) {
            if (preds.run_id.empty()) {
                preds.run_id = run;
            } else if (preds.run_id != run) {
                line_error(origin, line_no,
                           "conflicting run_id '" + run + "' (file started as '" + preds.run_id + "')");
            }
        }
        if (!preds.entries.emplace(std::move(id), std::move(answer)).second)
            line_error(origin, line_no, "duplicate sample_id in predictions");
    });
    return preds;
}

PredictionSet load_predictions(const std::filesystem::path &path) {
    return predictions_from_jsonl(read_text_file(path), path.string());
}

std::string dataset_to_jsonl(const SampleSet &set) {
    std::string out;
    for (const Sample &s : set.samples) {
        ordered_json obj;
        obj["sample_id"] = s.sample_id;
        obj["image_id"] = s.image_id;
        obj["question"] = s.question;
        obj["answer"] = s.answer;
        if (!s.question_type.empty()) obj["question_type"] = s.question_type;
        if (s.split != Split::unsplit) obj["split"] = to_string(s.split);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::string predictions_to_jsonl(const PredictionSet &preds) {
    // Deterministic output: entries sorted by sample_id.
    std::vector<const std::pair<const std::string, std::string> *> rows;
    rows.reserve(preds.entries.size());
    for (const auto &kv : preds.entries) rows.push_back(&kv);
    std::sort(rows.begin(), rows.end(), [](auto *a, auto *b) { return a->first < b->first; });
    std::string out;
    for (const auto *kv : rows) {
        ordered_json obj;
        obj["sample_id"] = kv->first;
        obj["predicted_answer"] = kv->second;
        if (!preds.run_id.empty()) obj["run_id"] = preds.run_id;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

void write_dataset(const SampleSet &set, const std::filesystem::path &path) {
    write_text_file(path, dataset_to_jsonl(set));
}

void write_predictions(const PredictionSet &preds, const std::filesystem::path &path) {
    write_text_file(path, predictions_to_jsonl(preds));
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return buf.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace vqabias
