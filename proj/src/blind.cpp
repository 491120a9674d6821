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

#include "vqabias/blind.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "vqabias/common.hpp"
#include "vqabias/jsonl.hpp"
#include "vqabias/text.hpp"

namespace vqabias {

BlindModel train_prior_predictor(const SampleSet &train, const Partition &train_partition,
                                 const Lexicon &lexicon) {
    BlindModel model;
    model.kind = BlindModel::Kind::prior;
    model.lexicon_name = lexicon.name;
    model.priors = fit_priors(train, train_partition, &lexicon);
    return model;
}

BlindModel train_bow_classifier(const SampleSet &train, double alpha, const Lexicon *lexicon) {
    if (train.empty()) throw ValidationError("train_bow_classifier: empty training set");
    if (!(alpha > 0)) throw ValidationError("train_bow_classifier: smoothing alpha must be > 0");
    BlindModel model;
    model.kind = BlindModel::Kind::bow;
    model.alpha = alpha;
    if (lexicon) model.lexicon_name = lexicon->name;

    std::map<std::string, BlindModel::BowClass> classes;
    std::set<std::string> vocab;
    for (const Sample &s : train.samples) {
        std::string answer =
            lexicon ? lexicon->canonical_answer(s.answer) : normalize_answer(s.answer);
        BlindModel::BowClass &cls = classes[answer];
        cls.answer = answer;
        ++cls.doc_count;
        for (std::string &token : tokenize(s.question)) {
            vocab.insert(token);
            ++cls.token_counts[token];
            ++cls.token_total;
        }
    }
    model.vocab_size = static_cast<std::int64_t>(vocab.size());
    model.total_docs = static_cast<std::int64_t>(train.size());
    for (auto &[answer, cls] : classes) model.classes.push_back(std::move(cls));
    return model;
}

double bow_log_posterior(const BlindModel &model, const BlindModel::BowClass &cls,
                         const std::vector<std::string> &tokens) {
    double score = std::log(static_cast<double>(cls.doc_count) /
                            static_cast<double>(model.total_docs));
    double denom = static_cast<double>(cls.token_total) +
                   model.alpha * static_cast<double>(model.vocab_size);
    for (const std::string &token : tokens) {
        auto it = cls.token_counts.find(token);
        std::int64_t count = it == cls.token_counts.end() ? 0 : it->second;
        score += std::log((static_cast<double>(count) + model.alpha) / denom);
    }
    return score;
}

namespace {

std::string predict_bow(const BlindModel &model, const std::string &question,
                        std::set<std::string> *vocab_cache) {
    std::vector<std::string> tokens;
    for (std::string &t : tokenize(question))
        if (vocab_cache->count(t)) tokens.push_back(std::move(t));
    // classes are sorted by answer and only a strictly better score replaces
    // the incumbent, so ties resolve to the lexicographically smallest answer
    std::string best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const BlindModel::BowClass &cls : model.classes) {
        double score = bow_log_posterior(model, cls, tokens);
        if (score > best_score) {
            best_score = score;
            best = cls.answer;
        }
    }
    return best;
}

std::string predict_prior(const BlindModel &model, const std::string &question,
                          const Lexicon *lexicon,
                          std::unordered_map<std::string, std::string> *key_cache) {
    std::string key;
    if (model.priors.granularity == Granularity::all) {
        key = "all";
    } else {
        if (!lexicon)
            throw ValidationError("predict_blind: a prior model at granularity " +
                                  to_string(model.priors.granularity) +
                                  " needs a lexicon to key questions");
        auto it = key_cache->find(question);
        if (it == key_cache->end()) {
            ParsedQuestion parsed = parse_question(question, *lexicon);
            it = key_cache->emplace(question, group_key(parsed, model.priors.granularity)).first;
        }
        key = it->second;
    }
    auto entry = model.priors.entries.find(key);
    return entry == model.priors.entries.end() ? model.priors.fallback_answer : entry->second;
}

}  // namespace

PredictionSet predict_blind(const BlindModel &model, const SampleSet &eval,
                            const Lexicon *lexicon) {
    PredictionSet preds;
    preds.condition = PredictionCondition::blind;
    preds.run_id = model.kind == BlindModel::Kind::prior ? "blind-prior" : "blind-bow";
    preds.entries.reserve(eval.size());

    std::unordered_map<std::string, std::string> key_cache;
    std::set<std::string> vocab;
    std::unordered_map<std::string, std::string> answer_cache;  // question -> prediction
    if (model.kind == BlindModel::Kind::bow)
        for (const BlindModel::BowClass &cls : model.classes)
            for (const auto &[token, count] : cls.token_counts) {
                (void)count;
                vocab.insert(token);
            }

    for (const Sample &s : eval.samples) {
        auto cached = answer_cache.find(s.question);
        if (cached == answer_cache.end()) {
            std::string answer = model.kind == BlindModel::Kind::prior
                                     ? predict_prior(model, s.question, lexicon, &key_cache)
                                     : predict_bow(model, s.question, &vocab);
            cached = answer_cache.emplace(s.question, std::move(answer)).first;
        }
        preds.entries.emplace(s.sample_id, cached->second);
    }
    return preds;
}

void save_blind_model(const BlindModel &model, const std::filesystem::path &path) {
    nlohmann::ordered_json doc;
    doc["kind"] = model.kind == BlindModel::Kind::prior ? "prior" : "bow";
    doc["lexicon_name"] = model.lexicon_name;
    if (model.kind == BlindModel::Kind::prior) {
        nlohmann::ordered_json priors;
        priors["granularity"] = to_string(model.priors.granularity);
        priors["fitted_on"] = to_string(model.priors.fitted_on);
        priors["fallback_answer"] = model.priors.fallback_answer;
        priors["entries"] = model.priors.entries;
        doc["priors"] = std::move(priors);
    } else {
        doc["alpha"] = model.alpha;
        doc["vocab_size"] = model.vocab_size;
        doc["total_docs"] = model.total_docs;
        nlohmann::ordered_json classes = nlohmann::ordered_json::array();
        for (const BlindModel::BowClass &cls : model.classes) {
            nlohmann::ordered_json c;
            c["answer"] = cls.answer;
            c["doc_count"] = cls.doc_count;
            c["token_total"] = cls.token_total;
            c["token_counts"] = cls.token_counts;
            classes.push_back(std::move(c));
        }
        doc["classes"] = std::move(classes);
    }
    write_text_file(path, doc.dump(2) + "\n");
}

BlindModel load_blind_model(const std::filesystem::path &path) {
    nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ValidationError(path.string() + ": not a valid model file");
    BlindModel model;
    std::string kind = doc.value("kind", "");
    model.lexicon_name = doc.value("lexicon_name", "");
    if (kind == "prior") {
        model.kind = BlindModel::Kind::prior;
        const auto &priors = doc.at("priors");
        model.priors.granularity = granularity_from_string(priors.value("granularity", "all"));
        model.priors.fitted_on = split_from_string(priors.value("fitted_on", "unsplit"));
        model.priors.fallback_answer = priors.value("fallback_answer", "");
        for (const auto &[key, answer] : priors.at("entries").items())
            model.priors.entries[key] = answer.get<std::string>();
    } else if (kind == "bow") {
        model.kind = BlindModel::Kind::bow;
        model.alpha = doc.value("alpha", 1.0);
        model.vocab_size = doc.value("vocab_size", std::int64_t{0});
        model.total_docs = doc.value("total_docs", std::int64_t{0});
        for (const auto &entry : doc.at("classes")) {
            BlindModel::BowClass cls;
            cls.answer = entry.value("answer", "");
            cls.doc_count = entry.value("doc_count", std::int64_t{0});
            cls.token_total = entry.value("token_total", std::int64_t{0});
            for (const auto &[token, count] : entry.at("token_counts").items())
                cls.token_counts[token] = count.get<std::int64_t>();
            model.classes.push_back(std::move(cls));
        }
    } else {
        throw ValidationError(path.string() + ": unknown model kind '" + kind + "'");
    }
    return model;
}

}  // namespace vqabias
