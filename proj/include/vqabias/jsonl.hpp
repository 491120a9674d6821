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
#include <string>

#include "vqabias/sample.hpp"

namespace vqabias {

/// Loads a JSONL dataset. One object per line with required string fields
/// sample_id, image_id, question, answer and optional question_type, split.
/// Malformed lines and duplicate sample ids raise ValidationError with the
/// line number; unreadable files raise IoError.
SampleSet load_dataset(const std::filesystem::path &path);
SampleSet dataset_from_jsonl(const std::string &text, const std::string &origin);

/// Loads predictions: one object per line with sample_id, predicted_answer
/// and optional run_id (first one seen names the run; conflicting run ids
/// are an error, as are duplicate sample ids).
PredictionSet load_predictions(const std::filesystem::path &path);
PredictionSet predictions_from_jsonl(const std::string &text, const std::string &origin);

std::string dataset_to_jsonl(const SampleSet &set);
std::string predictions_to_jsonl(const PredictionSet &preds);

void write_dataset(const SampleSet &set, const std::filesystem::path &path);
void write_predictions(const PredictionSet &preds, const std::filesystem::path &path);

/// Reads a whole file (IoError on failure) / writes one (parents created).
std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &content);

}  // namespace vqabias
