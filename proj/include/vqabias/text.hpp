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

namespace vqabias {

/// Canonical text form: ASCII lowercase, whitespace runs collapsed to a single
/// space, leading/trailing whitespace removed. Question marks and other
/// punctuation are preserved (template patterns carry them).
std::string normalize_text(std::string_view s);

/// Canonical answer form: same pipeline as normalize_text. Alias folding
/// (e.g. answer spelling variants) is applied separately by the lexicon.
std::string normalize_answer(std::string_view s);

/// Bag-of-words tokens: lowercase, split on any non-alphanumeric byte,
/// numerals kept as tokens.
std::vector<std::string> tokenize(std::string_view s);

}  // namespace vqabias
