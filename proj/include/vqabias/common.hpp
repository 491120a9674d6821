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
#include <stdexcept>
#include <string>

namespace vqabias {

/// Input or configuration problem; the CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Filesystem problem; the CLI maps this to exit code 2.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Exact ratio of integer counts. Accuracy-like statistics stay in this form
/// until they are rendered, so aggregation never accumulates float rounding.
/// den == 0 marks an undefined cell (e.g. an empty group).
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 0;

    constexpr bool defined() const { return den != 0; }
    double value() const;

    /// Field-wise equality: used by the bit-exactness tests, which require the
    /// same counts, not merely the same quotient.
    friend bool operator==(const Ratio &, const Ratio &) = default;
};

/// True when a/b == c/d as rational numbers (cross multiplication in 128 bit).
bool same_quotient(const Ratio &a, const Ratio &b);

/// Renders a ratio as a percentage with two decimals, round half to even,
/// computed in integer arithmetic so the result is exact. Undefined ratios
/// render as "n/a".
std::string format_percent(const Ratio &r);

/// Same rendering for values that only exist as doubles (IO metrics, means).
/// `v` is a proportion in [0, 1]-ish space; negative values are permitted.
std::string format_percent(double v);

/// Numeric value of the two-decimal percentage rendering (for comparisons).
double percent_value(const Ratio &r);

/// Fixed-point rendering with `decimals` places, round half to even.
std::string format_fixed(double v, int decimals);

}  // namespace vqabias
