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

#include "vqabias/common.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace vqabias {

double Ratio::value() const {
    if (!defined()) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(num) / static_cast<double>(den);
}

bool same_quotient(const Ratio &a, const Ratio &b) {
    if (!a.defined() || !b.defined()) return false;
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
}

namespace {

// Percentage with two decimals == number of 1/10000 units ("basis points").
// Rounds a non-negative integer quotient basis/den half to even.
std::int64_t rounded_basis_points(__int128 basis, std::int64_t den) {
    __int128 q = basis / den;
    __int128 r = basis % den;
    if (2 * r > den || (2 * r == den && (q % 2) != 0)) ++q;
    return static_cast<std::int64_t>(q);
}

std::string basis_points_to_string(std::int64_t bp, bool negative) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", negative ? "-" : "",
                  static_cast<long long>(bp / 100), static_cast<long long>(bp % 100));
    return buf;
}

}  // namespace

std::string format_percent(const Ratio &r) {
    if (!r.defined()) return "n/a";
    bool negative = (r.num < 0) != (r.den < 0) && r.num != 0;
    std::int64_t num = r.num < 0 ? -r.num : r.num;
    std::int64_t den = r.den < 0 ? -r.den : r.den;
    __int128 basis = static_cast<__int128>(num) * 10000;
    return basis_points_to_string(rounded_basis_points(basis, den), negative);
}

std::string format_percent(double v) {
    if (std::isnan(v)) return "n/a";
    // nearbyint uses the current rounding mode, which defaults to
    // round-to-nearest-even, matching the exact integer path.
    double scaled = std::nearbyint(v * 10000.0);
    bool negative = scaled < 0;
    auto bp = static_cast<std::int64_t>(negative ? -scaled : scaled);
    return basis_points_to_string(bp, negative);
}

double percent_value(const Ratio &r) {
    if (!r.defined()) return std::numeric_limits<double>::quiet_NaN();
    bool negative = (r.num < 0) != (r.den < 0) && r.num != 0;
    std::int64_t num = r.num < 0 ? -r.num : r.num;
    std::int64_t den = r.den < 0 ? -r.den : r.den;
    __int128 basis = static_cast<__int128>(num) * 10000;
    double bp = static_cast<double>(rounded_basis_points(basis, den));
    return (negative ? -bp : bp) / 100.0;
}

std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "n/a";
    double scale = std::pow(10.0, decimals);
    double scaled = std::nearbyint(v * scale);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, scaled / scale);
    return buf;
}

}  // namespace vqabias
