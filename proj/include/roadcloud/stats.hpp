/*
 * Copyright 2026 The roadcloud Authors
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

#include <cmath>
#include <cstddef>
#include <span>

namespace roadcloud {

/// Point estimate with a 95% confidence-interval half width.
struct Estimate {
    double mean = 0.0;
    double ci_half_width = 0.0;
};

namespace stats {

/// Two-sided 95% Student-t critical value (0.975 quantile) for the given
/// degrees of freedom. Tabulated through 30 df, Cornish-Fisher expansion
/// around the normal quantile beyond.
inline double student_t_975(int df) {
    static constexpr double table[30] = {
        12.7062, 4.3027, 3.1824, 2.7764, 2.5706, 2.4469, 2.3646, 2.3060,
        2.2622,  2.2281, 2.2010, 2.1788, 2.1604, 2.1448, 2.1314, 2.1199,
        2.1098,  2.1009, 2.0930, 2.0860, 2.0796, 2.0739, 2.0687, 2.0639,
        2.0595,  2.0555, 2.0518, 2.0484, 2.0452, 2.0423};
    if (df < 1) {
        return 0.0;
    }
    if (df <= 30) {
        return table[df - 1];
    }
    const double z = 1.959963984540054;
    const double z3 = z * z * z;
    const double z5 = z3 * z * z;
    const double n = static_cast<double>(df);
    return z + (z3 + z) / (4.0 * n) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * n * n);
}

/// Mean and 95% CI half width over independent replications. A single
/// observation (or none) yields a zero-width interval.
inline Estimate summarize(std::span<const double> samples) {
    Estimate est;
    const std::size_t n = samples.size();
    if (n == 0) {
        return est;
    }
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    est.mean = sum / static_cast<double>(n);
    if (n < 2) {
        return est;
    }
    double ss = 0.0;
    for (double x : samples) {
        const double d = x - est.mean;
        ss += d * d;
    }
    const double variance = ss / static_cast<double>(n - 1);
    est.ci_half_width =
        student_t_975(static_cast<int>(n) - 1) * std::sqrt(variance / static_cast<double>(n));
    return est;
}

} // namespace stats
} // namespace roadcloud
