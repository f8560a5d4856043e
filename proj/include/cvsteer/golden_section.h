// Copyright 2026 The cvsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVSTEER_GOLDEN_SECTION_H
#define CVSTEER_GOLDEN_SECTION_H

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cvsteer {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Golden-section search for a minimum of f on [lo, hi], stopping once the
/// bracket is narrower than `tolerance`. f is assumed unimodal on the bracket.
template <typename F>
ScalarMinimum golden_section_minimize(F &&f, double lo, double hi, double tolerance) {
    if (!(lo <= hi)) {
        throw std::invalid_argument("golden_section_minimize: empty bracket");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("golden_section_minimize: tolerance must be positive");
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    ScalarMinimum out;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    out.evaluations = 2;
    while (hi - lo > tolerance) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        ++out.evaluations;
    }
    if (fc <= fd) {
        out.x = c;
        out.value = fc;
    } else {
        out.x = d;
        out.value = fd;
    }
    return out;
}

}  // namespace cvsteer

#endif
