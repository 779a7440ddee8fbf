// Copyright 2026 The ddregister Authors
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

#ifndef DDREG_NUMERICS_HPP
#define DDREG_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace ddreg {

/// Golden-section search for a minimum of f on [a, b]; returns the abscissa.
double golden_section_minimize(const std::function<double(double)> &f, double a, double b,
                               double tol = 1e-9);

/// Evenly spaced grid from lo to hi (inclusive, within half a step).
std::vector<double> linspace_step(double lo, double hi, double step);

/// Round half away from zero, as an int.
int round_half_away(double x);

/// x mod 2pi in [0, 2pi).
double wrap_two_pi(double x);

/// Thread count: explicit request if > 0, else DDREGISTER_THREADS, else hardware.
int resolve_threads(int requested = 0);

/// Process-wide default used by scans when no explicit count is passed.
void set_default_threads(int n);
int default_threads();

/// Calls fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into preallocated slots so the
/// output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, int threads = 0);

}  // namespace ddreg

#endif
