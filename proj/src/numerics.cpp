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

#include "ddreg/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "ddreg/spin_core.hpp"

namespace ddreg {

namespace {
std::atomic<int> g_default_threads{0};
}

double golden_section_minimize(const std::function<double(double)> &f, double a, double b,
                               double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0)) {
    throw ValidationError("grid step must be positive");
  }
  if (hi < lo) {
    throw ValidationError("grid upper bound below lower bound");
  }
  std::vector<double> out;
  auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5 + 1e-9));
  for (long i = 0; i <= n; ++i) {
    out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

int round_half_away(double x) {
  return static_cast<int>(x < 0 ? -std::floor(-x + 0.5) : std::floor(x + 0.5));
}

double wrap_two_pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) {
    r += kTwoPi;
  }
  return r;
}

int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (int d = g_default_threads.load(); d > 0) {
    return d;
  }
  if (const char *env = std::getenv("DDREGISTER_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n > 0) {
        return n;
      }
    } catch (const std::exception &) {
    }
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_threads(int n) { g_default_threads.store(std::max(0, n)); }

int default_threads() { return resolve_threads(0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn, int threads) {
  int workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) {
          return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
          next.store(n);
        }
      }
    });
  }
  for (auto &t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace ddreg
