#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cotlab {

using Rng = std::mt19937_64;

/// Uniform double in [lo, hi) built directly from the generator so the
/// stream is identical across standard library implementations.
inline double rand_uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

inline int rand_int(Rng& rng, int lo, int hi) {  // inclusive range
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Exact textual encoding of a double (C hex-float), for bit-faithful
/// round trips through JSON/CSV.
inline std::string hex_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    throw std::invalid_argument("bad numeric literal: " + s);
  return v;
}

/// Worker cap for grid sweeps and theorem draws. COTANGENT_LAB_THREADS
/// overrides the hardware count; values < 1 mean serial.
inline unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("COTANGENT_LAB_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    if (static_cast<unsigned>(v) < hw) hw = static_cast<unsigned>(v);
  }
  return hw;
}

/// Runs fn(0..count-1); results must be written into caller-owned slots so
/// assembly order is deterministic regardless of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (workers > count) workers = static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace cotlab
