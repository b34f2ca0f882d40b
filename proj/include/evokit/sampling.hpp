#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace evokit {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Seed from EVOLUTE_KIT_SEED when set, kDefaultSeed otherwise.
inline std::uint64_t seed_from_env() {
  const char* text = std::getenv("EVOLUTE_KIT_SEED");
  if (text == nullptr || *text == '\0') return kDefaultSeed;
  try {
    if (!std::isdigit(static_cast<unsigned char>(*text))) throw std::invalid_argument(text);
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != std::string(text).size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, std::string("EVOLUTE_KIT_SEED is not an unsigned integer: ") + text);
  }
}

/// n ordered pairs (a, b), a < b, drawn uniformly from [lo, hi].
/// Uses raw engine output so that sequences match across standard libraries.
inline std::vector<std::pair<double, double>> random_pairs(double lo, double hi, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&] { return lo + (hi - lo) * static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  while (out.size() < n) {
    double a = uniform(), b = uniform();
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace evokit
