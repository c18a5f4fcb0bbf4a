#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace egocap {

// Counter-based randomness: every draw is a pure function of its key, so
// results do not depend on evaluation order or thread scheduling.

inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_key(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x6a09e667f3bcc909ull;
  for (uint64_t p : parts) h = mix64(h ^ (p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
  return h;
}

inline double u01(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

inline double uniform(std::initializer_list<uint64_t> key) { return u01(hash_key(key)); }

inline uint64_t uniform_index(std::initializer_list<uint64_t> key, uint64_t n) {
  uint64_t i = static_cast<uint64_t>(u01(hash_key(key)) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

inline double normal(std::initializer_list<uint64_t> key) {
  uint64_t h = hash_key(key);
  double u1 = u01(mix64(h ^ 0xdeadbeefcafef00dull));
  double u2 = u01(mix64(h ^ 0x5bf0a8b1451ebee1ull));
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Named sub-streams keeping independent uses of one seed decorrelated.
enum RngStream : uint64_t {
  kStreamPixels = 1,
  kStreamDrop = 2,
  kStreamPose = 3,
  kStreamScene = 4,
};

}  // namespace egocap
