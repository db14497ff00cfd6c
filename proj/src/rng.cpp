#include "fermiopt/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace fermiopt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_name(std::string_view name) {
  // FNV-1a; only used to separate named streams.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

CounterRng::CounterRng(std::string_view name, std::uint64_t seed, std::uint64_t salt)
    : key_(splitmix64(splitmix64(hash_name(name) ^ seed) ^ splitmix64(salt + 0x5851F42D4C957F2DULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(key_ ^ splitmix64(counter));
}

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  return boost::math::quantile(std_normal, uniform(counter));
}

int CounterRng::rademacher(std::uint64_t counter) const {
  return (bits(counter) >> 63) ? 1 : -1;
}

} // namespace fermiopt
