#pragma once

#include <cstdint>
#include <string_view>

namespace fermiopt {

// Counter-based generator: draw i of stream (name, key) is a pure function
// of its arguments, so instances do not depend on draw order or threads.
class CounterRng {
public:
  CounterRng(std::string_view name, std::uint64_t seed, std::uint64_t salt = 0);

  std::uint64_t bits(std::uint64_t counter) const;
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform(std::uint64_t counter) const;
  // Standard normal by inverse CDF of uniform(counter).
  double normal(std::uint64_t counter) const;
  // +1 or -1.
  int rademacher(std::uint64_t counter) const;

  std::uint64_t key() const { return key_; }

private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Sequential convenience wrapper for code that just needs "the next draw".
class RngStream {
public:
  RngStream(std::string_view name, std::uint64_t seed, std::uint64_t salt = 0)
      : rng_(name, seed, salt) {}
  std::uint64_t bits() { return rng_.bits(ctr_++); }
  double uniform() { return rng_.uniform(ctr_++); }
  double normal() { return rng_.normal(ctr_++); }
  int rademacher() { return rng_.rademacher(ctr_++); }

private:
  CounterRng rng_;
  std::uint64_t ctr_ = 0;
};

} // namespace fermiopt
