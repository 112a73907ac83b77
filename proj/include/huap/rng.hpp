#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace huap {

// ChaCha20 keystream generator. Seeded instances are reproducible; the
// default constructor keys from the operating system.
class Rng {
 public:
  Rng();
  explicit Rng(std::uint64_t seed);
  // Independent stream derived from (seed, label), e.g. one per actor.
  Rng(std::uint64_t seed, std::string_view label);
  ~Rng();

  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  Rng(Rng&& other) noexcept;
  Rng& operator=(Rng&& other) noexcept;

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  // Uniform in [0, bound).
  std::uint64_t uniform(std::uint64_t bound);

 private:
  void init(std::span<const std::uint8_t, 32> key);
  void refill();

  void* ctx_ = nullptr;
  std::array<std::uint8_t, 256> buffer_{};
  std::size_t pos_ = 256;
};

}  // namespace huap
