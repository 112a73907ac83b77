#pragma once

#include <cstdint>

namespace huap {

// Per-thread tallies of the group operations performed through the public
// algebra API. Internal arithmetic (hash-to-curve, decoding checks) is not
// counted.
struct OpCounts {
  std::uint64_t exp_g = 0;    // E_G
  std::uint64_t exp_gt = 0;   // E_GT
  std::uint64_t mul_g = 0;    // M_G
  std::uint64_t mul_gt = 0;   // M_GT
  std::uint64_t pairings = 0; // P
  std::uint64_t rand_g = 0;   // R_G

  OpCounts operator-(const OpCounts& o) const {
    return {exp_g - o.exp_g,   exp_gt - o.exp_gt,     mul_g - o.mul_g,
            mul_gt - o.mul_gt, pairings - o.pairings, rand_g - o.rand_g};
  }
  bool operator==(const OpCounts&) const = default;
};

OpCounts& thread_op_counts();

// Captures the operations performed between construction and delta().
class CountScope {
 public:
  CountScope() : start_(thread_op_counts()) {}
  OpCounts delta() const { return thread_op_counts() - start_; }

 private:
  OpCounts start_;
};

// Operations inside the scope are not tallied (internal consistency checks).
class UncountedScope {
 public:
  UncountedScope() : saved_(thread_op_counts()) {}
  ~UncountedScope() { thread_op_counts() = saved_; }
  UncountedScope(const UncountedScope&) = delete;
  UncountedScope& operator=(const UncountedScope&) = delete;

 private:
  OpCounts saved_;
};

}  // namespace huap
