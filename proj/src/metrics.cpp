#include "huap/metrics.hpp"

namespace huap {

OpCounts& thread_op_counts() {
  thread_local OpCounts counts;
  return counts;
}

}  // namespace huap
