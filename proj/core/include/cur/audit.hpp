#pragma once

#include <cstddef>

namespace cur::audit {

/// Records dense allocations made while alive (on this thread).
///
/// Every dynamic Eigen dense matrix or vector constructed or resized reports
/// its element count; the scope tracks the largest one and how many exceeded
/// an optional threshold. Scopes nest; the innermost one receives the events.
class DenseAllocationScope {
 public:
  explicit DenseAllocationScope(std::ptrdiff_t threshold = -1);
  ~DenseAllocationScope();
  DenseAllocationScope(const DenseAllocationScope&) = delete;
  DenseAllocationScope& operator=(const DenseAllocationScope&) = delete;

  std::ptrdiff_t largest() const noexcept { return largest_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t over_threshold() const noexcept { return over_threshold_; }

  void note(std::ptrdiff_t size) noexcept;

 private:
  std::ptrdiff_t threshold_;
  std::ptrdiff_t largest_ = 0;
  std::size_t count_ = 0;
  std::size_t over_threshold_ = 0;
  DenseAllocationScope* previous_;
};

}  // namespace cur::audit
