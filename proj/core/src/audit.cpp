#include "cur/eigen.hpp"
#include "cur/audit.hpp"

namespace cur::audit {
namespace {
thread_local DenseAllocationScope* active_scope = nullptr;
}

DenseAllocationScope::DenseAllocationScope(std::ptrdiff_t threshold)
    : threshold_(threshold), previous_(active_scope) {
  active_scope = this;
}

DenseAllocationScope::~DenseAllocationScope() { active_scope = previous_; }

void DenseAllocationScope::note(std::ptrdiff_t size) noexcept {
  if (size <= 0) return;
  ++count_;
  if (size > largest_) largest_ = size;
  if (threshold_ >= 0 && size >= threshold_) ++over_threshold_;
}

}  // namespace cur::audit

void Eigen::cur_note_dense_allocation(std::ptrdiff_t size) noexcept {
  if (auto* scope = cur::audit::active_scope) scope->note(size);
}
