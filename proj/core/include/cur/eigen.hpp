#pragma once

// Every translation unit in this project must see Eigen through this header so
// that the dense-storage constructor hook below is installed consistently.

#if defined(EIGEN_CORE_H) && !defined(CUR_EIGEN_AUDIT_INSTALLED)
#error "cur/eigen.hpp must be included before any Eigen header"
#endif

#ifndef CUR_EIGEN_AUDIT_INSTALLED
#define CUR_EIGEN_AUDIT_INSTALLED

#include <cstddef>

namespace Eigen {
// Defined in audit.cpp; called with the element count of every dynamic dense
// allocation Eigen performs.
void cur_note_dense_allocation(std::ptrdiff_t size) noexcept;
}  // namespace Eigen

#define EIGEN_DENSE_STORAGE_CTOR_PLUGIN ::Eigen::cur_note_dense_allocation(static_cast<std::ptrdiff_t>(size));

#endif

#include <Eigen/Core>
#include <Eigen/Dense>
#include <Eigen/SparseCore>
