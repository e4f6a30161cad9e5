#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace skewdim {

/// Largest torus dimension handled by the library.
inline constexpr int kMaxDim = 6;

template <typename Scalar>
using VectorK = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

template <typename Scalar>
using MatrixK = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Vec = VectorK<double>;
using Mat = MatrixK<double>;
using IntVec = VectorK<std::int64_t>;
using IntMat = MatrixK<std::int64_t>;

}  // namespace skewdim
