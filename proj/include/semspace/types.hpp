#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace semspace {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Document-term matrices are column compressed: one column per term.
template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

using Real = double;
using RealMatrix = DenseMatrix<Real>;
using RealVector = DenseVector<Real>;
using RealSparse = SparseMatrix<Real>;

}  // namespace semspace
