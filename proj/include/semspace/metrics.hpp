#pragma once

#include <cmath>

#include <Eigen/Dense>

// Vector metrics over Eigen expressions; the building blocks of the query
// operations.

namespace semspace {

template <typename DerivedA, typename DerivedB>
auto cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    const Scalar denom = a.norm() * b.norm();
    return a.dot(b) / denom;
}

template <typename DerivedA, typename DerivedB>
auto euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
    return (a - b).norm();
}

// sqrt((x - y)^T S^-1 (x - y)) for a precomputed inverse covariance.
template <typename DerivedA, typename DerivedB, typename DerivedC>
auto mahalanobis_distance(const Eigen::MatrixBase<DerivedA>& a,
                          const Eigen::MatrixBase<DerivedB>& b,
                          const Eigen::MatrixBase<DerivedC>& inverse_covariance) {
    using Scalar = typename DerivedA::Scalar;
    const auto diff = (a - b).eval();
    const Scalar quad = diff.dot(inverse_covariance * diff);
    return std::sqrt(std::max(quad, Scalar(0)));
}

}  // namespace semspace
