#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "semspace/errors.hpp"
#include "semspace/types.hpp"

// Truncated SVD of a sparse matrix by Lanczos bidiagonalization on the
// symmetric embedding [[0, A], [A^T, 0]], with full reorthogonalization
// and thick restarts. A dense eigendecomposition oracle over the Gram
// matrix backs the tests.

namespace semspace {

template <typename Scalar>
struct TruncatedSvd {
    DenseMatrix<Scalar> u;      // n x k, orthonormal columns
    DenseVector<Scalar> sigma;  // k, nonincreasing, strictly positive
    DenseMatrix<Scalar> v;      // p x k, orthonormal columns
    Index k = 0;                // achieved rank

    // Set when fewer than the requested number of numerically nonzero
    // singular values exist; k then holds the achievable count.
    bool rank_deficient = false;
    int iterations = 0;
};

struct SvdConfig {
    Index k = 300;
    double tol = 1e-10;   // residual tolerance relative to sigma_1
    int max_iter = 1000;  // cap on bidiagonalization steps
    std::uint64_t seed = 0;
};

namespace svd_detail {

// Uniform in [-1, 1) built from raw generator bits, so start vectors are
// reproducible across standard libraries.
class StartVectorRng {
public:
    explicit StartVectorRng(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1p-53;
        return 2.0 * unit - 1.0;
    }

    template <typename Scalar>
    void fill(DenseVector<Scalar>& v) {
        for (Index i = 0; i < v.size(); ++i) {
            v[i] = static_cast<Scalar>((*this)());
        }
    }

private:
    std::mt19937_64 engine_;
};

// Two rounds of classical Gram-Schmidt against the first `cols` columns.
template <typename Scalar>
void reorthogonalize(const DenseMatrix<Scalar>& basis, Index cols, DenseVector<Scalar>& w) {
    if (cols == 0) {
        return;
    }
    auto q = basis.leftCols(cols);
    w.noalias() -= q * (q.transpose() * w);
    w.noalias() -= q * (q.transpose() * w);
}

// Flips each singular pair so the largest-magnitude entry of v_i is
// positive; ties resolved by the lowest index.
template <typename Scalar>
void canonicalize_signs(DenseMatrix<Scalar>& u, DenseMatrix<Scalar>& v) {
    for (Index i = 0; i < v.cols(); ++i) {
        Index arg = 0;
        Scalar best = std::abs(v(0, i));
        for (Index r = 1; r < v.rows(); ++r) {
            const Scalar mag = std::abs(v(r, i));
            if (mag > best) {
                best = mag;
                arg = r;
            }
        }
        if (v(arg, i) < Scalar(0)) {
            v.col(i) = -v.col(i);
            u.col(i) = -u.col(i);
        }
    }
}

template <typename Scalar>
TruncatedSvd<Scalar> assemble_result(const DenseMatrix<Scalar>& u_full,
                                     const DenseVector<Scalar>& sigma_full,
                                     const DenseMatrix<Scalar>& v_full, Index requested,
                                     int iterations) {
    const Index available = sigma_full.size();
    const Scalar sigma_max = available > 0 ? sigma_full[0] : Scalar(0);
    const Scalar zero_tol = static_cast<Scalar>(std::max(u_full.rows(), v_full.rows())) *
                            std::numeric_limits<Scalar>::epsilon() * sigma_max;

    Index keep = std::min(requested, available);
    while (keep > 0 && sigma_full[keep - 1] <= zero_tol) {
        --keep;
    }
    if (keep == 0) {
        throw ZeroMatrix();
    }

    TruncatedSvd<Scalar> out;
    out.u = u_full.leftCols(keep);
    out.sigma = sigma_full.head(keep);
    out.v = v_full.leftCols(keep);
    out.k = keep;
    out.rank_deficient = keep < requested;
    out.iterations = iterations;
    canonicalize_signs(out.u, out.v);
    return out;
}

}  // namespace svd_detail

// Top-k singular triplets of a sparse matrix. Deterministic for a fixed
// seed. Throws ZeroMatrix on an empty pattern and NoConvergence when the
// step budget runs out.
template <typename Scalar>
TruncatedSvd<Scalar> lanczos_svd(const SparseMatrix<Scalar>& a, const SvdConfig& cfg) {
    const Index n = a.rows();
    const Index p = a.cols();
    const Index min_dim = std::min(n, p);

    if (a.nonZeros() == 0) {
        throw ZeroMatrix();
    }
    if (cfg.k < 1) {
        throw UsageError("svd: k must be >= 1");
    }
    if (cfg.k > min_dim) {
        throw UsageError("svd: k exceeds min(n, p)");
    }
    if (!(cfg.tol > 0.0)) {
        throw UsageError("svd: tol must be positive");
    }
    if (cfg.max_iter < cfg.k) {
        throw UsageError("svd: max_iter must be >= k");
    }

    const Index k = cfg.k;
    const Index m_max = std::min<Index>(std::max<Index>(2 * k + 16, 64), min_dim);
    const Scalar scale = a.norm();  // Frobenius
    const Scalar breakdown_tol =
        std::numeric_limits<Scalar>::epsilon() * static_cast<Scalar>(std::max(n, p)) * scale;

    DenseMatrix<Scalar> basis_u(n, m_max);
    DenseMatrix<Scalar> basis_v(p, m_max);
    DenseMatrix<Scalar> small = DenseMatrix<Scalar>::Zero(m_max, m_max);

    svd_detail::StartVectorRng rng(cfg.seed);
    DenseVector<Scalar> work(p);

    // Draws a random vector orthonormal to the first `cols` columns of
    // `basis`; returns false once the basis spans the whole space.
    auto inject_random = [&rng](const DenseMatrix<Scalar>& basis, Index cols,
                                DenseVector<Scalar>& out) -> bool {
        if (cols >= basis.rows()) {
            return false;
        }
        for (int attempt = 0; attempt < 16; ++attempt) {
            rng.fill(out);
            svd_detail::reorthogonalize(basis, cols, out);
            const Scalar norm = out.norm();
            if (norm > Scalar(0.25)) {  // random vectors rarely lie near the span
                out /= norm;
                return true;
            }
        }
        return false;
    };

    Index m = 0;              // completed bidiagonalization columns
    Scalar beta_res = 0;      // norm of the A^T-side residual
    DenseVector<Scalar> v_next(p);
    bool have_v_next = false;
    Scalar sigma_ref = 0;     // running estimate of sigma_1
    int steps = 0;
    Index converged_leading = 0;

    rng.fill(v_next);
    v_next /= v_next.norm();
    have_v_next = true;

    Eigen::BDCSVD<DenseMatrix<Scalar>> small_svd;

    for (;;) {
        // Grow the basis until it is full or the Krylov space closes.
        bool exhausted = false;
        while (m < m_max) {
            if (!have_v_next) {
                if (!inject_random(basis_v, m, v_next)) {
                    exhausted = true;
                    break;
                }
                beta_res = 0;
                have_v_next = true;
            }
            basis_v.col(m) = v_next;
            if (m > 0 && beta_res > 0) {
                small(m - 1, m) = beta_res;
            }

            DenseVector<Scalar> w = a * basis_v.col(m);
            if (m > 0) {
                w.noalias() -= basis_u.leftCols(m) * small.col(m).head(m);
            }
            svd_detail::reorthogonalize(basis_u, m, w);
            Scalar alpha = w.norm();
            if (alpha > breakdown_tol) {
                basis_u.col(m) = w / alpha;
            } else {
                // v lies in the numerical null space; pad U to keep the
                // factorization consistent (the column contributes sigma 0).
                alpha = 0;
                DenseVector<Scalar> fresh(n);
                if (!inject_random(basis_u, m, fresh)) {
                    exhausted = true;
                    break;
                }
                basis_u.col(m) = fresh;
            }
            small(m, m) = alpha;
            ++m;
            ++steps;

            work = a.transpose() * basis_u.col(m - 1);
            work.noalias() -= alpha * basis_v.col(m - 1);
            svd_detail::reorthogonalize(basis_v, m, work);
            beta_res = work.norm();
            if (beta_res > breakdown_tol) {
                v_next = work / beta_res;
                have_v_next = true;
            } else {
                beta_res = 0;
                have_v_next = false;
                break;  // Krylov space closed; check what we have
            }
        }

        // Ritz extraction from the projected matrix.
        small_svd.compute(small.topLeftCorner(m, m),
                          Eigen::ComputeFullU | Eigen::ComputeFullV);
        const DenseVector<Scalar>& ritz = small_svd.singularValues();
        sigma_ref = std::max(sigma_ref, ritz.size() > 0 ? ritz[0] : Scalar(0));

        const Index candidates = std::min(k, m);
        converged_leading = 0;
        for (Index i = 0; i < candidates; ++i) {
            const Scalar residual = beta_res * std::abs(small_svd.matrixU()(m - 1, i));
            if (residual <= cfg.tol * std::max(sigma_ref, std::numeric_limits<Scalar>::min())) {
                ++converged_leading;
            } else {
                break;
            }
        }

        const bool all_present_converged = beta_res == 0;
        const bool done = (converged_leading >= k) ||
                          (all_present_converged && (exhausted || m >= min_dim || m >= k));
        if (done) {
            DenseMatrix<Scalar> full_u = basis_u.leftCols(m) * small_svd.matrixU();
            DenseMatrix<Scalar> full_v = basis_v.leftCols(m) * small_svd.matrixV();
            return svd_detail::assemble_result<Scalar>(full_u, ritz, full_v, k, steps);
        }
        if (all_present_converged && !exhausted) {
            continue;  // closed subspace but too few triplets: inject and grow
        }
        if (steps >= cfg.max_iter) {
            throw NoConvergence(steps, static_cast<int>(converged_leading));
        }

        // Thick restart: keep the leading Ritz triplets plus the residual
        // direction, then continue expanding.
        const Index keep = std::min<Index>(k + 8, m - 1);
        DenseMatrix<Scalar> kept_u = basis_u.leftCols(m) * small_svd.matrixU().leftCols(keep);
        DenseMatrix<Scalar> kept_v = basis_v.leftCols(m) * small_svd.matrixV().leftCols(keep);
        basis_u.leftCols(keep) = kept_u;
        basis_v.leftCols(keep) = kept_v;
        small.setZero();
        for (Index i = 0; i < keep; ++i) {
            small(i, i) = ritz[i];
            small(i, keep) = beta_res * small_svd.matrixU()(m - 1, i);
        }
        m = keep;
        // v_next (the residual direction) seeds column `keep`; its coupling
        // column is already in place, so clear beta_res to avoid rewriting
        // the bidiagonal entry.
        beta_res = 0;
    }
}

// Exact top-k triplets of a small dense matrix via eigendecomposition of
// the Gram matrix on the short side. Same sign convention as lanczos_svd.
template <typename Derived>
TruncatedSvd<typename Derived::Scalar> dense_svd_oracle(const Eigen::MatrixBase<Derived>& m,
                                                        Index k) {
    using Scalar = typename Derived::Scalar;
    const Index n = m.rows();
    const Index p = m.cols();
    const Index min_dim = std::min(n, p);

    if (min_dim > 512) {
        throw TooLarge("dense_svd_oracle limited to min(n, p) <= 512");
    }
    if (k < 1) {
        throw UsageError("svd: k must be >= 1");
    }
    if (k > min_dim) {
        throw UsageError("svd: k exceeds min(n, p)");
    }
    const DenseMatrix<Scalar> dense = m;
    if (dense.norm() == Scalar(0)) {
        throw ZeroMatrix();
    }

    const bool gram_on_cols = p <= n;
    DenseMatrix<Scalar> gram;
    if (gram_on_cols) {
        gram.noalias() = dense.transpose() * dense;
    } else {
        gram.noalias() = dense * dense.transpose();
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw NumericError("dense_svd_oracle: eigendecomposition failed");
    }

    // Eigenvalues come back ascending; walk them from the top.
    const Index dim = gram.rows();
    DenseVector<Scalar> sigma(dim);
    DenseMatrix<Scalar> u(n, dim);
    DenseMatrix<Scalar> v(p, dim);
    const Scalar sigma_max = std::sqrt(std::max(eig.eigenvalues()[dim - 1], Scalar(0)));
    const Scalar zero_tol =
        static_cast<Scalar>(std::max(n, p)) * std::numeric_limits<Scalar>::epsilon() * sigma_max;

    Index count = 0;
    for (Index i = dim - 1; i >= 0; --i) {
        const Scalar s = std::sqrt(std::max(eig.eigenvalues()[i], Scalar(0)));
        if (s <= zero_tol) {
            break;
        }
        sigma[count] = s;
        if (gram_on_cols) {
            v.col(count) = eig.eigenvectors().col(i);
            u.col(count).noalias() = dense * v.col(count) / s;
            u.col(count) /= u.col(count).norm();
        } else {
            u.col(count) = eig.eigenvectors().col(i);
            v.col(count).noalias() = dense.transpose() * u.col(count) / s;
            v.col(count) /= v.col(count).norm();
        }
        ++count;
    }
    return svd_detail::assemble_result<Scalar>(
        DenseMatrix<Scalar>(u.leftCols(count)), DenseVector<Scalar>(sigma.head(count)),
        DenseMatrix<Scalar>(v.leftCols(count)), k, 0);
}

// U Sigma V^T, guarded against materializing anything huge.
template <typename Scalar>
DenseMatrix<Scalar> reconstruct(const TruncatedSvd<Scalar>& svd) {
    const Index entries_limit = 10'000'000;
    if (svd.u.rows() * svd.v.rows() > entries_limit) {
        throw TooLarge("reconstruct would materialize more than 1e7 entries");
    }
    return svd.u * svd.sigma.asDiagonal() * svd.v.transpose();
}

}  // namespace semspace
