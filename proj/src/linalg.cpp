// SPDX-License-Identifier: Apache-2.0
#include "spectree/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spectree {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

Matrix contract2(const Matrix& m, const Matrix& v1, const Matrix& v2) {
    if (v1.rows() != m.rows() || v2.rows() != m.cols())
        throw std::invalid_argument("contract2: dimension mismatch");
    return v1.transpose() * m * v2;
}

Tensor3 contract3(const Tensor3& m, const Matrix& v1, const Matrix& v2, const Matrix& v3) {
    if (v1.rows() != m.dim(0) || v2.rows() != m.dim(1) || v3.rows() != m.dim(2))
        throw std::invalid_argument("contract3: dimension mismatch");
    const Eigen::Index d0 = m.dim(0), d1 = m.dim(1), d2 = m.dim(2);
    const Eigen::Index k0 = v1.cols(), k1 = v2.cols(), k2 = v3.cols();

    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    // Mode 0: (d0, d1*d2) -> (k0, d1*d2)
    Eigen::Map<const RowMat> m0(m.data(), d0, d1 * d2);
    RowMat t0 = v1.transpose() * m0;

    // Mode 1 and mode 2, one slab of the first index at a time.
    Tensor3 out(k0, k1, k2);
    RowMat slab(k1, d2);
    for (Eigen::Index a = 0; a < k0; ++a) {
        Eigen::Map<const RowMat> s(t0.data() + a * d1 * d2, d1, d2);
        slab.noalias() = v2.transpose() * s;
        Eigen::Map<RowMat> o(out.data() + a * k1 * k2, k1, k2);
        o.noalias() = slab * v3;
    }
    return out;
}

SvdResult truncated_svd(const Matrix& a, Eigen::Index k) {
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("truncated_svd: k out of range");
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.left = svd.matrixU().leftCols(k);
    out.right = svd.matrixV().leftCols(k);
    out.singular_values = svd.singularValues().head(k);
    // Deterministic sign: largest-magnitude entry of each left vector positive.
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index imax = 0;
        out.left.col(j).cwiseAbs().maxCoeff(&imax);
        if (out.left(imax, j) < 0.0) {
            out.left.col(j) = -out.left.col(j);
            out.right.col(j) = -out.right.col(j);
        }
    }
    return out;
}

Matrix pinv(const Matrix& a, double rel_threshold) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cutoff =
        static_cast<double>(std::max(a.rows(), a.cols())) * (s.size() > 0 ? s[0] : 0.0) * rel_threshold;
    Vector inv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > cutoff) inv[i] = 1.0 / s[i];
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Vector simplex_project(const Vector& v) {
    const Eigen::Index n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = 0.0;
    Eigen::Index rho = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        cumsum += u[static_cast<size_t>(j)];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<size_t>(j)] - t > 0.0) {
            rho = j + 1;
            tau = t;
        }
    }
    (void)rho;
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
    return out;
}

double min_singular_value(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(a);
    const Vector& s = svd.singularValues();
    const Eigen::Index k = std::min(a.rows(), a.cols());
    return k <= s.size() && k > 0 ? s[k - 1] : 0.0;
}

}  // namespace spectree
