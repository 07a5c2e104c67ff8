// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spectree/tensor.hpp"

namespace spectree {

// Kronecker product. Row (i_A, i_B) of the result maps to i_A*rows(B) + i_B
// (first factor most significant), likewise for columns. The meta-observation
// index convention elsewhere relies on exactly this ordering.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron_vec(const Vector& a, const Vector& b);

// V1^T * M * V2, dimensions checked.
Matrix contract2(const Matrix& m, const Matrix& v1, const Matrix& v2);

// Multilinear contraction: out(a,b,c) = sum_{i,j,k} M(i,j,k) V1(i,a) V2(j,b) V3(k,c).
Tensor3 contract3(const Tensor3& m, const Matrix& v1, const Matrix& v2, const Matrix& v3);

struct SvdResult {
    Matrix left;             // orthonormal columns
    Vector singular_values;  // nonincreasing, nonnegative
    Matrix right;            // orthonormal columns
};

// Top-k singular triplets of A. Sign convention: the largest-magnitude entry
// of each left singular vector is made positive (right vector flipped along).
SvdResult truncated_svd(const Matrix& a, Eigen::Index k);

// Moore-Penrose pseudoinverse; singular values below
// max(rows,cols) * sigma_1 * rel_threshold are treated as zero.
Matrix pinv(const Matrix& a, double rel_threshold = 1e-12);

// Euclidean projection onto the probability simplex {p >= 0, sum p = 1}.
Vector simplex_project(const Vector& v);

// Smallest singular value (0 for an empty matrix).
double min_singular_value(const Matrix& a);

}  // namespace spectree
