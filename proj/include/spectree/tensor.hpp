// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace spectree {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Census of live Tensor3 elements. The whole point of the projected pipeline
// is that nothing of observation-alphabet-power size is ever materialized;
// the scale tests assert on peak_elements().
namespace tensor_alloc {
std::int64_t live_elements();
std::int64_t peak_elements();
void reset_peak();
}  // namespace tensor_alloc

// Dense order-3 tensor of doubles, row-major: entry (i,j,k) lives at
// (i*d1 + j)*d2 + k.
class Tensor3 {
  public:
    Tensor3() = default;
    Tensor3(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2);
    Tensor3(const Tensor3& other);
    Tensor3(Tensor3&& other) noexcept;
    Tensor3& operator=(const Tensor3& other);
    Tensor3& operator=(Tensor3&& other) noexcept;
    ~Tensor3();

    Eigen::Index dim(int axis) const { return dims_[static_cast<size_t>(axis)]; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double& operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) {
        return data_[static_cast<size_t>((i * dims_[1] + j) * dims_[2] + k)];
    }
    double operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
        return data_[static_cast<size_t>((i * dims_[1] + j) * dims_[2] + k)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    void set_zero();
    Tensor3& operator+=(const Tensor3& other);
    Tensor3& operator*=(double s);

    // this += w * (a ⊗ b ⊗ c)
    void add_outer(const Vector& a, const Vector& b, const Vector& c, double w = 1.0);
    // this -= lambda * (v ⊗ v ⊗ v)
    void subtract_cube(double lambda, const Vector& v);

    // G(I, v, v): result_i = sum_{j,k} G(i,j,k) v_j v_k
    Vector contract_last_two(const Vector& v) const;
    // G(u, v, w)
    double apply(const Vector& u, const Vector& v, const Vector& w) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    // Maximum absolute deviation from full symmetry (all index permutations).
    double symmetry_gap() const;

  private:
    void register_alloc(std::int64_t delta) const;

    std::array<Eigen::Index, 3> dims_{0, 0, 0};
    std::vector<double> data_;
};

}  // namespace spectree
