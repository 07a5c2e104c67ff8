// SPDX-License-Identifier: Apache-2.0
#include "spectree/tensor.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace spectree {

namespace {
std::atomic<std::int64_t> g_live{0};
std::atomic<std::int64_t> g_peak{0};

void census_add(std::int64_t delta) {
    const std::int64_t now = g_live.fetch_add(delta) + delta;
    if (delta > 0) {
        std::int64_t peak = g_peak.load();
        while (now > peak && !g_peak.compare_exchange_weak(peak, now)) {
        }
    }
}
}  // namespace

namespace tensor_alloc {
std::int64_t live_elements() { return g_live.load(); }
std::int64_t peak_elements() { return g_peak.load(); }
void reset_peak() { g_peak.store(g_live.load()); }
}  // namespace tensor_alloc

Tensor3::Tensor3(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2)
    : dims_{d0, d1, d2},
      data_(static_cast<size_t>(d0) * static_cast<size_t>(d1) * static_cast<size_t>(d2), 0.0) {
    if (d0 < 1 || d1 < 1 || d2 < 1) throw std::invalid_argument("Tensor3: dims must be >= 1");
    census_add(size());
}

Tensor3::Tensor3(const Tensor3& other) : dims_(other.dims_), data_(other.data_) {
    census_add(size());
}

Tensor3::Tensor3(Tensor3&& other) noexcept : dims_(other.dims_), data_(std::move(other.data_)) {
    other.dims_ = {0, 0, 0};
    other.data_.clear();
}

Tensor3& Tensor3::operator=(const Tensor3& other) {
    if (this != &other) {
        census_add(-size());
        dims_ = other.dims_;
        data_ = other.data_;
        census_add(size());
    }
    return *this;
}

Tensor3& Tensor3::operator=(Tensor3&& other) noexcept {
    if (this != &other) {
        census_add(-size());
        dims_ = other.dims_;
        data_ = std::move(other.data_);
        other.dims_ = {0, 0, 0};
        other.data_.clear();
    }
    return *this;
}

Tensor3::~Tensor3() { census_add(-size()); }

void Tensor3::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

Tensor3& Tensor3::operator+=(const Tensor3& other) {
    if (dims_ != other.dims_) throw std::invalid_argument("Tensor3 +=: dimension mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor3& Tensor3::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

void Tensor3::add_outer(const Vector& a, const Vector& b, const Vector& c, double w) {
    if (a.size() != dims_[0] || b.size() != dims_[1] || c.size() != dims_[2])
        throw std::invalid_argument("Tensor3 add_outer: dimension mismatch");
    double* out = data_.data();
    for (Eigen::Index i = 0; i < dims_[0]; ++i) {
        const double wa = w * a[i];
        for (Eigen::Index j = 0; j < dims_[1]; ++j) {
            const double wab = wa * b[j];
            for (Eigen::Index k = 0; k < dims_[2]; ++k) *out++ += wab * c[k];
        }
    }
}

void Tensor3::subtract_cube(double lambda, const Vector& v) {
    add_outer(v, v, v, -lambda);
}

Vector Tensor3::contract_last_two(const Vector& v) const {
    if (v.size() != dims_[1] || v.size() != dims_[2])
        throw std::invalid_argument("Tensor3 contract_last_two: dimension mismatch");
    Vector out = Vector::Zero(dims_[0]);
    const double* p = data_.data();
    for (Eigen::Index i = 0; i < dims_[0]; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < dims_[1]; ++j) {
            double inner = 0.0;
            for (Eigen::Index k = 0; k < dims_[2]; ++k) inner += p[k] * v[k];
            acc += v[j] * inner;
            p += dims_[2];
        }
        out[i] = acc;
    }
    return out;
}

double Tensor3::apply(const Vector& u, const Vector& v, const Vector& w) const {
    if (u.size() != dims_[0] || v.size() != dims_[1] || w.size() != dims_[2])
        throw std::invalid_argument("Tensor3 apply: dimension mismatch");
    double acc = 0.0;
    const double* p = data_.data();
    for (Eigen::Index i = 0; i < dims_[0]; ++i) {
        double acc_i = 0.0;
        for (Eigen::Index j = 0; j < dims_[1]; ++j) {
            double inner = 0.0;
            for (Eigen::Index k = 0; k < dims_[2]; ++k) inner += p[k] * w[k];
            acc_i += v[j] * inner;
            p += dims_[2];
        }
        acc += u[i] * acc_i;
    }
    return acc;
}

double Tensor3::frobenius_norm() const {
    double acc = 0.0;
    for (double x : data_) acc += x * x;
    return std::sqrt(acc);
}

double Tensor3::max_abs() const {
    double acc = 0.0;
    for (double x : data_) acc = std::max(acc, std::abs(x));
    return acc;
}

bool Tensor3::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

double Tensor3::symmetry_gap() const {
    if (dims_[0] != dims_[1] || dims_[1] != dims_[2]) return frobenius_norm();
    double gap = 0.0;
    const Tensor3& t = *this;
    for (Eigen::Index i = 0; i < dims_[0]; ++i)
        for (Eigen::Index j = 0; j < dims_[1]; ++j)
            for (Eigen::Index k = 0; k < dims_[2]; ++k) {
                const double x = t(i, j, k);
                gap = std::max(gap, std::abs(x - t(i, k, j)));
                gap = std::max(gap, std::abs(x - t(j, i, k)));
                gap = std::max(gap, std::abs(x - t(j, k, i)));
                gap = std::max(gap, std::abs(x - t(k, i, j)));
                gap = std::max(gap, std::abs(x - t(k, j, i)));
            }
    return gap;
}

}  // namespace spectree
