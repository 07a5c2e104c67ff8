// SPDX-License-Identifier: Apache-2.0
#include "spectree/model.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "spectree/errors.hpp"
#include "spectree/linalg.hpp"
#include "spectree/moments.hpp"

namespace spectree {

namespace {

bool check_distribution(const double* p, int len, double tol, std::string& why) {
    double sum = 0.0;
    for (int i = 0; i < len; ++i) {
        if (!std::isfinite(p[i])) {
            why = "non-finite entry";
            return false;
        }
        if (p[i] < -tol) {
            why = "negative entry " + std::to_string(p[i]) + " at index " + std::to_string(i);
            return false;
        }
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > tol) {
        why = "sums to " + std::to_string(sum);
        return false;
    }
    return true;
}

// Thin upper-triangular QR factor of a full-column-rank-ish matrix.
Matrix r_factor(const Matrix& a) {
    Eigen::HouseholderQR<Matrix> qr(a);
    return qr.matrixQR()
        .topRows(std::min(a.rows(), a.cols()))
        .template triangularView<Eigen::Upper>();
}

}  // namespace

std::vector<Violation> validate(const ThsHmmParams& params, const TreeStructure& tree, double tol) {
    std::vector<Violation> out;
    const int d = tree.node_count();
    const int m = params.m;
    const int n = params.n;
    std::string why;

    if (m < 1 || n < 1) {
        out.push_back({-1, "alphabet sizes must be positive"});
        return out;
    }
    if (static_cast<int>(params.obs.size()) != d) {
        out.push_back({-1, "observation matrix count does not match tree"});
        return out;
    }
    if (static_cast<int>(params.trans.size()) != d || static_cast<int>(params.init.size()) != d) {
        out.push_back({-1, "transition/initial slots do not match tree"});
        return out;
    }

    for (int u = 0; u < d; ++u) {
        const Matrix& o = params.obs[static_cast<size_t>(u)];
        if (o.rows() != n || o.cols() != m) {
            out.push_back({u, "observation matrix has wrong shape"});
            continue;
        }
        for (int z = 0; z < m; ++z) {
            const Vector col = o.col(z);
            if (!check_distribution(col.data(), n, tol, why))
                out.push_back({u, "observation column " + std::to_string(z) + ": " + why});
        }
    }

    if (params.init_root.size() != m) {
        out.push_back({tree.root, "root initial distribution has wrong length"});
    } else if (!check_distribution(params.init_root.data(), m, tol, why)) {
        out.push_back({tree.root, "root initial distribution: " + why});
    }
    if (params.trans_root.rows() != m || params.trans_root.cols() != m) {
        out.push_back({tree.root, "root transition matrix has wrong shape"});
    } else {
        for (int prev = 0; prev < m; ++prev) {
            const Vector col = params.trans_root.col(prev);
            if (!check_distribution(col.data(), m, tol, why))
                out.push_back({tree.root, "root transition column " + std::to_string(prev) + ": " + why});
        }
    }

    for (int u = 0; u < d; ++u) {
        if (tree.is_root(u)) continue;
        const Matrix& w = params.init[static_cast<size_t>(u)];
        if (w.rows() != m || w.cols() != m) {
            out.push_back({u, "initial matrix has wrong shape"});
        } else {
            for (int par = 0; par < m; ++par) {
                const Vector col = w.col(par);
                if (!check_distribution(col.data(), m, tol, why))
                    out.push_back({u, "initial column " + std::to_string(par) + ": " + why});
            }
        }
        const Tensor3& t = params.trans[static_cast<size_t>(u)];
        if (t.dim(0) != m || t.dim(1) != m || t.dim(2) != m) {
            out.push_back({u, "transition tensor has wrong shape"});
            continue;
        }
        Vector slice(m);
        for (int prev = 0; prev < m; ++prev)
            for (int par = 0; par < m; ++par) {
                for (int nxt = 0; nxt < m; ++nxt) slice[nxt] = t(nxt, prev, par);
                if (!check_distribution(slice.data(), m, tol, why))
                    out.push_back({u, "transition slice (prev=" + std::to_string(prev) +
                                          ", parent=" + std::to_string(par) + "): " + why});
            }
    }
    return out;
}

bool RankReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.node_pass || !e.path_pass) return false;
    return true;
}

RankReport check_rank_conditions(const ThsHmmParams& params, const TreeStructure& tree,
                                 const RankCheckConfig& config) {
    {
        const auto violations = validate(params, tree);
        if (!violations.empty())
            throw DataError("check_rank_conditions: invalid parameters (" + violations[0].what + ")");
    }

    RankReport report;
    report.threshold = config.threshold;
    const int m = params.m;

    // Per-node QR factors of O^u. Singular values of O A O'-shaped moment
    // matrices equal those of R A R', since the Q factors are orthonormal and
    // kron-compatible; nothing of size n^{|H|} is ever formed.
    std::vector<Matrix> r_obs;
    r_obs.reserve(static_cast<size_t>(tree.node_count()));
    for (int u = 0; u < tree.node_count(); ++u)
        r_obs.push_back(r_factor(params.obs[static_cast<size_t>(u)]));

    for (int u = 0; u < tree.node_count(); ++u) {
        const std::vector<int> path = tree.path_to(u);
        const PathChain chain = build_path_chain(params, tree, path, config.meta_cap);
        // P(z_1^H = i, z_2^H = j)
        const Matrix joint12 = chain.rho.asDiagonal() * chain.trans.transpose();

        RankReport::NodeEntry entry;
        entry.node = u;
        entry.path_dim = chain.mh;

        Eigen::BDCSVD<Matrix> svd_obs(params.obs[static_cast<size_t>(u)]);
        entry.sigma_obs = svd_obs.singularValues()[m - 1];

        // Node-level joint P(z_2^u = b, z_1^u = a), from the path joint.
        const std::size_t h = path.size();
        Matrix joint21_u = Matrix::Zero(m, m);
        std::vector<std::int32_t> z1(h), z2(h);
        for (std::size_t s1 = 0; s1 < chain.mh; ++s1) {
            meta_decode(s1, m, h, z1.data());
            for (std::size_t s2 = 0; s2 < chain.mh; ++s2) {
                meta_decode(s2, m, h, z2.data());
                joint21_u(z2[h - 1], z1[h - 1]) +=
                    joint12(static_cast<Eigen::Index>(s1), static_cast<Eigen::Index>(s2));
            }
        }
        const Matrix& r_u = r_obs[static_cast<size_t>(u)];
        entry.sigma_pair = min_singular_value(r_u * joint21_u * r_u.transpose());

        Matrix r_path = Matrix::Ones(1, 1);
        for (const int v : path) r_path = kron(r_path, r_obs[static_cast<size_t>(v)]);
        entry.sigma_path = min_singular_value(r_path * joint12 * r_path.transpose());

        entry.node_pass = entry.sigma_obs >= config.threshold && entry.sigma_pair >= config.threshold;
        entry.path_pass = entry.sigma_path >= config.threshold;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace spectree
