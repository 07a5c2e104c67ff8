// SPDX-License-Identifier: Apache-2.0
#include "spectree/learner.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "spectree/errors.hpp"
#include "spectree/linalg.hpp"

namespace spectree {

ProjectionBasis estimate_ranges(const MomentSource& source, const TreeStructure& tree, int m,
                                double rank_threshold) {
    if (m < 1) throw DataError("estimate_ranges: m must be positive");
    if (m > source.alphabet())
        throw DataError("estimate_ranges: m = " + std::to_string(m) + " exceeds n = " +
                        std::to_string(source.alphabet()) +
                        "; the node-wise rank condition cannot hold");
    ProjectionBasis basis;
    basis.u.resize(static_cast<size_t>(tree.node_count()));
    basis.sigma_m.resize(static_cast<size_t>(tree.node_count()), 0.0);
    for (int u = 0; u < tree.node_count(); ++u) {
        const Matrix pair = source.raw_pair(u, u, 1, 2);
        const SvdResult svd = truncated_svd(pair, m);
        basis.u[static_cast<size_t>(u)] = svd.left;
        basis.sigma_m[static_cast<size_t>(u)] = svd.singular_values[m - 1];
        if (svd.singular_values[m - 1] < rank_threshold)
            basis.warnings.push_back(
                "node " + tree.labels[static_cast<size_t>(u)] + ": sigma_m(P_12) = " +
                std::to_string(svd.singular_values[m - 1]) +
                " below threshold; node-wise rank condition likely violated");
    }
    return basis;
}

std::pair<Matrix, Matrix> build_symmetrizers(const NodeProjectedMoments& pm, double rank_threshold,
                                             double pinv_rel_threshold, double* b13_min_sv) {
    const double sv = min_singular_value(pm.p13);
    if (b13_min_sv != nullptr) *b13_min_sv = sv;
    if (sv < rank_threshold)
        throw NumericalError(
            "symmetrization: projected path co-occurrence matrix is near singular (sigma_min = " +
            std::to_string(sv) + "); path-wise rank condition violated or too few samples");
    const Matrix s1 = pm.p23 * pinv(pm.p13, pinv_rel_threshold);
    const Matrix s3 = pm.p21 * pinv(pm.p31, pinv_rel_threshold);
    return {s1, s3};
}

SkeletensorPair build_skeletensor(const NodeProjectedMoments& pm, const Matrix& s1,
                                  const Matrix& s3) {
    if (s1.cols() != pm.p12.rows() || s3.cols() != pm.t123.dim(2))
        throw DataError("build_skeletensor: dimension mismatch");
    SkeletensorPair sk;
    sk.node = pm.node;
    const Matrix asym = s1 * pm.p12;  // = P_{1,2}^{H,u}(U^H S1', U^u)
    sk.m2 = 0.5 * (asym + asym.transpose());
    const Matrix identity = Matrix::Identity(pm.p12.cols(), pm.p12.cols());
    sk.m3 = contract3(pm.t123, s1.transpose(), identity, s3.transpose());
    return sk;
}

WhitenResult whiten(const Matrix& m2, int m) {
    if (m2.rows() != m2.cols()) throw DataError("whiten: matrix must be square");
    if (m < 1 || m > m2.rows()) throw DataError("whiten: m out of range");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m2);
    if (eig.info() != Eigen::Success) throw NumericalError("whiten: eigendecomposition failed");
    // Ascending from Eigen; flip to descending.
    const Eigen::Index p = m2.rows();
    Vector evals(m);
    Matrix evecs(p, m);
    for (int i = 0; i < m; ++i) {
        evals[i] = eig.eigenvalues()[p - 1 - i];
        evecs.col(i) = eig.eigenvectors().col(p - 1 - i);
    }
    if (evals[m - 1] <= 0.0)
        throw NumericalError(
            "whiten: nonpositive eigenvalue " + std::to_string(evals[m - 1]) +
            " among the top " + std::to_string(m) +
            "; insufficient samples or node-wise rank condition violated");
    WhitenResult out;
    out.eigenvalues = evals;
    out.w = evecs * evals.cwiseSqrt().cwiseInverse().asDiagonal();
    return out;
}

std::vector<TensorEigenpair> robust_tensor_power(const Tensor3& g, int m, const PowerConfig& config,
                                                 SplitMix64& rng, PowerDiagnostics* diag) {
    if (g.dim(0) != g.dim(1) || g.dim(1) != g.dim(2))
        throw DataError("robust_tensor_power: tensor must be cubic");
    const Eigen::Index k = g.dim(0);
    Tensor3 deflated = g;
    std::vector<TensorEigenpair> pairs;
    pairs.reserve(static_cast<size_t>(m));

    auto random_unit = [&rng, k]() {
        Vector v(k);
        for (Eigen::Index i = 0; i < k; ++i) v[i] = rng.next_gaussian();
        const double norm = v.norm();
        return norm > 0 ? Vector(v / norm) : Vector(Vector::Unit(k, 0));
    };
    auto iterate = [&deflated](Vector v, int steps) {
        for (int t = 0; t < steps; ++t) {
            Vector w = deflated.contract_last_two(v);
            const double norm = w.norm();
            if (norm == 0.0) return v;
            v = w / norm;
        }
        return v;
    };

    for (int round = 0; round < m; ++round) {
        Vector best;
        double best_lambda = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < config.restarts; ++r) {
            const Vector v = iterate(random_unit(), config.iterations);
            const double lambda = deflated.apply(v, v, v);
            if (lambda > best_lambda) {
                best_lambda = lambda;
                best = v;
            }
        }
        best = iterate(best, config.polish);
        best_lambda = deflated.apply(best, best, best);
        if (!(best_lambda > 0.0))
            throw NumericalError("tensor power: nonpositive eigenvalue " +
                                 std::to_string(best_lambda) + " in deflation round " +
                                 std::to_string(round) + " of " + std::to_string(m));
        deflated.subtract_cube(best_lambda, best);
        pairs.push_back({best, best_lambda});
    }
    if (diag != nullptr) {
        diag->lambdas.clear();
        for (const auto& p : pairs) diag->lambdas.push_back(p.lambda);
        diag->deflation_residual = deflated.frobenius_norm();
    }
    return pairs;
}

DecompositionResult decompose_node(const SkeletensorPair& sk, int m, const PowerConfig& config,
                                   SplitMix64& rng, double pinv_rel_threshold, Vector* whiten_eigs) {
    const WhitenResult wh = whiten(sk.m2, m);
    if (whiten_eigs != nullptr) *whiten_eigs = wh.eigenvalues;
    const Tensor3 g = contract3(sk.m3, wh.w, wh.w, wh.w);

    DecompositionResult out;
    const auto pairs = robust_tensor_power(g, m, config, rng, &out.power);

    const Matrix unwhiten = pinv(wh.w.transpose(), pinv_rel_threshold);  // (W')^dagger
    out.theta.resize(sk.m2.rows(), m);
    out.weights_raw.resize(m);
    for (int i = 0; i < m; ++i) {
        const double z = 1.0 / pairs[static_cast<size_t>(i)].lambda;
        out.theta.col(i) = unwhiten * pairs[static_cast<size_t>(i)].v / z;
        out.weights_raw[i] = z * z;
    }
    const double total = out.weights_raw.sum();
    out.weights = total > 0 ? Vector(out.weights_raw / total) : out.weights_raw;
    return out;
}

std::pair<Matrix, Matrix> unproject_and_round(const Matrix& theta, const Matrix& basis_u) {
    if (basis_u.cols() != theta.rows()) throw DataError("unproject: dimension mismatch");
    Matrix raw = basis_u * theta;
    Matrix rounded(raw.rows(), raw.cols());
    for (Eigen::Index j = 0; j < raw.cols(); ++j) rounded.col(j) = simplex_project(raw.col(j));
    return {rounded, raw};
}

LearnResult learn_observations(const MomentSource& source, const TreeStructure& tree, int m,
                               const LearnerConfig& config) {
    LearnResult result;
    result.basis = estimate_ranges(source, tree, m, config.rank_threshold);
    const int d = tree.node_count();
    result.observations.obs.resize(static_cast<size_t>(d));
    result.observations.obs_raw.resize(static_cast<size_t>(d));
    result.diagnostics.resize(static_cast<size_t>(d));

    for (int u = 0; u < d; ++u) {
        NodeDiagnostics& diag = result.diagnostics[static_cast<size_t>(u)];
        diag.node = u;
        try {
            std::size_t mh = 1;
            for (int j = 0; j < tree.depth_of(u); ++j) {
                mh *= static_cast<std::size_t>(m);
                if (mh > config.meta_cap)
                    throw DataError("meta-state dimension m^" + std::to_string(tree.depth_of(u)) +
                                    " exceeds the configured cap of " +
                                    std::to_string(config.meta_cap));
            }
            const NodeProjectedMoments pm = source.path_moments(tree, result.basis, u);
            const auto [s1, s3] = build_symmetrizers(pm, config.rank_threshold,
                                                     config.pinv_rel_threshold,
                                                     &diag.b13_min_singular);
            const SkeletensorPair sk = build_skeletensor(pm, s1, s3);
            SplitMix64 rng(derive_stream(config.seed, fnv1a64(tree.labels[static_cast<size_t>(u)])));
            const DecompositionResult dec =
                decompose_node(sk, m, config.power, rng, config.pinv_rel_threshold,
                               &diag.whiten_eigenvalues);
            diag.power_lambdas = dec.power.lambdas;
            diag.deflation_residual = dec.power.deflation_residual;
            auto [rounded, raw] = unproject_and_round(dec.theta, result.basis.u[static_cast<size_t>(u)]);
            result.observations.obs[static_cast<size_t>(u)] = std::move(rounded);
            result.observations.obs_raw[static_cast<size_t>(u)] = std::move(raw);
        } catch (const std::exception& e) {
            diag.failure = e.what();
            result.failures[u] = e.what();
        }
    }
    return result;
}

}  // namespace spectree
