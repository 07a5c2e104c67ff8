// SPDX-License-Identifier: Apache-2.0
#include "spectree/decoder.hpp"

#include <cmath>
#include <limits>

#include "spectree/errors.hpp"

namespace spectree {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const Vector& v) {
    const double mx = v.maxCoeff();
    if (mx == kNegInf) return kNegInf;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::exp(v[i] - mx);
    return mx + std::log(acc);
}

struct PathDecoder {
    const ThsHmmParams& params;
    const SequenceBatch& batch;
    PathChain chain;
    std::vector<std::vector<std::int32_t>> coords;  // coords[s][j], meta-state coordinates

    PathDecoder(const ThsHmmParams& p, const TreeStructure& tree, const SequenceBatch& b,
                const std::vector<int>& path, std::size_t meta_cap)
        : params(p), batch(b), chain(build_path_chain(p, tree, path, meta_cap)) {
        coords.assign(chain.mh, std::vector<std::int32_t>(path.size()));
        for (std::size_t s = 0; s < chain.mh; ++s)
            meta_decode(s, params.m, path.size(), coords[s].data());
    }

    Vector emission(std::size_t seq, std::size_t t) const {
        Vector like(static_cast<Eigen::Index>(chain.mh));
        for (std::size_t s = 0; s < chain.mh; ++s) {
            double p = 1.0;
            for (std::size_t j = 0; j < chain.path.size(); ++j) {
                const std::int32_t x = batch.at(seq, chain.path[j], t);
                if (x < 0 || x >= params.n)
                    throw DataError("decode: symbol out of range at node " + std::to_string(chain.path[j]));
                p *= params.obs[static_cast<size_t>(chain.path[j])](x, coords[s][j]);
            }
            like[static_cast<Eigen::Index>(s)] = p;
        }
        return like;
    }

    // Smoothed meta posteriors for one sequence, scaled recursions.
    Matrix posterior_scaled(std::size_t seq, std::vector<std::string>& warnings) const {
        const std::size_t len = batch.length;
        const Eigen::Index mh = static_cast<Eigen::Index>(chain.mh);
        Matrix alpha(mh, static_cast<Eigen::Index>(len));
        std::vector<Vector> like(len);
        bool warned = false;

        for (std::size_t t = 0; t < len; ++t) like[t] = emission(seq, t);

        Vector a = chain.rho.cwiseProduct(like[0]);
        double c = a.sum();
        if (c <= 0.0) {
            a = Vector::Constant(mh, 1.0 / static_cast<double>(mh));
            warned = true;
        } else {
            a /= c;
        }
        alpha.col(0) = a;
        for (std::size_t t = 1; t < len; ++t) {
            a = (chain.trans * a).cwiseProduct(like[t]);
            c = a.sum();
            if (c <= 0.0) {
                a = Vector::Constant(mh, 1.0 / static_cast<double>(mh));
                warned = true;
            } else {
                a /= c;
            }
            alpha.col(static_cast<Eigen::Index>(t)) = a;
        }

        Matrix gamma(mh, static_cast<Eigen::Index>(len));
        Vector b = Vector::Ones(mh);
        gamma.col(static_cast<Eigen::Index>(len - 1)) = alpha.col(static_cast<Eigen::Index>(len - 1));
        for (std::size_t t = len - 1; t-- > 0;) {
            b = chain.trans.transpose() * like[t + 1].cwiseProduct(b);
            const double norm = b.sum();
            if (norm <= 0.0) {
                b = Vector::Ones(mh);
                warned = true;
            } else {
                b /= norm;
            }
            Vector g = alpha.col(static_cast<Eigen::Index>(t)).cwiseProduct(b);
            const double gs = g.sum();
            if (gs <= 0.0) {
                g = Vector::Constant(mh, 1.0 / static_cast<double>(mh));
                warned = true;
            } else {
                g /= gs;
            }
            gamma.col(static_cast<Eigen::Index>(t)) = g;
        }
        if (warned)
            warnings.push_back("decode: zero-likelihood step, uniform posterior substituted (seq " +
                               std::to_string(seq) + ")");
        return gamma;
    }

    Matrix posterior_log(std::size_t seq, std::vector<std::string>& warnings) const {
        const std::size_t len = batch.length;
        const Eigen::Index mh = static_cast<Eigen::Index>(chain.mh);
        const Matrix log_trans = chain.trans.array().log().matrix();
        std::vector<Vector> log_like(len);
        for (std::size_t t = 0; t < len; ++t)
            log_like[t] = emission(seq, t).array().log().matrix();

        Matrix la(mh, static_cast<Eigen::Index>(len));
        la.col(0) = chain.rho.array().log().matrix() + log_like[0];
        Vector scratch(mh);
        for (std::size_t t = 1; t < len; ++t) {
            for (Eigen::Index j = 0; j < mh; ++j) {
                scratch = log_trans.row(j).transpose() + la.col(static_cast<Eigen::Index>(t - 1));
                la(j, static_cast<Eigen::Index>(t)) =
                    log_sum_exp(scratch) + log_like[t][j];
            }
        }
        Matrix lb(mh, static_cast<Eigen::Index>(len));
        lb.col(static_cast<Eigen::Index>(len - 1)).setZero();
        for (std::size_t t = len - 1; t-- > 0;) {
            for (Eigen::Index i = 0; i < mh; ++i) {
                scratch = log_trans.col(i) + log_like[t + 1] + lb.col(static_cast<Eigen::Index>(t + 1));
                lb(i, static_cast<Eigen::Index>(t)) = log_sum_exp(scratch);
            }
        }

        Matrix gamma(mh, static_cast<Eigen::Index>(len));
        bool warned = false;
        for (std::size_t t = 0; t < len; ++t) {
            Vector lg = la.col(static_cast<Eigen::Index>(t)) + lb.col(static_cast<Eigen::Index>(t));
            const double lse = log_sum_exp(lg);
            if (lse == kNegInf) {
                gamma.col(static_cast<Eigen::Index>(t)).setConstant(1.0 / static_cast<double>(mh));
                warned = true;
            } else {
                gamma.col(static_cast<Eigen::Index>(t)) = (lg.array() - lse).exp().matrix();
            }
        }
        if (warned)
            warnings.push_back("decode: zero-likelihood step, uniform posterior substituted (seq " +
                               std::to_string(seq) + ")");
        return gamma;
    }
};

}  // namespace

PosteriorTrace posterior_decode(const ThsHmmParams& params, const TreeStructure& tree,
                                const SequenceBatch& batch, const DecoderConfig& config) {
    {
        const auto violations = validate(params, tree);
        if (!violations.empty())
            throw DataError("decode: invalid parameters (" + violations[0].what + ")");
    }
    if (batch.empty()) throw DataError("decode: empty batch");
    if (batch.node_count != tree.node_count()) throw DataError("decode: batch does not match tree");
    if (batch.alphabet != params.n) throw DataError("decode: alphabet size mismatch");

    const int d = tree.node_count();
    PosteriorTrace trace;
    trace.num_states = params.m;
    trace.posterior.assign(static_cast<size_t>(d), {});
    trace.labels.assign(static_cast<size_t>(d), {});

    // Deepest root-to-leaf path containing each node wins; ties toward the
    // smaller leaf index (processed first, strictly-longer replaces).
    std::vector<int> claimed_depth(static_cast<size_t>(d), 0);
    for (const int leaf : tree.leaves()) {
        const std::vector<int> path = tree.path_to(leaf);
        PathDecoder decoder(params, tree, batch, path, config.meta_cap);
        std::vector<int> mine;
        for (std::size_t j = 0; j < path.size(); ++j)
            if (static_cast<int>(path.size()) > claimed_depth[static_cast<size_t>(path[j])]) {
                claimed_depth[static_cast<size_t>(path[j])] = static_cast<int>(path.size());
                mine.push_back(static_cast<int>(j));
            }
        if (mine.empty()) continue;

        for (const int j : mine) {
            const int u = path[static_cast<size_t>(j)];
            trace.posterior[static_cast<size_t>(u)].assign(batch.sequences,
                                                           Matrix::Zero(params.m, static_cast<Eigen::Index>(batch.length)));
            trace.labels[static_cast<size_t>(u)].assign(
                batch.sequences, std::vector<std::int32_t>(batch.length, 0));
        }

        for (std::size_t s = 0; s < batch.sequences; ++s) {
            const Matrix gamma = config.log_space ? decoder.posterior_log(s, trace.warnings)
                                                  : decoder.posterior_scaled(s, trace.warnings);
            for (const int j : mine) {
                const int u = path[static_cast<size_t>(j)];
                Matrix& post = trace.posterior[static_cast<size_t>(u)][s];
                for (std::size_t meta = 0; meta < decoder.chain.mh; ++meta) {
                    const std::int32_t z = decoder.coords[meta][static_cast<size_t>(j)];
                    post.row(z) += gamma.row(static_cast<Eigen::Index>(meta));
                }
                auto& lab = trace.labels[static_cast<size_t>(u)][s];
                for (std::size_t t = 0; t < batch.length; ++t) {
                    Eigen::Index arg = 0;
                    post.col(static_cast<Eigen::Index>(t)).maxCoeff(&arg);
                    lab[t] = static_cast<std::int32_t>(arg);
                }
            }
        }
    }
    return trace;
}

std::vector<double> label_accuracy(const PosteriorTrace& trace, const StateTrace& truth,
                                   const std::vector<std::vector<int>>& perm) {
    const int d = truth.node_count;
    if (static_cast<int>(trace.labels.size()) != d)
        throw DataError("label_accuracy: node count mismatch");
    std::vector<double> acc(static_cast<size_t>(d), 0.0);
    for (int u = 0; u < d; ++u) {
        const auto& seqs = trace.labels[static_cast<size_t>(u)];
        if (seqs.size() != truth.sequences || (!seqs.empty() && seqs[0].size() != truth.length))
            throw DataError("label_accuracy: length mismatch");
        std::size_t hits = 0, total = 0;
        for (std::size_t s = 0; s < seqs.size(); ++s)
            for (std::size_t t = 0; t < truth.length; ++t) {
                const int mapped = perm[static_cast<size_t>(u)][static_cast<size_t>(seqs[s][t])];
                hits += (mapped == truth.at(s, u, t)) ? 1 : 0;
                ++total;
            }
        acc[static_cast<size_t>(u)] = total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    }
    return acc;
}

}  // namespace spectree
