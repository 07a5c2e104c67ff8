// SPDX-License-Identifier: Apache-2.0
#include "spectree/moments.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <set>

#include "spectree/linalg.hpp"

namespace spectree {

namespace {

constexpr std::size_t kBlock = 16384;

// Blockwise accumulation with a binary-counter pairwise merge. Block size and
// merge order are fixed, so the result is bit-identical for any thread count.
template <class Acc, class MakeZero, class FillBlock>
Acc reduce_blocks(std::size_t nitems, int threads, MakeZero make_zero, FillBlock fill_block) {
    const std::size_t nblocks = nitems == 0 ? 0 : (nitems - 1) / kBlock + 1;
    std::vector<std::optional<Acc>> counter;
    auto push = [&counter](Acc&& acc) {
        Acc cur = std::move(acc);
        for (std::size_t level = 0;; ++level) {
            if (level == counter.size()) {
                counter.emplace_back(std::move(cur));
                return;
            }
            if (!counter[level]) {
                counter[level] = std::move(cur);
                return;
            }
            (*counter[level]) += cur;
            cur = std::move(*counter[level]);
            counter[level].reset();
        }
    };

    auto run_block = [&](std::size_t b) {
        Acc acc = make_zero();
        const std::size_t begin = b * kBlock;
        const std::size_t end = std::min(nitems, begin + kBlock);
        fill_block(acc, begin, end);
        return acc;
    };

    if (threads <= 1 || nblocks <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) push(run_block(b));
    } else {
        const std::size_t wave = static_cast<std::size_t>(threads);
        for (std::size_t start = 0; start < nblocks; start += wave) {
            const std::size_t stop = std::min(nblocks, start + wave);
            std::vector<std::future<Acc>> futs;
            futs.reserve(stop - start);
            for (std::size_t b = start; b < stop; ++b)
                futs.push_back(std::async(std::launch::async, run_block, b));
            for (auto& f : futs) push(f.get());
        }
    }

    Acc total = make_zero();
    bool first = true;
    for (auto& slot : counter) {
        if (!slot) continue;
        if (first) {
            total = std::move(*slot);
            first = false;
        } else {
            total += *slot;
        }
    }
    return total;
}

struct MatAcc {
    Matrix m;
    double count = 0.0;
    MatAcc& operator+=(const MatAcc& o) {
        m += o.m;
        count += o.count;
        return *this;
    }
};

struct VecAcc {
    Vector v;
    double count = 0.0;
    VecAcc& operator+=(const VecAcc& o) {
        v += o.v;
        count += o.count;
        return *this;
    }
};

struct TenAcc {
    Tensor3 t;
    double count = 0.0;
    TenAcc& operator+=(const TenAcc& o) {
        t += o.t;
        count += o.count;
        return *this;
    }
};

struct NodeAcc {
    Matrix p23, p13, p21;
    Tensor3 t123;
    double count = 0.0;
    NodeAcc& operator+=(const NodeAcc& o) {
        p23 += o.p23;
        p13 += o.p13;
        p21 += o.p21;
        t123 += o.t123;
        count += o.count;
        return *this;
    }
};

// Window layout for one empirical query. A window spans `span` consecutive
// positions; lags address positions 1..span within it.
struct WindowSet {
    std::size_t per_seq = 0;
    std::size_t step = 1;
    std::size_t count = 0;
    std::size_t resolve_seq(std::size_t w) const { return w / per_seq; }
    std::size_t resolve_t0(std::size_t w) const { return (w % per_seq) * step; }
};

WindowSet windows_for(const SequenceBatch& batch, int span, WindowMode mode) {
    if (batch.empty()) throw DataError("moments: empty batch");
    if (span < 1 || static_cast<std::size_t>(span) > batch.length)
        throw DataError("moments: window span " + std::to_string(span) +
                        " exceeds sequence length " + std::to_string(batch.length));
    WindowSet ws;
    if (batch.mode == BatchMode::Triples) {
        ws.per_seq = 1;
        ws.step = 1;
    } else {
        ws.step = (mode == WindowMode::Overlap) ? 1 : 3;
        ws.per_seq = (batch.length - static_cast<std::size_t>(span)) / ws.step + 1;
    }
    ws.count = ws.per_seq * batch.sequences;
    return ws;
}

void check_group(const SequenceBatch& batch, const ProjGroup& g) {
    if (g.nodes.empty()) throw DataError("moments: empty node group");
    if (g.nodes.size() != g.proj.size())
        throw DataError("moments: projection list does not match node list");
    if (g.lag < 1) throw DataError("moments: lag must be >= 1");
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const int v = g.nodes[i];
        if (v < 0 || v >= batch.node_count)
            throw DataError("moments: node index out of range: " + std::to_string(v));
        if (g.proj[i] != nullptr && g.proj[i]->rows() != batch.alphabet)
            throw DataError("moments: projection row count does not match alphabet");
    }
}

Eigen::Index group_width(const ProjGroup& g, int alphabet) {
    Eigen::Index w = 1;
    for (const Matrix* p : g.proj) w *= (p != nullptr) ? p->cols() : alphabet;
    return w;
}

// Builds the projected meta-observation row for one group and window:
// out = kron over the group's nodes of proj_v' e_{x_t^v}; first node most
// significant, matching the global meta-index convention.
class GroupProjector {
  public:
    GroupProjector(const SequenceBatch& batch, const ProjGroup& group)
        : batch_(batch), group_(group) {
        const Eigen::Index w = group_width(group, batch.alphabet);
        buf_a_.resize(w);
        buf_b_.resize(w);
    }

    const Vector& row(std::size_t seq, std::size_t t0) {
        const std::size_t t = t0 + static_cast<std::size_t>(group_.lag) - 1;
        Vector* cur = &buf_a_;
        Vector* nxt = &buf_b_;
        Eigen::Index size = 1;
        (*cur)[0] = 1.0;
        for (std::size_t i = 0; i < group_.nodes.size(); ++i) {
            const std::int32_t x = batch_.at(seq, group_.nodes[i], t);
            const Matrix* p = group_.proj[i];
            const Eigen::Index k = (p != nullptr) ? p->cols() : batch_.alphabet;
            for (Eigen::Index a = 0; a < size; ++a) {
                const double va = (*cur)[a];
                double* dst = nxt->data() + a * k;
                if (p != nullptr) {
                    for (Eigen::Index j = 0; j < k; ++j) dst[j] = va * (*p)(x, j);
                } else {
                    std::fill(dst, dst + k, 0.0);
                    dst[x] = va;
                }
            }
            size *= k;
            std::swap(cur, nxt);
        }
        result_ = cur;
        return *result_;
    }

  private:
    const SequenceBatch& batch_;
    ProjGroup group_;
    Vector buf_a_, buf_b_;
    const Vector* result_ = nullptr;
};

}  // namespace

// ---------------------------------------------------------------------------
// Default bundle: compose granular queries (used by PopulationMoments).

NodeProjectedMoments MomentSource::path_moments(const TreeStructure& tree,
                                                const ProjectionBasis& basis, int u) const {
    const std::vector<int> path = tree.path_to(u);
    const ProjGroup g1 = basis_group(basis, path, 1);
    const ProjGroup g2 = basis_group(basis, {u}, 2);
    const ProjGroup g3 = basis_group(basis, path, 3);
    NodeProjectedMoments out;
    out.node = u;
    out.p23 = projected_pair(g2, g3);
    out.p13 = projected_pair(g1, g3);
    out.p12 = projected_pair(g1, g2);
    out.p21 = out.p12.transpose();
    out.p31 = out.p13.transpose();
    out.t123 = projected_triple(g1, g2, g3);
    out.samples = sample_count();
    return out;
}

// ---------------------------------------------------------------------------
// EmpiricalMoments

EmpiricalMoments::EmpiricalMoments(const SequenceBatch& batch, WindowMode window, int threads)
    : batch_(batch), window_(window), threads_(threads < 1 ? 1 : threads) {}

double EmpiricalMoments::sample_count() const { return double(windows_for(batch_, 3, window_).count); }

Matrix EmpiricalMoments::raw_pair(int node_a, int node_b, int lag_a, int lag_b) const {
    if (node_a < 0 || node_a >= batch_.node_count || node_b < 0 || node_b >= batch_.node_count)
        throw DataError("raw_pair: node index out of range");
    const int span = std::max(lag_a, lag_b);
    const WindowSet ws = windows_for(batch_, span, window_);
    const int n = batch_.alphabet;
    auto make_zero = [n] { return MatAcc{Matrix::Zero(n, n), 0.0}; };
    MatAcc total = reduce_blocks<MatAcc>(
        ws.count, threads_, make_zero, [&](MatAcc& acc, std::size_t begin, std::size_t end) {
            for (std::size_t w = begin; w < end; ++w) {
                const std::size_t s = ws.resolve_seq(w);
                const std::size_t t0 = ws.resolve_t0(w);
                acc.m(batch_.at(s, node_a, t0 + static_cast<std::size_t>(lag_a) - 1),
                      batch_.at(s, node_b, t0 + static_cast<std::size_t>(lag_b) - 1)) += 1.0;
                acc.count += 1.0;
            }
        });
    return total.m / total.count;
}

Vector EmpiricalMoments::projected_single(const ProjGroup& g) const {
    check_group(batch_, g);
    if (g.nodes.size() != 1)
        throw DataError("projected_single: empirical source supports single nodes only");
    const WindowSet ws = windows_for(batch_, g.lag, window_);
    const int n = batch_.alphabet;
    const int node = g.nodes[0];
    auto make_zero = [n] { return VecAcc{Vector::Zero(n), 0.0}; };
    VecAcc total = reduce_blocks<VecAcc>(
        ws.count, threads_, make_zero, [&](VecAcc& acc, std::size_t begin, std::size_t end) {
            for (std::size_t w = begin; w < end; ++w) {
                acc.v[batch_.at(ws.resolve_seq(w), node,
                                ws.resolve_t0(w) + static_cast<std::size_t>(g.lag) - 1)] += 1.0;
                acc.count += 1.0;
            }
        });
    const Vector freq = total.v / total.count;
    return g.proj[0] != nullptr ? Vector(g.proj[0]->transpose() * freq) : freq;
}

Matrix EmpiricalMoments::projected_pair(const ProjGroup& a, const ProjGroup& b) const {
    check_group(batch_, a);
    check_group(batch_, b);
    const int span = std::max(a.lag, b.lag);
    const WindowSet ws = windows_for(batch_, span, window_);
    const Eigen::Index ka = group_width(a, batch_.alphabet);
    const Eigen::Index kb = group_width(b, batch_.alphabet);
    auto make_zero = [ka, kb] { return MatAcc{Matrix::Zero(ka, kb), 0.0}; };
    MatAcc total = reduce_blocks<MatAcc>(
        ws.count, threads_, make_zero, [&](MatAcc& acc, std::size_t begin, std::size_t end) {
            GroupProjector pa(batch_, a), pb(batch_, b);
            for (std::size_t w = begin; w < end; ++w) {
                const std::size_t s = ws.resolve_seq(w);
                const std::size_t t0 = ws.resolve_t0(w);
                const Vector& va = pa.row(s, t0);
                const Vector& vb = pb.row(s, t0);
                acc.m.noalias() += va.head(ka) * vb.head(kb).transpose();
                acc.count += 1.0;
            }
        });
    return total.m / total.count;
}

Tensor3 EmpiricalMoments::projected_triple(const ProjGroup& a, const ProjGroup& b,
                                           const ProjGroup& c) const {
    check_group(batch_, a);
    check_group(batch_, b);
    check_group(batch_, c);
    const int span = std::max({a.lag, b.lag, c.lag});
    const WindowSet ws = windows_for(batch_, span, window_);
    const Eigen::Index ka = group_width(a, batch_.alphabet);
    const Eigen::Index kb = group_width(b, batch_.alphabet);
    const Eigen::Index kc = group_width(c, batch_.alphabet);
    auto make_zero = [ka, kb, kc] { return TenAcc{Tensor3(ka, kb, kc), 0.0}; };
    TenAcc total = reduce_blocks<TenAcc>(
        ws.count, threads_, make_zero, [&](TenAcc& acc, std::size_t begin, std::size_t end) {
            GroupProjector pa(batch_, a), pb(batch_, b), pc(batch_, c);
            for (std::size_t w = begin; w < end; ++w) {
                const std::size_t s = ws.resolve_seq(w);
                const std::size_t t0 = ws.resolve_t0(w);
                acc.t.add_outer(pa.row(s, t0).head(ka), pb.row(s, t0).head(kb),
                                pc.row(s, t0).head(kc));
                acc.count += 1.0;
            }
        });
    total.t *= 1.0 / total.count;
    return std::move(total.t);
}

NodeProjectedMoments EmpiricalMoments::path_moments(const TreeStructure& tree,
                                                    const ProjectionBasis& basis, int u) const {
    const std::vector<int> path = tree.path_to(u);
    const ProjGroup g1 = basis_group(basis, path, 1);
    const ProjGroup g2 = basis_group(basis, {u}, 2);
    const ProjGroup g3 = basis_group(basis, path, 3);
    check_group(batch_, g1);
    check_group(batch_, g2);

    // One pass over the T-2 triple windows fills every projected object.
    const WindowSet ws = windows_for(batch_, 3, window_);
    const Eigen::Index mh = group_width(g1, batch_.alphabet);
    const Eigen::Index m = group_width(g2, batch_.alphabet);
    auto make_zero = [mh, m] {
        return NodeAcc{Matrix::Zero(m, mh), Matrix::Zero(mh, mh), Matrix::Zero(m, mh),
                       Tensor3(mh, m, mh), 0.0};
    };
    NodeAcc total = reduce_blocks<NodeAcc>(
        ws.count, threads_, make_zero, [&](NodeAcc& acc, std::size_t begin, std::size_t end) {
            GroupProjector p1(batch_, g1), p2(batch_, g2), p3(batch_, g3);
            for (std::size_t w = begin; w < end; ++w) {
                const std::size_t s = ws.resolve_seq(w);
                const std::size_t t0 = ws.resolve_t0(w);
                const Vector& a1 = p1.row(s, t0);
                const Vector& b2 = p2.row(s, t0);
                const Vector& a3 = p3.row(s, t0);
                acc.p23.noalias() += b2.head(m) * a3.head(mh).transpose();
                acc.p13.noalias() += a1.head(mh) * a3.head(mh).transpose();
                acc.p21.noalias() += b2.head(m) * a1.head(mh).transpose();
                acc.t123.add_outer(a1.head(mh), b2.head(m), a3.head(mh));
                acc.count += 1.0;
            }
        });

    NodeProjectedMoments out;
    out.node = u;
    const double inv = 1.0 / total.count;
    out.p23 = total.p23 * inv;
    out.p13 = total.p13 * inv;
    out.p21 = total.p21 * inv;
    total.t123 *= inv;
    out.t123 = std::move(total.t123);
    out.p12 = out.p21.transpose();
    out.p31 = out.p13.transpose();
    out.samples = total.count;
    return out;
}

// ---------------------------------------------------------------------------
// Path meta chain

void meta_decode(std::size_t idx, int m, std::size_t h, std::int32_t* out) {
    for (std::size_t j = h; j-- > 0;) {
        out[j] = static_cast<std::int32_t>(idx % static_cast<std::size_t>(m));
        idx /= static_cast<std::size_t>(m);
    }
}

PathChain build_path_chain(const ThsHmmParams& params, const TreeStructure& tree,
                           const std::vector<int>& path, std::size_t meta_cap) {
    if (path.empty() || !tree.is_root(path[0]))
        throw DataError("path chain: path must start at the root");
    for (std::size_t j = 1; j < path.size(); ++j)
        if (tree.parent[static_cast<size_t>(path[j])] != path[j - 1])
            throw DataError("path chain: not a root-to-node path");

    const std::size_t h = path.size();
    const int m = params.m;
    std::size_t mh = 1;
    for (std::size_t j = 0; j < h; ++j) {
        mh *= static_cast<std::size_t>(m);
        if (mh > meta_cap)
            throw DataError("meta-state dimension m^" + std::to_string(h) +
                            " exceeds the configured cap of " + std::to_string(meta_cap));
    }

    PathChain chain;
    chain.path = path;
    chain.mh = mh;
    chain.rho = Vector::Zero(static_cast<Eigen::Index>(mh));
    chain.trans = Matrix::Zero(static_cast<Eigen::Index>(mh), static_cast<Eigen::Index>(mh));

    std::vector<std::int32_t> z1(h), z2(h);
    for (std::size_t s = 0; s < mh; ++s) {
        meta_decode(s, m, h, z1.data());
        double p = params.init_root[z1[0]];
        for (std::size_t j = 1; j < h; ++j)
            p *= params.init[static_cast<size_t>(path[j])](z1[j], z1[j - 1]);
        chain.rho[static_cast<Eigen::Index>(s)] = p;
    }
    for (std::size_t s1 = 0; s1 < mh; ++s1) {
        meta_decode(s1, m, h, z1.data());
        for (std::size_t s2 = 0; s2 < mh; ++s2) {
            meta_decode(s2, m, h, z2.data());
            double p = params.trans_root(z2[0], z1[0]);
            for (std::size_t j = 1; j < h; ++j)
                p *= params.trans[static_cast<size_t>(path[j])](z2[j], z1[j], z2[j - 1]);
            chain.trans(static_cast<Eigen::Index>(s2), static_cast<Eigen::Index>(s1)) = p;
        }
    }
    return chain;
}

// ---------------------------------------------------------------------------
// PopulationMoments

namespace {

std::vector<int> covering_path(const TreeStructure& tree, const std::vector<const ProjGroup*>& groups) {
    int deepest = -1;
    int best_depth = -1;
    std::set<int> wanted;
    for (const ProjGroup* g : groups)
        for (const int v : g->nodes) {
            wanted.insert(v);
            const int d = tree.depth_of(v);
            if (d > best_depth) {
                best_depth = d;
                deepest = v;
            }
        }
    const std::vector<int> path = tree.path_to(deepest);
    const std::set<int> on_path(path.begin(), path.end());
    for (const int v : wanted)
        if (!on_path.count(v))
            throw DataError("population moments: queried nodes do not lie on a single root path");
    return path;
}

int position_in(const std::vector<int>& path, int node) {
    for (std::size_t j = 0; j < path.size(); ++j)
        if (path[j] == node) return static_cast<int>(j);
    throw DataError("population moments: node not on covering path");
}

// k_g x mh table; column s is the projected emission kron column of the
// group under path meta-state s.
Matrix group_table(const ThsHmmParams& params, const ProjGroup& g, const std::vector<int>& path,
                   std::size_t mh) {
    std::vector<Matrix> po;
    po.reserve(g.nodes.size());
    Eigen::Index kg = 1;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const Matrix& o = params.obs[static_cast<size_t>(g.nodes[i])];
        po.push_back(g.proj[i] != nullptr ? Matrix(g.proj[i]->transpose() * o) : o);
        kg *= po.back().rows();
    }
    std::vector<int> pos;
    pos.reserve(g.nodes.size());
    for (const int v : g.nodes) pos.push_back(position_in(path, v));

    Matrix table(kg, static_cast<Eigen::Index>(mh));
    std::vector<std::int32_t> z(path.size());
    for (std::size_t s = 0; s < mh; ++s) {
        meta_decode(s, params.m, path.size(), z.data());
        Vector col = Vector::Ones(1);
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            col = kron_vec(col, po[i].col(z[static_cast<size_t>(pos[i])]));
        table.col(static_cast<Eigen::Index>(s)) = col;
    }
    return table;
}

void check_lag(int lag) {
    if (lag < 1 || lag > 3) throw DataError("population moments: lags must be in 1..3");
}

}  // namespace

PopulationMoments::PopulationMoments(const ThsHmmParams& params, const TreeStructure& tree,
                                     std::size_t meta_cap)
    : params_(params), tree_(tree), meta_cap_(meta_cap) {}

Matrix PopulationMoments::raw_pair(int node_a, int node_b, int lag_a, int lag_b) const {
    ProjGroup a{{node_a}, {nullptr}, lag_a};
    ProjGroup b{{node_b}, {nullptr}, lag_b};
    return projected_pair(a, b);
}

Vector PopulationMoments::projected_single(const ProjGroup& g) const {
    check_lag(g.lag);
    const std::vector<int> path = covering_path(tree_, {&g});
    const PathChain chain = build_path_chain(params_, tree_, path, meta_cap_);
    Vector marg = chain.rho;
    for (int t = 1; t < g.lag; ++t) marg = chain.trans * marg;
    return group_table(params_, g, path, chain.mh) * marg;
}

Matrix PopulationMoments::projected_pair(const ProjGroup& a, const ProjGroup& b) const {
    check_lag(a.lag);
    check_lag(b.lag);
    if (a.lag > b.lag) return projected_pair(b, a).transpose();
    const std::vector<int> path = covering_path(tree_, {&a, &b});
    const PathChain chain = build_path_chain(params_, tree_, path, meta_cap_);
    const Matrix ga = group_table(params_, a, path, chain.mh);
    const Matrix gb = group_table(params_, b, path, chain.mh);

    Vector marg = chain.rho;
    for (int t = 1; t < a.lag; ++t) marg = chain.trans * marg;
    if (a.lag == b.lag) return ga * marg.asDiagonal() * gb.transpose();

    Matrix step = chain.trans;
    for (int t = a.lag + 1; t < b.lag; ++t) step = chain.trans * step;
    const Matrix joint = marg.asDiagonal() * step.transpose();  // P(z_ta = i, z_tb = j)
    return ga * joint * gb.transpose();
}

Tensor3 PopulationMoments::projected_triple(const ProjGroup& a, const ProjGroup& b,
                                            const ProjGroup& c) const {
    check_lag(a.lag);
    check_lag(b.lag);
    check_lag(c.lag);
    const std::vector<int> path = covering_path(tree_, {&a, &b, &c});
    const PathChain chain = build_path_chain(params_, tree_, path, meta_cap_);
    const Matrix ga = group_table(params_, a, path, chain.mh);
    const Matrix gb = group_table(params_, b, path, chain.mh);
    const Matrix gc = group_table(params_, c, path, chain.mh);

    std::vector<int> times = {a.lag, b.lag, c.lag};
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const std::size_t layers = times.size();
    auto layer_of = [&times](int lag) {
        return static_cast<std::size_t>(std::find(times.begin(), times.end(), lag) - times.begin());
    };
    const std::size_t la = layer_of(a.lag), lb = layer_of(b.lag), lc = layer_of(c.lag);

    const std::size_t mh = chain.mh;
    double cost = static_cast<double>(ga.rows()) * double(gb.rows()) * double(gc.rows());
    for (std::size_t l = 0; l < layers; ++l) cost *= static_cast<double>(mh);
    if (cost > 2e8)
        throw DataError("population moments: triple enumeration exceeds the safety cap");

    std::vector<Vector> margs(4);
    margs[1] = chain.rho;
    margs[2] = chain.trans * margs[1];
    margs[3] = chain.trans * margs[2];
    std::vector<Matrix> steps(layers);  // steps[l]: transition from layer l-1 to l
    for (std::size_t l = 1; l < layers; ++l) {
        Matrix step = chain.trans;
        for (int t = times[l - 1] + 1; t < times[l]; ++t) step = chain.trans * step;
        steps[l] = step;
    }

    Tensor3 out(ga.rows(), gb.rows(), gc.rows());
    std::vector<std::size_t> z(layers, 0);
    for (;;) {
        double w = margs[static_cast<std::size_t>(times[0])][static_cast<Eigen::Index>(z[0])];
        for (std::size_t l = 1; l < layers; ++l)
            w *= steps[l](static_cast<Eigen::Index>(z[l]), static_cast<Eigen::Index>(z[l - 1]));
        if (w != 0.0)
            out.add_outer(ga.col(static_cast<Eigen::Index>(z[la])),
                          gb.col(static_cast<Eigen::Index>(z[lb])),
                          gc.col(static_cast<Eigen::Index>(z[lc])), w);
        // odometer over layers
        std::size_t l = 0;
        while (l < layers && ++z[l] == mh) z[l++] = 0;
        if (l == layers) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Conveniences

ProjGroup basis_group(const ProjectionBasis& basis, const std::vector<int>& nodes, int lag) {
    ProjGroup g;
    g.nodes = nodes;
    g.lag = lag;
    g.proj.reserve(nodes.size());
    for (const int v : nodes) g.proj.push_back(&basis.u[static_cast<size_t>(v)]);
    return g;
}

Matrix projected_pair(const MomentSource& source, const ProjectionBasis& basis,
                      const std::vector<int>& nodes_a, const std::vector<int>& nodes_b, int lag_a,
                      int lag_b) {
    return source.projected_pair(basis_group(basis, nodes_a, lag_a),
                                 basis_group(basis, nodes_b, lag_b));
}

Tensor3 projected_triple(const MomentSource& source, const ProjectionBasis& basis,
                         const std::vector<int>& path, int u) {
    return source.projected_triple(basis_group(basis, path, 1), basis_group(basis, {u}, 2),
                                   basis_group(basis, path, 3));
}

}  // namespace spectree
