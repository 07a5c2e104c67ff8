// SPDX-License-Identifier: Apache-2.0
#include "spectree/simulate.hpp"

#include "spectree/rng.hpp"

namespace spectree {

SequenceBatch SequenceBatch::zeros(BatchMode mode, int nodes, int alphabet, std::size_t sequences,
                                   std::size_t length) {
    SequenceBatch b;
    b.mode = mode;
    b.node_count = nodes;
    b.alphabet = alphabet;
    b.sequences = sequences;
    b.length = length;
    b.data.assign(sequences * static_cast<std::size_t>(nodes) * length, 0);
    return b;
}

SequenceBatch restrict_nodes(const SequenceBatch& batch, const std::vector<int>& nodes) {
    SequenceBatch out = SequenceBatch::zeros(batch.mode, static_cast<int>(nodes.size()),
                                             batch.alphabet, batch.sequences, batch.length);
    out.seed = batch.seed;
    for (const int v : nodes) {
        if (v < 0 || v >= batch.node_count) throw DataError("restrict_nodes: node out of range");
        if (!batch.node_labels.empty())
            out.node_labels.push_back(batch.node_labels[static_cast<size_t>(v)]);
    }
    for (std::size_t s = 0; s < batch.sequences; ++s)
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t t = 0; t < batch.length; ++t)
                out.at(s, static_cast<int>(i), t) = batch.at(s, nodes[i], t);
    return out;
}

namespace {

int draw_categorical(SplitMix64& rng, const double* p, int len) {
    const double u = rng.next_double();
    double acc = 0.0;
    for (int i = 0; i < len; ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return len - 1;
}

struct SeqSampler {
    const ThsHmmParams& params;
    const TreeStructure& tree;
    const std::vector<int>& topo;
    SplitMix64 rng;
    std::vector<int> state;       // current hidden state per node
    std::vector<int> prev_state;  // previous step
    Vector scratch;

    SeqSampler(const ThsHmmParams& p, const TreeStructure& t, const std::vector<int>& order,
               std::uint64_t stream_seed)
        : params(p),
          tree(t),
          topo(order),
          rng(stream_seed),
          state(static_cast<size_t>(t.node_count())),
          prev_state(static_cast<size_t>(t.node_count())),
          scratch(p.m) {}

    void step_states(bool first) {
        std::swap(state, prev_state);
        for (const int u : topo) {
            if (first) {
                if (tree.is_root(u)) {
                    state[static_cast<size_t>(u)] =
                        draw_categorical(rng, params.init_root.data(), params.m);
                } else {
                    const int zp = state[static_cast<size_t>(tree.parent[static_cast<size_t>(u)])];
                    const Matrix& w = params.init[static_cast<size_t>(u)];
                    state[static_cast<size_t>(u)] =
                        draw_categorical(rng, w.col(zp).data(), params.m);
                }
            } else {
                if (tree.is_root(u)) {
                    const int zprev = prev_state[static_cast<size_t>(u)];
                    state[static_cast<size_t>(u)] =
                        draw_categorical(rng, params.trans_root.col(zprev).data(), params.m);
                } else {
                    const int zprev = prev_state[static_cast<size_t>(u)];
                    const int zpar = state[static_cast<size_t>(tree.parent[static_cast<size_t>(u)])];
                    const Tensor3& t = params.trans[static_cast<size_t>(u)];
                    for (int z = 0; z < params.m; ++z) scratch[z] = t(z, zprev, zpar);
                    state[static_cast<size_t>(u)] = draw_categorical(rng, scratch.data(), params.m);
                }
            }
        }
    }

    void emit(SequenceBatch& batch, StateTrace& trace, std::size_t seq, std::size_t t) {
        for (const int u : topo) {
            const int z = state[static_cast<size_t>(u)];
            const Matrix& o = params.obs[static_cast<size_t>(u)];
            batch.at(seq, u, t) =
                static_cast<std::int32_t>(draw_categorical(rng, o.col(z).data(), params.n));
            trace.at(seq, u, t) = static_cast<std::int32_t>(z);
        }
    }
};

std::pair<SequenceBatch, StateTrace> sample(const ThsHmmParams& params, const TreeStructure& tree,
                                            BatchMode mode, std::size_t sequences,
                                            std::size_t length, std::size_t burn_in,
                                            std::uint64_t seed) {
    {
        const auto violations = validate(params, tree);
        if (!violations.empty())
            throw DataError("simulate: invalid parameters (" + violations[0].what + ")");
    }
    SequenceBatch batch = SequenceBatch::zeros(mode, tree.node_count(), params.n, sequences, length);
    batch.seed = seed;
    batch.node_labels = tree.labels;
    StateTrace trace;
    trace.node_count = tree.node_count();
    trace.num_states = params.m;
    trace.sequences = sequences;
    trace.length = length;
    trace.node_labels = tree.labels;
    trace.data.assign(sequences * static_cast<std::size_t>(tree.node_count()) * length, 0);

    const std::vector<int> topo = tree.topological_order();
    for (std::size_t s = 0; s < sequences; ++s) {
        SeqSampler sampler(params, tree, topo, derive_stream(seed, s));
        for (std::size_t t = 0; t < burn_in; ++t) sampler.step_states(t == 0);
        for (std::size_t t = 0; t < length; ++t) {
            sampler.step_states(burn_in == 0 && t == 0);
            sampler.emit(batch, trace, s, t);
        }
    }
    return {std::move(batch), std::move(trace)};
}

}  // namespace

std::pair<SequenceBatch, StateTrace> sample_triples(const ThsHmmParams& params,
                                                    const TreeStructure& tree, std::size_t n,
                                                    std::uint64_t seed) {
    return sample(params, tree, BatchMode::Triples, n, 3, 0, seed);
}

std::pair<SequenceBatch, StateTrace> sample_long(const ThsHmmParams& params,
                                                 const TreeStructure& tree, std::size_t length,
                                                 std::size_t burn_in, std::uint64_t seed) {
    if (length < 3) throw DataError("sample_long: length must be at least 3");
    return sample(params, tree, BatchMode::LongSequence, 1, length, burn_in, seed);
}

}  // namespace spectree
