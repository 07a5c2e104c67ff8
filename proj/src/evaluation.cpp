// SPDX-License-Identifier: Apache-2.0
#include "spectree/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "spectree/errors.hpp"
#include "spectree/linalg.hpp"
#include "spectree/simulate.hpp"

namespace spectree {

std::vector<int> min_cost_assignment(const Matrix& cost) {
    if (cost.rows() != cost.cols()) throw DataError("assignment: cost matrix must be square");
    const int n = static_cast<int>(cost.rows());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(static_cast<size_t>(n + 1), 0.0), v(static_cast<size_t>(n + 1), 0.0);
    std::vector<int> p(static_cast<size_t>(n + 1), 0), way(static_cast<size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n + 1), kInf);
        std::vector<char> used(static_cast<size_t>(n + 1), 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = p[static_cast<size_t>(j0)];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col_for_row(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j) col_for_row[static_cast<size_t>(p[static_cast<size_t>(j)] - 1)] = j - 1;
    return col_for_row;
}

std::vector<int> AlignmentResult::true_for_learned() const {
    std::vector<int> inv(learned_for_true.size(), -1);
    for (std::size_t i = 0; i < learned_for_true.size(); ++i)
        inv[static_cast<size_t>(learned_for_true[i])] = static_cast<int>(i);
    return inv;
}

AlignmentResult align(const Matrix& o_true, const Matrix& o_hat) {
    if (o_true.rows() != o_hat.rows() || o_true.cols() != o_hat.cols())
        throw DataError("align: shape mismatch");
    const int m = static_cast<int>(o_true.cols());
    Matrix cost(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) cost(i, j) = (o_true.col(i) - o_hat.col(j)).norm();

    AlignmentResult out;
    out.learned_for_true = min_cost_assignment(cost);
    Matrix aligned(o_hat.rows(), m);
    for (int i = 0; i < m; ++i) aligned.col(i) = o_hat.col(out.learned_for_true[static_cast<size_t>(i)]);
    const Matrix diff = o_true - aligned;
    out.frobenius_error = diff.norm();
    out.operator_error = diff.size() == 0 ? 0.0 : Eigen::BDCSVD<Matrix>(diff).singularValues()[0];
    return out;
}

F1Entry f1_score(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth,
                 int positive) {
    if (pred.size() != truth.size()) throw DataError("f1: aligned label arrays required");
    F1Entry e;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] == positive;
        const bool t = truth[i] == positive;
        e.tp += (p && t) ? 1 : 0;
        e.fp += (p && !t) ? 1 : 0;
        e.fn += (!p && t) ? 1 : 0;
    }
    e.precision = (e.tp + e.fp) > 0 ? static_cast<double>(e.tp) / static_cast<double>(e.tp + e.fp) : 0.0;
    e.recall = (e.tp + e.fn) > 0 ? static_cast<double>(e.tp) / static_cast<double>(e.tp + e.fn) : 0.0;
    e.f1 = (e.precision + e.recall) > 0 ? 2.0 * e.precision * e.recall / (e.precision + e.recall) : 0.0;
    return e;
}

double ConsistencyTable::median_error(std::size_t n, int node) const {
    std::vector<double> vals;
    for (const auto& c : cells)
        if (c.n == n && c.node == node && !c.failed) vals.push_back(c.frobenius);
    if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(vals.begin(), vals.end());
    const std::size_t k = vals.size();
    return (k % 2 == 1) ? vals[k / 2] : 0.5 * (vals[k / 2 - 1] + vals[k / 2]);
}

double ConsistencyTable::max_node_median(std::size_t n) const {
    double mx = 0.0;
    std::vector<int> nodes;
    for (const auto& c : cells)
        if (c.n == n && std::find(nodes.begin(), nodes.end(), c.node) == nodes.end())
            nodes.push_back(c.node);
    for (const int u : nodes) mx = std::max(mx, median_error(n, u));
    return mx;
}

ConsistencyTable consistency_curve(const ThsHmmParams& params, const TreeStructure& tree,
                                   const std::vector<std::size_t>& ladder, int trials,
                                   std::uint64_t seed, const LearnerConfig& config) {
    ConsistencyTable table;
    table.ladder = ladder;
    table.trials = trials;
    for (std::size_t ni = 0; ni < ladder.size(); ++ni) {
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t cell_seed = derive_stream(seed, ni * 10007ULL + static_cast<std::uint64_t>(trial));
            auto [batch, trace] = sample_triples(params, tree, ladder[ni], cell_seed);
            (void)trace;
            EmpiricalMoments source(batch, WindowMode::Overlap, config.threads);
            LearnerConfig cfg = config;
            cfg.seed = derive_stream(cell_seed, 1);
            const LearnResult result = learn_observations(source, tree, params.m, cfg);
            for (int u = 0; u < tree.node_count(); ++u) {
                ConsistencyCell cell;
                cell.n = ladder[ni];
                cell.trial = trial;
                cell.node = u;
                if (result.failures.count(u) != 0) {
                    cell.failed = true;
                } else {
                    const AlignmentResult a = align(params.obs[static_cast<size_t>(u)],
                                                    result.observations.obs[static_cast<size_t>(u)]);
                    cell.frobenius = a.frobenius_error;
                    cell.op = a.operator_error;
                }
                table.cells.push_back(cell);
            }
        }
    }
    return table;
}

void write_consistency_tsv(std::ostream& out, const ConsistencyTable& table,
                           const TreeStructure& tree) {
    out << "spectree-format v1\n";
    out << "type\tconsistency\n";
    out << "trials\t" << table.trials << "\n";
    out << "data\tN\ttrial\tnode\tfrobenius_error\toperator_error\tfailed\n";
    out.precision(17);
    for (const auto& c : table.cells)
        out << c.n << '\t' << c.trial << '\t' << tree.labels[static_cast<size_t>(c.node)] << '\t'
            << c.frobenius << '\t' << c.op << '\t' << (c.failed ? 1 : 0) << '\n';
}

}  // namespace spectree
