// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectree/batch.hpp"
#include "spectree/model.hpp"
#include "spectree/tensor.hpp"
#include "spectree/tree.hpp"

namespace spectree {

enum class WindowMode { Overlap, Disjoint };

// Per-node range bases U^u (n x m, orthonormal columns). The path basis
// U^H = kron of per-node bases is never materialized; projections apply it
// one observed row at a time.
struct ProjectionBasis {
    std::vector<Matrix> u;
    std::vector<double> sigma_m;  // m-th singular value of P_{1,2}^{u,u} per node
    std::vector<std::string> warnings;
};

// One projected observation group: the meta-observation over `nodes` at
// 1-based window position `lag`, projected per node by proj[i] (n x k_i).
// A null projection entry stands for the identity (raw one-hot coordinates).
struct ProjGroup {
    std::vector<int> nodes;
    std::vector<const Matrix*> proj;
    int lag = 1;
};

// Everything Algorithm 1 consumes for one node, entirely in projected space.
// With h = |H_u| and mh = m^h:
//   p23 = U^u' P_{2,3}^{u,H} U^H   (m x mh)      p13 = U^H' P_{1,3}^{H,H} U^H (mh x mh)
//   p21 = U^u' P_{2,1}^{u,H} U^H   (m x mh)      p31 = p13'                   (mh x mh)
//   p12 = U^H' P_{1,2}^{H,u} U^u = p21'          t123 = P_{1,2,3}^{H,u,H}(U^H, U^u, U^H)
struct NodeProjectedMoments {
    int node = -1;
    Matrix p23;
    Matrix p13;
    Matrix p21;
    Matrix p31;
    Matrix p12;
    Tensor3 t123;
    double samples = 0.0;
};

// Common surface over empirical batches and exact population moments; the
// learner, recovery and the rank checks run unchanged on either.
class MomentSource {
  public:
    virtual ~MomentSource() = default;
    virtual int num_nodes() const = 0;
    virtual int alphabet() const = 0;
    virtual double sample_count() const = 0;  // triple windows
    // n x n co-occurrence of (x_{lag_a}^{node_a}, x_{lag_b}^{node_b}).
    virtual Matrix raw_pair(int node_a, int node_b, int lag_a, int lag_b) const = 0;
    virtual Vector projected_single(const ProjGroup& g) const = 0;
    virtual Matrix projected_pair(const ProjGroup& a, const ProjGroup& b) const = 0;
    virtual Tensor3 projected_triple(const ProjGroup& a, const ProjGroup& b,
                                     const ProjGroup& c) const = 0;
    // Bundle for node u; the default composes the granular queries.
    virtual NodeProjectedMoments path_moments(const TreeStructure& tree,
                                              const ProjectionBasis& basis, int u) const;
};

// Empirical co-occurrence estimates. Long sequences average over window
// starts; pair-only queries use every start valid for their own span while
// path_moments uses the T-2 triple windows for all of its objects.
// Accumulation is blockwise with a pairwise (tree) merge, so results are
// identical for any thread count.
class EmpiricalMoments final : public MomentSource {
  public:
    explicit EmpiricalMoments(const SequenceBatch& batch, WindowMode window = WindowMode::Overlap,
                              int threads = 1);

    int num_nodes() const override { return batch_.node_count; }
    int alphabet() const override { return batch_.alphabet; }
    double sample_count() const override;
    Matrix raw_pair(int node_a, int node_b, int lag_a, int lag_b) const override;
    Vector projected_single(const ProjGroup& g) const override;
    Matrix projected_pair(const ProjGroup& a, const ProjGroup& b) const override;
    Tensor3 projected_triple(const ProjGroup& a, const ProjGroup& b,
                             const ProjGroup& c) const override;
    NodeProjectedMoments path_moments(const TreeStructure& tree, const ProjectionBasis& basis,
                                      int u) const override;

  private:
    const SequenceBatch& batch_;
    WindowMode window_;
    int threads_;
};

// Exact moments obtained by summing over all joint hidden-state assignments
// of the covering root-to-node path at the involved times. Serves as the
// test oracle everywhere and as the exact-recovery input for the pipeline.
class PopulationMoments final : public MomentSource {
  public:
    PopulationMoments(const ThsHmmParams& params, const TreeStructure& tree,
                      std::size_t meta_cap = 4096);

    int num_nodes() const override { return tree_.node_count(); }
    int alphabet() const override { return params_.n; }
    double sample_count() const override { return 1.0; }
    Matrix raw_pair(int node_a, int node_b, int lag_a, int lag_b) const override;
    Vector projected_single(const ProjGroup& g) const override;
    Matrix projected_pair(const ProjGroup& a, const ProjGroup& b) const override;
    Tensor3 projected_triple(const ProjGroup& a, const ProjGroup& b,
                             const ProjGroup& c) const override;

  private:
    const ThsHmmParams& params_;
    const TreeStructure& tree_;
    std::size_t meta_cap_;
};

// Coalesced Markov chain over the meta-states of a root-first path:
// rho(s) = P(z_1^H = s), trans(s2, s1) = P(z_{t+1}^H = s2 | z_t^H = s1).
// Meta index: root coordinate most significant (matches kron order).
struct PathChain {
    std::vector<int> path;
    std::size_t mh = 0;
    Vector rho;
    Matrix trans;
};

PathChain build_path_chain(const ThsHmmParams& params, const TreeStructure& tree,
                           const std::vector<int>& path, std::size_t meta_cap);

// Decode meta index into per-node states along the path (root first).
void meta_decode(std::size_t idx, int m, std::size_t h, std::int32_t* out);

// Spec-level conveniences.
ProjGroup basis_group(const ProjectionBasis& basis, const std::vector<int>& nodes, int lag);
Matrix projected_pair(const MomentSource& source, const ProjectionBasis& basis,
                      const std::vector<int>& nodes_a, const std::vector<int>& nodes_b, int lag_a,
                      int lag_b);
Tensor3 projected_triple(const MomentSource& source, const ProjectionBasis& basis,
                         const std::vector<int>& path, int u);

}  // namespace spectree
