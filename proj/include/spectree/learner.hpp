// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spectree/moments.hpp"
#include "spectree/rng.hpp"

namespace spectree {

struct PowerConfig {
    int restarts = 50;
    int iterations = 100;
    int polish = 20;
};

struct LearnerConfig {
    PowerConfig power;
    double rank_threshold = 1e-8;
    double pinv_rel_threshold = 1e-12;
    std::uint64_t seed = 0;
    int threads = 1;
    std::size_t meta_cap = 4096;
};

// Symmetrized second and third co-occurrences of one node, in the projected
// m-dimensional space.
struct SkeletensorPair {
    int node = -1;
    Matrix m2;   // m x m, exactly symmetric by construction
    Tensor3 m3;  // m x m x m
};

struct WhitenResult {
    Matrix w;            // W' M2 W = I_m
    Vector eigenvalues;  // of M2, descending
};

struct TensorEigenpair {
    Vector v;
    double lambda = 0.0;
};

struct PowerDiagnostics {
    std::vector<double> lambdas;
    double deflation_residual = 0.0;
};

struct DecompositionResult {
    Matrix theta;        // columns estimate U^u' O^u columns
    Vector weights;      // pi-hat, renormalized to sum 1
    Vector weights_raw;  // Z_i^2 before renormalization
    PowerDiagnostics power;
};

struct LearnedObservations {
    std::vector<Matrix> obs;      // per node, after simplex rounding
    std::vector<Matrix> obs_raw;  // before rounding
};

struct NodeDiagnostics {
    int node = -1;
    double b13_min_singular = 0.0;
    Vector whiten_eigenvalues;
    std::vector<double> power_lambdas;
    double deflation_residual = 0.0;
    std::string failure;  // empty on success
};

struct LearnResult {
    LearnedObservations observations;
    ProjectionBasis basis;
    std::vector<NodeDiagnostics> diagnostics;
    std::map<int, std::string> failures;
};

// Per-node range bases: top-m left singular vectors of P_{1,2}^{u,u}.
// Nodes whose m-th singular value falls below the threshold get a warning
// attached (node-wise rank condition likely violated).
ProjectionBasis estimate_ranges(const MomentSource& source, const TreeStructure& tree, int m,
                                double rank_threshold = 1e-8);

// S1 = p23 * pinv(p13), S3 = p21 * pinv(p31); both m x m^h. Throws
// NumericalError when the projected path co-occurrence is near singular
// (path-wise rank condition).
std::pair<Matrix, Matrix> build_symmetrizers(const NodeProjectedMoments& pm,
                                             double rank_threshold = 1e-8,
                                             double pinv_rel_threshold = 1e-12,
                                             double* b13_min_sv = nullptr);

SkeletensorPair build_skeletensor(const NodeProjectedMoments& pm, const Matrix& s1,
                                  const Matrix& s3);

// W = U_m D_m^{-1/2} from the eigendecomposition of the symmetric m2.
WhitenResult whiten(const Matrix& m2, int m);

// Repeated-restart fixed-point iteration v <- G(I,v,v)/|.| with deflation.
std::vector<TensorEigenpair> robust_tensor_power(const Tensor3& g, int m, const PowerConfig& config,
                                                 SplitMix64& rng,
                                                 PowerDiagnostics* diag = nullptr);

DecompositionResult decompose_node(const SkeletensorPair& sk, int m, const PowerConfig& config,
                                   SplitMix64& rng, double pinv_rel_threshold = 1e-12,
                                   Vector* whiten_eigs = nullptr);

// O-hat = U^u * Theta, then each column projected onto the simplex.
// Returns (rounded, raw).
std::pair<Matrix, Matrix> unproject_and_round(const Matrix& theta, const Matrix& basis_u);

// Algorithm 1 end to end: ranges, then per node symmetrizers, skeletensor,
// decomposition and un-projection. Per-node failures are collected; partial
// results are returned. Per-node RNG streams are keyed by node label, so
// results do not depend on which unrelated nodes are present.
LearnResult learn_observations(const MomentSource& source, const TreeStructure& tree, int m,
                               const LearnerConfig& config);

}  // namespace spectree
