// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spectree/batch.hpp"
#include "spectree/decoder.hpp"
#include "spectree/learner.hpp"
#include "spectree/model.hpp"

namespace spectree {

inline constexpr const char* kFormatHeader = "spectree-format v1";

// Runtime knobs shared by the CLI commands; read from a JSON config file,
// individual flags override.
struct RunConfig {
    std::uint64_t seed = 0;
    PowerConfig power;
    double rank_threshold = 1e-8;
    double pinv_rel_threshold = 1e-12;
    WindowMode window = WindowMode::Overlap;
    std::size_t burn_in = 1000;
    std::size_t meta_cap = 4096;
    int threads = 0;  // 0 = hardware concurrency

    LearnerConfig learner() const;
};

RunConfig read_config(const std::string& path);

// --- model files (JSON) ----------------------------------------------------

struct ModelFile {
    ThsHmmParams params;
    TreeStructure tree;
    std::map<std::string, std::string> failed_nodes;
};

void write_model(const std::string& path, const ThsHmmParams& params, const TreeStructure& tree,
                 const std::map<std::string, std::string>& failed_nodes = {});
ModelFile read_model(const std::string& path);

// --- tree files (TSV) ------------------------------------------------------

TreeStructure read_tree(const std::string& path);
void write_tree(const std::string& path, const TreeStructure& tree);

// --- observation / state files (TSV) ---------------------------------------

enum class SymbolEncoding { Symbols, Marks };

// Mark-vector packing: bit i of the symbol is mark i (first mark = bit 0).
std::int32_t pack_marks(const std::vector<int>& bits);
std::vector<int> unpack_marks(std::int32_t symbol, int k);

void write_observations(const std::string& path, const SequenceBatch& batch,
                        SymbolEncoding encoding = SymbolEncoding::Symbols);
SequenceBatch read_observations(const std::string& path);

void write_states(const std::string& path, const StateTrace& trace);
StateTrace read_states(const std::string& path);

// --- label files (TSV) -----------------------------------------------------

struct LabelFile {
    int num_states = 0;
    std::size_t sequences = 0;
    std::size_t length = 0;
    std::vector<std::string> node_labels;
    // labels[node][seq][t]
    std::vector<std::vector<std::vector<std::int32_t>>> labels;
};

void write_labels(const std::string& path, const PosteriorTrace& trace, const TreeStructure& tree,
                  std::size_t sequences, std::size_t length, bool include_posteriors);
LabelFile read_labels(const std::string& path);

}  // namespace spectree
