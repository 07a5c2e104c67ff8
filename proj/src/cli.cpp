// SPDX-License-Identifier: Apache-2.0
#include "spectree/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <thread>

#include "spectree/errors.hpp"
#include "spectree/evaluation.hpp"
#include "spectree/io.hpp"
#include "spectree/pipeline.hpp"
#include "spectree/simulate.hpp"

namespace spectree {

namespace {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Reorders the batch columns to the tree's node order, matching by label.
SequenceBatch align_batch(const SequenceBatch& batch, const TreeStructure& tree) {
    std::vector<int> order;
    order.reserve(static_cast<size_t>(tree.node_count()));
    for (const auto& label : tree.labels) {
        int found = -1;
        for (std::size_t i = 0; i < batch.node_labels.size(); ++i)
            if (batch.node_labels[i] == label) found = static_cast<int>(i);
        if (found == -1)
            throw DataError("observation file is missing node '" + label + "'");
        order.push_back(found);
    }
    SequenceBatch aligned = restrict_nodes(batch, order);
    aligned.node_labels = tree.labels;
    return aligned;
}

std::string default_states_path(const std::string& out) {
    const std::size_t dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
        return out + ".states.tsv";
    return out.substr(0, dot) + ".states" + out.substr(dot);
}

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool threads_set = false;
    std::string window;

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_path.empty()) cfg = read_config(config_path);
        if (seed_set) cfg.seed = seed;
        if (threads_set) cfg.threads = threads;
        if (!window.empty()) {
            if (window == "overlap") {
                cfg.window = WindowMode::Overlap;
            } else if (window == "disjoint") {
                cfg.window = WindowMode::Disjoint;
            } else {
                throw UsageError("--window must be 'overlap' or 'disjoint'");
            }
        }
        cfg.threads = resolve_threads(cfg.threads);
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON run configuration");
    cmd->add_option("--seed", opts.seed, "RNG seed")->each([&opts](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--threads", opts.threads, "worker threads (0 = all cores)")
        ->each([&opts](const std::string&) { opts.threads_set = true; });
    cmd->add_option("--window", opts.window, "long-sequence windows: overlap|disjoint");
}

void write_diagnostics(std::ostream& out, const TreeStructure& tree, const PipelineResult& result) {
    out.precision(12);
    for (const auto& w : result.warnings) out << "warning\t" << w << "\n";
    for (int u = 0; u < tree.node_count(); ++u) {
        const auto& d = result.learn.diagnostics[static_cast<size_t>(u)];
        const std::string& label = tree.labels[static_cast<size_t>(u)];
        out << label << "\tsigma_m_pair\t" << result.learn.basis.sigma_m[static_cast<size_t>(u)] << "\n";
        out << label << "\tb13_min_singular\t" << d.b13_min_singular << "\n";
        if (d.whiten_eigenvalues.size() > 0) {
            out << label << "\twhiten_eigenvalues";
            for (Eigen::Index i = 0; i < d.whiten_eigenvalues.size(); ++i)
                out << '\t' << d.whiten_eigenvalues[i];
            out << "\n";
        }
        if (!d.power_lambdas.empty()) {
            out << label << "\tpower_lambdas";
            for (const double l : d.power_lambdas) out << '\t' << l;
            out << "\n";
            out << label << "\tdeflation_residual\t" << d.deflation_residual << "\n";
        }
        if (!d.failure.empty()) out << label << "\tfailure\t" << d.failure << "\n";
    }
}

// --- subcommands -----------------------------------------------------------

int cmd_simulate(const std::string& model_path, const std::string& mode, std::size_t num,
                 std::size_t length, std::size_t burn_in, const CommonOpts& common,
                 const std::string& out_path, std::string states_path, const std::string& encoding) {
    const RunConfig cfg = common.resolve();
    const ModelFile model = read_model(model_path);
    if (states_path.empty()) states_path = default_states_path(out_path);

    SequenceBatch batch;
    StateTrace trace;
    if (mode == "triples") {
        if (num == 0) throw UsageError("simulate: --num is required in triples mode");
        std::tie(batch, trace) = sample_triples(model.params, model.tree, num, cfg.seed);
    } else if (mode == "long") {
        if (length == 0) throw UsageError("simulate: --length is required in long mode");
        std::tie(batch, trace) = sample_long(model.params, model.tree, length, burn_in, cfg.seed);
    } else {
        throw UsageError("simulate: --mode must be 'triples' or 'long'");
    }

    SymbolEncoding enc;
    if (encoding == "symbols") {
        enc = SymbolEncoding::Symbols;
    } else if (encoding == "marks") {
        enc = SymbolEncoding::Marks;
    } else {
        throw UsageError("simulate: --encoding must be 'symbols' or 'marks'");
    }
    write_observations(out_path, batch, enc);
    write_states(states_path, trace);
    std::cerr << "wrote " << batch.sequences << " sequence(s) of length " << batch.length << " to "
              << out_path << " (states: " << states_path << ")\n";
    return 0;
}

int cmd_learn(const std::string& obs_path, const std::string& tree_path, int m,
              const CommonOpts& common, const std::string& out_path, bool allow_partial,
              const std::string& diag_path) {
    const RunConfig cfg = common.resolve();
    const TreeStructure tree = read_tree(tree_path);
    const SequenceBatch batch = align_batch(read_observations(obs_path), tree);
    if (m < 1) throw UsageError("learn: --m must be positive");

    EmpiricalMoments source(batch, cfg.window, cfg.threads);
    const PipelineResult result = learn_model(source, tree, m, cfg.learner(), allow_partial);

    std::map<std::string, std::string> failed;
    for (const auto& [node, why] : result.learn.failures)
        failed[tree.labels[static_cast<size_t>(node)]] = why;
    write_model(out_path, result.params, tree, failed);

    if (diag_path.empty()) {
        write_diagnostics(std::cerr, tree, result);
    } else {
        std::ofstream diag(diag_path);
        if (!diag) throw DataError("cannot open diagnostics file: " + diag_path);
        write_diagnostics(diag, tree, result);
    }
    std::cerr << "wrote model to " << out_path;
    if (!failed.empty()) std::cerr << " (" << failed.size() << " node(s) failed)";
    std::cerr << "\n";
    return 0;
}

int cmd_decode(const std::string& model_path, const std::string& obs_path,
               const std::string& out_path, bool posteriors, bool log_space,
               const CommonOpts& common) {
    const RunConfig cfg = common.resolve();
    const ModelFile model = read_model(model_path);
    const SequenceBatch batch = align_batch(read_observations(obs_path), model.tree);
    if (batch.alphabet != model.params.n)
        throw DataError("decode: observation alphabet " + std::to_string(batch.alphabet) +
                        " does not match model n = " + std::to_string(model.params.n));
    DecoderConfig dec;
    dec.meta_cap = cfg.meta_cap;
    dec.log_space = log_space;
    const PosteriorTrace trace = posterior_decode(model.params, model.tree, batch, dec);
    for (const auto& w : trace.warnings) std::cerr << "warning\t" << w << "\n";
    write_labels(out_path, trace, model.tree, batch.sequences, batch.length, posteriors);
    std::cerr << "wrote labels to " << out_path << "\n";
    return 0;
}

int cmd_eval_models(const std::string& path_a, const std::string& path_b,
                    const std::string& out_path) {
    const ModelFile a = read_model(path_a);
    const ModelFile b = read_model(path_b);
    if (a.params.m != b.params.m || a.params.n != b.params.n)
        throw DataError("eval: models have different dimensions");
    if (a.tree.labels != b.tree.labels) throw DataError("eval: models have different node sets");

    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open file for writing: " + out_path);
    out << kFormatHeader << "\n";
    out << "type\teval-models\n";
    out << "data\tnode\tfrobenius_error\toperator_error\tpermutation\n";
    out.precision(17);
    for (int u = 0; u < a.tree.node_count(); ++u) {
        const AlignmentResult r =
            align(a.params.obs[static_cast<size_t>(u)], b.params.obs[static_cast<size_t>(u)]);
        out << a.tree.labels[static_cast<size_t>(u)] << '\t' << r.frobenius_error << '\t'
            << r.operator_error << '\t';
        for (std::size_t i = 0; i < r.learned_for_true.size(); ++i)
            out << (i > 0 ? "," : "") << r.learned_for_true[i];
        out << "\n";
    }
    return 0;
}

int cmd_eval_labels(const std::string& labels_path, const std::string& truth_path,
                    const std::string& out_path, const std::string& align_mode) {
    const LabelFile pred = read_labels(labels_path);
    const StateTrace truth = read_states(truth_path);
    if (pred.sequences != truth.sequences || pred.length != truth.length)
        throw DataError("eval: label and truth dimensions differ");
    const int m = std::max(pred.num_states, truth.num_states);

    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open file for writing: " + out_path);
    out << kFormatHeader << "\n";
    out << "type\teval-labels\n";
    out << "align\t" << align_mode << "\n";
    out << "data\tnode\tstate\ttp\tfp\tfn\tprecision\trecall\tf1\taccuracy\tpermutation\n";
    out.precision(17);

    for (std::size_t pu = 0; pu < pred.node_labels.size(); ++pu) {
        int tu = -1;
        for (std::size_t i = 0; i < truth.node_labels.size(); ++i)
            if (truth.node_labels[i] == pred.node_labels[pu]) tu = static_cast<int>(i);
        if (tu == -1) throw DataError("eval: truth file is missing node '" + pred.node_labels[pu] + "'");

        // Flatten, then optionally choose the state permutation maximizing
        // matches (assignment on the negated confusion matrix).
        std::vector<std::int32_t> p, t;
        for (std::size_t s = 0; s < pred.sequences; ++s)
            for (std::size_t tt = 0; tt < pred.length; ++tt) {
                p.push_back(pred.labels[pu][s][tt]);
                t.push_back(truth.at(s, tu, tt));
            }
        std::vector<int> perm(static_cast<size_t>(m));
        for (int z = 0; z < m; ++z) perm[static_cast<size_t>(z)] = z;
        if (align_mode == "best") {
            Matrix confusion = Matrix::Zero(m, m);
            for (std::size_t i = 0; i < p.size(); ++i) confusion(p[i], t[i]) += 1.0;
            perm = min_cost_assignment(-confusion);
        }
        for (auto& z : p) z = static_cast<std::int32_t>(perm[static_cast<size_t>(z)]);

        std::size_t hits = 0;
        for (std::size_t i = 0; i < p.size(); ++i) hits += (p[i] == t[i]) ? 1 : 0;
        const double accuracy = static_cast<double>(hits) / static_cast<double>(p.size());

        for (int z = 0; z < m; ++z) {
            const F1Entry e = f1_score(p, t, z);
            out << pred.node_labels[pu] << '\t' << z << '\t' << e.tp << '\t' << e.fp << '\t' << e.fn
                << '\t' << e.precision << '\t' << e.recall << '\t' << e.f1 << '\t' << accuracy
                << '\t';
            for (int q = 0; q < m; ++q) out << (q > 0 ? "," : "") << perm[static_cast<size_t>(q)];
            out << "\n";
        }
    }
    return 0;
}

int cmd_check_rank(const std::string& model_path, const std::string& out_path, double threshold,
                   std::size_t cap) {
    const ModelFile model = read_model(model_path);
    RankCheckConfig cfg;
    cfg.threshold = threshold;
    cfg.meta_cap = cap;
    const RankReport report = check_rank_conditions(model.params, model.tree, cfg);

    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open file for writing: " + out_path);
    out << kFormatHeader << "\n";
    out << "type\trank-report\n";
    out << "threshold\t" << threshold << "\n";
    out << "data\tnode\tsigma_obs\tsigma_pair\tsigma_path\tpath_dim\tnode_pass\tpath_pass\n";
    out.precision(17);
    for (const auto& e : report.entries)
        out << model.tree.labels[static_cast<size_t>(e.node)] << '\t' << e.sigma_obs << '\t'
            << e.sigma_pair << '\t' << e.sigma_path << '\t' << e.path_dim << '\t'
            << (e.node_pass ? 1 : 0) << '\t' << (e.path_pass ? 1 : 0) << "\n";
    std::cerr << (report.all_pass() ? "all rank conditions pass\n" : "rank conditions FAIL\n");
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"spectral learning for HMMs with tree-structured hidden states"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample synthetic observation sequences");
    std::string sim_model, sim_mode = "triples", sim_out, sim_states, sim_encoding = "symbols";
    std::size_t sim_num = 0, sim_length = 0, sim_burn_in = kDefaultBurnIn;
    CommonOpts sim_common;
    sim->add_option("--model", sim_model, "model file")->required();
    sim->add_option("--mode", sim_mode, "triples|long")->required();
    sim->add_option("--num", sim_num, "number of iid triples");
    sim->add_option("--length", sim_length, "long-sequence length");
    sim->add_option("--burn-in", sim_burn_in, "long-mode burn-in steps");
    sim->add_option("--out", sim_out, "observation file to write")->required();
    sim->add_option("--states", sim_states, "ground-truth state file to write");
    sim->add_option("--encoding", sim_encoding, "symbols|marks");
    add_common(sim, sim_common);

    // learn
    auto* learn = app.add_subcommand("learn", "estimate model parameters from observations");
    std::string learn_obs, learn_tree, learn_out, learn_diag;
    int learn_m = 0;
    bool learn_partial = false;
    CommonOpts learn_common;
    learn->add_option("--obs", learn_obs, "observation file")->required();
    learn->add_option("--tree", learn_tree, "tree file")->required();
    learn->add_option("--m", learn_m, "hidden alphabet size")->required();
    learn->add_option("--out", learn_out, "model file to write")->required();
    learn->add_flag("--allow-partial", learn_partial, "write a partial model on per-node failures");
    learn->add_option("--diag", learn_diag, "diagnostics log file (default: stderr)");
    add_common(learn, learn_common);

    // decode
    auto* decode = app.add_subcommand("decode", "posterior-decode hidden state labels");
    std::string dec_model, dec_obs, dec_out;
    bool dec_posteriors = false, dec_log_space = false;
    CommonOpts dec_common;
    decode->add_option("--model", dec_model, "model file")->required();
    decode->add_option("--obs", dec_obs, "observation file")->required();
    decode->add_option("--out", dec_out, "label file to write")->required();
    decode->add_flag("--posteriors", dec_posteriors, "include full posterior rows");
    decode->add_flag("--log-space", dec_log_space, "log-space recursions instead of scaling");
    add_common(decode, dec_common);

    // eval
    auto* eval = app.add_subcommand("eval", "compare models or labels");
    std::string eval_a, eval_b, eval_labels, eval_truth, eval_out, eval_align = "none";
    eval->add_option("--model-a", eval_a, "reference model file");
    eval->add_option("--model-b", eval_b, "estimated model file");
    eval->add_option("--labels", eval_labels, "predicted label file");
    eval->add_option("--truth", eval_truth, "ground-truth state file");
    eval->add_option("--out", eval_out, "report file to write")->required();
    eval->add_option("--align", eval_align, "label alignment: none|best");

    // check-rank
    auto* rank = app.add_subcommand("check-rank", "evaluate the rank conditions of a model");
    std::string rank_model, rank_out;
    double rank_threshold = 1e-8;
    std::size_t rank_cap = 4096;
    rank->add_option("--model", rank_model, "model file")->required();
    rank->add_option("--out", rank_out, "report file to write")->required();
    rank->add_option("--threshold", rank_threshold, "pass threshold on singular values");
    rank->add_option("--cap", rank_cap, "meta-state safety cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_model, sim_mode, sim_num, sim_length, sim_burn_in, sim_common,
                                sim_out, sim_states, sim_encoding);
        if (learn->parsed())
            return cmd_learn(learn_obs, learn_tree, learn_m, learn_common, learn_out, learn_partial,
                             learn_diag);
        if (decode->parsed())
            return cmd_decode(dec_model, dec_obs, dec_out, dec_posteriors, dec_log_space, dec_common);
        if (eval->parsed()) {
            const bool models = !eval_a.empty() || !eval_b.empty();
            const bool labels = !eval_labels.empty() || !eval_truth.empty();
            if (models == labels)
                throw UsageError("eval: pass either --model-a/--model-b or --labels/--truth");
            if (models) {
                if (eval_a.empty() || eval_b.empty())
                    throw UsageError("eval: both --model-a and --model-b are required");
                return cmd_eval_models(eval_a, eval_b, eval_out);
            }
            if (eval_labels.empty() || eval_truth.empty())
                throw UsageError("eval: both --labels and --truth are required");
            if (eval_align != "none" && eval_align != "best")
                throw UsageError("eval: --align must be 'none' or 'best'");
            return cmd_eval_labels(eval_labels, eval_truth, eval_out, eval_align);
        }
        if (rank->parsed()) return cmd_check_rank(rank_model, rank_out, rank_threshold, rank_cap);
        throw UsageError("no subcommand");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace spectree
