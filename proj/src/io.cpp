// SPDX-License-Identifier: Apache-2.0
#include "spectree/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "spectree/errors.hpp"

namespace spectree {

using nlohmann::json;

LearnerConfig RunConfig::learner() const {
    LearnerConfig cfg;
    cfg.power = power;
    cfg.rank_threshold = rank_threshold;
    cfg.pinv_rel_threshold = pinv_rel_threshold;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.meta_cap = meta_cap;
    return cfg;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

long parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("cannot parse integer " + what + ": '" + s + "'");
    }
}

// Header section of a TSV file: first line is the format header, then
// key\tvalue... lines up to and including the "data" line, whose remaining
// fields are the column names.
struct TsvHeader {
    std::map<std::string, std::vector<std::string>> fields;
    std::vector<std::string> columns;

    const std::vector<std::string>& require(const std::string& key) const {
        const auto it = fields.find(key);
        if (it == fields.end()) throw DataError("missing header field '" + key + "'");
        return it->second;
    }
    std::string require_one(const std::string& key) const {
        const auto& v = require(key);
        if (v.size() != 1) throw DataError("header field '" + key + "' must have one value");
        return v[0];
    }
};

TsvHeader read_tsv_header(std::istream& in, const std::string& expected_type) {
    std::string line;
    if (!std::getline(in, line) || line != kFormatHeader)
        throw DataError("not a spectree file (expected header '" + std::string(kFormatHeader) + "')");
    TsvHeader header;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_tabs(line);
        const std::string key = parts[0];
        parts.erase(parts.begin());
        if (key == "data") {
            header.columns = parts;
            const auto type = header.require_one("type");
            if (type != expected_type)
                throw DataError("expected a '" + expected_type + "' file, found '" + type + "'");
            return header;
        }
        header.fields[key] = parts;
    }
    throw DataError("truncated file: no data section");
}

json matrix_columns(const Matrix& m) {
    json cols = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        json col = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
        cols.push_back(std::move(col));
    }
    return cols;
}

Matrix matrix_from_columns(const json& cols, Eigen::Index rows, Eigen::Index expected_cols,
                           const std::string& what) {
    if (!cols.is_array() || static_cast<Eigen::Index>(cols.size()) != expected_cols)
        throw DataError(what + ": expected " + std::to_string(expected_cols) + " columns");
    Matrix m(rows, expected_cols);
    for (Eigen::Index j = 0; j < expected_cols; ++j) {
        const json& col = cols[static_cast<size_t>(j)];
        if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != rows)
            throw DataError(what + ": expected columns of length " + std::to_string(rows));
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = col[static_cast<size_t>(i)].get<double>();
    }
    return m;
}

}  // namespace

// --- config ------------------------------------------------------------

RunConfig read_config(const std::string& path) {
    auto in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("config parse error in " + path + ": " + e.what());
    }
    RunConfig cfg;
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.power.restarts = doc.value("power_restarts", cfg.power.restarts);
    cfg.power.iterations = doc.value("power_iterations", cfg.power.iterations);
    cfg.power.polish = doc.value("power_polish", cfg.power.polish);
    cfg.rank_threshold = doc.value("rank_threshold", cfg.rank_threshold);
    cfg.pinv_rel_threshold = doc.value("pinv_threshold", cfg.pinv_rel_threshold);
    cfg.burn_in = doc.value("burn_in", cfg.burn_in);
    cfg.meta_cap = doc.value("meta_state_cap", cfg.meta_cap);
    cfg.threads = doc.value("threads", cfg.threads);
    const std::string window = doc.value("window", std::string("overlap"));
    if (window == "overlap") {
        cfg.window = WindowMode::Overlap;
    } else if (window == "disjoint") {
        cfg.window = WindowMode::Disjoint;
    } else {
        throw DataError("config: window must be 'overlap' or 'disjoint'");
    }
    if (cfg.power.restarts < 1 || cfg.power.iterations < 1 || cfg.power.polish < 0)
        throw DataError("config: power-method counts must be positive");
    if (cfg.rank_threshold <= 0 || cfg.pinv_rel_threshold <= 0)
        throw DataError("config: thresholds must be positive");
    return cfg;
}

// --- model -------------------------------------------------------------

void write_model(const std::string& path, const ThsHmmParams& params, const TreeStructure& tree,
                 const std::map<std::string, std::string>& failed_nodes) {
    const int m = params.m;
    json doc;
    doc["format_version"] = kFormatHeader;
    doc["type"] = "model";
    doc["nodes"] = tree.labels;
    json parents = json::object();
    for (int u = 0; u < tree.node_count(); ++u)
        if (!tree.is_root(u))
            parents[tree.labels[static_cast<size_t>(u)]] =
                tree.labels[static_cast<size_t>(tree.parent[static_cast<size_t>(u)])];
    doc["tree"] = {{"root", tree.labels[static_cast<size_t>(tree.root)]}, {"parents", parents}};
    doc["m"] = params.m;
    doc["n"] = params.n;

    json obs = json::object();
    json trans = json::object();
    json init = json::object();
    for (int u = 0; u < tree.node_count(); ++u) {
        const std::string& label = tree.labels[static_cast<size_t>(u)];
        obs[label] = matrix_columns(params.obs[static_cast<size_t>(u)]);
        if (tree.is_root(u)) {
            trans[label] = matrix_columns(params.trans_root);
            json w = json::array();
            for (int z = 0; z < m; ++z) w.push_back(params.init_root[z]);
            init[label] = std::move(w);
        } else {
            // trans[u][parent][prev] = next-state distribution
            const Tensor3& t = params.trans[static_cast<size_t>(u)];
            json per_parent = json::array();
            for (int par = 0; par < m; ++par) {
                json per_prev = json::array();
                for (int prev = 0; prev < m; ++prev) {
                    json dist = json::array();
                    for (int nxt = 0; nxt < m; ++nxt) dist.push_back(t(nxt, prev, par));
                    per_prev.push_back(std::move(dist));
                }
                per_parent.push_back(std::move(per_prev));
            }
            trans[label] = std::move(per_parent);
            init[label] = matrix_columns(params.init[static_cast<size_t>(u)]);
        }
    }
    doc["obs"] = std::move(obs);
    doc["trans"] = std::move(trans);
    doc["init"] = std::move(init);
    if (!failed_nodes.empty()) doc["failed_nodes"] = failed_nodes;

    auto out = open_out(path);
    out << doc.dump(1, '\t') << "\n";
}

ModelFile read_model(const std::string& path) {
    auto in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw DataError("model parse error in " + path + ": " + e.what());
    }
    try {
        if (doc.value("format_version", "") != kFormatHeader)
            throw DataError("model file: unknown format_version");
        ModelFile file;
        const std::vector<std::string> nodes = doc.at("nodes").get<std::vector<std::string>>();
        const json& tree_doc = doc.at("tree");
        const std::string root = tree_doc.at("root").get<std::string>();
        const json& parents = tree_doc.at("parents");

        std::vector<int> parent(nodes.size(), -1);
        auto index_of = [&nodes](const std::string& label) {
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (nodes[i] == label) return static_cast<int>(i);
            throw DataError("model file: unknown node label '" + label + "'");
        };
        for (const auto& [child, par] : parents.items())
            parent[static_cast<size_t>(index_of(child))] = index_of(par.get<std::string>());
        if (parent[static_cast<size_t>(index_of(root))] != -1)
            throw DataError("model file: root must not have a parent");
        file.tree = make_tree(std::move(parent), nodes);

        ThsHmmParams& p = file.params;
        p.m = doc.at("m").get<int>();
        p.n = doc.at("n").get<int>();
        if (p.m < 1 || p.n < 1) throw DataError("model file: m and n must be positive");
        const int d = file.tree.node_count();
        p.obs.resize(static_cast<size_t>(d));
        p.trans.resize(static_cast<size_t>(d));
        p.init.resize(static_cast<size_t>(d));
        for (int u = 0; u < d; ++u) {
            const std::string& label = file.tree.labels[static_cast<size_t>(u)];
            p.obs[static_cast<size_t>(u)] =
                matrix_from_columns(doc.at("obs").at(label), p.n, p.m, "obs[" + label + "]");
            if (file.tree.is_root(u)) {
                p.trans_root =
                    matrix_from_columns(doc.at("trans").at(label), p.m, p.m, "trans[" + label + "]");
                const json& w = doc.at("init").at(label);
                if (!w.is_array() || static_cast<int>(w.size()) != p.m)
                    throw DataError("model file: init[" + label + "] must have length m");
                p.init_root.resize(p.m);
                for (int z = 0; z < p.m; ++z) p.init_root[z] = w[static_cast<size_t>(z)].get<double>();
            } else {
                const json& t = doc.at("trans").at(label);
                if (!t.is_array() || static_cast<int>(t.size()) != p.m)
                    throw DataError("model file: trans[" + label + "] must have m parent slices");
                Tensor3 tensor(p.m, p.m, p.m);
                for (int par = 0; par < p.m; ++par) {
                    const json& per_prev = t[static_cast<size_t>(par)];
                    if (!per_prev.is_array() || static_cast<int>(per_prev.size()) != p.m)
                        throw DataError("model file: trans[" + label + "] slice has wrong shape");
                    for (int prev = 0; prev < p.m; ++prev) {
                        const json& dist = per_prev[static_cast<size_t>(prev)];
                        if (!dist.is_array() || static_cast<int>(dist.size()) != p.m)
                            throw DataError("model file: trans[" + label + "] distribution has wrong length");
                        for (int nxt = 0; nxt < p.m; ++nxt)
                            tensor(nxt, prev, par) = dist[static_cast<size_t>(nxt)].get<double>();
                    }
                }
                p.trans[static_cast<size_t>(u)] = std::move(tensor);
                p.init[static_cast<size_t>(u)] =
                    matrix_from_columns(doc.at("init").at(label), p.m, p.m, "init[" + label + "]");
            }
        }
        if (doc.contains("failed_nodes"))
            file.failed_nodes = doc.at("failed_nodes").get<std::map<std::string, std::string>>();

        const auto violations = validate(file.params, file.tree);
        if (!violations.empty()) {
            const std::string where =
                violations[0].node >= 0 ? file.tree.labels[static_cast<size_t>(violations[0].node)]
                                        : std::string("<model>");
            throw DataError("model file " + path + ": validation failed at node " + where + ": " +
                            violations[0].what);
        }
        return file;
    } catch (const json::exception& e) {
        throw DataError("model file " + path + ": " + e.what());
    }
}

// --- tree --------------------------------------------------------------

TreeStructure read_tree(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || line != kFormatHeader)
        throw DataError("not a spectree file: " + path);
    std::string root;
    std::vector<std::pair<std::string, std::string>> edges;  // (child, parent)
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto parts = split_tabs(line);
        if (parts[0] == "type") {
            if (parts.size() != 2 || parts[1] != "tree") throw DataError("expected a tree file");
        } else if (parts[0] == "root") {
            if (parts.size() != 2) throw DataError("tree file: root line must name one node");
            root = parts[1];
        } else if (parts[0] == "parent") {
            if (parts.size() != 3) throw DataError("tree file: parent lines are 'parent <child> <parent>'");
            edges.emplace_back(parts[1], parts[2]);
        } else {
            throw DataError("tree file: unknown line '" + parts[0] + "'");
        }
    }
    if (root.empty()) throw DataError("tree file: missing root line");
    std::vector<std::string> labels = {root};
    for (const auto& [child, par] : edges) {
        (void)par;
        labels.push_back(child);
    }
    std::vector<int> parent(labels.size(), -1);
    auto index_of = [&labels](const std::string& l) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return static_cast<int>(i);
        throw DataError("tree file: unknown node '" + l + "'");
    };
    for (const auto& [child, par] : edges)
        parent[static_cast<size_t>(index_of(child))] = index_of(par);
    return make_tree(std::move(parent), std::move(labels));
}

void write_tree(const std::string& path, const TreeStructure& tree) {
    auto out = open_out(path);
    out << kFormatHeader << "\n";
    out << "type\ttree\n";
    out << "root\t" << tree.labels[static_cast<size_t>(tree.root)] << "\n";
    for (int u = 0; u < tree.node_count(); ++u)
        if (!tree.is_root(u))
            out << "parent\t" << tree.labels[static_cast<size_t>(u)] << '\t'
                << tree.labels[static_cast<size_t>(tree.parent[static_cast<size_t>(u)])] << "\n";
}

// --- observations / states ----------------------------------------------

std::int32_t pack_marks(const std::vector<int>& bits) {
    if (bits.size() > 30) throw DataError("pack_marks: too many marks");
    std::int32_t symbol = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw DataError("pack_marks: marks must be 0/1");
        symbol |= static_cast<std::int32_t>(bits[i]) << i;
    }
    return symbol;
}

std::vector<int> unpack_marks(std::int32_t symbol, int k) {
    std::vector<int> bits(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) bits[static_cast<size_t>(i)] = (symbol >> i) & 1;
    return bits;
}

namespace {

int marks_for_alphabet(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    if ((1 << k) != n)
        throw DataError("marks encoding requires the alphabet size to be a power of two, got " +
                        std::to_string(n));
    return k;
}

std::string mark_string(std::int32_t symbol, int k) {
    std::string s(static_cast<size_t>(k), '0');
    for (int i = 0; i < k; ++i)
        if ((symbol >> i) & 1) s[static_cast<size_t>(i)] = '1';
    return s;
}

std::int32_t parse_symbol(const std::string& cell, SymbolEncoding encoding, int n, int k,
                          const std::string& where) {
    std::int32_t symbol;
    if (encoding == SymbolEncoding::Marks) {
        if (static_cast<int>(cell.size()) != k)
            throw DataError(where + ": mark string must have " + std::to_string(k) + " bits");
        std::vector<int> bits(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            const char c = cell[static_cast<size_t>(i)];
            if (c != '0' && c != '1') throw DataError(where + ": mark string must be 0/1");
            bits[static_cast<size_t>(i)] = c - '0';
        }
        symbol = pack_marks(bits);
    } else {
        symbol = static_cast<std::int32_t>(parse_int(cell, where));
    }
    if (symbol < 0 || symbol >= n)
        throw DataError(where + ": symbol " + std::to_string(symbol) + " outside [0, " +
                        std::to_string(n) + ")");
    return symbol;
}

}  // namespace

void write_observations(const std::string& path, const SequenceBatch& batch,
                        SymbolEncoding encoding) {
    auto out = open_out(path);
    const int k = encoding == SymbolEncoding::Marks ? marks_for_alphabet(batch.alphabet) : 0;
    out << kFormatHeader << "\n";
    out << "type\tobservations\n";
    out << "mode\t" << (batch.mode == BatchMode::Triples ? "triples" : "long") << "\n";
    out << "nodes";
    for (const auto& l : batch.node_labels) out << '\t' << l;
    out << "\n";
    out << "n\t" << batch.alphabet << "\n";
    out << "encoding\t" << (encoding == SymbolEncoding::Marks ? "marks" : "symbols") << "\n";
    if (encoding == SymbolEncoding::Marks) out << "marks\t" << k << "\n";
    out << "sequences\t" << batch.sequences << "\n";
    out << "length\t" << batch.length << "\n";
    out << "seed\t" << batch.seed << "\n";
    out << "data\tseq\tt";
    for (const auto& l : batch.node_labels) out << '\t' << l;
    out << "\n";
    for (std::size_t s = 0; s < batch.sequences; ++s)
        for (std::size_t t = 0; t < batch.length; ++t) {
            out << s << '\t' << t;
            for (int u = 0; u < batch.node_count; ++u) {
                if (encoding == SymbolEncoding::Marks) {
                    out << '\t' << mark_string(batch.at(s, u, t), k);
                } else {
                    out << '\t' << batch.at(s, u, t);
                }
            }
            out << "\n";
        }
}

SequenceBatch read_observations(const std::string& path) {
    auto in = open_in(path);
    const TsvHeader header = read_tsv_header(in, "observations");

    const std::string mode = header.require_one("mode");
    if (mode != "triples" && mode != "long")
        throw DataError("observations: mode must be 'triples' or 'long'");
    const auto& nodes = header.require("nodes");
    const int n = static_cast<int>(parse_int(header.require_one("n"), "n"));
    const std::string enc_name = header.require_one("encoding");
    SymbolEncoding encoding;
    if (enc_name == "symbols") {
        encoding = SymbolEncoding::Symbols;
    } else if (enc_name == "marks") {
        encoding = SymbolEncoding::Marks;
    } else {
        throw DataError("observations: unknown encoding '" + enc_name + "'");
    }
    const int k = encoding == SymbolEncoding::Marks
                      ? static_cast<int>(parse_int(header.require_one("marks"), "marks"))
                      : 0;
    if (encoding == SymbolEncoding::Marks && (1 << k) != n)
        throw DataError("observations: marks count does not match alphabet size");
    const std::size_t sequences = static_cast<std::size_t>(parse_int(header.require_one("sequences"), "sequences"));
    const std::size_t length = static_cast<std::size_t>(parse_int(header.require_one("length"), "length"));
    if (n < 1 || sequences < 1 || length < 1) throw DataError("observations: empty file");

    SequenceBatch batch = SequenceBatch::zeros(
        mode == "triples" ? BatchMode::Triples : BatchMode::LongSequence,
        static_cast<int>(nodes.size()), n, sequences, length);
    batch.node_labels = nodes;
    const auto seed_it = header.fields.find("seed");
    if (seed_it != header.fields.end() && seed_it->second.size() == 1)
        batch.seed = static_cast<std::uint64_t>(parse_int(seed_it->second[0], "seed"));

    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split_tabs(line);
        if (parts.size() != nodes.size() + 2)
            throw DataError("observations: row with wrong column count: '" + line + "'");
        const std::size_t s = static_cast<std::size_t>(parse_int(parts[0], "seq"));
        const std::size_t t = static_cast<std::size_t>(parse_int(parts[1], "t"));
        if (s >= sequences || t >= length) throw DataError("observations: record out of range");
        for (std::size_t u = 0; u < nodes.size(); ++u)
            batch.at(s, static_cast<int>(u), t) =
                parse_symbol(parts[u + 2], encoding, n, k, "observations row " + std::to_string(rows));
        ++rows;
    }
    if (rows != sequences * length)
        throw DataError("observations: expected " + std::to_string(sequences * length) +
                        " records, found " + std::to_string(rows));
    return batch;
}

void write_states(const std::string& path, const StateTrace& trace) {
    auto out = open_out(path);
    out << kFormatHeader << "\n";
    out << "type\tstates\n";
    out << "nodes";
    for (const auto& l : trace.node_labels) out << '\t' << l;
    out << "\n";
    out << "m\t" << trace.num_states << "\n";
    out << "sequences\t" << trace.sequences << "\n";
    out << "length\t" << trace.length << "\n";
    out << "data\tseq\tt";
    for (const auto& l : trace.node_labels) out << '\t' << l;
    out << "\n";
    for (std::size_t s = 0; s < trace.sequences; ++s)
        for (std::size_t t = 0; t < trace.length; ++t) {
            out << s << '\t' << t;
            for (int u = 0; u < trace.node_count; ++u) out << '\t' << trace.at(s, u, t);
            out << "\n";
        }
}

StateTrace read_states(const std::string& path) {
    auto in = open_in(path);
    const TsvHeader header = read_tsv_header(in, "states");
    const auto& nodes = header.require("nodes");
    StateTrace trace;
    trace.node_count = static_cast<int>(nodes.size());
    trace.node_labels = nodes;
    trace.num_states = static_cast<int>(parse_int(header.require_one("m"), "m"));
    trace.sequences = static_cast<std::size_t>(parse_int(header.require_one("sequences"), "sequences"));
    trace.length = static_cast<std::size_t>(parse_int(header.require_one("length"), "length"));
    trace.data.assign(trace.sequences * nodes.size() * trace.length, 0);

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split_tabs(line);
        if (parts.size() != nodes.size() + 2) throw DataError("states: row with wrong column count");
        const std::size_t s = static_cast<std::size_t>(parse_int(parts[0], "seq"));
        const std::size_t t = static_cast<std::size_t>(parse_int(parts[1], "t"));
        if (s >= trace.sequences || t >= trace.length) throw DataError("states: record out of range");
        for (std::size_t u = 0; u < nodes.size(); ++u) {
            const long z = parse_int(parts[u + 2], "state");
            if (z < 0 || z >= trace.num_states) throw DataError("states: state out of range");
            trace.at(s, static_cast<int>(u), t) = static_cast<std::int32_t>(z);
        }
    }
    return trace;
}

// --- labels --------------------------------------------------------------

void write_labels(const std::string& path, const PosteriorTrace& trace, const TreeStructure& tree,
                  std::size_t sequences, std::size_t length, bool include_posteriors) {
    auto out = open_out(path);
    out << kFormatHeader << "\n";
    out << "type\tlabels\n";
    out << "m\t" << trace.num_states << "\n";
    out << "nodes";
    for (const auto& l : tree.labels) out << '\t' << l;
    out << "\n";
    out << "sequences\t" << sequences << "\n";
    out << "length\t" << length << "\n";
    out << "posteriors\t" << (include_posteriors ? 1 : 0) << "\n";
    out << "data\tseq\tt\tnode\tstate\tposterior";
    if (include_posteriors)
        for (int z = 0; z < trace.num_states; ++z) out << "\tp" << z;
    out << "\n";
    out << std::setprecision(17);
    for (std::size_t s = 0; s < sequences; ++s)
        for (std::size_t t = 0; t < length; ++t)
            for (int u = 0; u < static_cast<int>(tree.labels.size()); ++u) {
                const auto& post = trace.posterior[static_cast<size_t>(u)][s];
                const std::int32_t z = trace.labels[static_cast<size_t>(u)][s][t];
                out << s << '\t' << t << '\t' << tree.labels[static_cast<size_t>(u)] << '\t' << z
                    << '\t' << post(z, static_cast<Eigen::Index>(t));
                if (include_posteriors)
                    for (int q = 0; q < trace.num_states; ++q)
                        out << '\t' << post(q, static_cast<Eigen::Index>(t));
                out << "\n";
            }
}

LabelFile read_labels(const std::string& path) {
    auto in = open_in(path);
    const TsvHeader header = read_tsv_header(in, "labels");
    LabelFile file;
    file.node_labels = header.require("nodes");
    file.num_states = static_cast<int>(parse_int(header.require_one("m"), "m"));
    file.sequences = static_cast<std::size_t>(parse_int(header.require_one("sequences"), "sequences"));
    file.length = static_cast<std::size_t>(parse_int(header.require_one("length"), "length"));
    file.labels.assign(file.node_labels.size(),
                       std::vector<std::vector<std::int32_t>>(
                           file.sequences, std::vector<std::int32_t>(file.length, 0)));
    auto index_of = [&file](const std::string& l) {
        for (std::size_t i = 0; i < file.node_labels.size(); ++i)
            if (file.node_labels[i] == l) return static_cast<int>(i);
        throw DataError("labels: unknown node '" + l + "'");
    };
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto parts = split_tabs(line);
        if (parts.size() < 5) throw DataError("labels: malformed row");
        const std::size_t s = static_cast<std::size_t>(parse_int(parts[0], "seq"));
        const std::size_t t = static_cast<std::size_t>(parse_int(parts[1], "t"));
        const int u = index_of(parts[2]);
        const long z = parse_int(parts[3], "state");
        if (s >= file.sequences || t >= file.length || z < 0 || z >= file.num_states)
            throw DataError("labels: record out of range");
        file.labels[static_cast<size_t>(u)][s][t] = static_cast<std::int32_t>(z);
    }
    return file;
}

}  // namespace spectree
