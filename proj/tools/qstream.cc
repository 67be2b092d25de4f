// Copyright 2026 The qstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qstream/bench.h"
#include "qstream/chunk_cache.h"
#include "qstream/circuit.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"
#include "qstream/generators.h"
#include "qstream/graph_compiler.h"
#include "qstream/partitioner.h"
#include "qstream/pipeline.h"
#include "qstream/tableau.h"
#include "qstream/verifier.h"
#include "qstream/wire_format.h"

using namespace qstream;
using nlohmann::json;

namespace {

struct Global {
    std::string cache_dir;
    std::string log_level = "warn";
    std::string format = "json";
    uint64_t seed = 1;
};

// Exit codes.
constexpr int EXIT_DOMAIN = 1;
constexpr int EXIT_USAGE = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string &path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path);
    }
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string &path, const std::string &bytes) {
    if (path.empty() || path == "-") {
        std::cout.write(bytes.data(), (std::streamsize)bytes.size());
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), (std::streamsize)bytes.size());
    if (!out) {
        throw Error("cannot write " + path);
    }
}

void log(const Global &g, const std::string &level, const std::string &msg) {
    static const char *order[] = {"debug", "info", "warn", "error"};
    auto rank = [](const std::string &l) {
        for (int i = 0; i < 4; i++) {
            if (l == order[i]) {
                return i;
            }
        }
        return 2;
    };
    if (rank(level) >= rank(g.log_level)) {
        std::cerr << "qstream: " << level << ": " << msg << "\n";
    }
}

std::unique_ptr<ChunkCache> open_cache(const Global &g) {
    if (g.cache_dir.empty()) {
        return std::make_unique<ChunkCache>();
    }
    return ChunkCache::open(g.cache_dir);
}

json partition_json(const Partition &p) {
    auto edges = [](const std::vector<BoundaryEdge> &es) {
        json a = json::array();
        for (const auto &e : es) {
            a.push_back({{"qubit", e.qubit}, {"src", e.src}, {"dst", e.dst}});
        }
        return a;
    };
    return {{"id", p.id},
            {"node_ids", p.node_ids},
            {"t_count", p.t_count},
            {"gate_count", p.gate_count},
            {"qubit_set", p.qubit_set},
            {"boundary_in", edges(p.boundary_in)},
            {"boundary_out", edges(p.boundary_out)}};
}

std::vector<uint32_t> parse_list(const std::string &s) {
    std::vector<uint32_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back((uint32_t)std::stoul(item));
        }
    }
    return out;
}

size_t edit_distance(const std::string &a, const std::string &b) {
    std::vector<size_t> d(b.size() + 1);
    for (size_t j = 0; j <= b.size(); j++) {
        d[j] = j;
    }
    for (size_t i = 1; i <= a.size(); i++) {
        size_t prev = d[0];
        d[0] = i;
        for (size_t j = 1; j <= b.size(); j++) {
            size_t cur = d[j];
            d[j] = std::min({d[j] + 1, d[j - 1] + 1, prev + (a[i - 1] != b[j - 1])});
            prev = cur;
        }
    }
    return d[b.size()];
}

}  // namespace

int main(int argc, char **argv) {
    Global g;
    if (const char *env = std::getenv("QSTREAM_CACHE_DIR")) {
        g.cache_dir = env;
    }

    CLI::App app{"qstream: circuit partitioning, graph-state compilation and chunk streaming"};
    app.set_version_flag("--version", std::string("qstream ") + QSTREAM_VERSION);
    app.require_subcommand(1);
    app.add_option("--cache-dir", g.cache_dir, "Chunk cache directory (default: $QSTREAM_CACHE_DIR)");
    app.add_option("--log-level", g.log_level, "debug|info|warn|error")
        ->check(CLI::IsMember({"debug", "info", "warn", "error"}));
    app.add_option("--format", g.format, "json|csv|text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", g.seed, "Seed for randomized generators");

    std::function<int()> action;

    // parse / emit
    std::string in_path, out_path;
    auto *parse = app.add_subcommand("parse", "Parse OpenQASM and print a summary");
    parse->add_option("file", in_path, "QASM file or -")->required();
    parse->callback([&] {
        action = [&] {
            CircuitDag dag = parse_qasm(read_input(in_path));
            json j = {{"qubits", dag.num_qubits()},
                      {"gates", dag.size()},
                      {"t_count", dag.t_count()},
                      {"toffoli", dag.count(GateTag::Toffoli)},
                      {"wire_edges", dag.num_wire_edges()}};
            write_output("-", j.dump() + "\n");
            return 0;
        };
    });
    auto *emit = app.add_subcommand("emit", "Parse OpenQASM and print it in canonical form");
    emit->add_option("file", in_path, "QASM file or -")->required();
    emit->add_option("--out", out_path, "Output file (default stdout)");
    bool lower = false;
    emit->add_flag("--lower-toffoli", lower, "Expand Toffolis into Clifford+T");
    emit->callback([&] {
        action = [&] {
            CircuitDag dag = parse_qasm(read_input(in_path));
            if (lower) {
                dag = lower_toffoli(dag);
            }
            write_output(out_path, emit_qasm(dag));
            return 0;
        };
    });

    // partition
    ResourceBounds bounds;
    bounds.max_t_count = 64;
    bounds.max_qubits = 16;
    bounds.max_gates = 4096;
    bounds.window_size = 65536;
    auto *partition = app.add_subcommand("partition", "Partition a circuit into bounded sub-circuits");
    partition->add_option("file", in_path, "QASM file or -")->required();
    partition->add_option("--max-t", bounds.max_t_count, "T-count bound per partition");
    partition->add_option("--max-qubits", bounds.max_qubits, "Qubit bound per partition");
    partition->add_option("--max-gates", bounds.max_gates, "Gate bound per partition");
    partition->add_option("--window", bounds.window_size, "Nodes per partitioning window");
    partition->add_option("--out", out_path, "JSONL output (default stdout)");
    partition->callback([&] {
        action = [&] {
            CircuitDag dag = parse_qasm(read_input(in_path));
            std::string out;
            EdgeList edges = build_edge_list(dag);
            Partitioner p(dag, edges, bounds);
            p.run([&](Partition &&part) {
                out += partition_json(part).dump() + "\n";
            });
            write_output(out_path, out);
            return 0;
        };
    });

    // compile
    uint32_t max_n = 8, max_k = 16;
    auto *compile = app.add_subcommand("compile", "Compile a circuit into a chunk frame stream");
    compile->add_option("file", in_path, "QASM file or -")->required();
    compile->add_option("--max-n", max_n, "Qubits per chunk");
    compile->add_option("--max-k", max_k, "Teleported rotations per chunk");
    compile->add_option("--out", out_path, "Frame stream output")->required();
    compile->callback([&] {
        action = [&] {
            CircuitDag dag = lower_toffoli(parse_qasm(read_input(in_path)));
            auto cache = open_cache(g);
            PipelineConfig cfg;
            cfg.bounds = bounds_for_cache(max_n, max_k);
            cfg.cache = cache.get();
            std::string stream;
            cfg.stream_out = &stream;
            StageMetrics m = run_pipeline(dag, cfg);
            write_output(out_path, stream);
            json j = json::parse(stage_report_json(m));
            write_output("-", j.dump() + "\n");
            return 0;
        };
    });

    // stream
    PipelineConfig pcfg;
    pcfg.bounds = bounds;
    uint32_t s_max_n = 0, s_max_k = 0;
    std::string metrics_path, frames_path;
    auto *stream = app.add_subcommand("stream", "Run the streaming pipeline and report stage timings");
    stream->add_option("file", in_path, "QASM file or -")->required();
    stream->add_option("--workers", pcfg.workers, "Compile workers");
    stream->add_option("--queue", pcfg.queue_capacity, "Channel capacity in frames");
    stream->add_option("--rate", pcfg.consumer_rate, "Consumer gates/second (0 = no throttle)");
    stream->add_option("--max-n", s_max_n, "Qubits per chunk (sets partition bounds)");
    stream->add_option("--max-k", s_max_k, "Teleported rotations per chunk");
    stream->add_option("--metrics", metrics_path, "Metrics JSON output");
    stream->add_option("--frames", frames_path, "Write the frame stream here");
    stream->callback([&] {
        action = [&] {
            CircuitDag dag = lower_toffoli(parse_qasm(read_input(in_path)));
            auto cache = open_cache(g);
            if (s_max_n || s_max_k) {
                pcfg.bounds = bounds_for_cache(s_max_n ? s_max_n : 8, s_max_k ? s_max_k : 16);
            }
            pcfg.cache = cache.get();
            std::string bytes;
            if (!frames_path.empty()) {
                pcfg.stream_out = &bytes;
            }
            StageMetrics m = run_pipeline(dag, pcfg);
            if (!frames_path.empty()) {
                write_output(frames_path, bytes);
            }
            std::string js = stage_report_json(m);
            if (!metrics_path.empty()) {
                write_output(metrics_path, js);
            }
            if (g.format == "csv") {
                write_output("-", stage_report_csv(m));
            } else if (g.format == "text") {
                write_output("-", stage_report_table(m));
            } else {
                write_output("-", js);
            }
            return 0;
        };
    });

    // verify
    std::string chunks_path;
    double tol = 1e-9;
    auto *verify = app.add_subcommand("verify", "Check a frame stream against its circuit");
    verify->add_option("file", in_path, "QASM file or -")->required();
    verify->add_option("--chunks", chunks_path, "Frame stream from compile")->required();
    verify->add_option("--tol", tol, "Fidelity tolerance");
    verify->callback([&] {
        action = [&] {
            CircuitDag dag = parse_qasm(read_input(in_path));
            std::string bytes = read_input(chunks_path);
            std::map<std::string, GraphChunk> mirror;
            std::vector<std::unique_ptr<GraphChunk>> owned;
            std::vector<ChainLink> chain;
            for (const auto &f : read_all_frames(bytes)) {
                if (f.type == FrameType::FULL_CHUNK || f.type == FrameType::CACHE_REF) {
                    uint32_t arity = get_u32(reinterpret_cast<const uint8_t *>(f.payload.data()) + 32);
                    size_t head = 36 + 4 * (size_t)arity;
                    CacheRef ref = decode_cache_ref(std::string_view(f.payload).substr(0, head));
                    std::string hex = to_hex(ref.key);
                    if (f.type == FrameType::FULL_CHUNK) {
                        mirror[hex] = decode_chunk(std::string_view(f.payload).substr(head));
                    }
                    auto it = mirror.find(hex);
                    if (it == mirror.end()) {
                        throw IntegrityError("CACHE_REF to unknown chunk " + hex);
                    }
                    chain.push_back({&it->second, ref.qubits});
                } else if (f.type == FrameType::TABLE_PUT) {
                    TablePut t = decode_table_put(f.payload);
                    if (DecompositionTable::global().contains(t.key)) {
                        DecompositionTable::global().set_sequence(t.key, t.sequence);
                    }
                }
            }
            double fid = process_fidelity(dag, chain);
            bool pass = fid >= 1.0 - tol;
            json j = {{"pass", pass}, {"fidelity", fid}, {"chunks", chain.size()}};
            write_output("-", j.dump() + "\n");
            return pass ? 0 : EXIT_DOMAIN;
        };
    });

    // tableau dump: stabilizer rows of a Clifford circuit applied to |+...+>
    auto *tableau = app.add_subcommand("tableau", "Stabilizer tableau debugging");
    tableau->require_subcommand(1);
    auto *tab_dump = tableau->add_subcommand("dump", "Print stabilizer rows of a Clifford circuit on |+>^n");
    tab_dump->add_option("file", in_path, "QASM file or -")->required();
    bool tab_graph = false;
    tab_dump->add_flag("--graph", tab_graph, "Also print the graph form (adjacency and local Cliffords)");
    tab_dump->callback([&] {
        action = [&] {
            CircuitDag dag = parse_qasm(read_input(in_path));
            Tableau t = Tableau::new_plus_state(std::max<size_t>(1, dag.num_qubits()));
            for (uint32_t id = 0; id < dag.size(); id++) {
                const GateNode &node = dag.node(id);
                t.apply_gate(node.kind(), node.qubits());
            }
            std::string out;
            for (const auto &row : t.to_strings()) {
                out += row + "\n";
            }
            if (tab_graph) {
                GraphForm gf = t.to_graph();
                out += "graph\n";
                for (size_t i = 0; i < gf.adjacency.rows(); i++) {
                    for (size_t j = 0; j < gf.adjacency.cols(); j++) {
                        out += gf.adjacency.get(i, j) ? '1' : '0';
                    }
                    out += "\n";
                }
                out += "locals";
                for (auto c : gf.locals) {
                    out += " " + std::to_string((int)c.code());
                }
                out += "\n";
            }
            write_output("-", out);
            return 0;
        };
    });

    // gen
    auto *gen = app.add_subcommand("gen", "Generate circuits");
    gen->require_subcommand(1);
    uint32_t bits = 0, stride = 0;
    auto *gen_adder = gen->add_subcommand("adder", "Ripple-carry adder as QASM, or its strided plan with --stride");
    gen_adder->add_option("--bits", bits, "Adder width")->required();
    gen_adder->add_option("--stride", stride, "Emit the strided plan (JSON) at this stride");
    gen_adder->add_option("--out", out_path, "Output file (default stdout)");
    gen_adder->callback([&] {
        action = [&] {
            if (!stride) {
                write_output(out_path, emit_qasm(cuccaro_adder(bits)));
                return 0;
            }
            auto cache = open_cache(g);
            AdderPlan plan = strided_plan(StriderConfig{bits, stride, bits % stride}, *cache);
            json refs = json::array();
            for (const auto &r : plan.refs) {
                refs.push_back({{"key", r.key.hex()}, {"chunk", r.chunk}, {"qubits", r.qubits}});
            }
            json j = {{"bits", bits},
                      {"alpha", stride},
                      {"beta", bits % stride},
                      {"unique_chunks", plan.unique_chunks.size()},
                      {"references", plan.refs.size()},
                      {"cache_hits", plan.cache_hits},
                      {"cache_misses", plan.cache_misses},
                      {"carry_after", plan.carry_after},
                      {"refs", refs}};
            write_output(out_path, j.dump() + "\n");
            return 0;
        };
    });
    uint32_t blocks = 10, block_gates = 20, distinct = 2, qubits = 4;
    auto *gen_syn = gen->add_subcommand("synthetic", "Repetitive random circuit as QASM");
    gen_syn->add_option("--blocks", blocks);
    gen_syn->add_option("--block-gates", block_gates);
    gen_syn->add_option("--distinct", distinct);
    gen_syn->add_option("--qubits", qubits);
    gen_syn->add_option("--out", out_path, "Output file (default stdout)");
    gen_syn->callback([&] {
        action = [&] {
            write_output(out_path, emit_qasm(synthetic_repetitive(blocks, block_gates, distinct, qubits, g.seed)));
            return 0;
        };
    });

    // bench
    auto *bench = app.add_subcommand("bench", "Benchmarks");
    bench->require_subcommand(1);
    std::string sizes = "128,256,512,1024,2048", strides = "64,128";
    uint32_t repeats = 5, full_max_bits = 0, full_repeats = 0;
    auto *table1 = bench->add_subcommand("table1", "Strided vs full adder compilation");
    table1->add_option("--sizes", sizes);
    table1->add_option("--strides", strides);
    table1->add_option("--repeats", repeats);
    table1->add_option("--full-max-bits", full_max_bits, "Skip the full path above this width");
    table1->add_option("--full-repeats", full_repeats, "Repeats for the full path");
    table1->add_option("--out", out_path, "CSV output (default stdout)");
    table1->callback([&] {
        action = [&] {
            BenchOptions o;
            o.full_max_bits = full_max_bits;
            o.full_repeats = full_repeats;
            BenchReport r = bench_table1(parse_list(strides), parse_list(sizes), repeats, o);
            write_output(out_path, g.format == "text" ? r.markdown() : r.csv());
            return 0;
        };
    });

    // cache
    auto *cache_cmd = app.add_subcommand("cache", "Cache administration");
    cache_cmd->require_subcommand(1);
    auto need_dir = [&] {
        if (g.cache_dir.empty()) {
            throw UsageError("cache commands need --cache-dir or QSTREAM_CACHE_DIR");
        }
    };
    cache_cmd->add_subcommand("stats", "Entry and hit counters")->callback([&] {
        action = [&] {
            need_dir();
            auto c = ChunkCache::open(g.cache_dir);
            CacheStats s = c->stats();
            json j = {{"entries", s.entries},  {"hits", s.hits},           {"misses", s.misses},
                      {"puts", s.puts},        {"evictions", s.evictions}, {"decomp_entries", c->table().size()}};
            write_output("-", j.dump() + "\n");
            return 0;
        };
    });
    cache_cmd->add_subcommand("clear", "Remove every entry")->callback([&] {
        action = [&] {
            need_dir();
            ChunkCache::open(g.cache_dir)->clear();
            return 0;
        };
    });
    auto *cache_export = cache_cmd->add_subcommand("export", "Entries as JSONL");
    cache_export->add_option("--out", out_path, "Output file (default stdout)");
    cache_export->callback([&] {
        action = [&] {
            need_dir();
            auto c = ChunkCache::open(g.cache_dir);
            std::string out;
            for (const auto &e : c->entries()) {
                json j = {{"key", e.key.hex()},
                          {"qubit_arity", e.qubit_arity},
                          {"hits", e.hits},
                          {"created_at", e.created_at},
                          {"chunk", to_hex(as_bytes(e.chunk))}};
                out += j.dump() + "\n";
            }
            write_output(out_path, out);
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        bool known = false;
        std::string best;
        if (argc > 1 && argv[1][0] != '-') {
            size_t bd = 4;
            for (const auto *sc : app.get_subcommands({})) {
                known = known || sc->get_name() == argv[1];
                size_t d = edit_distance(argv[1], sc->get_name());
                if (d < bd) {
                    bd = d;
                    best = sc->get_name();
                }
            }
        }
        if (argc > 1 && argv[1][0] != '-' && !known) {
            std::cerr << "qstream: usage error: unknown subcommand '" << argv[1] << "'\n";
            if (!best.empty()) {
                std::cerr << "qstream: did you mean '" << best << "'?\n";
            }
            std::cerr << "Run with --help for more information.\n";
        } else {
            app.exit(e);
        }
        return EXIT_USAGE;
    }

    try {
        log(g, "debug", "running subcommand");
        return action ? action() : EXIT_USAGE;
    } catch (const UsageError &e) {
        std::cerr << "qstream: usage error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const ParseError &e) {
        std::cerr << "qstream: parse error: " << e.what() << "\n";
        return EXIT_DOMAIN;
    } catch (const IntegrityError &e) {
        std::cerr << "qstream: integrity error: " << e.what() << "\n";
        return EXIT_DOMAIN;
    } catch (const ConfigError &e) {
        std::cerr << "qstream: configuration error: " << e.what() << "\n";
        return EXIT_DOMAIN;
    } catch (const std::exception &e) {
        std::cerr << "qstream: error: " << e.what() << "\n";
        return EXIT_DOMAIN;
    }
}
