// Copyright 2026 The qdisco Authors
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

#include "qdisco/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "detail/io_util.hpp"
#include "detail/json_codec.hpp"
#include "qdisco/compiler.hpp"
#include "qdisco/decomposer.hpp"
#include "qdisco/hscore.hpp"
#include "qdisco/orchestrator.hpp"
#include "qdisco/random.hpp"
#include "qdisco/serialization.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

namespace fs = std::filesystem;
using detail::json;

std::pair<int, int> parse_layer_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::logic_error&) {
            throw UsageError("--layers: expected p or a..b, got '" + text + "'");
        }
        if (used != s.size()) throw UsageError("--layers: expected p or a..b, got '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    const int lo = to_int(dots == std::string::npos ? text : text.substr(0, dots));
    const int hi = dots == std::string::npos ? lo : to_int(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw UsageError("--layers: need 1 <= a <= b, got '" + text + "'");
    return {lo, hi};
}

namespace {

void check_eta(double eta, const std::string& where) {
    if (!(eta > 0.0 && eta <= 1.0)) throw UsageError(where + ": eta must lie in (0, 1], got " + std::to_string(eta));
}

OptimizerConfig parse_optimizer(const json& j) {
    OptimizerConfig cfg;
    if (j.contains("method")) cfg.method = parse_optimizer_method(detail::require<std::string>(j, "method", "optimizer"));
    if (j.contains("max_evaluations")) cfg.max_evaluations = detail::require<int>(j, "max_evaluations", "optimizer");
    if (j.contains("tolerance")) cfg.tolerance = detail::require<double>(j, "tolerance", "optimizer");
    if (j.contains("grid_resolution")) cfg.grid_resolution = detail::require<int>(j, "grid_resolution", "optimizer");
    if (j.contains("initial_step")) cfg.initial_step = detail::require<double>(j, "initial_step", "optimizer");
    if (j.contains("initial")) cfg.initial = detail::decode_params(j["initial"]);
    cfg.validate();
    return cfg;
}

fs::path existing(const fs::path& base, const std::string& rel, const std::string& field) {
    fs::path p(rel);
    if (p.is_relative()) p = base / p;
    if (!fs::is_regular_file(p)) throw UsageError(field + ": file '" + p.string() + "' does not exist");
    return p;
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
    try {
        const auto doc = detail::parse_json(detail::read_text_file(path.string()));
        const fs::path base = path.parent_path();
        RunConfig cfg;
        cfg.problem = existing(base, detail::require<std::string>(doc, "problem"), "problem");
        std::vector<FleetMember> members;
        for (const auto& entry : detail::require<std::vector<json>>(doc, "fleet")) {
            FleetMember m{load_calibration_file(existing(base, detail::require<std::string>(entry, "calibration", "fleet"), "fleet.calibration").string()),
                          std::nullopt};
            if (entry.contains("prior_hscore")) {
                const double prior = detail::require<double>(entry, "prior_hscore", "fleet");
                if (!(prior >= 0.0 && prior <= 2.0)) throw UsageError("fleet.prior_hscore must lie in [0, 2]");
                m.prior_hscore = prior;
            }
            members.push_back(std::move(m));
        }
        if (members.empty()) throw UsageError("fleet: at least one QPU is required");
        cfg.fleet = Fleet(std::move(members));
        cfg.eta = detail::require<double>(doc, "eta");
        check_eta(cfg.eta, "eta");
        cfg.layers = detail::require<int>(doc, "layers");
        if (cfg.layers < 1) throw UsageError("layers must be at least 1");
        cfg.shots = detail::require<std::int64_t>(doc, "shots");
        if (cfg.shots < 1) throw UsageError("shots must be positive");
        if (doc.contains("seed")) cfg.seed = detail::require<std::uint64_t>(doc, "seed");
        if (doc.contains("noise")) cfg.noise = detail::require<bool>(doc, "noise");
        if (doc.contains("noisy_optimize")) cfg.noisy_optimize = detail::require<bool>(doc, "noisy_optimize");
        if (doc.contains("trajectories")) cfg.trajectories = detail::require<int>(doc, "trajectories");
        if (cfg.trajectories < 1) throw UsageError("trajectories must be positive");
        if (doc.contains("optimizer")) cfg.optimizer = parse_optimizer(doc["optimizer"]);
        return cfg;
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError("run config '" + path.string() + "': " + e.what());
    }
}

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string metadata;
};

std::uint64_t resolve_seed(const Common& c, std::optional<std::uint64_t> from_config = std::nullopt) {
    if (c.seed) return *c.seed;
    if (from_config) return *from_config;
    if (const char* env = std::getenv("QDISCO_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::logic_error&) {
        }
        throw UsageError(std::string("QDISCO_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

void emit_metadata(const Common& c, const std::string& command, std::uint64_t seed) {
    if (c.metadata.empty()) return;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    const json meta = {{"command", command}, {"seed", seed}, {"created_at", stamp}};
    std::ofstream f(c.metadata, std::ios::binary);
    if (!f) throw Error("cannot write '" + c.metadata + "'");
    f << detail::dump(meta);
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Master seed (falls back to QDISCO_SEED, then 0)");
    sub->add_option("--out", c.out, "Write the JSON result here instead of stdout");
    sub->add_option("--metadata", c.metadata, "Write run metadata (timestamps) to this file");
}

CLI::Validator eta_range() {
    return CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                const double v = std::stod(s);
                if (v > 0.0 && v <= 1.0) return {};
            } catch (const std::logic_error&) {
            }
            return "eta must lie in (0, 1], got " + s;
        },
        "(0, 1]");
}

json region_json(const SamplingRegion& r) { return detail::encode(r); }

// ---------------------------------------------------------------------------

struct CompileArgs {
    std::string qpu, problem;
    double eta = kDefaultEta;
    int regions = 0;
    bool isomorphic = false;
};

std::string cmd_compile(const CompileArgs& a, std::uint64_t seed) {
    const QpuModel qpu = load_calibration_file(a.qpu);
    const SpinPolynomial poly = load_problem_file(a.problem).polynomial();
    const FilteredGraph fg = filter_by_threshold(qpu, a.eta);
    EnumerateOptions eopts;
    eopts.seed = derive_seed(seed, streams::kRegions);
    const int n = poly.num_spins();
    const int k = a.regions > 0 ? a.regions : std::max(1, static_cast<int>(fg.qubits.size()) / n);
    SelectOptions sopts;
    sopts.isomorphic = a.isomorphic;
    const auto regions = select_regions(enumerate_regions(fg, n, eopts), k, sopts);
    json placed = json::array();
    for (const auto& r : regions) {
        const Placement p = map_circuit(poly, r);
        validate_placement(p, poly, qpu);
        placed.push_back({{"placement", detail::encode(p)}, {"swap_count", p.swap_count()}});
    }
    json filtered = {{"qubits", fg.qubits},
                     {"num_couplings", fg.couplings.size()},
                     {"largest_component", fg.largest_component()},
                     {"predicate_evaluations", fg.predicate_evaluations}};
    return detail::dump({{"qpu", qpu.name()}, {"eta", a.eta}, {"filtered", std::move(filtered)}, {"placements", std::move(placed)}});
}

struct PartitionArgs {
    std::string problem;
    std::vector<int> capacities;
    int restarts = 8;
};

std::string cmd_partition(const PartitionArgs& a, std::uint64_t seed) {
    const ProblemInstance prob = load_problem_file(a.problem);
    if (!prob.graph) throw UsageError("--problem: partition needs a graph problem");
    MincutOptions opts;
    opts.seed = seed;
    opts.restarts = a.restarts;
    const Partition part = balanced_mincut(*prob.graph, a.capacities, opts);
    json doc = detail::encode(part);
    json subs = json::array();
    for (const auto& sub : extract_subproblems(*prob.graph, part)) {
        subs.push_back({{"vertices", sub.vertices},
                        {"problem", detail::parse_json(problem_to_json(ProblemInstance{sub.graph, std::nullopt}))}});
    }
    doc["subproblems"] = std::move(subs);
    return detail::dump(doc);
}

struct PlanArgs {
    std::string config;
    std::optional<double> eta;
};

std::string cmd_plan(const PlanArgs& a, const Common& c, std::uint64_t* seed_out) {
    const RunConfig cfg = load_run_config(a.config);
    const std::uint64_t seed = resolve_seed(c, cfg.seed);
    *seed_out = seed;
    const double eta = a.eta.value_or(cfg.eta);
    PlanOptions popts;
    popts.seed = seed;
    const ExecutionPlan p = plan(load_problem_file(cfg.problem.string()), cfg.fleet, eta, cfg.layers, cfg.shots, popts);
    return detail::dump({{"plan", detail::encode(p)}, {"speedup", detail::encode(speedup_report(p))}});
}

struct RunArgs {
    std::string config;
    std::optional<double> eta;
    bool no_noise = false;
    bool noisy_optimize = false;
};

std::string cmd_run(const RunArgs& a, const Common& c, std::uint64_t* seed_out) {
    const RunConfig cfg = load_run_config(a.config);
    const std::uint64_t seed = resolve_seed(c, cfg.seed);
    *seed_out = seed;
    const double eta = a.eta.value_or(cfg.eta);
    const ProblemInstance prob = load_problem_file(cfg.problem.string());
    PlanOptions popts;
    popts.seed = seed;
    const ExecutionPlan p = plan(prob, cfg.fleet, eta, cfg.layers, cfg.shots, popts);
    ExecuteOptions eopts;
    eopts.noise = cfg.noise && !a.no_noise;
    eopts.noisy_optimize = cfg.noisy_optimize || a.noisy_optimize;
    eopts.trajectories = cfg.trajectories;
    eopts.optimizer = cfg.optimizer;
    eopts.seed = seed;
    const RunResult r = execute(p, prob, cfg.fleet, eopts);
    return detail::dump({{"plan", detail::encode(p)}, {"result", detail::encode(r)}});
}

struct BenchmarkArgs {
    std::string problem, qpu, layers = "1", csv;
    double eta = kDefaultEta;
    int mref = 500, m = 500, trajectories = 64, evaluations = 500;
    std::int64_t shots = 1024;
};

std::string cmd_benchmark(const BenchmarkArgs& a, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
    const auto [lo, hi] = parse_layer_range(a.layers);
    if (a.mref < kMinReferenceSize) throw UsageError("--mref must be at least " + std::to_string(kMinReferenceSize));
    if (a.m < 1) throw UsageError("--m must be at least 1");
    if (a.shots < 1) throw UsageError("--shots must be positive");
    const SpinPolynomial poly = load_problem_file(a.problem).polynomial();
    const QpuModel qpu = load_calibration_file(a.qpu);
    json reports = json::array();
    std::ostringstream csv;
    csv << "layers,h_score\n";
    for (int p = lo; p <= hi; ++p) {
        BenchmarkOptions opts;
        opts.reference.layers = p;
        opts.reference.m_ref = a.mref;
        opts.reference.shots = a.shots;
        opts.reference.optimizer.max_evaluations = a.evaluations;
        opts.m = a.m;
        opts.eta = a.eta;
        opts.trajectories = a.trajectories;
        const HScoreReport report = benchmark_qpu(poly, qpu, opts, derive_seed(seed, streams::kBenchmark, static_cast<std::uint64_t>(p)));
        reports.push_back(detail::encode(report));
        csv << p << ',' << json(report.c).dump() << '\n';
    }
    const std::string doc = detail::dump({{"qpu", qpu.name()}, {"eta", a.eta}, {"reports", std::move(reports)}});
    if (!a.csv.empty()) emit(csv.str(), a.csv, out);
    if (!out_path.empty()) emit(doc, out_path, out);
    if (a.csv.empty() && out_path.empty()) out << csv.str();
    return {};
}

struct SimulateArgs {
    std::string problem, qpu;
    int layers = 1;
    std::vector<double> gammas, betas;
    std::int64_t shots = 1024;
    double eta = kDefaultEta;
    bool noise = false;
    int evaluations = 500;
};

std::string cmd_simulate(const SimulateArgs& a, std::uint64_t seed) {
    const SpinPolynomial poly = load_problem_file(a.problem).polynomial();
    json doc;
    QaoaParams params;
    if (!a.gammas.empty() || !a.betas.empty()) {
        params = QaoaParams{a.gammas, a.betas};
        try {
            params.validate();
        } catch (const Error& e) {
            throw UsageError(std::string("--gammas/--betas: ") + e.what());
        }
    } else {
        OptimizerConfig cfg;
        cfg.max_evaluations = a.evaluations;
        cfg.seed = derive_seed(seed, streams::kOptimizerInit);
        const auto trace = optimize(poly, a.layers, cfg);
        if (!trace.ok()) throw Error("angle optimization failed: " + *trace.error);
        params = trace.best_params;
        doc["optimizer"] = {{"evaluations", trace.evaluations}, {"converged", trace.converged}, {"best_value", trace.best_value}};
    }
    const QaoaObjective objective(poly);
    ShotCounts counts;
    if (a.qpu.empty()) {
        counts = sample(objective.state(params), a.shots, derive_seed(seed, streams::kSample));
    } else {
        const QpuModel qpu = load_calibration_file(a.qpu);
        EnumerateOptions eopts;
        eopts.seed = derive_seed(seed, streams::kRegions);
        const auto regions = select_regions(enumerate_regions(filter_by_threshold(qpu, a.eta), poly.num_spins(), eopts), 1);
        const Placement placement = map_circuit(poly, regions.front());
        const NoiseSpec noise = a.noise ? NoiseSpec::from_qpu(qpu) : NoiseSpec::noiseless(qpu);
        counts = noisy_sample(poly, params, placement, qpu, noise, a.shots, derive_seed(seed, streams::kSample));
        doc["region"] = region_json(regions.front());
    }
    doc["params"] = detail::encode(params);
    doc["expectation"] = objective(params);
    doc["counts"] = detail::encode(counts);
    if (poly.num_spins() <= kMaxDenseSpins) {
        const Optimum opt = brute_force_optimum(poly);
        json argmins = json::array();
        for (BasisIndex b : opt.argmins) argmins.push_back(counts.bitstring(b));
        doc["optimum"] = {{"min_value", opt.min_value}, {"argmins", std::move(argmins)}};
        doc["accuracy"] = accuracy(counts, opt);
    }
    return detail::dump(doc);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distributed, noise-aware QAOA over a simulated QPU fleet", "qdisco"};
    app.require_subcommand(1);
    Common common;

    CompileArgs compile_args;
    auto* compile = app.add_subcommand("compile", "Filter a QPU, select sampling regions and place the circuit");
    compile->add_option("--qpu", compile_args.qpu, "Calibration JSON")->required()->check(CLI::ExistingFile);
    compile->add_option("--problem", compile_args.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
    compile->add_option("--eta", compile_args.eta, "Error threshold")->check(eta_range());
    compile->add_option("--regions", compile_args.regions, "Maximum region count (0: as many as fit)")->check(CLI::NonNegativeNumber);
    compile->add_flag("--isomorphic-regions", compile_args.isomorphic, "Only mutually isomorphic regions");
    add_common(compile, common);

    PartitionArgs partition_args;
    auto* partition = app.add_subcommand("partition", "Balanced min-cut partition of a graph problem");
    partition->add_option("--problem", partition_args.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
    partition->add_option("--capacities", partition_args.capacities, "Part capacities, e.g. 6,5,4")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    partition->add_option("--restarts", partition_args.restarts, "Multi-start count")->check(CLI::PositiveNumber);
    add_common(partition, common);

    PlanArgs plan_args;
    auto* plan_cmd = app.add_subcommand("plan", "Build an execution plan for a run config");
    plan_cmd->add_option("--config", plan_args.config, "Run config JSON")->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--eta", plan_args.eta, "Override the config's error threshold")->check(eta_range());
    add_common(plan_cmd, common);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Plan, execute and merge a distributed run");
    run->add_option("--config", run_args.config, "Run config JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--eta", run_args.eta, "Override the config's error threshold")->check(eta_range());
    run->add_flag("--no-noise", run_args.no_noise, "Sample without noise");
    run->add_flag("--noisy-optimize", run_args.noisy_optimize, "Optimize angles on the noisy sampler");
    add_common(run, common);

    BenchmarkArgs bench_args;
    auto* bench = app.add_subcommand("benchmark", "H-score of a QPU per layer count");
    bench->add_option("--problem", bench_args.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
    bench->add_option("--qpu", bench_args.qpu, "Calibration JSON")->required()->check(CLI::ExistingFile);
    bench->add_option("--layers", bench_args.layers, "Layer count p or range a..b");
    bench->add_option("--mref", bench_args.mref, "Reference runs");
    bench->add_option("--m", bench_args.m, "Benchmark runs");
    bench->add_option("--shots", bench_args.shots, "Shots per run");
    bench->add_option("--eta", bench_args.eta, "Error threshold")->check(eta_range());
    bench->add_option("--trajectories", bench_args.trajectories, "Noise trajectories per run")->check(CLI::PositiveNumber);
    bench->add_option("--max-evaluations", bench_args.evaluations, "Optimizer budget")->check(CLI::PositiveNumber);
    bench->add_option("--csv", bench_args.csv, "Write (layers, h_score) rows here");
    add_common(bench, common);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "Optimize or evaluate given angles and sample");
    sim->add_option("--problem", sim_args.problem, "Problem JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--layers", sim_args.layers, "Layer count")->check(CLI::PositiveNumber);
    sim->add_option("--gammas", sim_args.gammas, "Phase angles")->delimiter(',');
    sim->add_option("--betas", sim_args.betas, "Mixer angles")->delimiter(',');
    sim->add_option("--shots", sim_args.shots, "Shots")->check(CLI::PositiveNumber);
    sim->add_option("--qpu", sim_args.qpu, "Sample on this QPU's best region")->check(CLI::ExistingFile);
    sim->add_option("--eta", sim_args.eta, "Error threshold")->check(eta_range());
    sim->add_flag("--noise", sim_args.noise, "Apply the QPU's noise");
    sim->add_option("--max-evaluations", sim_args.evaluations, "Optimizer budget")->check(CLI::PositiveNumber);
    add_common(sim, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        std::uint64_t seed = 0;
        std::string text;
        std::string name;
        if (compile->parsed()) {
            name = "compile";
            seed = resolve_seed(common);
            text = cmd_compile(compile_args, seed);
        } else if (partition->parsed()) {
            name = "partition";
            seed = resolve_seed(common);
            text = cmd_partition(partition_args, seed);
        } else if (plan_cmd->parsed()) {
            name = "plan";
            text = cmd_plan(plan_args, common, &seed);
        } else if (run->parsed()) {
            name = "run";
            text = cmd_run(run_args, common, &seed);
        } else if (bench->parsed()) {
            name = "benchmark";
            seed = resolve_seed(common);
            cmd_benchmark(bench_args, seed, common.out, out);
        } else {
            name = "simulate";
            seed = resolve_seed(common);
            text = cmd_simulate(sim_args, seed);
        }
        if (!text.empty()) emit(text, common.out, out);
        emit_metadata(common, name, seed);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
}

}  // namespace qdisco
