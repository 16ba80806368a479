// Command-line front end: benchmark runs, single-trajectory evaluation,
// streaming filtering, strategy comparison, operating-point sweeps, dataset
// statistics, and synthetic dataset generation.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "themis/bench.hpp"
#include "themis/config.hpp"
#include "themis/dataset.hpp"
#include "themis/filter.hpp"
#include "themis/reward_theory.hpp"
#include "themis/scripted_backend.hpp"
#include "themis/stats.hpp"

namespace {

using namespace themis;

struct BackendOptions {
    std::string config_path;
    std::string script_path;    // non-empty selects the replay backend
    std::string endpoint;
    std::string model;
    std::string prompts_dir;
    std::string audit_log_dir;
};

void add_backend_options(CLI::App* cmd, BackendOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--scripted", opts.script_path, "replay backend script (JSON key->response)");
    cmd->add_option("--endpoint", opts.endpoint, "chat-completions endpoint origin");
    cmd->add_option("--model", opts.model, "model name");
    cmd->add_option("--prompts", opts.prompts_dir, "prompt template directory");
    cmd->add_option("--audit-log", opts.audit_log_dir, "per-trajectory transcript directory");
}

AppConfig resolve_config(const BackendOptions& opts) {
    AppConfig cfg = opts.config_path.empty() ? AppConfig{} : AppConfig::from_file(opts.config_path);
    cfg.apply_env_overrides();
    if (!opts.endpoint.empty()) cfg.backend.endpoint = opts.endpoint;
    if (!opts.model.empty()) {
        cfg.backend.model = opts.model;
        cfg.pipeline.model.model_name = opts.model;
    }
    if (!opts.prompts_dir.empty()) cfg.pipeline.prompts_dir = opts.prompts_dir;
    if (!opts.audit_log_dir.empty()) cfg.pipeline.audit_log_dir = opts.audit_log_dir;
    return cfg;
}

std::unique_ptr<Backend> make_backend(const BackendOptions& opts, const AppConfig& cfg) {
    if (!opts.script_path.empty())
        return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(opts.script_path));
    return std::make_unique<HttpBackend>(cfg.backend);
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write: " + path);
    out << text << '\n';
}

std::vector<double> parse_grid(const std::string& spec) {
    // "lo:hi:n" or a single value
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {std::stod(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw Error("grid spec must be lo:hi:n, got " + spec);
    return linspace(std::stod(spec.substr(0, c1)), std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                    std::stoi(spec.substr(c2 + 1)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent critic for GUI-agent trajectories"};
    app.require_subcommand(1);

    // --- bench -------------------------------------------------------------
    BackendOptions bench_backend;
    std::string bench_dataset, bench_strategy = "themis", bench_vote, bench_report, bench_records;
    int bench_k = 1, bench_workers = 4;
    auto* bench_cmd = app.add_subcommand("bench", "evaluate a labeled dataset");
    bench_cmd->add_option("--dataset", bench_dataset, "JSONL dataset")->required();
    bench_cmd->add_option("--strategy", bench_strategy, "themis|zerogui[:K]|digirl");
    bench_cmd->add_option("--vote", bench_vote, "majority|all|any");
    bench_cmd->add_option("-k,--votes", bench_k, "independent runs per trajectory");
    bench_cmd->add_option("--workers", bench_workers, "concurrent evaluations");
    bench_cmd->add_option("--report", bench_report, "metrics report path (JSON)");
    bench_cmd->add_option("--records", bench_records, "evaluation records path (JSONL)");
    add_backend_options(bench_cmd, bench_backend);

    // --- eval --------------------------------------------------------------
    BackendOptions eval_backend;
    std::string eval_input, eval_strategy = "themis", eval_out;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a single trajectory");
    eval_cmd->add_option("--trajectory", eval_input, "JSONL file (first record is used)")
        ->required();
    eval_cmd->add_option("--strategy", eval_strategy, "themis|zerogui[:K]|digirl");
    eval_cmd->add_option("--out", eval_out, "record output path (JSON)");
    add_backend_options(eval_cmd, eval_backend);

    // --- filter ------------------------------------------------------------
    BackendOptions filter_backend;
    std::string filter_source, filter_sink, filter_rejected, filter_strategy = "themis";
    int filter_workers = 4, filter_idle_ms = 0;
    bool filter_watch = false;
    auto* filter_cmd = app.add_subcommand("filter", "accept/reject trajectories for curation");
    filter_cmd->add_option("--source", filter_source, "dataset file, or directory with --watch")
        ->required();
    filter_cmd->add_option("--sink", filter_sink, "accepted trajectories (JSONL)")->required();
    filter_cmd->add_option("--rejected", filter_rejected, "rejected records side log (JSONL)");
    filter_cmd->add_option("--strategy", filter_strategy, "themis|zerogui[:K]|digirl");
    filter_cmd->add_option("--workers", filter_workers, "concurrent evaluations");
    filter_cmd->add_flag("--watch", filter_watch, "poll the source directory for new files");
    filter_cmd->add_option("--idle-timeout-ms", filter_idle_ms,
                           "stop after this long with no new files (watch mode)");
    add_backend_options(filter_cmd, filter_backend);

    // --- compare -----------------------------------------------------------
    BackendOptions compare_backend;
    std::string compare_dataset, compare_strategies_arg = "themis,zerogui,digirl", compare_out;
    int compare_workers = 4;
    auto* compare_cmd = app.add_subcommand("compare", "run several strategies on one dataset");
    compare_cmd->add_option("--dataset", compare_dataset, "JSONL dataset")->required();
    compare_cmd->add_option("--strategies", compare_strategies_arg, "comma-separated list");
    compare_cmd->add_option("--workers", compare_workers, "concurrent evaluations");
    compare_cmd->add_option("--out", compare_out, "comparison table path (JSON)");
    add_backend_options(compare_cmd, compare_backend);

    // --- theory ------------------------------------------------------------
    std::string theory_rho = "0.5:1.0:6", theory_alpha = "0.0:0.5:6", theory_p = "0.05:0.95:19";
    std::string theory_out, theory_format = "csv";
    double theory_rho_min = 0.0;
    auto* theory_cmd = app.add_subcommand("theory", "imperfect-evaluator analysis");
    auto* sweep_cmd = theory_cmd->add_subcommand("sweep", "tabulate objective/gradient/precision");
    sweep_cmd->add_option("--rho", theory_rho, "grid lo:hi:n");
    sweep_cmd->add_option("--alpha", theory_alpha, "grid lo:hi:n");
    sweep_cmd->add_option("--p", theory_p, "grid lo:hi:n");
    sweep_cmd->add_option("--rho-min", theory_rho_min,
                          "drop operating points whose recall falls below this");
    sweep_cmd->add_option("--format", theory_format, "csv|json");
    sweep_cmd->add_option("--out", theory_out, "output path (default stdout)");

    // --- stats -------------------------------------------------------------
    std::string stats_dataset, stats_records, stats_out;
    auto* stats_cmd = app.add_subcommand("stats", "milestone statistics over evaluation records");
    stats_cmd->add_option("--dataset", stats_dataset, "JSONL dataset")->required();
    stats_cmd->add_option("--records", stats_records, "evaluation records (JSONL)")->required();
    stats_cmd->add_option("--out", stats_out, "report path (JSON, default stdout)");

    // --- gen ---------------------------------------------------------------
    std::string gen_out, gen_split;
    std::uint64_t gen_seed = 1;
    int gen_min_steps = 4, gen_max_steps = 40;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic labeled dataset");
    gen_cmd->add_option("--out", gen_out, "output JSONL path")->required();
    gen_cmd->add_option("--split", gen_split,
                        "platform=pos:neg[,platform=pos:neg...]; default is the benchmark split");
    gen_cmd->add_option("--seed", gen_seed, "RNG seed");
    gen_cmd->add_option("--min-steps", gen_min_steps, "minimum steps per trajectory");
    gen_cmd->add_option("--max-steps", gen_max_steps, "maximum steps per trajectory");

    // --- prompts -----------------------------------------------------------
    std::string prompts_dir_out;
    auto* prompts_cmd = app.add_subcommand("prompts", "prompt template utilities");
    auto* export_cmd = prompts_cmd->add_subcommand("export", "write built-in templates to a directory");
    export_cmd->add_option("--dir", prompts_dir_out, "target directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bench_cmd) {
            AppConfig cfg = resolve_config(bench_backend);
            auto backend = make_backend(bench_backend, cfg);
            auto data = load_dataset(bench_dataset).trajectories;
            CriticStrategy strategy = CriticStrategy::parse(bench_strategy, cfg.pipeline);
            std::optional<VotingRule> rule;
            if (!bench_vote.empty()) rule = VotingRule::parse(bench_vote, bench_k);
            BenchmarkResult result =
                run_benchmark(data, strategy, rule, *backend, bench_workers);
            std::cout << result.report.to_table();
            if (!bench_report.empty())
                write_or_print(bench_report, result.report.to_json().dump(2));
            if (!bench_records.empty()) save_records(bench_records, result.records);
        } else if (*eval_cmd) {
            AppConfig cfg = resolve_config(eval_backend);
            auto backend = make_backend(eval_backend, cfg);
            auto data = load_dataset(eval_input).trajectories;
            if (data.empty()) throw Error("no trajectory records in " + eval_input);
            CriticStrategy strategy = CriticStrategy::parse(eval_strategy, cfg.pipeline);
            EvaluationRecord record = evaluate_with_strategy(data.front(), strategy, *backend);
            write_or_print(eval_out, json(record).dump(2));
        } else if (*filter_cmd) {
            AppConfig cfg = resolve_config(filter_backend);
            auto backend = make_backend(filter_backend, cfg);
            CriticStrategy strategy = CriticStrategy::parse(filter_strategy, cfg.pipeline);
            FilterSinks sinks{filter_sink, filter_rejected};
            FilterSummary summary;
            if (filter_watch) {
                DirectoryWatchSource source(
                    filter_source, std::chrono::milliseconds(50),
                    filter_idle_ms > 0
                        ? std::optional(std::chrono::milliseconds(filter_idle_ms))
                        : std::nullopt);
                summary = filter_stream(source, strategy, *backend, sinks, filter_workers);
            } else {
                VectorSource source(load_dataset(filter_source).trajectories);
                summary = filter_stream(source, strategy, *backend, sinks, filter_workers);
            }
            std::cout << json{{"accepted", summary.accepted},
                              {"rejected", summary.rejected},
                              {"failed", summary.failed}}
                             .dump()
                      << '\n';
        } else if (*compare_cmd) {
            AppConfig cfg = resolve_config(compare_backend);
            auto backend = make_backend(compare_backend, cfg);
            auto data = load_dataset(compare_dataset).trajectories;
            std::vector<CriticStrategy> strategies;
            std::stringstream ss(compare_strategies_arg);
            std::string name;
            while (std::getline(ss, name, ','))
                strategies.push_back(CriticStrategy::parse(name, cfg.pipeline));
            auto reports = compare_strategies(data, strategies, *backend, compare_workers);
            json table = json::array();
            for (const auto& r : reports) {
                std::cout << r.to_table() << '\n';
                table.push_back(r.to_json());
            }
            if (!compare_out.empty()) write_or_print(compare_out, table.dump(2));
        } else if (*sweep_cmd) {
            std::vector<EvaluatorOperatingPoint> ops;
            for (double rho : parse_grid(theory_rho)) {
                if (rho < theory_rho_min) continue;
                for (double alpha : parse_grid(theory_alpha)) ops.push_back({rho, alpha});
            }
            if (ops.empty()) throw Error("rho grid is empty after applying --rho-min");
            auto rows = sweep(ops, parse_grid(theory_p));
            write_or_print(theory_out, theory_format == "json" ? sweep_to_json(rows).dump(2)
                                                               : sweep_to_csv(rows));
        } else if (*stats_cmd) {
            auto data = load_dataset(stats_dataset).trajectories;
            auto records = load_records(stats_records);
            write_or_print(stats_out, dataset_stats(data, records).to_json().dump(2));
        } else if (*gen_cmd) {
            GeneratorSpec spec = GeneratorSpec::benchmark_split();
            if (!gen_split.empty()) {
                spec.platforms.clear();
                std::stringstream ss(gen_split);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    const auto eq = part.find('=');
                    const auto colon = part.find(':', eq);
                    if (eq == std::string::npos || colon == std::string::npos)
                        throw Error("split entries look like platform=pos:neg");
                    spec.platforms.push_back(
                        {platform_from_string(part.substr(0, eq)),
                         std::stoi(part.substr(eq + 1, colon - eq - 1)),
                         std::stoi(part.substr(colon + 1))});
                }
            }
            spec.seed = gen_seed;
            spec.min_steps = gen_min_steps;
            spec.max_steps = gen_max_steps;
            auto data = generate_synthetic_dataset(spec);
            std::ofstream out(gen_out, std::ios::trunc);
            if (!out) throw Error("cannot write: " + gen_out);
            for (const auto& t : data) out << trajectory_to_line(t) << '\n';
            std::cout << "wrote " << data.size() << " trajectories to " << gen_out << '\n';
        } else if (*export_cmd) {
            PromptLibrary::export_builtin(prompts_dir_out);
            std::cout << "wrote templates to " << prompts_dir_out << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
