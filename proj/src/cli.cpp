#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harness.hpp"
#include "parser.hpp"
#include "pipeline.hpp"
#include "pretty.hpp"

namespace gtlc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStatic = 2;
constexpr int kExitCastGerm = 3;
constexpr int kExitRuntime = 4;
constexpr int kExitUsage = 64;

struct CommonFlags {
    std::string mode = "g";
    std::string typing = "gradual";
    bool dfo = false;
    std::vector<std::string> no_opt;
    uint64_t stack_limit = 1'000'000;
};

bool parse_typing(const std::string& s, checker::Typing& out) {
    if (s == "gradual") out = checker::Typing::Gradual;
    else if (s == "static") out = checker::Typing::Static;
    else if (s == "dynamic") out = checker::Typing::Dynamic;
    else return false;
    return true;
}

pipeline::Options to_options(const CommonFlags& f) {
    pipeline::Options opts;
    parse_typing(f.typing, opts.typing);
    opts.dfo = f.dfo;
    for (auto& p : f.no_opt) {
        if (p == "simplify") opts.passes.simplify = false;
        else if (p == "germs") opts.passes.germs = false;
        else if (p == "prune") opts.passes.prune = false;
        else if (p == "direct") opts.passes.direct = false;
    }
    return opts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void report_compile_error(const std::string& path, const std::string& source,
                          const CompileError& e, std::ostream& err) {
    LineCol lc = locate(source, e.span.begin);
    const char* kind = e.kind == CompileError::Kind::Lex     ? "lex error"
                       : e.kind == CompileError::Kind::Parse ? "parse error"
                                                             : "type error";
    err << path << ":" << lc.line << ":" << lc.col << ": " << kind << ": "
        << e.what() << "\n";
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_mode = true) {
    if (with_mode)
        cmd->add_option("--mode", f.mode, "semantic mode")
            ->check(CLI::IsMember({"g", "mc", "mv"}));
    cmd->add_option("--typing", f.typing, "typing mode")
        ->check(CLI::IsMember({"gradual", "static", "dynamic"}));
    cmd->add_flag("--dfo", f.dfo, "enable the dual float optimization");
    cmd->add_option("--no-opt", f.no_opt, "disable an optimization pass")
        ->check(CLI::IsMember({"simplify", "germs", "prune", "direct"}));
}

} // namespace

int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"gtlc: gradually-typed language compiler and instrumented runtime"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "compile and execute a program");
    std::string run_file;
    CommonFlags run_flags;
    bool counters = false;
    run->add_option("file", run_file, "source file (.gtp)")->required();
    add_common(run, run_flags);
    run->add_flag("--counters", counters, "print the counter report as JSON on stderr");
    run->add_option("--stack-limit", run_flags.stack_limit, "call depth limit");

    // check
    auto* check = app.add_subcommand("check", "typecheck a program");
    std::string check_file;
    CommonFlags check_flags;
    check->add_option("file", check_file, "source file (.gtp)")->required();
    add_common(check, check_flags, false);

    // emit
    auto* emit = app.add_subcommand("emit", "dump a pipeline stage");
    std::string emit_file, emit_stage_name;
    CommonFlags emit_flags;
    emit->add_option("file", emit_file, "source file (.gtp)")->required();
    emit->add_option("--emit", emit_stage_name, "stage: ast|elab|anf|core")
        ->required()
        ->check(CLI::IsMember({"ast", "elab", "anf", "core"}));
    add_common(emit, emit_flags, false);

    // dynamize
    auto* dyn = app.add_subcommand("dynamize", "sample partially-typed configurations");
    std::string dyn_file, dyn_out_dir;
    int dyn_spn = 10, dyn_bins = 10;
    uint64_t dyn_seed = 1;
    dyn->add_option("file", dyn_file, "fully-typed source file")->required();
    dyn->add_option("--samples-per-node", dyn_spn, "configurations per type node");
    dyn->add_option("--bins", dyn_bins, "precision bins");
    dyn->add_option("--seed", dyn_seed, "random seed");
    dyn->add_option("--out-dir", dyn_out_dir, "output directory")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_dir, bench_out = "bench.csv", bench_modes = "g,mc,mv";
    harness::SuiteOptions sopts;
    bool bench_dfo = false, bench_parallel = false;
    bench->add_option("suite", bench_dir, "directory of fully-typed .gtp benchmarks")
        ->required();
    bench->add_option("--modes", bench_modes, "comma-separated semantic modes");
    bench->add_option("--reps", sopts.reps, "repetitions per sampled configuration");
    bench->add_option("--endpoint-reps", sopts.endpoint_reps,
                      "repetitions for the two endpoints");
    bench->add_option("--seed", sopts.seed, "dynamizer seed");
    bench->add_option("--samples-per-node", sopts.samples_per_node,
                      "configurations per type node");
    bench->add_option("--bins", sopts.bins, "precision bins");
    bench->add_option("--out", bench_out, "output CSV path");
    bench->add_flag("--dfo", bench_dfo, "enable the dual float optimization");
    bench->add_flag("--parallel", bench_parallel,
                    "run configurations in parallel (counters only)");

    std::vector<const char*> argv;
    argv.push_back("gtlc");
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run->parsed()) {
            std::string source = read_file(run_file);
            pipeline::Options opts = to_options(run_flags);
            vm::Mode mode;
            vm::parse_semantics(run_flags.mode, mode.sem);
            mode.dfo = run_flags.dfo;
            mode.typing = opts.typing;
            core::Program prog;
            try {
                prog = pipeline::compile(source, opts);
            } catch (const CompileError& e) {
                report_compile_error(run_file, source, e, err);
                return kExitStatic;
            }
            vm::Limits limits{run_flags.stack_limit};
            vm::RunResult res = vm::run_program(prog, mode, limits, out);
            if (counters) err << res.counters.to_json() << "\n";
            if (res.error) {
                LineCol lc = locate(source, res.error->span.begin);
                err << run_file << ":" << lc.line << ":" << lc.col
                    << ": runtime error: " << res.error->detail << "\n";
            }
            return vm::outcome_exit_code(res.outcome);
        }

        if (check->parsed()) {
            std::string source = read_file(check_file);
            checker::Typing typing;
            parse_typing(check_flags.typing, typing);
            try {
                checker::typecheck(surface::parse_source(source), typing);
            } catch (const CompileError& e) {
                report_compile_error(check_file, source, e, err);
                return kExitStatic;
            }
            out << "ok\n";
            return kExitOk;
        }

        if (emit->parsed()) {
            std::string source = read_file(emit_file);
            pipeline::Options opts = to_options(emit_flags);
            pipeline::Stage stage;
            pipeline::parse_stage(emit_stage_name, stage);
            try {
                out << pipeline::emit_stage(source, opts, stage);
            } catch (const CompileError& e) {
                report_compile_error(emit_file, source, e, err);
                return kExitStatic;
            }
            return kExitOk;
        }

        if (dyn->parsed()) {
            std::string source = read_file(dyn_file);
            surface::Program program;
            try {
                program = surface::parse_source(source);
                dynamizer::SampleOptions dopts;
                dopts.samples_per_node = dyn_spn;
                dopts.bins = dyn_bins;
                dopts.seed = dyn_seed;
                std::vector<dynamizer::ConfigSample> configs =
                    dynamizer::sample_lattice(program, dopts);

                std::filesystem::create_directories(dyn_out_dir);
                std::string manifest = "config,ratio,bin,seed\n";
                char buf[64];
                for (auto& c : configs) {
                    std::ofstream f(std::filesystem::path(dyn_out_dir) /
                                    (c.id + ".gtp"));
                    if (!f) throw std::runtime_error("cannot write config " + c.id);
                    f << surface::pretty(c.program);
                    std::snprintf(buf, sizeof buf, "%.4f", c.ratio);
                    manifest += c.id;
                    manifest += ",";
                    manifest += buf;
                    manifest += "," + std::to_string(c.bin) + "," +
                                std::to_string(c.seed) + "\n";
                }
                std::ofstream mf(std::filesystem::path(dyn_out_dir) / "manifest.csv");
                if (!mf) throw std::runtime_error("cannot write manifest.csv");
                mf << manifest;
                out << configs.size() << " configurations written to " << dyn_out_dir
                    << "\n";
            } catch (const CompileError& e) {
                report_compile_error(dyn_file, source, e, err);
                return kExitStatic;
            }
            return kExitOk;
        }

        if (bench->parsed()) {
            sopts.dfo = bench_dfo;
            sopts.parallel = bench_parallel;
            sopts.modes.clear();
            std::stringstream ms(bench_modes);
            std::string item;
            while (std::getline(ms, item, ',')) {
                vm::Semantics s;
                if (!vm::parse_semantics(item, s)) {
                    err << "unknown mode: " << item << "\n";
                    return kExitUsage;
                }
                sopts.modes.push_back(s);
            }
            std::vector<harness::RunRecord> records =
                harness::run_benchmark_suite(bench_dir, sopts, err);
            harness::emit_csv(records, bench_out);
            out << records.size() << " rows written to " << bench_out << "\n";
            return kExitOk;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace gtlc::cli
