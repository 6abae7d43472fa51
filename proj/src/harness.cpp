#include "harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "parser.hpp"

namespace gtlc::harness {

namespace fs = std::filesystem;

RunRecord run_one(const surface::Program& program, const pipeline::Options& opts,
                  vm::Mode mode, int reps, vm::Limits limits, std::string* capture) {
    RunRecord rec;
    rec.mode = mode.sem;
    rec.dfo = mode.dfo;
    rec.typing = mode.typing;
    rec.reps = reps;

    core::Program compiled = pipeline::compile(program, opts);
    double total = 0;
    for (int r = 0; r < reps; ++r) {
        std::ostringstream sink;
        auto t0 = std::chrono::steady_clock::now();
        vm::RunResult res = vm::run_program(compiled, mode, limits, sink);
        auto t1 = std::chrono::steady_clock::now();
        total += std::chrono::duration<double>(t1 - t0).count();
        if (r == reps - 1) {
            rec.counters = res.counters;
            rec.outcome = res.outcome;
            if (capture) *capture = sink.str();
        }
    }
    rec.time_s = total / reps;
    return rec;
}

std::vector<RunRecord> run_benchmark_suite(const std::string& suite_dir,
                                           const SuiteOptions& opts,
                                           std::ostream& log) {
    std::vector<fs::path> files;
    for (auto& entry : fs::directory_iterator(suite_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".gtp")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<RunRecord> records;
    for (auto& file : files) {
        std::string name = file.stem().string();
        std::ifstream in(file);
        std::stringstream buf;
        buf << in.rdbuf();

        surface::Program program;
        std::vector<dynamizer::ConfigSample> configs;
        try {
            program = surface::parse_source(buf.str());
            dynamizer::SampleOptions sopts;
            sopts.samples_per_node = opts.samples_per_node;
            sopts.bins = opts.bins;
            sopts.seed = opts.seed;
            configs = dynamizer::sample_lattice(program, sopts);
        } catch (const std::exception& e) {
            log << name << ": skipped (" << e.what() << ")\n";
            continue;
        }
        log << name << ": " << configs.size() << " configurations\n";

        auto run_config = [&](const dynamizer::ConfigSample& cfg,
                              vm::Semantics sem) -> RunRecord {
            bool endpoint = cfg.id == "static" || cfg.id == "dynamic";
            vm::Mode mode{sem, opts.dfo, checker::Typing::Gradual};
            pipeline::Options popts;
            popts.dfo = opts.dfo;
            RunRecord rec;
            try {
                rec = run_one(cfg.program, popts, mode,
                              endpoint ? opts.endpoint_reps : opts.reps, vm::Limits{});
            } catch (const std::exception& e) {
                rec.outcome = vm::Outcome::OtherError;
                rec.mode = sem;
                rec.dfo = opts.dfo;
                log << name << "/" << cfg.id << ": " << e.what() << "\n";
            }
            rec.benchmark = name;
            rec.config = cfg.id;
            rec.ratio = cfg.ratio;
            return rec;
        };

        if (opts.parallel) {
            std::vector<std::future<RunRecord>> futs;
            for (auto& cfg : configs)
                for (auto sem : opts.modes)
                    futs.push_back(std::async(std::launch::async, run_config,
                                              std::cref(cfg), sem));
            for (auto& f : futs) records.push_back(f.get());
        } else {
            for (auto& cfg : configs)
                for (auto sem : opts.modes) records.push_back(run_config(cfg, sem));
        }
    }
    return records;
}

namespace {

const char* typing_name(checker::Typing t) {
    switch (t) {
    case checker::Typing::Gradual: return "gradual";
    case checker::Typing::Static: return "static";
    case checker::Typing::Dynamic: return "dynamic";
    }
    return "?";
}

} // namespace

std::string to_csv(std::vector<RunRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const RunRecord& a, const RunRecord& b) {
                         if (a.benchmark != b.benchmark) return a.benchmark < b.benchmark;
                         return a.ratio < b.ratio;
                     });
    std::string out =
        "benchmark,config,ratio,mode,dfo,typing,time_s,reps,trans_ops,proxy_allocs,"
        "heap_allocs,float_boxes,germ_checks,outcome\n";
    char buf[64];
    for (auto& r : records) {
        out += r.benchmark + "," + r.config + ",";
        std::snprintf(buf, sizeof buf, "%.4f", r.ratio);
        out += buf;
        out += ",";
        out += vm::semantics_name(r.mode);
        out += ",";
        out += r.dfo ? "true" : "false";
        out += ",";
        out += typing_name(r.typing);
        out += ",";
        if (r.outcome == vm::Outcome::Value) {
            std::snprintf(buf, sizeof buf, "%.6f", r.time_s);
            out += buf;
        }
        out += ",";
        out += std::to_string(r.reps);
        out += ",";
        out += std::to_string(r.counters.trans_ops) + "," +
               std::to_string(r.counters.proxy_allocs) + "," +
               std::to_string(r.counters.heap_allocs) + "," +
               std::to_string(r.counters.float_boxes) + "," +
               std::to_string(r.counters.germ_checks) + ",";
        out += vm::outcome_name(r.outcome);
        out += "\n";
    }
    return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << to_csv(records);
    if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace gtlc::harness
