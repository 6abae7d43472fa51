#ifndef GTLC_HARNESS_HPP
#define GTLC_HARNESS_HPP

#include <ostream>
#include <string>
#include <vector>

#include "dynamizer.hpp"
#include "pipeline.hpp"
#include "vm.hpp"

namespace gtlc::harness {

struct RunRecord {
    std::string benchmark;
    std::string config;
    double ratio = 1.0;
    vm::Semantics mode = vm::Semantics::G;
    bool dfo = false;
    checker::Typing typing = checker::Typing::Gradual;
    std::string disabled_passes;
    double time_s = 0; // mean over repetitions; meaningless on error outcomes
    int reps = 1;
    vm::Counters counters;
    vm::Outcome outcome = vm::Outcome::Value;
};

// Compiles and runs one program `reps` times, timing the VM execution only
// (compilation excluded) with a monotonic clock; time_s is the mean.
// Program output is discarded unless `capture` is given.
RunRecord run_one(const surface::Program& program, const pipeline::Options& opts,
                  vm::Mode mode, int reps, vm::Limits limits,
                  std::string* capture = nullptr);

struct SuiteOptions {
    std::vector<vm::Semantics> modes{vm::Semantics::G, vm::Semantics::MC,
                                     vm::Semantics::MV};
    int reps = 10;           // sampled configurations
    int endpoint_reps = 50;  // fully-typed / fully-untyped endpoints
    uint64_t seed = 1;
    bool dfo = false;
    bool parallel = false;   // counters only; timings are not comparable
    int samples_per_node = 10;
    int bins = 10;
};

// Dynamizes every `.gtp` file in the suite directory and runs each
// configuration under every requested mode. Per-config failures are recorded
// in the rows, never aborting the suite.
std::vector<RunRecord> run_benchmark_suite(const std::string& suite_dir,
                                           const SuiteOptions& opts,
                                           std::ostream& log);

// Fixed header:
// benchmark,config,ratio,mode,dfo,typing,time_s,reps,trans_ops,proxy_allocs,
// heap_allocs,float_boxes,germ_checks,outcome
// Rows sorted by (benchmark, ratio); ratio printed with 4 decimals; error
// outcomes carry an empty time field.
std::string to_csv(std::vector<RunRecord> records);
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

} // namespace gtlc::harness

#endif
