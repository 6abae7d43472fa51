#ifndef GTLC_DYNAMIZER_HPP
#define GTLC_DYNAMIZER_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "surface_ast.hpp"

namespace gtlc::dynamizer {

// One annotation position of a fully-typed program: lambda parameters,
// let/let-rec annotations, and source ascription targets, in pre-order.
struct Site {
    int32_t id = 0;
    types::TypePtr type;
    int node_count = 0;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Lists every annotation site with its type-node count. The program must be
// fully typed (static typing mode accepts it); throws CompileError otherwise.
std::vector<Site> enumerate_annotation_sites(const surface::Program& p);

// A random subtree-respecting erasure of t: replaces a randomly chosen set
// of subtrees by `?`. The support over repeated draws is every type less
// precise than t.
types::TypePtr less_precise_variant(const types::TypePtr& t, std::mt19937_64& rng);

struct ConfigSample {
    std::string id; // "static", "dynamic", or "cNNNN"
    surface::Program program;
    double ratio = 1.0;
    int bin = 0;
    uint64_t seed = 0;
    std::vector<std::pair<int32_t, int>> site_nodes; // (site id, retained nodes)
};

struct SampleOptions {
    int samples_per_node = 10;
    int bins = 10;
    uint64_t seed = 0;
};

// Generates samples_per_node * n configurations divided evenly among the
// bins (bin k covers ratios [k/bins, (k+1)/bins), the last closed at 1.0),
// plus the fully-typed and fully-untyped endpoints. A weighted shuffle of
// the sites fixes the erasure order of each sample. Deterministic in the
// seed. Throws ConfigError when a bin's ratio interval contains no reachable
// configuration.
std::vector<ConfigSample> sample_lattice(const surface::Program& p,
                                         const SampleOptions& opts);

} // namespace gtlc::dynamizer

#endif
