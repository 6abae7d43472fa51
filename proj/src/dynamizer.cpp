#include "dynamizer.hpp"

#include <algorithm>
#include <functional>

#include "checker.hpp"

namespace gtlc::dynamizer {

using surface::ExprPtr;
using types::TypePtr;

namespace {

// Pre-order walk over every annotation slot of the program. The callback
// may replace the slot's type.
void visit_slots(const ExprPtr& e, const std::function<void(TypePtr&)>& f) {
    switch (e->k) {
    case surface::K::Lambda:
        for (auto& p : e->params)
            if (p.ann) f(p.ann);
        break;
    case surface::K::Let:
    case surface::K::LetRec:
        if (e->ann) f(e->ann);
        break;
    case surface::K::Ascribe:
        if (e->ann) f(e->ann);
        break;
    default:
        break;
    }
    for (auto& k : e->kids) visit_slots(k, f);
    for (auto& a : e->arms) visit_slots(a.body, f);
}

ExprPtr clone_expr(const ExprPtr& e) {
    auto c = std::make_shared<surface::Expr>(*e);
    for (auto& k : c->kids) k = clone_expr(k);
    for (auto& a : c->arms) a.body = clone_expr(a.body);
    return c;
}

surface::Program clone_program(const surface::Program& p) {
    surface::Program c;
    c.variants = p.variants;
    c.main = clone_expr(p.main);
    return c;
}

// Positions (paths of child indices) whose subtree can be erased in one
// step without orphaning precise nodes: leaves and constructors whose
// children are all `?`.
void erasable_positions(const TypePtr& t, std::vector<int>& path,
                        std::vector<std::vector<int>>& out) {
    using types::TypeKind;
    switch (t->kind) {
    case TypeKind::Unknown:
        return;
    case TypeKind::Int:
    case TypeKind::Bool:
    case TypeKind::Float:
    case TypeKind::Unit:
    case TypeKind::Named:
        out.push_back(path);
        return;
    case TypeKind::Ref:
    case TypeKind::Vec:
        if (types::is_unknown(t->elem)) {
            out.push_back(path);
        } else {
            path.push_back(0);
            erasable_positions(t->elem, path, out);
            path.pop_back();
        }
        return;
    case TypeKind::Tuple: {
        bool all_unknown = true;
        for (auto& p : t->parts) all_unknown = all_unknown && types::is_unknown(p);
        if (all_unknown) {
            out.push_back(path);
            return;
        }
        for (size_t i = 0; i < t->parts.size(); ++i) {
            path.push_back(static_cast<int>(i));
            erasable_positions(t->parts[i], path, out);
            path.pop_back();
        }
        return;
    }
    case TypeKind::Fun: {
        bool all_unknown = types::is_unknown(t->ret);
        for (auto& p : t->parts) all_unknown = all_unknown && types::is_unknown(p);
        if (all_unknown) {
            out.push_back(path);
            return;
        }
        for (size_t i = 0; i < t->parts.size(); ++i) {
            path.push_back(static_cast<int>(i));
            erasable_positions(t->parts[i], path, out);
            path.pop_back();
        }
        path.push_back(static_cast<int>(t->parts.size()));
        erasable_positions(t->ret, path, out);
        path.pop_back();
        return;
    }
    }
}

TypePtr erase_at(const TypePtr& t, const std::vector<int>& path, size_t depth = 0) {
    using types::TypeKind;
    if (depth == path.size()) return types::t_unknown();
    int step = path[depth];
    switch (t->kind) {
    case TypeKind::Ref:
        return types::t_ref(erase_at(t->elem, path, depth + 1));
    case TypeKind::Vec:
        return types::t_vec(erase_at(t->elem, path, depth + 1));
    case TypeKind::Tuple: {
        auto parts = t->parts;
        parts[static_cast<size_t>(step)] =
            erase_at(parts[static_cast<size_t>(step)], path, depth + 1);
        return types::t_tuple(std::move(parts));
    }
    case TypeKind::Fun: {
        auto params = t->parts;
        TypePtr ret = t->ret;
        if (static_cast<size_t>(step) < params.size())
            params[static_cast<size_t>(step)] =
                erase_at(params[static_cast<size_t>(step)], path, depth + 1);
        else
            ret = erase_at(ret, path, depth + 1);
        return types::t_fun(std::move(params), std::move(ret));
    }
    default:
        return types::t_unknown();
    }
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Weighted shuffle: repeatedly draws sites without replacement with
// probability proportional to their node count.
std::vector<size_t> weighted_shuffle(const std::vector<Site>& sites,
                                     std::mt19937_64& rng) {
    std::vector<size_t> order;
    std::vector<size_t> remaining(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) remaining[i] = i;
    while (!remaining.empty()) {
        uint64_t total = 0;
        for (size_t i : remaining)
            total += static_cast<uint64_t>(std::max(1, sites[i].node_count));
        uint64_t x = rng() % total;
        size_t chosen = remaining.size() - 1;
        for (size_t j = 0; j < remaining.size(); ++j) {
            uint64_t w = static_cast<uint64_t>(std::max(1, sites[remaining[j]].node_count));
            if (x < w) {
                chosen = j;
                break;
            }
            x -= w;
        }
        order.push_back(remaining[chosen]);
        remaining.erase(remaining.begin() + static_cast<long>(chosen));
    }
    return order;
}

surface::Program rewrite_sites(const surface::Program& p,
                               const std::vector<TypePtr>& site_types) {
    surface::Program c = clone_program(p);
    size_t idx = 0;
    visit_slots(c.main, [&](TypePtr& slot) {
        slot = site_types.at(idx++);
    });
    return c;
}

} // namespace

std::vector<Site> enumerate_annotation_sites(const surface::Program& p) {
    // the lattice top must be the static program
    checker::typecheck(p, checker::Typing::Static);
    std::vector<Site> sites;
    visit_slots(p.main, [&](TypePtr& slot) {
        Site s;
        s.id = static_cast<int32_t>(sites.size());
        s.type = slot;
        s.node_count = types::type_node_count(slot);
        sites.push_back(std::move(s));
    });
    return sites;
}

types::TypePtr less_precise_variant(const TypePtr& t, std::mt19937_64& rng) {
    using types::TypeKind;
    if (rng() % 10 < 3) return types::t_unknown();
    switch (t->kind) {
    case TypeKind::Ref:
        return types::t_ref(less_precise_variant(t->elem, rng));
    case TypeKind::Vec:
        return types::t_vec(less_precise_variant(t->elem, rng));
    case TypeKind::Tuple: {
        std::vector<TypePtr> parts;
        for (auto& p : t->parts) parts.push_back(less_precise_variant(p, rng));
        return types::t_tuple(std::move(parts));
    }
    case TypeKind::Fun: {
        std::vector<TypePtr> params;
        for (auto& p : t->parts) params.push_back(less_precise_variant(p, rng));
        return types::t_fun(std::move(params), less_precise_variant(t->ret, rng));
    }
    default:
        return t;
    }
}

std::vector<ConfigSample> sample_lattice(const surface::Program& p,
                                         const SampleOptions& opts) {
    std::vector<Site> sites = enumerate_annotation_sites(p);
    int n = 0;
    for (auto& s : sites) n += s.node_count;

    std::vector<ConfigSample> out;

    auto push_endpoint = [&](const char* id, bool erased) {
        ConfigSample c;
        c.id = id;
        c.seed = opts.seed;
        std::vector<TypePtr> site_types;
        for (auto& s : sites)
            site_types.push_back(erased ? types::t_unknown() : s.type);
        c.program = rewrite_sites(p, site_types);
        c.ratio = erased ? 0.0 : 1.0;
        c.bin = erased ? 0 : opts.bins - 1;
        for (auto& s : sites)
            c.site_nodes.emplace_back(s.id, erased ? 0 : s.node_count);
        out.push_back(std::move(c));
    };

    if (n == 0) {
        // degenerate input: only the trivial configuration exists
        push_endpoint("static", false);
        return out;
    }

    const int bins = opts.bins;
    const long total = static_cast<long>(opts.samples_per_node) * n;
    int config_idx = 0;
    for (int b = 0; b < bins; ++b) {
        long quota = total / bins + (b < total % bins ? 1 : 0);
        // retained-node range whose ratio falls in this bin
        long lo = (static_cast<long>(n) * b + bins - 1) / bins; // ceil(n*b/bins)
        long hi;
        if (b == bins - 1) {
            hi = n;
        } else {
            long next = (static_cast<long>(n) * (b + 1) + bins - 1) / bins;
            hi = next - 1;
            // the bin is [b/bins, (b+1)/bins): r/n == (b+1)/bins belongs above
            while (hi >= lo && hi * bins >= static_cast<long>(n) * (b + 1)) hi--;
        }
        while (lo * bins < static_cast<long>(n) * b) lo++;
        if (lo > hi)
            throw ConfigError("bin " + std::to_string(b) +
                              " is unreachable for a program with " +
                              std::to_string(n) + " type nodes");

        for (long slot = 0; slot < quota; ++slot) {
            std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(
                                               static_cast<uint64_t>(b) * 1000003ULL +
                                               static_cast<uint64_t>(slot))));
            long target = lo + static_cast<long>(rng() % static_cast<uint64_t>(hi - lo + 1));

            std::vector<TypePtr> site_types;
            std::vector<int> retained;
            for (auto& s : sites) {
                site_types.push_back(s.type);
                retained.push_back(s.node_count);
            }
            long current = n;
            std::vector<size_t> order = weighted_shuffle(sites, rng);
            size_t cursor = 0;
            long guard = static_cast<long>(n) * static_cast<long>(sites.size()) + 1000;
            while (current > target && guard-- > 0) {
                size_t site = order[cursor % order.size()];
                cursor++;
                std::vector<int> path;
                std::vector<std::vector<int>> positions;
                erasable_positions(site_types[site], path, positions);
                if (positions.empty()) continue;
                const auto& chosen =
                    positions[rng() % positions.size()];
                site_types[site] = erase_at(site_types[site], chosen);
                int now = types::type_node_count(site_types[site]);
                current -= retained[site] - now;
                retained[site] = now;
            }
            if (current != target)
                throw ConfigError("bin " + std::to_string(b) +
                                  ": could not reach target precision");

            ConfigSample c;
            char buf[16];
            std::snprintf(buf, sizeof buf, "c%04d", config_idx++);
            c.id = buf;
            c.seed = opts.seed;
            c.program = rewrite_sites(p, site_types);
            c.ratio = static_cast<double>(current) / static_cast<double>(n);
            c.bin = b;
            for (size_t i = 0; i < sites.size(); ++i)
                c.site_nodes.emplace_back(sites[i].id, retained[i]);
            out.push_back(std::move(c));
        }
    }

    push_endpoint("static", false);
    push_endpoint("dynamic", true);
    return out;
}

} // namespace gtlc::dynamizer
