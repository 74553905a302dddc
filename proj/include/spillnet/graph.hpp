#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "spillnet/beta_binomial.hpp"
#include "spillnet/rng.hpp"

namespace spillnet {

using NodeId = std::int32_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    bool operator==(const Edge&) const = default;
};

// Directed influence network. An edge src->dst means src influences dst, so
// exposure of a node is driven by its in-neighbor list. Immutable after
// construction; safe to share across threads.
//
// Edges may carry a stratum label (e.g. in/out village). Labels for
// not-yet-existing edges are needed by stratified corruption and the
// stratified mixture, so those operations additionally require a node
// partition (node_groups), from which the label of any ordered pair is
// derived: same group -> stratum 0 ("in"), different -> stratum 1 ("out").
class DirectedGraph {
public:
    static DirectedGraph from_edges(NodeId n_nodes, std::span<const Edge> edges) {
        return from_edges(n_nodes, edges, {}, {});
    }

    static DirectedGraph from_edges(NodeId n_nodes, std::span<const Edge> edges,
                                    std::span<const std::uint8_t> edge_strata,
                                    std::vector<std::string> stratum_names) {
        if (n_nodes < 1) throw std::invalid_argument("DirectedGraph: n_nodes must be positive");
        const bool with_strata = !edge_strata.empty();
        if (with_strata && edge_strata.size() != edges.size()) {
            throw std::invalid_argument("DirectedGraph: one stratum label per edge required");
        }
        DirectedGraph g;
        g.n_ = n_nodes;
        g.in_.resize(static_cast<std::size_t>(n_nodes));
        if (with_strata) {
            g.strata_.resize(static_cast<std::size_t>(n_nodes));
            g.stratum_names_ = std::move(stratum_names);
        }
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto [src, dst] = edges[e];
            if (src < 0 || src >= n_nodes || dst < 0 || dst >= n_nodes) {
                throw std::invalid_argument("DirectedGraph: edge " + std::to_string(src) + "->" +
                                            std::to_string(dst) + " out of range");
            }
            if (src == dst) {
                throw std::invalid_argument("DirectedGraph: self-loop at node " + std::to_string(src));
            }
            g.in_[static_cast<std::size_t>(dst)].push_back(src);
            if (with_strata) g.strata_[static_cast<std::size_t>(dst)].push_back(edge_strata[e]);
        }
        for (NodeId i = 0; i < n_nodes; ++i) {
            auto& nbrs = g.in_[static_cast<std::size_t>(i)];
            std::vector<std::size_t> order(nbrs.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nbrs[a] < nbrs[b]; });
            std::vector<NodeId> sorted(nbrs.size());
            for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = nbrs[order[k]];
            for (std::size_t k = 1; k < sorted.size(); ++k) {
                if (sorted[k] == sorted[k - 1]) {
                    throw std::invalid_argument("DirectedGraph: duplicate edge " + std::to_string(sorted[k]) +
                                                "->" + std::to_string(i));
                }
            }
            if (with_strata) {
                auto& labs = g.strata_[static_cast<std::size_t>(i)];
                std::vector<std::uint8_t> sorted_labs(labs.size());
                for (std::size_t k = 0; k < order.size(); ++k) sorted_labs[k] = labs[order[k]];
                labs = std::move(sorted_labs);
            }
            nbrs = std::move(sorted);
        }
        return g;
    }

    NodeId n_nodes() const { return n_; }

    const std::vector<NodeId>& in_neighbors(NodeId i) const {
        check_node(i);
        return in_[static_cast<std::size_t>(i)];
    }

    int in_degree(NodeId i) const { return static_cast<int>(in_neighbors(i).size()); }

    std::int64_t n_edges() const {
        std::int64_t total = 0;
        for (const auto& nbrs : in_) total += static_cast<std::int64_t>(nbrs.size());
        return total;
    }

    // |E| / (n(n-1)), the directed no-self-loop universe
    double density() const {
        if (n_ < 2) return 0.0;
        return static_cast<double>(n_edges()) / (static_cast<double>(n_) * (n_ - 1));
    }

    std::vector<int> in_degrees() const {
        std::vector<int> d(static_cast<std::size_t>(n_));
        for (NodeId i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = in_degree(i);
        return d;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(n_edges()));
        for (NodeId i = 0; i < n_; ++i) {
            for (NodeId src : in_[static_cast<std::size_t>(i)]) out.push_back({src, i});
        }
        std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
            return a.src != b.src ? a.src < b.src : a.dst < b.dst;
        });
        return out;
    }

    bool has_strata() const { return !strata_.empty(); }
    int n_strata() const { return static_cast<int>(stratum_names_.size()); }
    const std::vector<std::string>& stratum_names() const { return stratum_names_; }

    // label ids parallel to in_neighbors(i)
    const std::vector<std::uint8_t>& in_strata(NodeId i) const {
        check_node(i);
        if (!has_strata()) throw std::logic_error("DirectedGraph: no stratum labels present");
        return strata_[static_cast<std::size_t>(i)];
    }

    bool has_node_groups() const { return !node_groups_.empty(); }
    const std::vector<NodeId>& node_groups() const { return node_groups_; }

    // Attach a node partition and (re)derive edge labels from it.
    DirectedGraph with_node_groups(std::vector<NodeId> groups) const {
        if (groups.size() != static_cast<std::size_t>(n_)) {
            throw std::invalid_argument("with_node_groups: one group id per node required");
        }
        DirectedGraph g = *this;
        g.node_groups_ = std::move(groups);
        g.stratum_names_ = {"in", "out"};
        g.strata_.assign(static_cast<std::size_t>(n_), {});
        for (NodeId i = 0; i < n_; ++i) {
            auto& labs = g.strata_[static_cast<std::size_t>(i)];
            labs.reserve(g.in_[static_cast<std::size_t>(i)].size());
            for (NodeId src : g.in_[static_cast<std::size_t>(i)]) {
                labs.push_back(g.pair_stratum(src, i));
            }
        }
        return g;
    }

    // stratum of an ordered pair (needs node_groups)
    std::uint8_t pair_stratum(NodeId src, NodeId dst) const {
        return node_groups_[static_cast<std::size_t>(src)] == node_groups_[static_cast<std::size_t>(dst)] ? 0 : 1;
    }

    bool same_adjacency(const DirectedGraph& other) const { return n_ == other.n_ && in_ == other.in_; }

private:
    void check_node(NodeId i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("DirectedGraph: node index " + std::to_string(i));
    }

    NodeId n_ = 0;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::vector<std::uint8_t>> strata_;
    std::vector<std::string> stratum_names_;
    std::vector<NodeId> node_groups_;
};

inline int in_degree(const DirectedGraph& g, NodeId i) { return g.in_degree(i); }

inline int treated_in_degree(const DirectedGraph& g, NodeId i, std::span<const std::int8_t> treatment) {
    if (treatment.size() != static_cast<std::size_t>(g.n_nodes())) {
        throw std::invalid_argument("treated_in_degree: treatment length must equal n_nodes");
    }
    int count = 0;
    for (NodeId src : g.in_neighbors(i)) count += treatment[static_cast<std::size_t>(src)] != 0;
    return count;
}

struct StratumPq {
    double p = 0.0;
    double q = 0.0;
};

// Edge corruption process: each true edge is kept with probability 1-p, each
// ordered non-edge is added with probability q (optionally scaled by the true
// graph's density). False edges are drawn from the non-edge universe only, so
// the output never contains duplicates or self-loops.
struct CorruptionSpec {
    enum class QMode { absolute, density_scaled };

    double p = 0.0;
    double q = 0.0;
    QMode q_mode = QMode::absolute;
    std::optional<std::vector<StratumPq>> per_stratum;  // indexed by stratum id

    CorruptionSpec() = default;
    CorruptionSpec(double p_, double q_, QMode mode = QMode::absolute) : p(p_), q(q_), q_mode(mode) {
        validate_pq(p, q);
    }

    static void validate_pq(double p, double q) {
        if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("CorruptionSpec: p must be in [0,1)");
        if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("CorruptionSpec: q must be in [0,1)");
    }
};

namespace detail {

inline std::uint64_t edge_key(NodeId src, NodeId dst, NodeId n) {
    return static_cast<std::uint64_t>(src) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(dst);
}

// Draw `count` distinct non-edges uniformly; `admit` filters candidate pairs
// (stratum membership). Rejection sampling with a fallback full enumeration.
template <typename Admit>
void sample_non_edges(const DirectedGraph& g, long count, Rng& rng,
                      const std::unordered_set<std::uint64_t>& true_edges,
                      std::unordered_set<std::uint64_t>& added, std::vector<Edge>& out, Admit&& admit) {
    const NodeId n = g.n_nodes();
    const std::uint64_t universe = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);
    long attempts_left = 200 * count + 1000;
    long placed = 0;
    while (placed < count && attempts_left-- > 0) {
        const std::uint64_t u = rng.below(universe);
        const NodeId src = static_cast<NodeId>(u / static_cast<std::uint64_t>(n - 1));
        const std::uint64_t k = u % static_cast<std::uint64_t>(n - 1);
        const NodeId dst = static_cast<NodeId>(k) + (static_cast<NodeId>(k) >= src ? 1 : 0);
        if (!admit(src, dst)) continue;
        const std::uint64_t key = edge_key(src, dst, n);
        if (true_edges.count(key) || added.count(key)) continue;
        added.insert(key);
        out.push_back({src, dst});
        ++placed;
    }
    if (placed == count) return;
    // dense fallback: enumerate admissible non-edges and draw without replacement
    std::vector<Edge> pool;
    for (NodeId src = 0; src < n; ++src) {
        for (NodeId dst = 0; dst < n; ++dst) {
            if (src == dst || !admit(src, dst)) continue;
            const std::uint64_t key = edge_key(src, dst, n);
            if (true_edges.count(key) || added.count(key)) continue;
            pool.push_back({src, dst});
        }
    }
    while (placed < count && !pool.empty()) {
        const std::size_t j = static_cast<std::size_t>(rng.below(pool.size()));
        out.push_back(pool[j]);
        added.insert(edge_key(pool[j].src, pool[j].dst, n));
        pool[j] = pool.back();
        pool.pop_back();
        ++placed;
    }
}

}  // namespace detail

inline DirectedGraph corrupt(const DirectedGraph& g, const CorruptionSpec& spec, std::uint64_t seed) {
    CorruptionSpec::validate_pq(spec.p, spec.q);
    const bool stratified = spec.per_stratum.has_value();
    if (stratified) {
        if (!g.has_node_groups()) {
            throw std::invalid_argument("corrupt: stratum-specific (p,q) requires node groups on the graph");
        }
        if (spec.per_stratum->size() != static_cast<std::size_t>(g.n_strata())) {
            throw std::invalid_argument("corrupt: per-stratum (p,q) must cover every graph stratum");
        }
        for (const auto& s : *spec.per_stratum) CorruptionSpec::validate_pq(s.p, s.q);
    }
    const NodeId n = g.n_nodes();
    const double dens = g.density();
    const auto effective_q = [&](double q) {
        double eff = spec.q_mode == CorruptionSpec::QMode::density_scaled ? q * dens : q;
        return std::clamp(eff, 0.0, 1.0 - 1e-12);
    };

    Rng rng(seed);
    std::vector<Edge> kept;
    std::unordered_set<std::uint64_t> true_edges;
    for (NodeId dst = 0; dst < n; ++dst) {
        const auto& nbrs = g.in_neighbors(dst);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const NodeId src = nbrs[k];
            true_edges.insert(detail::edge_key(src, dst, n));
            const double p = stratified ? (*spec.per_stratum)[g.in_strata(dst)[k]].p : spec.p;
            if (!rng.bernoulli(p)) kept.push_back({src, dst});
        }
    }

    std::unordered_set<std::uint64_t> added;
    std::vector<Edge> additions;
    if (n > 1) {
        if (stratified) {
            // per-stratum universe sizes from the node partition:
            // ordered same-group pairs form the "in" universe
            std::int64_t in_pairs = 0;
            {
                std::vector<NodeId> sorted_groups = g.node_groups();
                std::sort(sorted_groups.begin(), sorted_groups.end());
                for (std::size_t i = 0; i < sorted_groups.size();) {
                    std::size_t j = i;
                    while (j < sorted_groups.size() && sorted_groups[j] == sorted_groups[i]) ++j;
                    const std::int64_t m = static_cast<std::int64_t>(j - i);
                    in_pairs += m * (m - 1);
                    i = j;
                }
            }
            std::array<std::int64_t, 2> pairs = {in_pairs,
                                                 static_cast<std::int64_t>(n) * (n - 1) - in_pairs};
            std::array<std::int64_t, 2> true_count = {0, 0};
            for (NodeId dst = 0; dst < n; ++dst) {
                for (std::uint8_t lab : g.in_strata(dst)) ++true_count[lab];
            }
            for (std::uint8_t s = 0; s < 2; ++s) {
                const double q = effective_q((*spec.per_stratum)[s].q);
                const long non_edges = static_cast<long>(pairs[s] - true_count[s]);
                const long count = rng.binomial(non_edges, q);
                detail::sample_non_edges(g, count, rng, true_edges, added, additions,
                                         [&](NodeId src, NodeId dst) { return g.pair_stratum(src, dst) == s; });
            }
        } else {
            const double q = effective_q(spec.q);
            const long non_edges = static_cast<long>(static_cast<std::int64_t>(n) * (n - 1) - g.n_edges());
            const long count = rng.binomial(non_edges, q);
            detail::sample_non_edges(g, count, rng, true_edges, added, additions,
                                     [](NodeId, NodeId) { return true; });
        }
    }

    kept.insert(kept.end(), additions.begin(), additions.end());
    DirectedGraph out = DirectedGraph::from_edges(n, kept);
    if (g.has_node_groups()) out = out.with_node_groups(g.node_groups());
    return out;
}

// Erdos-Renyi: every ordered pair (i != j) linked independently.
inline DirectedGraph generate_er(NodeId n, double density, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_er: n must be >= 1");
    if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("generate_er: density in [0,1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId dst = 0; dst < n; ++dst) {
        for (NodeId src = 0; src < n; ++src) {
            if (src == dst) continue;
            if (rng.bernoulli(density)) edges.push_back({src, dst});
        }
    }
    return DirectedGraph::from_edges(n, edges);
}

// Heterogeneous-degree generator: each node draws a link propensity from the
// prior's Beta mixing distribution and receives each in-edge independently
// with that propensity, so in-degrees are beta-binomial distributed.
inline DirectedGraph generate_heterogeneous(NodeId n, const BetaBinomialPrior& prior, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_heterogeneous: n must be >= 1");
    if (prior.size != n - 1) throw std::invalid_argument("generate_heterogeneous: prior.size must equal n-1");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId dst = 0; dst < n; ++dst) {
        const double prop = prior.rho == 0.0 ? prior.mu : rng.beta(prior.shape_a(), prior.shape_b());
        for (NodeId src = 0; src < n; ++src) {
            if (src == dst) continue;
            if (rng.bernoulli(prop)) edges.push_back({src, dst});
        }
    }
    return DirectedGraph::from_edges(n, edges);
}

}  // namespace spillnet
