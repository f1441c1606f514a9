#include "bqc/stab/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <tuple>
#include <stdexcept>

namespace bqc::stab {

namespace {

double prob_to_weight(double p) {
    p = std::min(std::max(p, 1e-12), 0.499);
    return std::log((1.0 - p) / p);
}

double xor_probability(double a, double b) { return a * (1.0 - b) + b * (1.0 - a); }

}  // namespace

std::vector<DetectorGraph> build_graphs(const DetectorErrorModel& dem, const DetectorLayout& layout) {
    // class key -> graph index
    std::map<std::pair<int32_t, bool>, size_t> index;
    std::vector<DetectorGraph> graphs;
    for (size_t d = 0; d < layout.detectors.size(); ++d) {
        const auto key = std::make_pair(layout.detectors[d].block, layout.detectors[d].z_type);
        if (!index.count(key)) {
            index[key] = graphs.size();
            DetectorGraph g;
            g.block = key.first;
            g.z_type = key.second;
            g.global_to_local.assign(layout.detectors.size(), -1);
            graphs.push_back(std::move(g));
        }
        DetectorGraph& g = graphs[index[key]];
        g.global_to_local[d] = int32_t(g.nodes.size());
        g.nodes.push_back(int32_t(d));
    }

    // observables belonging to each block
    std::vector<uint32_t> block_obs_mask;
    for (const auto& g : graphs) {
        uint32_t m = 0;
        for (size_t o = 0; o < layout.observables.size(); ++o)
            if (layout.observables[o].block == g.block) m |= uint32_t(1) << o;
        block_obs_mask.push_back(m);
    }

    // per-elementary firing probability (union over the channel components
    // that contain it)
    std::vector<double> elem_p(dem.elementary.size(), 0.0);
    for (const auto& site : dem.sites) {
        const double per = site.rate / double(site.components.size());
        for (const auto& comp : site.components)
            for (int32_t e : comp.elementary)
                elem_p[size_t(e)] = xor_probability(elem_p[size_t(e)], per);
    }

    // Project every elementary mechanism onto each graph. Detectors live in
    // the propagated Clifford frame, so a mechanism's events are confined to
    // where its deviation first appears; one- or two-event projections form
    // the graphlike backbone. A mechanism whose events sit in one graph
    // carries its FULL observable mask on that edge (its deviation may
    // migrate to other blocks silently, flipping their observables).
    // Mechanisms spanning several graphs decompose into resident pieces that
    // exist as single-graph mechanisms in their own right, so they only add
    // probability to those edges.
    struct EdgeAcc {
        double p = 0.0;
        uint32_t obs_mask = 0;
        int32_t elementary = -1;
        bool obs_set = false;
    };
    std::vector<std::map<std::pair<int32_t, int32_t>, EdgeAcc>> acc(graphs.size());
    struct HyperProjection {
        size_t graph;
        std::vector<int32_t> events;
        double p;
    };
    std::vector<HyperProjection> hyper;

    struct Projection {
        size_t graph;
        std::pair<int32_t, int32_t> key;
        int32_t elem;
        int n_graphs;
    };
    std::vector<Projection> projections;

    for (size_t e = 0; e < dem.elementary.size(); ++e) {
        const auto& elem = dem.elementary[e];
        if (elem_p[e] <= 0.0) continue;
        int n_graphs_hit = 0;
        for (size_t gi = 0; gi < graphs.size(); ++gi) {
            DetectorGraph& g = graphs[gi];
            bool any = false;
            for (int32_t det : elem.signature.detectors)
                if (g.global_to_local[size_t(det)] >= 0) { any = true; break; }
            if (any) ++n_graphs_hit;
        }
        for (size_t gi = 0; gi < graphs.size(); ++gi) {
            DetectorGraph& g = graphs[gi];
            std::vector<int32_t> hits;
            for (int32_t det : elem.signature.detectors)
                if (g.global_to_local[size_t(det)] >= 0) hits.push_back(g.global_to_local[size_t(det)]);
            if (hits.empty()) continue;
            if (hits.size() > 2) {
                hyper.push_back({gi, std::move(hits), elem_p[e]});
                continue;
            }
            auto key = hits.size() == 2
                           ? std::make_pair(std::min(hits[0], hits[1]), std::max(hits[0], hits[1]))
                           : std::make_pair(hits[0], int32_t(-1));
            projections.push_back({gi, key, int32_t(e), n_graphs_hit});
        }
    }

    // single-graph mechanisms first: they own the observable attribution
    for (const auto& proj : projections) {
        if (proj.n_graphs != 1) continue;
        EdgeAcc& a = acc[proj.graph][proj.key];
        if (!a.obs_set) {
            a.obs_mask = dem.elementary[size_t(proj.elem)].signature.obs_mask;
            a.obs_set = true;
            a.elementary = proj.elem;
        }
        a.p = xor_probability(a.p, elem_p[size_t(proj.elem)]);
    }
    // multi-graph mechanisms decompose into per-graph pieces; pieces without
    // a resident sibling get the residual mask so the decomposition XORs to
    // the mechanism's full observable effect
    {
        std::map<int32_t, std::vector<Projection>> by_elem;
        for (const auto& proj : projections)
            if (proj.n_graphs > 1) by_elem[proj.elem].push_back(proj);
        for (auto& [elem, projs] : by_elem) {
            uint32_t residual = dem.elementary[size_t(elem)].signature.obs_mask;
            EdgeAcc* first_unknown = nullptr;
            for (const auto& proj : projs) {
                EdgeAcc& a = acc[proj.graph][proj.key];
                if (a.obs_set) {
                    residual ^= a.obs_mask;
                } else if (!first_unknown) {
                    first_unknown = &a;
                    a.obs_set = true;
                    a.elementary = elem;
                } else {
                    a.obs_mask = 0;
                    a.obs_set = true;
                    a.elementary = elem;
                }
                a.p = xor_probability(a.p, elem_p[size_t(elem)]);
            }
            if (first_unknown) first_unknown->obs_mask = residual;
        }
    }

    // decompose hyper projections into existing backbone pieces (pairs or
    // boundary legs), maximizing the combined probability of the pieces
    for (const auto& h : hyper) {
        auto& edges = acc[h.graph];
        std::vector<std::pair<int32_t, int32_t>> best;
        double best_score = -1e300;
        std::vector<std::pair<int32_t, int32_t>> current;
        std::vector<char> used(h.events.size(), 0);
        std::function<void(double)> search = [&](double score) {
            size_t first = h.events.size();
            for (size_t i = 0; i < h.events.size(); ++i)
                if (!used[i]) { first = i; break; }
            if (first == h.events.size()) {
                if (score > best_score) {
                    best_score = score;
                    best = current;
                }
                return;
            }
            used[first] = 1;
            const int32_t u = h.events[first];
            if (auto it = edges.find({u, -1}); it != edges.end() && it->second.p > 0) {
                current.push_back({u, -1});
                search(score + std::log(it->second.p));
                current.pop_back();
            }
            for (size_t j = first + 1; j < h.events.size(); ++j) {
                if (used[j]) continue;
                const int32_t v = h.events[j];
                auto key = std::make_pair(std::min(u, v), std::max(u, v));
                if (auto it = edges.find(key); it != edges.end() && it->second.p > 0) {
                    used[j] = 1;
                    current.push_back(key);
                    search(score + std::log(it->second.p));
                    current.pop_back();
                    used[j] = 0;
                }
            }
            used[first] = 0;
        };
        search(0.0);
        if (best_score > -1e300) {
            for (const auto& key : best) {
                EdgeAcc& a = edges[key];
                a.p = xor_probability(a.p, h.p);
            }
            continue;
        }
        // No decomposition onto existing pieces: this happens for deviation
        // lines that never persist (transversal CX ping-pong cancels them),
        // leaving interval chains on one stabilizer line. Pair the events in
        // round order; each pair is a real correlated mechanism ("deviation
        // present during [a, b)") that never reaches the final readout, so
        // the synthesized edges carry no observable flag. An odd leftover
        // event takes a boundary leg.
        std::vector<int32_t> by_round = h.events;
        std::sort(by_round.begin(), by_round.end(), [&](int32_t a, int32_t b) {
            const auto& da = layout.detectors[size_t(graphs[h.graph].nodes[size_t(a)])];
            const auto& db = layout.detectors[size_t(graphs[h.graph].nodes[size_t(b)])];
            return std::tie(da.round, da.stab_index) < std::tie(db.round, db.stab_index);
        });
        for (size_t i = 0; i < by_round.size(); i += 2) {
            auto key = i + 1 < by_round.size()
                           ? std::make_pair(std::min(by_round[i], by_round[i + 1]),
                                            std::max(by_round[i], by_round[i + 1]))
                           : std::make_pair(by_round[i], int32_t(-1));
            EdgeAcc& a = edges[key];
            if (!a.obs_set) {
                a.obs_mask = 0;
                a.obs_set = true;
            }
            a.p = xor_probability(a.p, h.p);
        }
    }

    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        for (auto& [key, a] : acc[gi]) {
            if (a.p <= 0.0) continue;
            DetectorGraph::Edge edge;
            edge.u = key.first;
            edge.v = key.second;
            edge.p = a.p;
            edge.weight = prob_to_weight(a.p);
            edge.obs_mask = a.obs_mask;
            edge.elementary = a.elementary;
            graphs[gi].edges.push_back(edge);
        }
        graphs[gi].prepare();
    }
    return graphs;
}

void DetectorGraph::dijkstra(int src, std::vector<double>& dist, std::vector<int32_t>& parent_edge) const {
    const int n = n_nodes() + 1;  // last = boundary
    dist.assign(size_t(n), std::numeric_limits<double>::infinity());
    parent_edge.assign(size_t(n), -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> heap;
    dist[size_t(src)] = 0.0;
    heap.push({0.0, src});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[size_t(u)] + 1e-12) continue;
        for (size_t k = 0; k < adj_[size_t(u)].size(); ++k) {
            const auto& [v, w] = adj_[size_t(u)][k];
            if (dist[size_t(u)] + w < dist[size_t(v)] - 1e-12) {
                dist[size_t(v)] = dist[size_t(u)] + w;
                parent_edge[size_t(v)] = adj_edge_[size_t(u)][k];
                heap.push({dist[size_t(v)], int(v)});
            }
        }
    }
}

void DetectorGraph::prepare() {
    const int n = n_nodes();
    adj_.assign(size_t(n + 1), {});
    adj_edge_.assign(size_t(n + 1), {});
    for (size_t ei = 0; ei < edges.size(); ++ei) {
        const auto& e = edges[ei];
        const int32_t v = e.v < 0 ? int32_t(n) : e.v;
        adj_[size_t(e.u)].push_back({v, e.weight});
        adj_edge_[size_t(e.u)].push_back(int32_t(ei));
        adj_[size_t(v)].push_back({e.u, e.weight});
        adj_edge_[size_t(v)].push_back(int32_t(ei));
    }
    dist_.assign(size_t(n) * size_t(n + 1), std::numeric_limits<double>::infinity());
    obs_.assign(size_t(n) * size_t(n + 1), 0);
    std::vector<double> dist;
    std::vector<int32_t> parent;
    for (int src = 0; src < n; ++src) {
        dijkstra(src, dist, parent);
        for (int v = 0; v <= n; ++v) {
            dist_[size_t(src) * size_t(n + 1) + size_t(v)] = dist[size_t(v)];
            // accumulate obs mask along the path by walking parents
            uint32_t mask = 0;
            int cur = v;
            while (cur != src && parent[size_t(cur)] >= 0) {
                const Edge& e = edges[size_t(parent[size_t(cur)])];
                mask ^= e.obs_mask;
                const int32_t other = (e.v < 0 ? int32_t(n) : e.v);
                cur = (cur == e.u) ? other : e.u;
            }
            obs_[size_t(src) * size_t(n + 1) + size_t(v)] = mask;
        }
    }
}

std::vector<int32_t> DetectorGraph::path_mechanisms(int u, int v) const {
    std::vector<double> dist;
    std::vector<int32_t> parent;
    dijkstra(u, dist, parent);
    std::vector<int32_t> mechs;
    int cur = v;
    const int n = n_nodes();
    while (cur != u && parent[size_t(cur)] >= 0) {
        const Edge& e = edges[size_t(parent[size_t(cur)])];
        if (e.elementary >= 0) mechs.push_back(e.elementary);
        const int32_t other = (e.v < 0 ? int32_t(n) : e.v);
        cur = (cur == e.u) ? other : e.u;
    }
    return mechs;
}

namespace {

struct Component {
    std::vector<int> members;  // indices into the flipped-event list
};

}  // namespace

MatchResult match_decode(const DetectorGraph& graph, const std::vector<int32_t>& flipped_local,
                         bool want_correction, int exact_cap) {
    MatchResult result;
    const int k = int(flipped_local.size());
    if (k == 0) return result;

    // candidate pair edges survive only where pairing beats two boundary legs
    std::vector<std::vector<int>> cand(static_cast<size_t>(k));
    std::vector<int> parent(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) parent[size_t(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
        return x;
    };
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const double w = graph.dist(flipped_local[size_t(i)], flipped_local[size_t(j)]);
            const double wb = graph.boundary_dist(flipped_local[size_t(i)]) +
                              graph.boundary_dist(flipped_local[size_t(j)]);
            if (w < wb) {
                cand[size_t(i)].push_back(j);
                parent[size_t(find(i))] = find(j);
            }
        }
    }
    std::map<int, Component> comps;
    for (int i = 0; i < k; ++i) comps[find(i)].members.push_back(i);

    for (auto& [root, comp] : comps) {
        const int m = int(comp.members.size());
        auto node = [&](int idx) { return flipped_local[size_t(comp.members[size_t(idx)])]; };
        std::vector<std::pair<int, int>> chosen_pairs;
        std::vector<int> chosen_boundary;
        if (m <= exact_cap) {
            // subset DP over component members
            const uint32_t full = (uint32_t(1) << m) - 1;
            std::vector<double> f(size_t(full) + 1, 0.0);
            std::vector<int32_t> choice(size_t(full) + 1, -1);
            for (uint32_t s = 1; s <= full; ++s) {
                int i = 0;
                while (!(s & (uint32_t(1) << i))) ++i;
                double best = graph.boundary_dist(node(i)) + f[s & ~(uint32_t(1) << i)];
                int32_t best_choice = -1;  // -1: boundary
                for (int j = i + 1; j < m; ++j) {
                    if (!(s & (uint32_t(1) << j))) continue;
                    const double w = graph.dist(node(i), node(j)) +
                                     f[s & ~(uint32_t(1) << i) & ~(uint32_t(1) << j)];
                    if (w < best) {
                        best = w;
                        best_choice = j;
                    }
                }
                f[s] = best;
                choice[s] = best_choice;
            }
            result.weight += f[full];
            uint32_t s = full;
            while (s) {
                int i = 0;
                while (!(s & (uint32_t(1) << i))) ++i;
                const int32_t ch = choice[s];
                if (ch < 0) {
                    chosen_boundary.push_back(i);
                    s &= ~(uint32_t(1) << i);
                } else {
                    chosen_pairs.push_back({i, int(ch)});
                    s &= ~(uint32_t(1) << i);
                    s &= ~(uint32_t(1) << ch);
                }
            }
        } else {
            // greedy fallback for oversized components
            result.used_fallback = true;
            std::vector<char> done(size_t(m), 0);
            struct Opt { double w; int i, j; };  // j = -1: boundary
            std::vector<Opt> opts;
            for (int i = 0; i < m; ++i) {
                opts.push_back({graph.boundary_dist(node(i)), i, -1});
                for (int j = i + 1; j < m; ++j) opts.push_back({graph.dist(node(i), node(j)), i, j});
            }
            std::sort(opts.begin(), opts.end(), [](const Opt& a, const Opt& b) { return a.w < b.w; });
            for (const auto& o : opts) {
                if (done[size_t(o.i)] || (o.j >= 0 && done[size_t(o.j)])) continue;
                if (o.j < 0) {
                    chosen_boundary.push_back(o.i);
                    done[size_t(o.i)] = 1;
                } else {
                    chosen_pairs.push_back({o.i, o.j});
                    done[size_t(o.i)] = 1;
                    done[size_t(o.j)] = 1;
                }
                result.weight += o.w;
            }
        }
        for (auto [i, j] : chosen_pairs) {
            result.predicted_obs ^= graph.path_obs(node(i), node(j));
            if (want_correction) {
                auto mechs = graph.path_mechanisms(node(i), node(j));
                result.correction.insert(result.correction.end(), mechs.begin(), mechs.end());
            }
        }
        for (int i : chosen_boundary) {
            result.predicted_obs ^= graph.boundary_obs(node(i));
            if (want_correction) {
                auto mechs = graph.path_mechanisms(node(i), graph.n_nodes());
                result.correction.insert(result.correction.end(), mechs.begin(), mechs.end());
            }
        }
    }
    return result;
}

MleDecoder::MleDecoder(const DetectorErrorModel& dem, int max_weight) : max_weight_(max_weight) {
    n_detectors_ = dem.n_detectors;
    std::map<std::pair<std::vector<int32_t>, uint32_t>, double> dedup;
    for (const auto& site : dem.sites) {
        const double per = site.rate / double(site.components.size());
        for (const auto& comp : site.components) {
            FaultSignature sig = dem.component_signature(site, comp);
            if (sig.detectors.empty() && sig.obs_mask == 0) continue;
            auto key = std::make_pair(sig.detectors, sig.obs_mask);
            auto it = dedup.find(key);
            if (it == dedup.end())
                dedup[key] = per;
            else
                it->second = xor_probability(it->second, per);
        }
    }
    for (auto& [key, p] : dedup) {
        Mechanism m;
        m.detectors = key.first;
        m.obs_mask = key.second;
        m.p = p;
        m.log_odds = std::log(p / (1.0 - p));
        mechanisms_.push_back(std::move(m));
    }
    by_detector_.assign(size_t(n_detectors_), {});
    for (size_t i = 0; i < mechanisms_.size(); ++i)
        for (int32_t d : mechanisms_[i].detectors) by_detector_[size_t(d)].push_back(int32_t(i));
}

MleDecoder::Result MleDecoder::decode(const std::vector<uint8_t>& det_flips) const {
    std::vector<int32_t> syndrome;
    for (size_t d = 0; d < det_flips.size(); ++d)
        if (det_flips[d]) syndrome.push_back(int32_t(d));

    Result res;
    if (syndrome.empty()) {
        res.found = true;
        return res;
    }

    // iterative deepening; at the first depth with solutions, sum solution
    // probabilities per logical class and return the argmax class
    std::map<uint32_t, double> class_prob;
    std::vector<uint8_t> residual(det_flips.begin(), det_flips.end());

    std::function<void(int, int, double, uint32_t, int)> dfs =
        [&](int budget, int min_mech, double log_p, uint32_t obs, int open) {
        if (open == 0) {
            class_prob[obs] += std::exp(log_p);
            return;
        }
        if (budget == 0) return;
        // lowest flipped detector must be covered
        int32_t lowest = -1;
        for (size_t d = 0; d < residual.size(); ++d)
            if (residual[d]) { lowest = int32_t(d); break; }
        if (lowest < 0) return;
        for (int32_t mi : by_detector_[size_t(lowest)]) {
            if (mi < min_mech) continue;
            const Mechanism& m = mechanisms_[size_t(mi)];
            int delta = 0;
            for (int32_t d : m.detectors) delta += residual[size_t(d)] ? -1 : 1;
            for (int32_t d : m.detectors) residual[size_t(d)] ^= 1;
            dfs(budget - 1, mi + 1, log_p + m.log_odds, obs ^ m.obs_mask, open + delta);
            for (int32_t d : m.detectors) residual[size_t(d)] ^= 1;
        }
    };

    for (int w = 1; w <= max_weight_; ++w) {
        class_prob.clear();
        dfs(w, 0, 0.0, 0, int(syndrome.size()));
        if (!class_prob.empty()) {
            double best = -1;
            uint32_t best_obs = 0;
            for (auto& [obs, p] : class_prob) {
                if (p > best) {
                    best = p;
                    best_obs = obs;
                }
            }
            res.found = true;
            res.predicted_obs = best_obs;
            res.weight = w;
            return res;
        }
    }
    return res;  // not found within budget
}

}  // namespace bqc::stab
