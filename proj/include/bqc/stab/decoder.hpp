#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bqc/stab/dem.hpp"

namespace bqc::stab {

// Matching graph for one (patch, stabilizer-type) class of detectors. Nodes
// are the class's detectors; edges come from the elementary fault mechanisms
// (each is graphlike: at most two detector events per class). The boundary is
// a single virtual node.
class DetectorGraph {
public:
    struct Edge {
        int32_t u = -1, v = -1;  // local node ids; v = -1 marks a boundary edge
        double p = 0.0;
        double weight = 0.0;
        uint32_t obs_mask = 0;
        int32_t elementary = -1;  // representative mechanism
    };

    int32_t block = 0;
    bool z_type = false;

    std::vector<int32_t> nodes;        // global detector ids, index = local id
    std::vector<int32_t> global_to_local;  // -1 when not in this graph
    std::vector<Edge> edges;

    int n_nodes() const { return int(nodes.size()); }

    // all-pairs shortest paths incl. the boundary, with the obs-mask and the
    // elementary mechanisms accumulated along each shortest path
    void prepare();

    double dist(int u, int v) const { return dist_[size_t(u) * size_t(n_nodes() + 1) + size_t(v)]; }
    double boundary_dist(int u) const { return dist(u, n_nodes()); }
    uint32_t path_obs(int u, int v) const { return obs_[size_t(u) * size_t(n_nodes() + 1) + size_t(v)]; }
    uint32_t boundary_obs(int u) const { return path_obs(u, n_nodes()); }

    // elementary mechanisms along the shortest u..v path (v = n_nodes() for
    // the boundary); used to reconstruct corrections
    std::vector<int32_t> path_mechanisms(int u, int v) const;

private:
    std::vector<double> dist_;
    std::vector<uint32_t> obs_;
    std::vector<std::vector<std::pair<int32_t, double>>> adj_;      // node -> (node, weight)
    std::vector<std::vector<int32_t>> adj_edge_;                    // parallel: edge index
    void dijkstra(int src, std::vector<double>& dist, std::vector<int32_t>& parent_edge) const;
};

// Split a detector error model into per-(block, type) matching graphs.
std::vector<DetectorGraph> build_graphs(const DetectorErrorModel& dem, const DetectorLayout& layout);

struct MatchResult {
    uint32_t predicted_obs = 0;
    std::vector<int32_t> correction;  // elementary mechanism ids (with repeats XORed out)
    bool used_fallback = false;       // a component exceeded the exact-DP cap
    double weight = 0.0;
};

// Minimum-weight matching of the flipped detectors against the graph.
// Components of up to `exact_cap` events are matched exactly by subset DP
// (boundary pairing allowed per node); larger components fall back to a
// greedy minimum-edge heuristic and are flagged.
MatchResult match_decode(const DetectorGraph& graph, const std::vector<int32_t>& flipped_local,
                         bool want_correction = false, int exact_cap = 16);

// Truncated-enumeration most-likely-error decoder over the full (all blocks,
// both types) mechanism list: enumerates fault sets of minimal weight
// explaining the syndrome, sums probabilities per logical class, returns the
// argmax class. Exact for small volumes at low physical rates.
class MleDecoder {
public:
    MleDecoder(const DetectorErrorModel& dem, int max_weight = 6);

    struct Result {
        uint32_t predicted_obs = 0;
        bool found = false;
        int weight = 0;
    };
    Result decode(const std::vector<uint8_t>& det_flips) const;

private:
    struct Mechanism {
        std::vector<int32_t> detectors;
        uint32_t obs_mask = 0;
        double log_odds = 0.0;
        double p = 0.0;
    };
    std::vector<Mechanism> mechanisms_;
    std::vector<std::vector<int32_t>> by_detector_;
    int n_detectors_ = 0;
    int max_weight_ = 6;
};

}  // namespace bqc::stab
