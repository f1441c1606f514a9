#pragma once

#include <array>
#include <vector>

#include "bqc/stab/tableau.hpp"

namespace bqc::stab {

// Rotated surface code of odd distance d: d^2 data qubits on a grid,
// d^2 - 1 stabilizers on the dual vertex grid. Z-plaquettes sit on even
// (r + c) vertices with 2-body cells on the left/right boundary columns;
// X-plaquettes on odd vertices with 2-body cells on the top/bottom rows.
// Logical Z is a row of Z, logical X a column of X (weight d each).
struct SurfaceCodePatch {
    int distance = 3;

    struct Stabilizer {
        bool z_type = false;
        int row = 0, col = 0;            // vertex-grid position
        std::vector<int> data;           // local data indices, schedule order
        std::array<int, 4> schedule{};   // data index per timestep, -1 if idle
    };

    std::vector<Stabilizer> stabilizers;
    std::vector<int> logical_z_support;  // local data indices
    std::vector<int> logical_x_support;

    explicit SurfaceCodePatch(int d);

    int n_data() const { return distance * distance; }
    int n_stabilizers() const { return int(stabilizers.size()); }
    int data_index(int r, int c) const { return r * distance + c; }

    // Layout invariants: counts, commutation, logical operator algebra.
    // Throws on violation.
    void self_test() const;
};

}  // namespace bqc::stab
