#include "bqc/stab/surface.hpp"

#include <stdexcept>

namespace bqc::stab {

namespace {

// corner offsets on the vertex grid, in (row, col): NW, NE, SW, SE
constexpr int kCorner[4][2] = {{-1, -1}, {-1, 0}, {0, -1}, {0, 0}};

// CX timestep orders (indices into kCorner). Constraints: each timestep uses
// one corner diagonal for both types (conflict freedom), and the two
// trailing corners of each order fix the hook-error direction: X-ancilla
// hooks must spread along a column (perpendicular to the horizontal X-chain
// direction) and Z-ancilla hooks along a row. Ancilla order X: NE SE NW SW,
// Z: SW SE NW NE satisfies both; consecutive-round determinism and the
// exhaustive weight-1 fault test validate it.
constexpr int kOrderX[4] = {3, 1, 2, 0};  // SE, NE, SW, NW
constexpr int kOrderZ[4] = {3, 2, 1, 0};  // SE, SW, NE, NW

}  // namespace

SurfaceCodePatch::SurfaceCodePatch(int d) : distance(d) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and >= 3");

    for (int r = 0; r <= d; ++r) {
        for (int c = 0; c <= d; ++c) {
            const bool z_type = ((r + c) % 2) == 0;
            const bool interior = r >= 1 && r <= d - 1 && c >= 1 && c <= d - 1;
            bool keep = interior;
            if (!interior) {
                if ((r == 0 || r == d) && c >= 1 && c <= d - 1 && !z_type) keep = true;   // X rows
                if ((c == 0 || c == d) && r >= 1 && r <= d - 1 && z_type) keep = true;    // Z columns
            }
            if (!keep) continue;

            Stabilizer s;
            s.z_type = z_type;
            s.row = r;
            s.col = c;
            const int* order = z_type ? kOrderZ : kOrderX;
            for (int step = 0; step < 4; ++step) {
                const int dr = r + kCorner[order[step]][0];
                const int dc = c + kCorner[order[step]][1];
                if (dr < 0 || dr >= d || dc < 0 || dc >= d) {
                    s.schedule[size_t(step)] = -1;
                } else {
                    const int q = data_index(dr, dc);
                    s.schedule[size_t(step)] = q;
                    s.data.push_back(q);
                }
            }
            stabilizers.push_back(std::move(s));
        }
    }

    const int mid = d / 2;
    for (int c = 0; c < d; ++c) logical_z_support.push_back(data_index(mid, c));
    for (int r = 0; r < d; ++r) logical_x_support.push_back(data_index(r, mid));
}

void SurfaceCodePatch::self_test() const {
    const int d = distance;
    int n_x = 0, n_z = 0;
    for (const auto& s : stabilizers) (s.z_type ? n_z : n_x)++;
    if (n_x != (d * d - 1) / 2 || n_z != (d * d - 1) / 2)
        throw std::logic_error("stabilizer counts wrong");

    auto as_pauli = [&](const Stabilizer& s) {
        PauliOperator p(n_data());
        for (int q : s.data)
            p.multiply(PauliOperator::single(n_data(), q, s.z_type ? 'Z' : 'X'));
        return p;
    };
    std::vector<PauliOperator> stabs;
    for (const auto& s : stabilizers) stabs.push_back(as_pauli(s));
    for (size_t i = 0; i < stabs.size(); ++i)
        for (size_t j = i + 1; j < stabs.size(); ++j)
            if (!stabs[i].commutes_with(stabs[j])) throw std::logic_error("stabilizers do not commute");

    PauliOperator lz(n_data()), lx(n_data());
    for (int q : logical_z_support) lz.multiply(PauliOperator::single(n_data(), q, 'Z'));
    for (int q : logical_x_support) lx.multiply(PauliOperator::single(n_data(), q, 'X'));
    if (int(logical_z_support.size()) != d || int(logical_x_support.size()) != d)
        throw std::logic_error("logical operator weight != d");
    for (const auto& s : stabs) {
        if (!lz.commutes_with(s)) throw std::logic_error("logical Z anticommutes with a stabilizer");
        if (!lx.commutes_with(s)) throw std::logic_error("logical X anticommutes with a stabilizer");
    }
    if (lz.commutes_with(lx)) throw std::logic_error("logical operators must anticommute");

    // per-timestep data-qubit usage must be conflict free
    for (int step = 0; step < 4; ++step) {
        std::vector<int> used(size_t(n_data()), 0);
        for (const auto& s : stabilizers) {
            const int q = s.schedule[size_t(step)];
            if (q < 0) continue;
            if (used[size_t(q)]++) throw std::logic_error("schedule conflict on a data qubit");
        }
    }
}

}  // namespace bqc::stab
