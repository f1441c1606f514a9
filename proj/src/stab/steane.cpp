#include "bqc/stab/steane.hpp"

#include <stdexcept>

namespace bqc::stab {

const std::vector<std::vector<int>>& SteaneCode::generator_supports() {
    static const std::vector<std::vector<int>> supports = {
        {3, 4, 5, 6}, {1, 2, 5, 6}, {0, 2, 4, 6}};
    return supports;
}

namespace {

PauliOperator support_op(int n, int base, const std::vector<int>& support, char letter) {
    PauliOperator p(n);
    for (int q : support) p.multiply(PauliOperator::single(n, base + q, letter));
    return p;
}

// Sign of target relative to the generator group: +1/-1 when target equals
// (+/-) a product of generators, 0 when it is outside the group.
int group_sign(const std::vector<PauliOperator>& generators, const PauliOperator& target) {
    const int n = target.n_qubits();
    const int cols = 2 * n;
    std::vector<std::vector<uint8_t>> mat;
    std::vector<std::vector<int>> combo;
    for (size_t i = 0; i < generators.size(); ++i) {
        std::vector<uint8_t> r(size_t(cols), 0);
        for (int q = 0; q < n; ++q) {
            r[size_t(q)] = generators[i].x(q);
            r[size_t(n + q)] = generators[i].z(q);
        }
        mat.push_back(std::move(r));
        combo.push_back({int(i)});
    }
    size_t rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < cols && rank < mat.size(); ++col) {
        size_t sel = rank;
        while (sel < mat.size() && !mat[sel][size_t(col)]) ++sel;
        if (sel == mat.size()) continue;
        std::swap(mat[rank], mat[sel]);
        std::swap(combo[rank], combo[sel]);
        for (size_t r = 0; r < mat.size(); ++r) {
            if (r != rank && mat[r][size_t(col)]) {
                for (int cc = 0; cc < cols; ++cc) mat[r][size_t(cc)] ^= mat[rank][size_t(cc)];
                for (int g : combo[rank]) combo[r].push_back(g);
            }
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<uint8_t> t(size_t(cols), 0);
    for (int q = 0; q < n; ++q) {
        t[size_t(q)] = target.x(q);
        t[size_t(n + q)] = target.z(q);
    }
    std::vector<int> use(generators.size(), 0);
    for (size_t r = 0; r < rank; ++r) {
        if (t[size_t(pivot_col[r])]) {
            for (int cc = 0; cc < cols; ++cc) t[size_t(cc)] ^= mat[r][size_t(cc)];
            for (int g : combo[r]) use[size_t(g)] ^= 1;
        }
    }
    for (uint8_t b : t)
        if (b) return 0;
    PauliOperator prod(n);
    for (size_t g = 0; g < generators.size(); ++g)
        if (use[g]) prod.multiply(generators[g]);
    if (!prod.equals_up_to_sign(target)) throw std::logic_error("group reconstruction failed");
    const int k = (target.phase() - prod.phase()) & 3;
    if (k == 0) return 1;
    if (k == 2) return -1;
    throw std::logic_error("non-real phase in group sign");
}

// Logical class of `image` modulo positive-sign stabilizers. Candidates are
// Hermitian logicals squaring to +I, so image ~ s L iff image*L lies in the
// group with sign s.
std::string classify(const std::vector<PauliOperator>& gens, const PauliOperator& image,
                     const std::vector<std::pair<std::string, PauliOperator>>& candidates) {
    if (int s = group_sign(gens, image); s != 0) return s > 0 ? "+IL" : "-IL";
    for (const auto& [name, l] : candidates) {
        PauliOperator q = image;
        q.multiply(l);
        if (int s = group_sign(gens, q); s != 0) return (s > 0 ? "+" : "-") + name;
    }
    return "?";
}

std::vector<PauliOperator> block_generators(int blocks) {
    std::vector<PauliOperator> gens;
    const int n = 7 * blocks;
    for (int b = 0; b < blocks; ++b)
        for (char letter : {'X', 'Z'})
            for (const auto& sup : SteaneCode::generator_supports())
                gens.push_back(support_op(n, 7 * b, sup, letter));
    return gens;
}

}  // namespace

std::vector<PauliOperator> SteaneCode::x_stabilizers() {
    std::vector<PauliOperator> out;
    for (const auto& sup : generator_supports()) out.push_back(support_op(7, 0, sup, 'X'));
    return out;
}
std::vector<PauliOperator> SteaneCode::z_stabilizers() {
    std::vector<PauliOperator> out;
    for (const auto& sup : generator_supports()) out.push_back(support_op(7, 0, sup, 'Z'));
    return out;
}
PauliOperator SteaneCode::logical_x() {
    return support_op(7, 0, {0, 1, 2, 3, 4, 5, 6}, 'X');
}
PauliOperator SteaneCode::logical_z() {
    return support_op(7, 0, {0, 1, 2, 3, 4, 5, 6}, 'Z');
}

namespace {

PauliOperator hermitian_logical_y() {
    PauliOperator y = SteaneCode::logical_x();
    y.multiply(SteaneCode::logical_z());
    y.add_phase(1);  // YL = i XL ZL, squares to +I
    return y;
}

SteaneBranchReport single_block_branch(const std::string& name,
                                       const std::vector<GateKind>& per_qubit_word,
                                       const std::string& target_x, const std::string& target_z,
                                       bool x_sign_free) {
    std::vector<PauliOperator> gens = block_generators(1);
    auto conj = [&](PauliOperator p) {
        for (int q = 0; q < 7; ++q)
            for (GateKind gk : per_qubit_word) p.conjugate(gk, q);
        return p;
    };
    SteaneBranchReport rep;
    rep.branch = name;
    rep.stabilizer_group_preserved = true;
    for (const auto& g : gens)
        if (group_sign(gens, conj(g)) != 1) rep.stabilizer_group_preserved = false;

    std::vector<std::pair<std::string, PauliOperator>> candidates = {
        {"XL", SteaneCode::logical_x()}, {"ZL", SteaneCode::logical_z()}, {"YL", hermitian_logical_y()}};
    rep.logical_x_image = classify(gens, conj(SteaneCode::logical_x()), candidates);
    rep.logical_z_image = classify(gens, conj(SteaneCode::logical_z()), candidates);

    const bool x_ok = x_sign_free
                          ? (rep.logical_x_image == "+" + target_x || rep.logical_x_image == "-" + target_x)
                          : rep.logical_x_image == target_x;
    rep.matches_target = rep.stabilizer_group_preserved && x_ok && rep.logical_z_image == target_z;
    return rep;
}

}  // namespace

SteaneReport steane_blind_gates(SteaneGate gate) {
    SteaneReport report;
    report.gate = gate;
    switch (gate) {
        case SteaneGate::S:
            // Rotation branches theta in {0, -pi/2, +pi/2}; with
            // Rz(t) = exp(+i t Z/2), theta = -pi/2 is S and +pi/2 is Sdg up
            // to a global phase. The sign of the Y image is recorded only.
            report.branches.push_back(single_block_branch("theta=0", {}, "+XL", "+ZL", false));
            report.branches.push_back(
                single_block_branch("theta=-pi/2 (S)", {GateKind::S}, "YL", "+ZL", true));
            report.branches.push_back(
                single_block_branch("theta=+pi/2 (Sdg)", {GateKind::Sdg}, "YL", "+ZL", true));
            break;
        case SteaneGate::H:
            report.branches.push_back(single_block_branch("theta=(0,0,0)", {}, "+XL", "+ZL", false));
            // Rz(pi/2) [HS-conjugated Rz(pi/2)] Rz(pi/2) = H up to phase;
            // at the Clifford level the branch acts as transversal H
            report.branches.push_back(
                single_block_branch("theta=(pi/2,pi/2,pi/2) (H)", {GateKind::H}, "+ZL", "+XL", false));
            break;
        case SteaneGate::CX: {
            std::vector<PauliOperator> gens = block_generators(2);
            auto conj = [&](PauliOperator p, bool identity_branch) {
                if (!identity_branch)
                    for (int q = 0; q < 7; ++q) p.conjugate(GateKind::CX, q, 7 + q);
                return p;
            };
            PauliOperator x1 = support_op(14, 0, {0, 1, 2, 3, 4, 5, 6}, 'X');
            PauliOperator x2 = support_op(14, 7, {0, 1, 2, 3, 4, 5, 6}, 'X');
            PauliOperator z1 = support_op(14, 0, {0, 1, 2, 3, 4, 5, 6}, 'Z');
            PauliOperator z2 = support_op(14, 7, {0, 1, 2, 3, 4, 5, 6}, 'Z');
            PauliOperator x1x2 = x1;
            x1x2.multiply(x2);
            PauliOperator z1z2 = z1;
            z1z2.multiply(z2);
            std::vector<std::pair<std::string, PauliOperator>> candidates = {
                {"XL1", x1}, {"XL2", x2}, {"ZL1", z1}, {"ZL2", z2},
                {"XL1.XL2", x1x2}, {"ZL1.ZL2", z1z2}};
            for (bool identity_branch : {true, false}) {
                SteaneBranchReport rep;
                rep.branch = identity_branch ? "theta=0" : "theta=pi/2 (CX)";
                rep.stabilizer_group_preserved = true;
                for (const auto& g : gens)
                    if (group_sign(gens, conj(g, identity_branch)) != 1)
                        rep.stabilizer_group_preserved = false;
                rep.logical_x_image = classify(gens, conj(x1, identity_branch), candidates);
                rep.logical_z_image = classify(gens, conj(z2, identity_branch), candidates);
                if (identity_branch)
                    rep.matches_target = rep.stabilizer_group_preserved &&
                                         rep.logical_x_image == "+XL1" && rep.logical_z_image == "+ZL2";
                else
                    rep.matches_target = rep.stabilizer_group_preserved &&
                                         rep.logical_x_image == "+XL1.XL2" &&
                                         rep.logical_z_image == "+ZL1.ZL2";
                report.branches.push_back(rep);
            }
            break;
        }
    }
    report.all_ok = true;
    for (const auto& b : report.branches)
        if (!b.matches_target) report.all_ok = false;
    return report;
}

}  // namespace bqc::stab
