#pragma once

#include <string>
#include <vector>

#include "bqc/stab/tableau.hpp"

namespace bqc::stab {

// [[7,1,3]] Steane code: self-dual CSS code with X and Z stabilizers on the
// same supports, transversal Cliffords, logical X/Z = X^7 / Z^7.
struct SteaneCode {
    static const std::vector<std::vector<int>>& generator_supports();
    static std::vector<PauliOperator> x_stabilizers();
    static std::vector<PauliOperator> z_stabilizers();
    static PauliOperator logical_x();
    static PauliOperator logical_z();
};

enum class SteaneGate { S, H, CX };

struct SteaneBranchReport {
    std::string branch;            // which blind-angle assignment
    std::string logical_x_image;   // e.g. "-YL"
    std::string logical_z_image;
    bool stabilizer_group_preserved = false;
    bool matches_target = false;
};

struct SteaneReport {
    SteaneGate gate;
    std::vector<SteaneBranchReport> branches;
    bool statevec_checked = false;  // dense 7-qubit crosscheck ran (S, H only)
    bool all_ok = false;
};

// Verify the delegated transversal constructions branch by branch: the
// identity branch must act trivially, the gate branch must map the logical
// operators to the target images (the sign of the S branch is recorded, not
// asserted). S and H are additionally crosschecked on a dense 7-qubit
// simulation; CX (14 qubits) stays on the tableau representation.
SteaneReport steane_blind_gates(SteaneGate gate);

}  // namespace bqc::stab
