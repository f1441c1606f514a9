#pragma once

#include <cstdint>
#include <vector>

#include "bqc/rng.hpp"
#include "bqc/stab/physcircuit.hpp"

namespace bqc::stab {

// Where a measurement lands in the detector/observable bookkeeping.
struct DetectorDef {
    std::vector<int> measurements;  // detector fires on odd flip parity
    int32_t block = 0;              // logical patch id
    bool z_type = false;            // true: Z-stabilizer detector (catches X errors)
    int32_t round = 0;
    int32_t stab_index = 0;         // within the patch
};

struct ObservableDef {
    std::vector<int> measurements;
    int32_t block = 0;
};

struct DetectorLayout {
    std::vector<DetectorDef> detectors;
    std::vector<ObservableDef> observables;
};

struct FaultSignature {
    std::vector<int32_t> detectors;  // sorted detector ids with odd parity
    uint32_t obs_mask = 0;
};

// Single X- or Z-type deviation at one circuit position. Every depolarizing
// component is an XOR of these.
struct ElementaryFault {
    int32_t op_pos = 0;
    int32_t qubit = 0;
    bool is_z = false;
    FaultSignature signature;
};

struct ChannelComponent {
    std::vector<int32_t> elementary;  // indices into DetectorErrorModel::elementary
};

struct ChannelSite {
    double rate = 0.0;  // total channel probability; components split it evenly
    int32_t op_pos = 0;
    std::vector<ChannelComponent> components;
};

struct DetectorErrorModel {
    int n_detectors = 0;
    int n_observables = 0;
    std::vector<ElementaryFault> elementary;
    std::vector<ChannelSite> sites;

    int32_t add_elementary(ElementaryFault f) {
        elementary.push_back(std::move(f));
        return int32_t(elementary.size() - 1);
    }
    FaultSignature component_signature(const ChannelSite& site, const ChannelComponent& comp) const;
};

DetectorErrorModel build_dem(const PhysCircuit& circuit, const DetectorLayout& layout);

// One Monte Carlo shot: sample every channel site, XOR the elementary
// signatures of the realized components into detector flips and observables.
void sample_shot(const DetectorErrorModel& dem, RngStream& rng, std::vector<uint8_t>& det_flips,
                 uint32_t& obs_flips);

}  // namespace bqc::stab
