#include "bqc/stab/dem.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>

namespace bqc::stab {

FaultPropagator::FaultPropagator(const PhysCircuit& circuit) : circuit_(circuit) {
    ops_by_qubit_.resize(size_t(circuit.n_qubits));
    for (size_t i = 0; i < circuit.ops.size(); ++i) {
        const PhysOp& op = circuit.ops[i];
        switch (op.kind) {
            case PhysOpKind::CX:
                ops_by_qubit_[size_t(op.q0)].push_back(int32_t(i));
                ops_by_qubit_[size_t(op.q1)].push_back(int32_t(i));
                break;
            case PhysOpKind::H:
            case PhysOpKind::MeasureZ:
            case PhysOpKind::ResetZ:
                ops_by_qubit_[size_t(op.q0)].push_back(int32_t(i));
                break;
            default:
                break;  // noise markers are passive
        }
    }
}

std::vector<int> FaultPropagator::propagate(size_t pos, int qubit, bool is_z) const {
    // sparse deviation frame
    std::map<int, std::pair<uint8_t, uint8_t>> frame;  // q -> (x, z)
    frame[qubit] = is_z ? std::make_pair(uint8_t(0), uint8_t(1)) : std::make_pair(uint8_t(1), uint8_t(0));

    using Entry = std::pair<int32_t, int>;  // (op index, qubit)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    std::map<int, size_t> cursor;  // per-qubit position in ops_by_qubit_

    auto enqueue_from = [&](int q, int32_t after) {
        const auto& list = ops_by_qubit_[size_t(q)];
        size_t lo = size_t(std::upper_bound(list.begin(), list.end(), after) - list.begin());
        cursor[q] = lo;
        if (lo < list.size()) heap.push({list[lo], q});
    };
    auto advance = [&](int q) {
        const auto& list = ops_by_qubit_[size_t(q)];
        size_t& cur = cursor[q];
        ++cur;
        if (cur < list.size()) heap.push({list[cur], q});
    };

    enqueue_from(qubit, int32_t(pos));

    std::vector<int> flipped;
    int32_t last_done = -1;
    while (!heap.empty()) {
        auto [idx, q] = heap.top();
        heap.pop();
        advance(q);
        if (idx == last_done) continue;  // CX already applied via the other operand
        last_done = idx;
        const PhysOp& op = circuit_.ops[size_t(idx)];
        switch (op.kind) {
            case PhysOpKind::H: {
                auto& f = frame[op.q0];
                std::swap(f.first, f.second);
                break;
            }
            case PhysOpKind::CX: {
                auto& fc = frame[op.q0];
                auto& ft = frame[op.q1];
                const uint8_t new_xt = uint8_t(ft.first ^ fc.first);
                const uint8_t new_zc = uint8_t(fc.second ^ ft.second);
                const bool t_was_tracked = cursor.count(op.q1) != 0;
                const bool c_was_tracked = cursor.count(op.q0) != 0;
                ft.first = new_xt;
                fc.second = new_zc;
                if (!t_was_tracked && (ft.first || ft.second)) enqueue_from(op.q1, idx);
                if (!c_was_tracked && (fc.first || fc.second)) enqueue_from(op.q0, idx);
                break;
            }
            case PhysOpKind::MeasureZ: {
                auto it = frame.find(op.q0);
                if (it != frame.end() && it->second.first) flipped.push_back(op.meas_index);
                break;
            }
            case PhysOpKind::ResetZ: {
                auto it = frame.find(op.q0);
                if (it != frame.end()) it->second = {0, 0};
                break;
            }
            default:
                break;
        }
    }
    std::sort(flipped.begin(), flipped.end());
    return flipped;
}

DetectorErrorModel build_dem(const PhysCircuit& circuit, const DetectorLayout& layout) {
    DetectorErrorModel dem;
    dem.n_detectors = int(layout.detectors.size());
    dem.n_observables = int(layout.observables.size());

    // measurement -> detectors / observables adjacency
    std::vector<std::vector<int32_t>> meas_to_det(size_t(circuit.n_measurements));
    std::vector<std::vector<int32_t>> meas_to_obs(size_t(circuit.n_measurements));
    for (size_t d = 0; d < layout.detectors.size(); ++d)
        for (int m : layout.detectors[d].measurements) meas_to_det[size_t(m)].push_back(int32_t(d));
    for (size_t o = 0; o < layout.observables.size(); ++o)
        for (int m : layout.observables[o].measurements) meas_to_obs[size_t(m)].push_back(int32_t(o));

    FaultPropagator prop(circuit);

    auto signature_of = [&](size_t pos, int qubit, bool is_z) {
        FaultSignature sig;
        std::vector<int> flips = prop.propagate(pos, qubit, is_z);
        std::map<int32_t, int> det_parity;
        for (int m : flips) {
            for (int32_t d : meas_to_det[size_t(m)]) det_parity[d] ^= 1;
            for (int32_t o : meas_to_obs[size_t(m)]) sig.obs_mask ^= uint32_t(1) << o;
        }
        for (auto& [d, par] : det_parity)
            if (par) sig.detectors.push_back(d);
        return sig;
    };

    for (size_t pos = 0; pos < circuit.ops.size(); ++pos) {
        const PhysOp& op = circuit.ops[pos];
        if (op.kind == PhysOpKind::Dep1) {
            ChannelSite site;
            site.rate = op.rate;
            site.op_pos = int32_t(pos);
            ElementaryFault ex{int32_t(pos), op.q0, false, signature_of(pos, op.q0, false)};
            ElementaryFault ez{int32_t(pos), op.q0, true, signature_of(pos, op.q0, true)};
            const int32_t ix = dem.add_elementary(std::move(ex));
            const int32_t iz = dem.add_elementary(std::move(ez));
            // components X, Y, Z with weight rate/3 each
            site.components.push_back({{ix}});
            site.components.push_back({{ix, iz}});
            site.components.push_back({{iz}});
            dem.sites.push_back(std::move(site));
        } else if (op.kind == PhysOpKind::Dep2) {
            ChannelSite site;
            site.rate = op.rate;
            site.op_pos = int32_t(pos);
            const int32_t ax = dem.add_elementary({int32_t(pos), op.q0, false, signature_of(pos, op.q0, false)});
            const int32_t az = dem.add_elementary({int32_t(pos), op.q0, true, signature_of(pos, op.q0, true)});
            const int32_t bx = dem.add_elementary({int32_t(pos), op.q1, false, signature_of(pos, op.q1, false)});
            const int32_t bz = dem.add_elementary({int32_t(pos), op.q1, true, signature_of(pos, op.q1, true)});
            // 15 non-identity two-qubit Paulis; letter order I, X, Y, Z per
            // operand, qubit q0 = low digit
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    if (a == 0 && b == 0) continue;
                    ChannelComponent comp;
                    if (a == 1 || a == 2) comp.elementary.push_back(ax);
                    if (a == 2 || a == 3) comp.elementary.push_back(az);
                    if (b == 1 || b == 2) comp.elementary.push_back(bx);
                    if (b == 2 || b == 3) comp.elementary.push_back(bz);
                    site.components.push_back(std::move(comp));
                }
            }
            dem.sites.push_back(std::move(site));
        }
    }
    return dem;
}

FaultSignature DetectorErrorModel::component_signature(const ChannelSite& site,
                                                       const ChannelComponent& comp) const {
    std::map<int32_t, int> det_parity;
    uint32_t obs = 0;
    for (int32_t e : comp.elementary) {
        for (int32_t d : elementary[size_t(e)].signature.detectors) det_parity[d] ^= 1;
        obs ^= elementary[size_t(e)].signature.obs_mask;
    }
    FaultSignature sig;
    sig.obs_mask = obs;
    for (auto& [d, par] : det_parity)
        if (par) sig.detectors.push_back(d);
    (void)site;
    return sig;
}

void sample_shot(const DetectorErrorModel& dem, RngStream& rng, std::vector<uint8_t>& det_flips,
                 uint32_t& obs_flips) {
    det_flips.assign(size_t(dem.n_detectors), 0);
    obs_flips = 0;
    for (const auto& site : dem.sites) {
        const double u = rng.uniform();
        if (u >= site.rate) continue;
        const double per = site.rate / double(site.components.size());
        size_t which = size_t(u / per);
        if (which >= site.components.size()) which = site.components.size() - 1;
        for (int32_t e : site.components[which].elementary) {
            const auto& sig = dem.elementary[size_t(e)].signature;
            for (int32_t d : sig.detectors) det_flips[size_t(d)] ^= 1;
            obs_flips ^= sig.obs_mask;
        }
    }
}

}  // namespace bqc::stab
