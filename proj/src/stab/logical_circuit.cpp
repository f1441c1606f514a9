#include "bqc/stab/logical_circuit.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bqc::stab {

void LogicalRunConfig::validate() const {
    if (distance != 3 && distance != 5 && distance != 7)
        throw std::invalid_argument("distance must be 3, 5 or 7");
    if (n_qubits < 1) throw std::invalid_argument("need at least one logical qubit");
    if (distance <= 5 && n_qubits > 4)
        throw CapacityError("at most 4 logical qubits at d <= 5");
    if (distance == 7 && n_qubits > 2)
        throw CapacityError("at most 2 logical qubits at d = 7");
    if (n_layers < 0 || n_rounds < 1) throw std::invalid_argument("bad layer/round counts");
    if (r_h < 0.0 || r_h > 1.0) throw std::invalid_argument("hiding fraction outside [0,1]");
    model.validate();
}

std::vector<LayerSpec> random_layers(const LogicalRunConfig& config, RngStream& rng) {
    std::vector<LayerSpec> layers;
    for (int l = 0; l < config.n_layers; ++l) {
        LayerSpec spec;
        for (int p = 0; p < config.n_qubits; ++p)
            spec.gates_1q.push_back({p, rng.bernoulli(config.r_h)});
        if (config.n_qubits >= 2) {
            std::vector<int> order(size_t(config.n_qubits));
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng.engine());
            for (size_t i = 0; i + 1 < order.size(); i += 2)
                spec.gates_cx.push_back({order[i], order[i + 1], rng.bernoulli(config.r_h)});
        }
        layers.push_back(std::move(spec));
    }
    return layers;
}

namespace {

struct PatchState {
    int data_base = 0;  // global id of local data qubit 0
    int anc_base = 0;
    bool active = true;
    std::vector<int> last_meas;  // per stabilizer, last ancilla measurement index
    // Heisenberg pull-back of each stabilizer through the gates since the
    // last SE round: bit q set means patch q's same-position stabilizer
    // enters the previous-round comparison product. Keeping detectors in
    // this propagated frame makes copied deviations silent until they first
    // appear, so fault mechanisms stay local to their origin.
    std::vector<uint32_t> flow_mask;
};

class Builder {
public:
    Builder(const LogicalRunConfig& config, const SurfaceCodePatch& patch)
        : config_(config), patch_(patch) {
        const int per_patch = patch.n_data() + patch.n_stabilizers();
        for (int p = 0; p < config.n_qubits; ++p) {
            PatchState ps;
            ps.data_base = p * per_patch;
            ps.anc_base = p * per_patch + patch.n_data();
            ps.last_meas.assign(size_t(patch.n_stabilizers()), -1);
            ps.flow_mask.assign(size_t(patch.n_stabilizers()), uint32_t(1) << p);
            patches_.push_back(ps);
        }
        out_.circuit.n_qubits = config.n_qubits * per_patch;
        out_.distance = config.distance;
        out_.n_patches = config.n_qubits;
    }

    BuiltCircuit build(const std::vector<LayerSpec>& layers) {
        round_counter_ = 0;
        for (const auto& layer : layers) {
            apply_layer(layer);
            for (int r = 0; r < config_.n_rounds; ++r) se_round();
        }
        if (config_.n_layers == 0) {
            for (int r = 0; r < config_.n_rounds; ++r) se_round();
        }
        for (int p = 0; p < config_.n_qubits; ++p)
            if (patches_[size_t(p)].active) measure_patch(p);
        return std::move(out_);
    }

private:
    void apply_layer(const LayerSpec& layer) {
        auto& c = out_.circuit;
        // mid-circuit measurements herald first; corrections follow
        for (int p : layer.measure_patches) measure_patch(p);
        for (const auto& g : layer.gates_1q) {
            if (!patches_[size_t(g.patch)].active) continue;
            ++out_.realized_gates;
            if (!g.blind) continue;  // local 1Q gates are noiseless
            for (int q = 0; q < patch_.n_data(); ++q) {
                const int gq = patches_[size_t(g.patch)].data_base + q;
                c.add_dep1(gq, config_.model.eps_comm);
                c.add_dep1(gq, config_.model.eps_comm);
            }
        }
        for (const auto& g : layer.gates_cx) {
            if (!patches_[size_t(g.control)].active || !patches_[size_t(g.target)].active) continue;
            ++out_.realized_gates;
            for (int q = 0; q < patch_.n_data(); ++q) {
                const int a = patches_[size_t(g.control)].data_base + q;
                const int b = patches_[size_t(g.target)].data_base + q;
                if (g.blind) {
                    c.add_dep2(a, b, config_.model.eps_loc);
                    c.add_cx(a, b);
                    c.add_dep1(b, config_.model.eps_comm);
                    c.add_dep2(a, b, config_.model.eps_loc);
                } else {
                    c.add_cx(a, b);
                    c.add_dep2(a, b, config_.model.eps_loc);
                }
            }
            // stabilizer flow: Z-plaquettes of the target pull back to the
            // control-target product, X-plaquettes of the control push onto
            // the target (same positions, identical layouts across patches)
            for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                if (patch_.stabilizers[size_t(s)].z_type)
                    patches_[size_t(g.target)].flow_mask[size_t(s)] ^=
                        patches_[size_t(g.control)].flow_mask[size_t(s)];
                else
                    patches_[size_t(g.control)].flow_mask[size_t(s)] ^=
                        patches_[size_t(g.target)].flow_mask[size_t(s)];
            }
        }
    }

    void se_entangling(int anc, int data, bool x_type) {
        auto& c = out_.circuit;
        const int ctrl = x_type ? anc : data;
        const int tgt = x_type ? data : anc;
        if (config_.se_mode == SeMode::Local) {
            c.add_cx(ctrl, tgt);
            c.add_dep2(ctrl, tgt, config_.model.eps_loc);
        } else {
            c.add_dep2(ctrl, tgt, config_.model.eps_loc);
            c.add_cx(ctrl, tgt);
            c.add_dep1(tgt, config_.model.eps_comm);
            c.add_dep2(ctrl, tgt, config_.model.eps_loc);
        }
    }

    void se_round() {
        auto& c = out_.circuit;
        for (auto& ps : patches_) {
            if (!ps.active) continue;
            for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                const int anc = ps.anc_base + s;
                c.add_reset(anc);
                if (!patch_.stabilizers[size_t(s)].z_type) c.add_h(anc);
            }
        }
        for (int step = 0; step < 4; ++step) {
            for (auto& ps : patches_) {
                if (!ps.active) continue;
                for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                    const auto& stab = patch_.stabilizers[size_t(s)];
                    const int local = stab.schedule[size_t(step)];
                    if (local < 0) continue;
                    se_entangling(ps.anc_base + s, ps.data_base + local, !stab.z_type);
                }
            }
        }
        // measure every ancilla first, then form detectors against the
        // previous round through the stabilizer-flow masks
        std::vector<std::vector<int>> new_meas(patches_.size());
        for (size_t p = 0; p < patches_.size(); ++p) {
            auto& ps = patches_[p];
            if (!ps.active) continue;
            new_meas[p].assign(size_t(patch_.n_stabilizers()), -1);
            for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                const auto& stab = patch_.stabilizers[size_t(s)];
                const int anc = ps.anc_base + s;
                if (!stab.z_type) c.add_h(anc);
                new_meas[p][size_t(s)] = c.add_measure(anc);
            }
        }
        for (size_t p = 0; p < patches_.size(); ++p) {
            auto& ps = patches_[p];
            if (!ps.active) continue;
            for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                DetectorDef det;
                det.measurements.push_back(new_meas[p][size_t(s)]);
                for (size_t q = 0; q < patches_.size(); ++q) {
                    if (!(ps.flow_mask[size_t(s)] & (uint32_t(1) << q))) continue;
                    if (patches_[q].last_meas[size_t(s)] >= 0)
                        det.measurements.push_back(patches_[q].last_meas[size_t(s)]);
                }
                det.block = int32_t(p);
                det.z_type = patch_.stabilizers[size_t(s)].z_type;
                det.round = round_counter_;
                det.stab_index = int32_t(s);
                out_.layout.detectors.push_back(std::move(det));
            }
        }
        for (size_t p = 0; p < patches_.size(); ++p) {
            auto& ps = patches_[p];
            if (!ps.active) continue;
            for (int s = 0; s < patch_.n_stabilizers(); ++s) {
                ps.last_meas[size_t(s)] = new_meas[p][size_t(s)];
                ps.flow_mask[size_t(s)] = uint32_t(1) << p;
            }
        }
        ++round_counter_;
    }

    void measure_patch(int p) {
        auto& ps = patches_[size_t(p)];
        if (!ps.active) throw std::logic_error("patch measured twice");
        auto& c = out_.circuit;
        std::vector<int> data_meas(size_t(patch_.n_data()));
        for (int q = 0; q < patch_.n_data(); ++q) data_meas[size_t(q)] = c.add_measure(ps.data_base + q);

        // reconstructed Z-stabilizer detectors from the data readout
        for (int s = 0; s < patch_.n_stabilizers(); ++s) {
            const auto& stab = patch_.stabilizers[size_t(s)];
            if (!stab.z_type) continue;
            DetectorDef det;
            for (int local : stab.data) det.measurements.push_back(data_meas[size_t(local)]);
            if (ps.last_meas[size_t(s)] >= 0) det.measurements.push_back(ps.last_meas[size_t(s)]);
            det.block = int32_t(p);
            det.z_type = true;
            det.round = round_counter_;
            det.stab_index = int32_t(s);
            out_.layout.detectors.push_back(std::move(det));
        }
        ObservableDef obs;
        obs.block = int32_t(p);
        for (int local : patch_.logical_z_support) obs.measurements.push_back(data_meas[size_t(local)]);
        out_.layout.observables.push_back(std::move(obs));
        ps.active = false;
    }

    const LogicalRunConfig& config_;
    const SurfaceCodePatch& patch_;
    std::vector<PatchState> patches_;
    BuiltCircuit out_;
    int32_t round_counter_ = 0;
};

}  // namespace

BuiltCircuit build_logical_circuit(const LogicalRunConfig& config, RngStream& structure_rng) {
    config.validate();
    SurfaceCodePatch patch(config.distance);
    std::vector<LayerSpec> layers =
        config.fixed_layers ? *config.fixed_layers : random_layers(config, structure_rng);
    Builder builder(config, patch);
    return builder.build(layers);
}

}  // namespace bqc::stab
