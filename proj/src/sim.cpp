#include "hhqec/sim.hpp"

#include <stdexcept>
#include <utility>

namespace hhqec {

namespace {

inline void apply_pauli(std::vector<std::uint8_t>& x, std::vector<std::uint8_t>& z, std::uint32_t q,
                        unsigned code) {
    x[q] ^= code & 1u;
    z[q] ^= (code >> 1) & 1u;
}

}  // namespace

ShotRecord simulate(const HeavyHexCode& code, const MemoryCircuit& circuit, const FaultPattern& faults) {
    const std::size_t n = circuit.num_qubits;
    std::vector<std::uint8_t> x(n, 0), z(n, 0);
    std::vector<std::uint8_t> meas(circuit.num_measurements, 0);

    auto next = faults.faults.begin();
    const auto end = faults.faults.end();
    // The frame is identically zero before the first fault.
    const std::size_t first = faults.empty() ? circuit.ops.size() : faults.faults.front().site;
    for (std::size_t k = first; k < circuit.ops.size(); ++k) {
        const FlatOp& op = circuit.ops[k];
        unsigned fault = 0;
        if (next != end && next->site == k) {
            fault = next->code;
            ++next;
        }
        switch (op.kind) {
            case EventKind::Init:
                x[op.q0] = 0;
                z[op.q0] = 0;
                apply_pauli(x, z, op.q0, fault);
                break;
            case EventKind::Idle:
                apply_pauli(x, z, op.q0, fault);
                break;
            case EventKind::Hadamard:
                std::swap(x[op.q0], z[op.q0]);
                apply_pauli(x, z, op.q0, fault);
                break;
            case EventKind::Cnot:
                x[op.q1] ^= x[op.q0];
                z[op.q0] ^= z[op.q1];
                apply_pauli(x, z, op.q0, fault & 3u);
                apply_pauli(x, z, op.q1, fault >> 2);
                break;
            case EventKind::Measure:
                meas[op.meas] = static_cast<std::uint8_t>((op.basis == Basis::Z ? x[op.q0] : z[op.q0]) ^ (fault & 1u));
                break;
        }
    }
    if (next != end) throw std::invalid_argument("fault pattern refers to sites outside the circuit");

    ShotRecord rec;
    rec.basis = circuit.basis;
    rec.cycles = circuit.cycles;
    const std::size_t nzg = code.z_gauges.size();
    const std::size_t nxg = code.x_gauges.size();
    const std::size_t nz = code.z_stabilizers.size();
    const std::size_t ns = code.num_stabilizers();
    const auto& records = code.schedule.records;

    for (int c = 0; c < circuit.cycles; ++c) {
        const std::size_t base = static_cast<std::size_t>(c) * circuit.records_per_cycle;
        BitVector gauges(nzg + nxg);
        std::vector<std::uint8_t> flag_bits;
        for (std::size_t r = 0; r < records.size(); ++r) {
            const bool bit = meas[base + r];
            switch (records[r].kind) {
                case RecordKind::ZGauge: gauges.set(records[r].index, bit); break;
                case RecordKind::XGauge: gauges.set(nzg + records[r].index, bit); break;
                default: flag_bits.push_back(bit); break;
            }
        }
        BitVector flags(flag_bits.size());
        for (std::size_t f = 0; f < flag_bits.size(); ++f) flags.set(f, flag_bits[f]);

        BitVector stabs(ns);
        for (std::size_t s = 0; s < nz; ++s) {
            bool v = false;
            for (auto g : code.z_stabilizers[s].gauges) v ^= gauges.get(g);
            stabs.set(s, v);
        }
        for (std::size_t s = 0; s < code.x_stabilizers.size(); ++s) {
            bool v = false;
            for (auto g : code.x_stabilizers[s].gauges) v ^= gauges.get(nzg + g);
            stabs.set(nz + s, v);
        }
        rec.gauge_outcomes.push_back(std::move(gauges));
        rec.flag_outcomes.push_back(std::move(flags));
        rec.stabilizer_outcomes.push_back(std::move(stabs));
    }

    const std::size_t nd = circuit.num_data;
    rec.final_data_readout = BitVector(nd);
    rec.true_frame = PauliFrame(nd);
    for (std::size_t q = 0; q < nd; ++q) {
        const bool m = meas[circuit.final_measurement(q)];
        rec.final_data_readout.set(q, m);
        if (circuit.basis == MemoryBasis::MemZ) {
            rec.true_frame.set(q, pauli_from_bits(m, z[q]));
        } else {
            // Frame is in the post-Hadamard basis; map it back.
            rec.true_frame.set(q, pauli_from_bits(z[q], m));
        }
    }

    const bool z_basis = circuit.basis == MemoryBasis::MemZ;
    const std::size_t lo = z_basis ? 0 : nz;
    const std::size_t hi = z_basis ? nz : ns;
    const auto& masks = z_basis ? code.z_stabilizer_masks : code.x_stabilizer_masks;
    rec.reconstructed_syndrome = BitVector(ns);
    for (std::size_t s = lo; s < hi; ++s) rec.reconstructed_syndrome.set(s, rec.final_data_readout.dot(masks[s - lo]));

    for (int c = 0; c < circuit.cycles; ++c) {
        BitVector ev(ns);
        const auto& cur = rec.stabilizer_outcomes[c];
        for (std::size_t s = 0; s < ns; ++s) {
            const bool basis_type = s >= lo && s < hi;
            if (c == 0) {
                ev.set(s, basis_type && cur.get(s));
            } else {
                ev.set(s, cur.get(s) ^ rec.stabilizer_outcomes[c - 1].get(s));
            }
        }
        rec.detection_events.push_back(std::move(ev));
    }
    rec.final_events = BitVector(ns);
    for (std::size_t s = lo; s < hi; ++s) {
        rec.final_events.set(s, rec.reconstructed_syndrome.get(s) ^ rec.stabilizer_outcomes.back().get(s));
    }
    return rec;
}

ShotRecord run_memory(const HeavyHexCode& code, const MemoryCircuit& circuit, const NoiseModel& model,
                      std::mt19937_64& rng) {
    return simulate(code, circuit, sample_faults(circuit, model, rng));
}

ShotRecord run_memory(const HeavyHexCode& code, MemoryBasis basis, int cycles, const NoiseModel& model,
                      std::mt19937_64& rng) {
    return run_memory(code, build_memory_circuit(code, basis, cycles), model, rng);
}

bool ShotRecord::observable_flip(const HeavyHexCode& code) const {
    return final_data_readout.dot(basis == MemoryBasis::MemZ ? code.logical_z_mask : code.logical_x_mask);
}

std::size_t family_size(const HeavyHexCode& code, ChainType family) {
    return family == ChainType::XChains ? code.z_stabilizers.size() : code.x_stabilizers.size();
}

std::size_t family_offset(const HeavyHexCode& code, ChainType family) {
    return family == ChainType::XChains ? 0 : code.z_stabilizers.size();
}

BitVector family_detectors(const HeavyHexCode& code, const ShotRecord& shot, ChainType family) {
    const std::size_t nf = family_size(code, family);
    const std::size_t off = family_offset(code, family);
    BitVector out(nf * static_cast<std::size_t>(shot.cycles + 1));
    for (int c = 0; c < shot.cycles; ++c) {
        for (std::size_t s = 0; s < nf; ++s) {
            if (shot.detection_events[c].get(off + s)) out.set(static_cast<std::size_t>(c) * nf + s, true);
        }
    }
    for (std::size_t s = 0; s < nf; ++s) {
        if (shot.final_events.get(off + s)) out.set(static_cast<std::size_t>(shot.cycles) * nf + s, true);
    }
    return out;
}

bool correction_succeeds(const HeavyHexCode& code, const PauliFrame& true_frame, const PauliFrame& correction,
                         MemoryBasis basis) {
    if (true_frame.size() != code.num_data() || correction.size() != code.num_data()) {
        throw std::invalid_argument("correction_succeeds expects data-register frames");
    }
    const PauliFrame residual = compose(correction, true_frame);
    if (basis == MemoryBasis::MemZ) {
        for (const auto& m : code.z_stabilizer_masks) {
            if (residual.x().dot(m)) return false;
        }
        return !residual.x().dot(code.logical_z_mask);
    }
    for (const auto& m : code.x_stabilizer_masks) {
        if (residual.z().dot(m)) return false;
    }
    return !residual.z().dot(code.logical_x_mask);
}

}  // namespace hhqec
