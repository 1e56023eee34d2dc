#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "hhqec/circuit.hpp"
#include "hhqec/code.hpp"
#include "hhqec/noise.hpp"
#include "hhqec/pauli.hpp"

namespace hhqec {

/// Stabilizer family used for decoding. Z stabilizers see X chains (MemZ);
/// the Bacon-Shor X stabilizers see Z chains (MemX).
enum class ChainType : std::uint8_t { XChains = 0, ZChains = 1 };

inline ChainType chain_type_for(MemoryBasis b) {
    return b == MemoryBasis::MemZ ? ChainType::XChains : ChainType::ZChains;
}

/// Outcome of one memory experiment. Measurement bits are flips relative to the
/// noiseless execution, so a noiseless run records all zeros (+1 eigenvalues).
struct ShotRecord {
    MemoryBasis basis = MemoryBasis::MemZ;
    int cycles = 0;
    /// Per cycle: Z gauges then X gauges.
    std::vector<BitVector> gauge_outcomes;
    /// Per cycle: the X-round flag measurements, in schedule order.
    std::vector<BitVector> flag_outcomes;
    /// Per cycle: Z stabilizers then X stabilizers (gauge-product reductions).
    std::vector<BitVector> stabilizer_outcomes;
    /// Per cycle, same layout as stabilizer_outcomes. For the stabilizer type matching the
    /// memory basis, row 0 is the outcome itself; the other type starts at row 1.
    std::vector<BitVector> detection_events;
    /// Basis-type stabilizers rebuilt from the transversal readout.
    BitVector reconstructed_syndrome;
    /// reconstructed_syndrome XOR the last measured row, basis-type entries only.
    BitVector final_events;
    BitVector final_data_readout;
    /// Accumulated data error at readout, with readout flips folded in as the
    /// basis-type Pauli (X for MemZ, Z for MemX).
    PauliFrame true_frame;

    /// Parity of the readout over the basis logical's support.
    bool observable_flip(const HeavyHexCode& code) const;
};

/// Propagates a fault pattern through the circuit.
ShotRecord simulate(const HeavyHexCode& code, const MemoryCircuit& circuit, const FaultPattern& faults);

/// Samples faults from `model` and simulates one memory experiment.
ShotRecord run_memory(const HeavyHexCode& code, const MemoryCircuit& circuit, const NoiseModel& model,
                      std::mt19937_64& rng);
ShotRecord run_memory(const HeavyHexCode& code, MemoryBasis basis, int cycles, const NoiseModel& model,
                      std::mt19937_64& rng);

/// Flattened detector bits of one family: index k * n_family + s for cycle row k and
/// family-local stabilizer s; row `cycles` holds the final (readout) comparison.
BitVector family_detectors(const HeavyHexCode& code, const ShotRecord& shot, ChainType family);
std::size_t family_size(const HeavyHexCode& code, ChainType family);
/// Offset of the family's first stabilizer in the syndrome layout.
std::size_t family_offset(const HeavyHexCode& code, ChainType family);

/// E_c * E in the gauge group, restricted to the error type the basis is sensitive to:
/// the residual's relevant component must have trivial syndrome on the detecting
/// stabilizers and commute with the basis logical.
bool correction_succeeds(const HeavyHexCode& code, const PauliFrame& true_frame, const PauliFrame& correction,
                         MemoryBasis basis);

}  // namespace hhqec
