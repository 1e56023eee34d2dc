#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hhqec/code.hpp"

namespace hhqec {

/// Which logical observable the memory experiment protects.
/// MemZ prepares |0...0> and reads Z (sensitive to X chains); MemX prepares |+...+>.
enum class MemoryBasis : std::uint8_t { MemZ = 0, MemX = 1 };

std::string to_string(MemoryBasis b);
MemoryBasis memory_basis_from_string(const std::string& s);

/// One operation of the unrolled experiment. Every op is also a fault location.
struct FlatOp {
    EventKind kind;
    Basis basis;
    std::uint32_t q0;
    std::uint32_t q1;
    std::uint32_t meas;  ///< global measurement index for Measure ops
};

/// Memory experiment unrolled into a flat op list:
///   data reset (+ transversal H for MemX), `cycles` gauge cycles,
///   (transversal H for MemX), transversal Z readout of the data.
struct MemoryCircuit {
    int d = 0;
    MemoryBasis basis = MemoryBasis::MemZ;
    int cycles = 0;
    std::size_t num_qubits = 0;
    std::size_t num_data = 0;
    std::size_t records_per_cycle = 0;
    std::size_t num_measurements = 0;
    std::vector<FlatOp> ops;
    /// ops[step_begin[t] .. step_begin[t+1]) form timestep t.
    std::vector<std::size_t> step_begin;
    /// Index of the first timestep of the first cycle.
    std::size_t first_cycle_step = 0;

    std::size_t num_steps() const { return step_begin.size() - 1; }
    std::size_t final_measurement(std::size_t data_qubit) const {
        return static_cast<std::size_t>(cycles) * records_per_cycle + data_qubit;
    }
};

MemoryCircuit build_memory_circuit(const HeavyHexCode& code, MemoryBasis basis, int cycles);

}  // namespace hhqec
