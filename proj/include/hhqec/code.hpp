#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhqec/pauli.hpp"
#include "hhqec/schedule.hpp"

namespace hhqec {

enum class QubitRole : std::uint8_t { Data, Flag, Measure };

/// Lattice position. Data qubits sit at integer (row, col) with 1 <= row, col <= d;
/// flags sit half a row below their upper data neighbour, measure qubits half a row
/// and half a column below-right of their left flag.
struct Coord {
    double row = 0;
    double col = 0;
    bool operator==(const Coord&) const = default;
};

struct Qubit {
    std::uint32_t index = 0;
    QubitRole role = QubitRole::Data;
    Coord coord;
};

/// Z-type gauge Z_{i,j} Z_{i+1,j}, measured on the flag between the two data qubits.
struct ZGauge {
    PauliOperator op;
    std::uint32_t ancilla;
    int row;  ///< i
    int col;  ///< j
};

/// X-type gauge: weight four in the bulk, weight two on the top and bottom boundaries.
/// Measured by one measure qubit and its two flags.
struct XGauge {
    PauliOperator op;
    std::uint32_t measure;
    std::uint32_t left_flag;
    std::uint32_t right_flag;
    int row;  ///< i of the top-left corner; 0 or d on the boundary
    int col;  ///< j of the left column
};

struct Stabilizer {
    PauliOperator op;
    std::vector<std::uint32_t> gauges;  ///< indices into the matching gauge list
};

/// Distance-d heavy-hexagon subsystem code with boundaries matching the device bulk.
///
/// Data qubits occupy indices [0, d^2) in row-major order, so data-only Pauli frames
/// and full-register frames agree on their first d^2 entries.
struct HeavyHexCode {
    int d = 0;
    std::vector<Qubit> qubits;
    std::vector<ZGauge> z_gauges;
    std::vector<XGauge> x_gauges;
    /// Syndrome layout puts all Z stabilizers first, then the X stabilizers.
    std::vector<Stabilizer> z_stabilizers;
    std::vector<Stabilizer> x_stabilizers;
    PauliOperator logical_x;
    PauliOperator logical_z;
    MeasurementSchedule schedule;
    /// Data-register supports, cached for the hot syndrome paths.
    std::vector<BitVector> z_stabilizer_masks;
    std::vector<BitVector> x_stabilizer_masks;
    BitVector logical_x_mask;
    BitVector logical_z_mask;

    std::size_t num_qubits() const { return qubits.size(); }
    std::size_t num_data() const { return static_cast<std::size_t>(d) * static_cast<std::size_t>(d); }
    std::size_t num_stabilizers() const { return z_stabilizers.size() + x_stabilizers.size(); }
    /// Row-major data index for 1-based (i, j).
    std::uint32_t data_index(int i, int j) const {
        return static_cast<std::uint32_t>((i - 1) * d + (j - 1));
    }
    /// Coupling graph edges (every CNOT pair in the schedule), each stored with a < b.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> couplings() const;
};

/// Stabilizer count per cycle, (d^2 + 2d - 3) / 2.
inline std::size_t stabilizers_per_cycle(int d) {
    return static_cast<std::size_t>((d * d + 2 * d - 3) / 2);
}

/// Builds the code for odd 3 <= d <= 13. Throws std::invalid_argument otherwise.
HeavyHexCode build_code(int d);

/// Gauge-measurement cycle: Z round (4 steps) then X round (7 steps).
MeasurementSchedule build_schedule(const HeavyHexCode& code);

/// Bit k is 1 iff `frame` anticommutes with stabilizer k (Z stabilizers first).
/// Accepts data-register frames, or full-register frames that are identity off the data.
BitVector static_syndrome(const HeavyHexCode& code, const PauliFrame& frame);

/// Maps +-1 eigenvalues to syndrome bits (-1 -> 1, +1 -> 0).
BitVector eigenvalues_to_bits(const std::vector<int>& eigenvalues);

/// True iff `frame` is an element of the gauge group (up to phase).
bool in_gauge_group(const HeavyHexCode& code, const PauliFrame& frame);

/// Qubits, generators as sparse Pauli lists and the schedule's timesteps.
std::string code_to_json(const HeavyHexCode& code);

}  // namespace hhqec
