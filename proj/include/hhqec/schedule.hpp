#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hhqec {

enum class Basis : std::uint8_t { Z = 0, X = 1 };

enum class EventKind : std::uint8_t {
    Init,      ///< reset q into the +1 eigenstate of `basis`
    Cnot,      ///< control q0, target q1
    Measure,   ///< measure q in `basis`; produces one measurement record
    Idle,
    Hadamard,  ///< single-qubit gate
};

/// What a measurement record inside one syndrome cycle reports.
enum class RecordKind : std::uint8_t { ZGauge, XGauge, Flag, Data };

struct Event {
    EventKind kind = EventKind::Idle;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;
    Basis basis = Basis::Z;
    /// For Measure events: index into MeasurementSchedule::records (or the data-qubit
    /// index for the final transversal readout).
    std::uint32_t record = 0;

    static Event init(std::uint32_t q, Basis b) { return {EventKind::Init, q, 0, b, 0}; }
    static Event cnot(std::uint32_t c, std::uint32_t t) { return {EventKind::Cnot, c, t, Basis::Z, 0}; }
    static Event measure(std::uint32_t q, Basis b, std::uint32_t rec) {
        return {EventKind::Measure, q, 0, b, rec};
    }
    static Event idle(std::uint32_t q) { return {EventKind::Idle, q, 0, Basis::Z, 0}; }
    static Event hadamard(std::uint32_t q) { return {EventKind::Hadamard, q, 0, Basis::Z, 0}; }
};

using Timestep = std::vector<Event>;

struct MeasurementRecord {
    RecordKind kind;
    std::uint32_t index;  ///< gauge index, or qubit index for flags
};

/// One full gauge-measurement cycle: a round of Z gauges followed by a round of X gauges.
struct MeasurementSchedule {
    std::vector<Timestep> steps;
    std::vector<MeasurementRecord> records;
    std::size_t num_qubits = 0;

    std::size_t cycle_length() const { return steps.size(); }
};

}  // namespace hhqec
