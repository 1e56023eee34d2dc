#include "hhqec/circuit.hpp"

#include <stdexcept>

namespace hhqec {

std::string to_string(MemoryBasis b) { return b == MemoryBasis::MemX ? "memx" : "memz"; }

MemoryBasis memory_basis_from_string(const std::string& s) {
    if (s == "memx" || s == "MemX" || s == "x" || s == "X") return MemoryBasis::MemX;
    if (s == "memz" || s == "MemZ" || s == "z" || s == "Z") return MemoryBasis::MemZ;
    throw std::invalid_argument("unknown memory basis '" + s + "' (expected memx or memz)");
}

namespace {

class CircuitBuilder {
  public:
    CircuitBuilder(MemoryCircuit& c) : c_(c) { c_.step_begin.push_back(0); }

    void push_step(const Timestep& step, std::size_t meas_offset) {
        for (const auto& e : step) {
            std::uint32_t meas = 0;
            if (e.kind == EventKind::Measure) meas = static_cast<std::uint32_t>(meas_offset + e.record);
            c_.ops.push_back({e.kind, e.basis, e.q0, e.q1, meas});
        }
        c_.step_begin.push_back(c_.ops.size());
    }

    /// Applies `make` to every data qubit and idles the ancillas.
    template <typename F>
    void push_data_layer(F make) {
        Timestep step;
        for (std::uint32_t q = 0; q < c_.num_qubits; ++q) {
            step.push_back(q < c_.num_data ? make(q) : Event::idle(q));
        }
        push_step(step, c_.final_measurement(0));
    }

  private:
    MemoryCircuit& c_;
};

}  // namespace

MemoryCircuit build_memory_circuit(const HeavyHexCode& code, MemoryBasis basis, int cycles) {
    if (cycles < 1) throw std::invalid_argument("a memory experiment needs at least one cycle");
    MemoryCircuit c;
    c.d = code.d;
    c.basis = basis;
    c.cycles = cycles;
    c.num_qubits = code.num_qubits();
    c.num_data = code.num_data();
    c.records_per_cycle = code.schedule.records.size();
    c.num_measurements = static_cast<std::size_t>(cycles) * c.records_per_cycle + c.num_data;

    CircuitBuilder b(c);
    b.push_data_layer([](std::uint32_t q) { return Event::init(q, Basis::Z); });
    if (basis == MemoryBasis::MemX) b.push_data_layer([](std::uint32_t q) { return Event::hadamard(q); });
    c.first_cycle_step = c.num_steps();
    for (int k = 0; k < cycles; ++k) {
        for (const auto& step : code.schedule.steps) b.push_step(step, static_cast<std::size_t>(k) * c.records_per_cycle);
    }
    if (basis == MemoryBasis::MemX) b.push_data_layer([](std::uint32_t q) { return Event::hadamard(q); });
    b.push_data_layer([](std::uint32_t q) { return Event::measure(q, Basis::Z, q); });
    return c;
}

}  // namespace hhqec
