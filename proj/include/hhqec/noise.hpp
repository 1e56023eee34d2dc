#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hhqec/circuit.hpp"

namespace hhqec {

/// The five error sources of the circuit-level model.
enum class ErrorSource : std::uint8_t { SingleQubitGate, Init, Idle, Readout, TwoQubitGate };
inline constexpr ErrorSource kAllSources[] = {ErrorSource::SingleQubitGate, ErrorSource::Init,
                                              ErrorSource::Idle, ErrorSource::Readout,
                                              ErrorSource::TwoQubitGate};
std::string to_string(ErrorSource s);

struct QubitRates {
    double p_1q = 0;
    double p_init = 0;
    double p_idle = 0;
    double p_readout = 0;
    bool operator==(const QubitRates&) const = default;
};

/// Per-location error probabilities. Qubits and couplings without an explicit entry
/// fall back to `fallback` / `fallback_2q` when those are set; a device-derived model
/// has no fallback and must cover every location it is resolved against.
struct NoiseModel {
    std::map<std::uint32_t, QubitRates> qubits;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> couplings;  ///< keyed (min, max)
    std::optional<QubitRates> fallback;
    std::optional<double> fallback_2q;

    QubitRates qubit_rates(std::uint32_t q) const;
    double coupling_rate(std::uint32_t a, std::uint32_t b) const;
    bool operator==(const NoiseModel&) const = default;
};

/// All five sources at rate p everywhere.
NoiseModel uniform_model(double p);
/// Only `source` active, at rate p everywhere.
NoiseModel single_source_model(ErrorSource source, double p);

/// Error probability of every op in `circuit` under `model`, and the source it belongs to.
std::vector<double> resolve_rates(const MemoryCircuit& circuit, const NoiseModel& model);
ErrorSource source_of(EventKind kind);

/// A fault attached to op `site`. For 1q/init/idle sites `code` is a Pauli (1..3);
/// for CNOT sites it packs two Paulis as control | (target << 2), 1..15;
/// for readout sites it is 1 (classical flip).
struct Fault {
    std::uint32_t site;
    std::uint8_t code;
    bool operator==(const Fault&) const = default;
};

struct FaultPattern {
    std::vector<Fault> faults;  ///< sorted by site
    bool empty() const { return faults.empty(); }
    bool operator==(const FaultPattern&) const = default;
};

/// Number of distinct non-trivial fault codes at an op of this kind.
int fault_code_count(EventKind kind);

/// Samples fault patterns for a fixed circuit and model.
///
/// Uses geometric skipping at the largest site rate and thins each candidate to its
/// own rate, so the cost scales with the number of faults rather than sites.
class FaultSampler {
  public:
    FaultSampler(const MemoryCircuit& circuit, const NoiseModel& model);

    FaultPattern sample(std::mt19937_64& rng) const;
    const std::vector<double>& rates() const { return rates_; }

  private:
    std::vector<double> rates_;
    std::vector<std::uint8_t> code_counts_;
    double max_rate_ = 0;
};

FaultPattern sample_faults(const MemoryCircuit& circuit, const NoiseModel& model, std::mt19937_64& rng);

/// Deterministic per-stream seed: mixes a base seed with a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hhqec
