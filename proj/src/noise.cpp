#include "hhqec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hhqec {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be a probability in [0, 1]");
    }
}

double rate_for(const QubitRates& r, ErrorSource s) {
    switch (s) {
        case ErrorSource::SingleQubitGate: return r.p_1q;
        case ErrorSource::Init: return r.p_init;
        case ErrorSource::Idle: return r.p_idle;
        case ErrorSource::Readout: return r.p_readout;
        case ErrorSource::TwoQubitGate: break;
    }
    return 0.0;
}

}  // namespace

std::string to_string(ErrorSource s) {
    switch (s) {
        case ErrorSource::SingleQubitGate: return "single_qubit_gate";
        case ErrorSource::Init: return "init";
        case ErrorSource::Idle: return "idle";
        case ErrorSource::Readout: return "readout";
        case ErrorSource::TwoQubitGate: return "two_qubit_gate";
    }
    return "?";
}

QubitRates NoiseModel::qubit_rates(std::uint32_t q) const {
    if (auto it = qubits.find(q); it != qubits.end()) return it->second;
    if (fallback) return *fallback;
    throw std::out_of_range("noise model has no rates for qubit " + std::to_string(q));
}

double NoiseModel::coupling_rate(std::uint32_t a, std::uint32_t b) const {
    if (auto it = couplings.find({std::min(a, b), std::max(a, b)}); it != couplings.end()) return it->second;
    if (fallback_2q) return *fallback_2q;
    throw std::out_of_range("noise model has no two-qubit rate for coupling (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")");
}

NoiseModel uniform_model(double p) {
    check_probability(p, "uniform noise rate");
    NoiseModel m;
    m.fallback = QubitRates{p, p, p, p};
    m.fallback_2q = p;
    return m;
}

NoiseModel single_source_model(ErrorSource source, double p) {
    check_probability(p, "noise rate");
    NoiseModel m;
    QubitRates r;
    switch (source) {
        case ErrorSource::SingleQubitGate: r.p_1q = p; break;
        case ErrorSource::Init: r.p_init = p; break;
        case ErrorSource::Idle: r.p_idle = p; break;
        case ErrorSource::Readout: r.p_readout = p; break;
        case ErrorSource::TwoQubitGate: break;
    }
    m.fallback = r;
    m.fallback_2q = source == ErrorSource::TwoQubitGate ? p : 0.0;
    return m;
}

ErrorSource source_of(EventKind kind) {
    switch (kind) {
        case EventKind::Init: return ErrorSource::Init;
        case EventKind::Cnot: return ErrorSource::TwoQubitGate;
        case EventKind::Measure: return ErrorSource::Readout;
        case EventKind::Idle: return ErrorSource::Idle;
        case EventKind::Hadamard: return ErrorSource::SingleQubitGate;
    }
    return ErrorSource::Idle;
}

int fault_code_count(EventKind kind) {
    switch (kind) {
        case EventKind::Cnot: return 15;
        case EventKind::Measure: return 1;
        default: return 3;
    }
}

std::vector<double> resolve_rates(const MemoryCircuit& circuit, const NoiseModel& model) {
    std::vector<double> rates(circuit.ops.size());
    for (std::size_t k = 0; k < circuit.ops.size(); ++k) {
        const auto& op = circuit.ops[k];
        double p = op.kind == EventKind::Cnot ? model.coupling_rate(op.q0, op.q1)
                                              : rate_for(model.qubit_rates(op.q0), source_of(op.kind));
        check_probability(p, "resolved error rate");
        rates[k] = p;
    }
    return rates;
}

FaultSampler::FaultSampler(const MemoryCircuit& circuit, const NoiseModel& model)
    : rates_(resolve_rates(circuit, model)) {
    code_counts_.reserve(circuit.ops.size());
    for (const auto& op : circuit.ops) code_counts_.push_back(static_cast<std::uint8_t>(fault_code_count(op.kind)));
    for (double r : rates_) max_rate_ = std::max(max_rate_, r);
}

FaultPattern FaultSampler::sample(std::mt19937_64& rng) const {
    FaultPattern pattern;
    if (max_rate_ <= 0.0) return pattern;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = rates_.size();
    const bool dense = max_rate_ >= 0.25;
    const double log_q = dense ? 0.0 : std::log1p(-max_rate_);

    std::size_t site = 0;
    while (true) {
        if (!dense) {
            const double u = 1.0 - unif(rng);  // (0, 1]
            const double skip = std::floor(std::log(u) / log_q);
            if (skip >= static_cast<double>(n - site)) break;
            site += static_cast<std::size_t>(skip);
        }
        if (site >= n) break;
        const double r = rates_[site];
        const bool hit = dense ? unif(rng) < r : (r >= max_rate_ || unif(rng) * max_rate_ < r);
        if (hit) {
            std::uniform_int_distribution<int> pick(1, code_counts_[site]);
            pattern.faults.push_back({static_cast<std::uint32_t>(site), static_cast<std::uint8_t>(pick(rng))});
        }
        ++site;
    }
    return pattern;
}

FaultPattern sample_faults(const MemoryCircuit& circuit, const NoiseModel& model, std::mt19937_64& rng) {
    return FaultSampler(circuit, model).sample(rng);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over a combination of both inputs
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace hhqec
