#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "hhqec/circuit.hpp"
#include "hhqec/code.hpp"
#include "hhqec/mlp.hpp"
#include "hhqec/noise.hpp"
#include "hhqec/sim.hpp"

namespace hhqec {

std::size_t ann_input_size(int d);
std::size_t ann_output_size(int d);

/// Network input for a shot: one row of stabilizer bits (Z then X) per cycle.
/// Stabilizers of the type opposite to the memory basis are XORed with their first-cycle
/// value; in the last row the basis-type entries hold the readout-reconstructed syndrome.
BitVector ann_input(const HeavyHexCode& code, const ShotRecord& shot);

/// Interleaved label: bit 2q is the X component on data qubit q, bit 2q+1 the Z component.
BitVector ann_label(const PauliFrame& frame);
PauliFrame frame_from_label(const BitVector& label);

/// Basis-type stabilizer bits of a data frame (the part checkable against the readout).
BitVector basis_syndrome(const HeavyHexCode& code, const PauliFrame& frame, MemoryBasis basis);
/// Basis-type entries of the shot's readout-reconstructed syndrome.
BitVector final_syndrome(const HeavyHexCode& code, const ShotRecord& shot);

/// Reduces a data frame to a fixed representative of its coset modulo the gauge group:
/// the X part modulo the X gauges, the Z part modulo the Z gauges.
class GaugeReducer {
  public:
    explicit GaugeReducer(const HeavyHexCode& code);
    PauliFrame reduce(const PauliFrame& frame) const;

  private:
    struct Basis {
        std::vector<BitVector> rows;
        std::vector<std::size_t> pivots;
        void insert(BitVector v);
        BitVector reduce(BitVector v) const;
    };
    Basis x_;
    Basis z_;
};

struct TrainingExample {
    MemoryBasis basis = MemoryBasis::MemZ;
    BitVector input;
    BitVector label;
};

/// Streams training examples. Example i is drawn from the stream derive_seed(seed, i),
/// so any prefix of the stream is reproducible on its own.
class DatasetGenerator {
  public:
    /// With `canonical_labels` the label is the gauge-reduced true frame.
    DatasetGenerator(const HeavyHexCode& code, MemoryBasis basis, int cycles, const NoiseModel& model,
                     std::uint64_t seed, bool canonical_labels = true);

    TrainingExample next();
    std::uint64_t produced() const { return index_; }

  private:
    const HeavyHexCode& code_;
    MemoryCircuit circuit_;
    FaultSampler sampler_;
    GaugeReducer reducer_;
    std::uint64_t seed_;
    bool canonical_;
    std::uint64_t index_ = 0;
};

/// Materialises `count` examples as column-per-example matrices.
void generate_dataset(DatasetGenerator& gen, std::size_t count, Eigen::MatrixXd& inputs, Eigen::MatrixXd& labels);

void write_example_jsonl(std::ostream& out, const TrainingExample& ex);
TrainingExample parse_example_jsonl(const std::string& line);

Eigen::VectorXd to_eigen(const BitVector& bits);

struct AnnDecodeResult {
    bool declared_failure = false;
    PauliFrame correction;
    int resamples = 0;
};

/// Thresholds the network output at 0.5; if the correction's basis syndrome disagrees with
/// `target`, redraws every bit as a Bernoulli trial with the network's probabilities up to
/// `max_resamples` times. No consistent draw yields a declared failure.
AnnDecodeResult decode_ann_probabilities(const HeavyHexCode& code, const Eigen::VectorXd& probabilities,
                                         const BitVector& target, MemoryBasis basis, int max_resamples,
                                         std::mt19937_64& rng);
AnnDecodeResult decode_ann(const HeavyHexCode& code, const Mlp& mlp, const BitVector& input, const BitVector& target,
                           MemoryBasis basis, int max_resamples, std::mt19937_64& rng);
AnnDecodeResult decode_ann(const HeavyHexCode& code, const Mlp& mlp, const ShotRecord& shot, int max_resamples,
                           std::mt19937_64& rng);

}  // namespace hhqec
