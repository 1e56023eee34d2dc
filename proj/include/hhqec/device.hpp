#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hhqec/code.hpp"
#include "hhqec/noise.hpp"

namespace hhqec {

struct DeviceQubit {
    std::uint32_t id = 0;
    double sq_error = 0;
    double init_error = 0;
    double idle_error = 0;
    double readout_error = 0;
};

struct DeviceCoupling {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double twoq_error = 0;
};

/// Per-qubit and per-coupling error rates of a device.
struct DeviceCalibration {
    std::string device_name;
    std::vector<DeviceQubit> qubits;
    std::vector<DeviceCoupling> couplings;

    /// Checks rates in [0, 1], unique ids, known coupling endpoints, no self or duplicate
    /// couplings and degree <= 3. Throws std::invalid_argument.
    void validate() const;
};

/// Lookup tables over a validated calibration.
class DeviceIndex {
  public:
    explicit DeviceIndex(const DeviceCalibration& cal);

    /// Throws std::out_of_range for unknown ids or uncoupled pairs.
    const DeviceQubit& qubit(std::uint32_t id) const;
    double twoq_error(std::uint32_t a, std::uint32_t b) const;
    bool coupled(std::uint32_t a, std::uint32_t b) const;
    /// Sorted neighbour ids.
    const std::vector<std::uint32_t>& neighbours(std::uint32_t id) const;
    const std::vector<std::uint32_t>& ids() const { return ids_; }

  private:
    std::vector<std::uint32_t> ids_;
    std::map<std::uint32_t, DeviceQubit> qubits_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> couplings_;
    std::map<std::uint32_t, std::vector<std::uint32_t>> adj_;
};

DeviceCalibration calibration_from_json(const std::string& text);
std::string calibration_to_json(const DeviceCalibration& cal);
DeviceCalibration load_calibration(const std::string& path);
void save_calibration(const DeviceCalibration& cal, const std::string& path);

/// Heavy-hex lattice with `rows` rows of `row_length` qubits joined by bridge qubits
/// every fourth column (offset by two on alternate rows). The first row drops its last
/// qubit and the last row its first. 7 x 15 gives 127 qubits, 13 x 27 gives 433.
DeviceCalibration synthetic_heavy_hex(int rows, int row_length, double rate);
/// Synthetic device with 127 or 433 qubits. When `jitter` > 0 each rate is drawn
/// log-uniformly in [rate / (1 + jitter), rate * (1 + jitter)].
DeviceCalibration synthetic_device(int num_qubits, double rate, double jitter, std::uint64_t seed);

struct SubgraphPlacement {
    /// Device qubit id for each code qubit index.
    std::vector<std::uint32_t> device_qubit;
    double score = 0;

    std::uint32_t anchor() const;  ///< smallest device id in the image
};

/// All injective edge-preserving embeddings of the code's coupling graph into the device,
/// one per distinct image set, sorted by smallest device id (then image set).
std::vector<SubgraphPlacement> enumerate_placements(const DeviceCalibration& cal, const HeavyHexCode& code);

/// Noise model over the code's qubits with rates copied from the mapped device entries.
NoiseModel device_model(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement);

struct InfluenceWeights {
    double w_1q = 1;
    double w_init = 17;
    double w_idle = 41;
    double w_readout = 65;
    double w_2q = 100;
};

/// Mean rate of each source over the placement's qubits and couplings.
struct SourceMeans {
    double sq = 0;
    double init = 0;
    double idle = 0;
    double readout = 0;
    double twoq = 0;
    double overall() const { return (sq + init + idle + readout + twoq) / 5; }
};

SourceMeans placement_means(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement);
double score_placement(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement,
                       const InfluenceWeights& weights);
/// Scores every placement and orders them by score; ties keep enumeration order.
std::vector<SubgraphPlacement> rank_placements(const DeviceCalibration& cal, const HeavyHexCode& code,
                                               const InfluenceWeights& weights);

struct InfluenceEstimate {
    InfluenceWeights weights;
    /// Logical error rate per source, in ErrorSource order.
    std::vector<double> ler;
    std::vector<long> failures;
};

/// Runs MWPM-decoded memory experiments with one error source active at a time and
/// normalises each source's logical error rate by the single-qubit-gate source.
/// Throws std::runtime_error if the single-qubit-gate source records no failures.
InfluenceEstimate estimate_influence_weights(const HeavyHexCode& code, double base_p, long shots, MemoryBasis basis,
                                             std::uint64_t seed);

}  // namespace hhqec
