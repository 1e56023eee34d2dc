#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hhqec/circuit.hpp"
#include "hhqec/code.hpp"
#include "hhqec/noise.hpp"
#include "hhqec/pauli.hpp"
#include "hhqec/sim.hpp"

namespace hhqec {

struct DetectorEdge {
    std::uint32_t u;
    std::uint32_t v;  ///< may be the boundary node
    double probability;
    double weight;
    /// Basis-relevant data error of the representative fault (X part for XChains, Z part for ZChains).
    BitVector payload;
    std::size_t num_faults;
};

/// Edge available only in shots where every flag in `flags` fired. Its weight is
/// conditioned on those flags having fired.
struct FlaggedEdge {
    std::vector<std::uint32_t> flags;  ///< flag detectors, cycle * flags_per_cycle + f
    std::uint32_t u;
    std::uint32_t v;
    double probability;
    double weight;
    BitVector payload;
    std::size_t num_faults;
};

struct DetectorGraphOptions {
    bool unit_weights = false;
};

/// Matching graph over one detector family of a memory experiment.
///
/// Detector k * n_family + s is stabilizer s in row k (see family_detectors); the
/// boundary node is num_detectors. All-pairs shortest paths are precomputed at build time.
class DetectorGraph {
  public:
    ChainType family = ChainType::XChains;
    MemoryBasis basis = MemoryBasis::MemZ;
    int d = 0;
    int cycles = 0;
    std::size_t num_data = 0;
    std::size_t family_size = 0;
    std::size_t num_detectors = 0;
    bool unit_weights = false;
    std::vector<DetectorEdge> edges;
    std::size_t flags_per_cycle = 0;
    std::vector<FlaggedEdge> flagged_edges;
    /// Single faults that flip the logical without firing any detector of this family.
    std::size_t undetectable_logical_faults = 0;

    std::uint32_t boundary() const { return static_cast<std::uint32_t>(num_detectors); }
    std::size_t num_nodes() const { return num_detectors + 1; }

    double distance(std::uint32_t a, std::uint32_t b) const { return dist_[a * num_nodes() + b]; }
    /// Shortest-path weight in fixed-point units; kUnreachable if disconnected.
    std::int64_t int_distance(std::uint32_t a, std::uint32_t b) const { return idist_[a * num_nodes() + b]; }
    /// XOR of payloads along the shortest path from a to b.
    BitVector path_payload(std::uint32_t a, std::uint32_t b) const;

    static constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();
    static constexpr double kScale = 1 << 20;

    void finalize();

    struct Arc {
        std::uint32_t to;
        std::int64_t w;
        std::uint32_t edge;  ///< index into edges
    };
    const std::vector<std::vector<Arc>>& adjacency() const { return adj_; }

  private:
    std::vector<std::vector<Arc>> adj_;
    std::vector<double> dist_;
    std::vector<std::int64_t> idist_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> payload_;
};

/// Enumerates every single fault of the circuit with nonzero probability, simulates it,
/// and groups faults by their detector signature in `family`. Faults that also trip
/// flag qubits are grouped separately by (flags, signature) into flagged edges.
/// Throws std::runtime_error if a fault fires more than two detectors of the family.
DetectorGraph build_detector_graph(const HeavyHexCode& code, const MemoryCircuit& circuit, const NoiseModel& model,
                                   ChainType family, const DetectorGraphOptions& options = {});
DetectorGraph build_detector_graph(const HeavyHexCode& code, const NoiseModel& model, int cycles, MemoryBasis basis,
                                   const DetectorGraphOptions& options = {});

struct MatchResult {
    BitVector payload;
    std::int64_t weight = 0;
    /// Matched node pairs in graph coordinates (second may be the boundary).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};

/// Minimum-weight matching of the fired detectors, with each defect free to match the boundary.
/// Flagged edges whose flags all appear in `fired_flags` are added to the graph for this call.
MatchResult match_defects(const DetectorGraph& graph, const std::vector<std::uint32_t>& defects,
                          const std::vector<std::uint32_t>& fired_flags = {});

/// Flattened flag outcomes of a shot, index cycle * flags_per_cycle + f.
BitVector flag_detectors(const ShotRecord& shot);

/// Correction on the data register for a family detector bit set (and optional flag bits).
PauliFrame decode(const DetectorGraph& graph, const BitVector& detectors);
PauliFrame decode(const DetectorGraph& graph, const BitVector& detectors, const BitVector& flags);
/// Convenience: decode the graph's family from a shot.
PauliFrame decode(const HeavyHexCode& code, const DetectorGraph& graph, const ShotRecord& shot);

std::string detector_graph_json(const DetectorGraph& graph);

}  // namespace hhqec
