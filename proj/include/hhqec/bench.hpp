#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhqec/circuit.hpp"
#include "hhqec/code.hpp"
#include "hhqec/mlp.hpp"
#include "hhqec/noise.hpp"

namespace hhqec {

enum class DecoderKind : std::uint8_t { Mwpm, Ann };
std::string to_string(DecoderKind k);
DecoderKind decoder_from_string(const std::string& s);

/// Inverse standard normal CDF.
double probit(double q);

struct Interval {
    double low = 0;
    double high = 0;
};

/// Normal-approximation interval p +- probit(level) sqrt(p (1 - p) / n), clamped to [0, 1].
Interval wald_interval(long failures, long shots, double level = 0.975);

struct SweepRow {
    int distance = 0;
    MemoryBasis basis = MemoryBasis::MemX;
    DecoderKind decoder = DecoderKind::Mwpm;
    std::string noise = "uniform";
    double p = 0;
    long shots = 0;
    long failures = 0;  ///< includes declared failures
    long declared_failures = 0;
    double ler = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::uint64_t seed = 0;
};

std::string csv_header();
std::string to_csv(const SweepRow& row);
std::string to_json(const SweepRow& row);

/// One (code, noise, decoder) point of a logical-error-rate estimate.
struct PointSpec {
    int d = 3;
    MemoryBasis basis = MemoryBasis::MemX;
    DecoderKind decoder = DecoderKind::Mwpm;
    NoiseModel model;
    std::string noise = "uniform";
    double p = 0;
    long shots = 10000;
    std::uint64_t seed = 0;
    /// Seed reported in the row; defaults to `seed`.
    std::optional<std::uint64_t> report_seed;
    const Mlp* mlp = nullptr;
    int max_resamples = 100;
    bool unit_weights = false;
    double ci_level = 0.975;
};

/// Runs `shots` memory experiments over d cycles. Shot i draws its faults from the
/// stream derive_seed(seed, i).
SweepRow logical_error_rate(const HeavyHexCode& code, const PointSpec& spec);

/// Log-spaced values from "lo:hi:count", or an explicit comma-separated list.
std::vector<double> parse_p_values(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);

struct Crossover {
    int d_low = 0;
    int d_high = 0;
    std::optional<double> p;
};

/// First p at which the larger code stops beating the smaller one, by linear
/// interpolation of log(ler) against log(p). Points with a zero rate are skipped.
std::optional<double> estimate_crossover(const std::vector<double>& p, const std::vector<double>& ler_small,
                                         const std::vector<double>& ler_large);

struct SweepConfig {
    std::vector<int> distances;
    std::vector<double> p_values;
    long shots = 10000;
    DecoderKind decoder = DecoderKind::Mwpm;
    MemoryBasis basis = MemoryBasis::MemX;
    std::uint64_t seed = 0;
    bool unit_weights = false;
    int max_resamples = 100;
    double ci_level = 0.975;
    /// Trained networks by distance, required for the ANN decoder.
    std::map<int, const Mlp*> models;

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Adjacent distance pairs in increasing order; the first is the two lowest distances.
    std::vector<Crossover> crossovers;
    double runtime_seconds = 0;
};

SweepResult threshold_sweep(const SweepConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_summary_json(const SweepConfig& config, const SweepResult& result);

}  // namespace hhqec
