#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>

#include "hhqec/device.hpp"

using namespace hhqec;

namespace {

// The code's own coupling graph as a device, qubit ids = code indices.
DeviceCalibration code_as_device(const HeavyHexCode& code, double rate) {
    DeviceCalibration cal;
    cal.device_name = "code";
    for (std::uint32_t q = 0; q < code.num_qubits(); ++q) cal.qubits.push_back({q, rate, rate, rate, rate});
    for (const auto& [a, b] : code.couplings()) cal.couplings.push_back({a, b, rate});
    return cal;
}

bool connected(const DeviceCalibration& cal) {
    const DeviceIndex idx(cal);
    std::set<std::uint32_t> seen{cal.qubits.front().id};
    std::queue<std::uint32_t> q;
    q.push(cal.qubits.front().id);
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : idx.neighbours(u)) {
            if (seen.insert(v).second) q.push(v);
        }
    }
    return seen.size() == cal.qubits.size();
}

bool contains(const SubgraphPlacement& p, std::uint32_t id) {
    return std::find(p.device_qubit.begin(), p.device_qubit.end(), id) != p.device_qubit.end();
}

}  // namespace

TEST(DeviceCalibration, ValidateRejectsBadInput) {
    DeviceCalibration ok;
    ok.qubits = {{0, 0.001, 0.001, 0.001, 0.001}, {1, 0.001, 0.001, 0.001, 0.001}};
    ok.couplings = {{0, 1, 0.01}};
    EXPECT_NO_THROW(ok.validate());

    auto bad = ok;
    bad.qubits[0].readout_error = 1.5;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.qubits[1].id = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.couplings.push_back({0, 7, 0.01});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.couplings.push_back({1, 0, 0.01});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = ok;
    bad.couplings.push_back({1, 1, 0.01});
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = ok;
    for (std::uint32_t q = 2; q < 6; ++q) {
        bad.qubits.push_back({q, 0, 0, 0, 0});
        bad.couplings.push_back({0, q, 0.01});
    }
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(DeviceCalibration, JsonRoundTripAndErrors) {
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0.5, 3);
    const DeviceCalibration back = calibration_from_json(calibration_to_json(cal));
    EXPECT_EQ(back.device_name, cal.device_name);
    ASSERT_EQ(back.qubits.size(), cal.qubits.size());
    for (std::size_t k = 0; k < cal.qubits.size(); ++k) {
        EXPECT_EQ(back.qubits[k].id, cal.qubits[k].id);
        EXPECT_DOUBLE_EQ(back.qubits[k].readout_error, cal.qubits[k].readout_error);
    }
    ASSERT_EQ(back.couplings.size(), cal.couplings.size());
    const std::string path = testing::TempDir() + "cal_roundtrip.json";
    save_calibration(cal, path);
    EXPECT_EQ(load_calibration(path).qubits.size(), 127u);
    std::remove(path.c_str());

    EXPECT_THROW(calibration_from_json("not json"), std::invalid_argument);
    EXPECT_THROW(calibration_from_json(R"({"device_name":"x","qubits":[{"id":0}],"couplings":[]})"),
                 std::invalid_argument);
    EXPECT_THROW(calibration_from_json(R"({"device_name":"x","qubits":[{"id":0,"sq_error":1.5,"init_error":0,)"
                                       R"("idle_error":0,"readout_error":0}],"couplings":[]})"),
                 std::invalid_argument);
}

TEST(DeviceIndex, Lookups) {
    const DeviceCalibration cal = synthetic_device(127, 2e-3, 0, 0);
    const DeviceIndex idx(cal);
    const auto& c = cal.couplings.front();
    EXPECT_TRUE(idx.coupled(c.a, c.b));
    EXPECT_TRUE(idx.coupled(c.b, c.a));
    EXPECT_DOUBLE_EQ(idx.twoq_error(c.b, c.a), 2e-3);
    EXPECT_THROW(idx.qubit(999), std::out_of_range);
    EXPECT_THROW(idx.neighbours(999), std::out_of_range);
    EXPECT_EQ(idx.ids().size(), 127u);
}

TEST(DeviceSynthetic, HeavyHexShapes) {
    const DeviceCalibration small = synthetic_device(127, 1e-3, 0, 0);
    EXPECT_EQ(small.qubits.size(), 127u);
    EXPECT_EQ(small.couplings.size(), 144u);
    EXPECT_TRUE(connected(small));
    const DeviceCalibration big = synthetic_device(433, 1e-3, 0, 0);
    EXPECT_EQ(big.qubits.size(), 433u);
    EXPECT_TRUE(connected(big));
    EXPECT_NO_THROW(big.validate());
    // Heavy-hex: no two degree-3 qubits are adjacent.
    const DeviceIndex idx(big);
    for (const auto& c : big.couplings) {
        EXPECT_FALSE(idx.neighbours(c.a).size() == 3 && idx.neighbours(c.b).size() == 3);
    }
    EXPECT_THROW(synthetic_device(100, 1e-3, 0, 0), std::invalid_argument);
}

TEST(DeviceSynthetic, JitterBoundsAndSeeds) {
    const auto a = synthetic_device(127, 1e-3, 1.0, 5);
    const auto b = synthetic_device(127, 1e-3, 1.0, 5);
    const auto c = synthetic_device(127, 1e-3, 1.0, 6);
    bool differs = false;
    for (std::size_t k = 0; k < a.qubits.size(); ++k) {
        EXPECT_EQ(a.qubits[k].idle_error, b.qubits[k].idle_error);
        EXPECT_GE(a.qubits[k].idle_error, 0.5e-3 * (1 - 1e-12));
        EXPECT_LE(a.qubits[k].idle_error, 2e-3 * (1 + 1e-12));
        differs |= a.qubits[k].idle_error != c.qubits[k].idle_error;
    }
    EXPECT_TRUE(differs);
}

TEST(DevicePlacement, CodeGraphEmbedsOnceIntoItself) {
    for (int d : {3, 5}) {
        const HeavyHexCode code = build_code(d);
        const auto placements = enumerate_placements(code_as_device(code, 1e-3), code);
        ASSERT_EQ(placements.size(), 1u);
        std::set<std::uint32_t> image(placements[0].device_qubit.begin(), placements[0].device_qubit.end());
        EXPECT_EQ(image.size(), code.num_qubits());
    }
}

TEST(DevicePlacement, NoCouplingsNoPlacements) {
    DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    cal.couplings.clear();
    EXPECT_TRUE(enumerate_placements(cal, build_code(3)).empty());
}

TEST(DevicePlacement, PlacementsAreDistinctEdgePreservingEmbeddings) {
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    const DeviceIndex idx(cal);
    const HeavyHexCode code = build_code(3);
    const auto placements = enumerate_placements(cal, code);
    ASSERT_FALSE(placements.empty());
    std::set<std::set<std::uint32_t>> images;
    for (const auto& p : placements) {
        ASSERT_EQ(p.device_qubit.size(), code.num_qubits());
        std::set<std::uint32_t> image(p.device_qubit.begin(), p.device_qubit.end());
        EXPECT_EQ(image.size(), code.num_qubits());
        EXPECT_EQ(p.anchor(), *image.begin());
        EXPECT_TRUE(images.insert(image).second);
        for (const auto& [a, b] : code.couplings()) EXPECT_TRUE(idx.coupled(p.device_qubit[a], p.device_qubit[b]));
    }
}

TEST(DevicePlacement, TooLargeCodeHasNoPlacement) {
    EXPECT_TRUE(enumerate_placements(synthetic_device(127, 1e-3, 0, 0), build_code(9)).empty());
}

TEST(DeviceModel, UniformDeviceMatchesUniformModel) {
    const HeavyHexCode code = build_code(3);
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    const auto placements = enumerate_placements(cal, code);
    const NoiseModel dev = device_model(cal, code, placements.front());
    const NoiseModel uni = uniform_model(1e-3);
    for (std::uint32_t q = 0; q < code.num_qubits(); ++q) EXPECT_EQ(dev.qubit_rates(q), uni.qubit_rates(q));
    for (const auto& [a, b] : code.couplings()) EXPECT_EQ(dev.coupling_rate(a, b), uni.coupling_rate(a, b));
    EXPECT_FALSE(dev.fallback.has_value());
}

TEST(DeviceModel, CopiesMappedRates) {
    const HeavyHexCode code = build_code(3);
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0.8, 11);
    const DeviceIndex idx(cal);
    const auto p = enumerate_placements(cal, code)[3];
    const NoiseModel m = device_model(cal, code, p);
    for (std::uint32_t q = 0; q < code.num_qubits(); ++q) {
        EXPECT_EQ(m.qubit_rates(q).p_readout, idx.qubit(p.device_qubit[q]).readout_error);
        EXPECT_EQ(m.qubit_rates(q).p_1q, idx.qubit(p.device_qubit[q]).sq_error);
    }
    for (const auto& [a, b] : code.couplings()) {
        EXPECT_EQ(m.coupling_rate(a, b), idx.twoq_error(p.device_qubit[a], p.device_qubit[b]));
    }
}

TEST(DeviceModel, MissingCouplingIsAnError) {
    const HeavyHexCode code = build_code(3);
    DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    auto p = enumerate_placements(cal, code).front();
    const auto [a, b] = code.couplings().front();
    const std::uint32_t da = p.device_qubit[a], db = p.device_qubit[b];
    std::erase_if(cal.couplings, [&](const DeviceCoupling& c) {
        return (c.a == da && c.b == db) || (c.a == db && c.b == da);
    });
    EXPECT_ANY_THROW(device_model(cal, code, p));
    p.device_qubit[0] = 100000;
    EXPECT_ANY_THROW(device_model(synthetic_device(127, 1e-3, 0, 0), code, p));
}

TEST(DeviceScore, UniformRateScoresWeightSumTimesRate) {
    const HeavyHexCode code = build_code(3);
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    const auto ranked = rank_placements(cal, code, InfluenceWeights{});
    const auto plain = enumerate_placements(cal, code);
    ASSERT_EQ(ranked.size(), plain.size());
    for (std::size_t k = 0; k < ranked.size(); ++k) {
        EXPECT_NEAR(ranked[k].score, 0.224, 1e-12);
        EXPECT_EQ(ranked[k].device_qubit, plain[k].device_qubit);
    }
}

TEST(DeviceScore, BadQubitPushesItsPlacementsDown) {
    const HeavyHexCode code = build_code(3);
    DeviceCalibration cal = synthetic_device(127, 1e-3, 0, 0);
    const std::uint32_t bad = 62;
    for (auto& q : cal.qubits) {
        if (q.id == bad) q.readout_error = 0.05;
    }
    const auto ranked = rank_placements(cal, code, InfluenceWeights{});
    bool seen_bad = false;
    std::size_t with = 0;
    for (const auto& p : ranked) {
        if (contains(p, bad)) {
            seen_bad = true;
            ++with;
            EXPECT_NEAR(p.score, 0.224 + 65 * 0.049 / 23, 1e-12);
        } else {
            EXPECT_FALSE(seen_bad);
            EXPECT_NEAR(p.score, 0.224, 1e-12);
        }
    }
    EXPECT_GT(with, 0u);
}

TEST(DeviceScore, MeansAverageQubitsAndCouplings) {
    const HeavyHexCode code = build_code(3);
    const DeviceCalibration cal = synthetic_device(127, 1e-3, 0.9, 2);
    const DeviceIndex idx(cal);
    const auto p = enumerate_placements(cal, code)[0];
    double idle = 0, twoq = 0;
    for (auto id : p.device_qubit) idle += idx.qubit(id).idle_error;
    const auto edges = code.couplings();
    for (const auto& [a, b] : edges) twoq += idx.twoq_error(p.device_qubit[a], p.device_qubit[b]);
    const SourceMeans m = placement_means(cal, code, p);
    EXPECT_NEAR(m.idle, idle / double(code.num_qubits()), 1e-15);
    EXPECT_NEAR(m.twoq, twoq / double(edges.size()), 1e-15);
    const InfluenceWeights w{0, 0, 1, 0, 0};
    EXPECT_NEAR(score_placement(cal, code, p, w), m.idle, 1e-15);
}

TEST(DeviceInfluence, WeightsAreRatesOverSingleQubitRate) {
    const HeavyHexCode code = build_code(3);
    const InfluenceEstimate est = estimate_influence_weights(code, 0.01, 4000, MemoryBasis::MemX, 1);
    ASSERT_EQ(est.ler.size(), 5u);
    ASSERT_GT(est.failures[0], 0);
    EXPECT_DOUBLE_EQ(est.weights.w_1q, 1.0);
    EXPECT_DOUBLE_EQ(est.weights.w_idle, est.ler[2] / est.ler[0]);
    EXPECT_DOUBLE_EQ(est.weights.w_2q, est.ler[4] / est.ler[0]);
    EXPECT_THROW(estimate_influence_weights(code, 0.2, 10, MemoryBasis::MemX, 1), std::invalid_argument);
}

TEST(DeviceInfluence, MemZHasNoSingleQubitGates) {
    EXPECT_THROW(estimate_influence_weights(build_code(3), 0.01, 2000, MemoryBasis::MemZ, 1), std::runtime_error);
}
