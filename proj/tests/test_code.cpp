#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "hhqec/code.hpp"

using namespace hhqec;

namespace {

using Cell = std::pair<int, int>;
using Support = std::set<Cell>;

// Index sets written straight from the generator formulas, independent of build_code.
std::vector<Support> oracle_x_stabilizers(int d) {
    std::vector<Support> out;
    for (int j = 1; j <= d - 1; ++j) {
        Support s;
        for (int n = 1; n <= d; ++n) s.insert({n, j}), s.insert({n, j + 1});
        out.push_back(s);
    }
    return out;
}

std::vector<Support> oracle_z_stabilizers(int d) {
    std::vector<Support> out;
    for (int i = 1; i <= d - 1; ++i) {
        for (int j = 1; j <= d - 1; ++j) {
            if ((i + j) % 2 == 0) out.push_back({{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}});
        }
    }
    for (int m = 1; m <= (d - 1) / 2; ++m) {
        out.push_back({{2 * m, 1}, {2 * m + 1, 1}});
        out.push_back({{2 * m - 1, d}, {2 * m, d}});
    }
    return out;
}

std::vector<Support> oracle_x_gauges(int d) {
    std::vector<Support> out;
    for (int i = 1; i <= d - 1; ++i) {
        for (int j = 1; j <= d - 1; ++j) {
            if ((i + j) % 2 == 1) out.push_back({{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}});
        }
    }
    for (int m = 1; m <= (d - 1) / 2; ++m) {
        out.push_back({{1, 2 * m - 1}, {1, 2 * m}});
        out.push_back({{d, 2 * m}, {d, 2 * m + 1}});
    }
    return out;
}

Support support_of(const HeavyHexCode& code, const PauliOperator& op) {
    Support s;
    for (const auto& [q, p] : op.terms) s.insert({int(q) / code.d + 1, int(q) % code.d + 1});
    return s;
}

template <typename T>
std::multiset<Support> supports(const HeavyHexCode& code, const std::vector<T>& gens) {
    std::multiset<Support> out;
    for (const auto& g : gens) out.insert(support_of(code, g.op));
    return out;
}

std::multiset<Support> as_multiset(const std::vector<Support>& v) { return {v.begin(), v.end()}; }

bool all_paulis(const PauliOperator& op, Pauli p) {
    return std::all_of(op.terms.begin(), op.terms.end(), [&](const auto& t) { return t.second == p; });
}

// Heisenberg-picture back-propagation of a Pauli through one step of the schedule.
void conjugate_step(PauliFrame& f, const Timestep& step) {
    for (const auto& e : step) {
        if (e.kind != EventKind::Cnot) continue;
        const bool xc = f.x().get(e.q0), zt = f.z().get(e.q1);
        if (xc) f.x().flip(e.q1);
        if (zt) f.z().flip(e.q0);
    }
}

}  // namespace

class CodeByDistance : public ::testing::TestWithParam<int> {};

TEST_P(CodeByDistance, GeneratorSetsMatchIndexFormulas) {
    const int d = GetParam();
    auto code = build_code(d);
    EXPECT_EQ(supports(code, code.x_stabilizers), as_multiset(oracle_x_stabilizers(d)));
    EXPECT_EQ(supports(code, code.z_stabilizers), as_multiset(oracle_z_stabilizers(d)));
    EXPECT_EQ(supports(code, code.x_gauges), as_multiset(oracle_x_gauges(d)));
    EXPECT_EQ(code.z_gauges.size(), std::size_t(d * (d - 1)));
    for (const auto& s : code.x_stabilizers) EXPECT_TRUE(all_paulis(s.op, Pauli::X));
    for (const auto& s : code.z_stabilizers) EXPECT_TRUE(all_paulis(s.op, Pauli::Z));
    for (const auto& g : code.x_gauges) EXPECT_TRUE(all_paulis(g.op, Pauli::X));
    for (const auto& g : code.z_gauges) EXPECT_TRUE(all_paulis(g.op, Pauli::Z));
}

TEST_P(CodeByDistance, CountsAndSizes) {
    const int d = GetParam();
    auto code = build_code(d);
    EXPECT_EQ(code.num_data(), std::size_t(d * d));
    EXPECT_EQ(code.x_stabilizers.size(), std::size_t(d - 1));
    EXPECT_EQ(code.z_stabilizers.size(), std::size_t((d * d - 1) / 2));
    EXPECT_EQ(code.num_stabilizers(), stabilizers_per_cycle(d));
    EXPECT_EQ(2 * code.num_stabilizers(), std::size_t(d * d + 2 * d - 3));
    std::size_t data = 0;
    for (const auto& q : code.qubits) data += q.role == QubitRole::Data;
    EXPECT_EQ(data, code.num_data());
}

TEST_P(CodeByDistance, CommutationRelations) {
    const int d = GetParam();
    auto code = build_code(d);
    const auto n = code.num_data();
    std::vector<PauliFrame> stabs, gauges;
    for (const auto& s : code.z_stabilizers) stabs.push_back(s.op.to_frame(n));
    for (const auto& s : code.x_stabilizers) stabs.push_back(s.op.to_frame(n));
    for (const auto& g : code.z_gauges) gauges.push_back(g.op.to_frame(n));
    for (const auto& g : code.x_gauges) gauges.push_back(g.op.to_frame(n));
    const auto lx = code.logical_x.to_frame(n);
    const auto lz = code.logical_z.to_frame(n);

    for (const auto& a : stabs) {
        for (const auto& b : stabs) ASSERT_FALSE(a.anticommutes(b));
        ASSERT_FALSE(a.anticommutes(lx));
        ASSERT_FALSE(a.anticommutes(lz));
    }
    for (const auto& g : gauges) {
        for (const auto& s : stabs) ASSERT_FALSE(g.anticommutes(s));
        ASSERT_FALSE(g.anticommutes(lx));
        ASSERT_FALSE(g.anticommutes(lz));
    }
    EXPECT_TRUE(lx.anticommutes(lz));
    EXPECT_EQ(lx.weight(), std::size_t(d));
    EXPECT_EQ(lz.weight(), std::size_t(d));
}

TEST_P(CodeByDistance, GaugeProductsReproduceStabilizers) {
    const int d = GetParam();
    auto code = build_code(d);
    const auto n = code.num_data();
    for (const auto& s : code.z_stabilizers) {
        PauliFrame f(n);
        for (auto g : s.gauges) f = compose(f, code.z_gauges[g].op.to_frame(n));
        EXPECT_EQ(f, s.op.to_frame(n));
    }
    for (const auto& s : code.x_stabilizers) {
        PauliFrame f(n);
        for (auto g : s.gauges) f = compose(f, code.x_gauges[g].op.to_frame(n));
        EXPECT_EQ(f, s.op.to_frame(n));
    }
}

TEST_P(CodeByDistance, GeneratorMultiplicationKeepsSyndrome) {
    const int d = GetParam();
    auto code = build_code(d);
    const auto n = code.num_data();
    std::mt19937_64 rng(d);
    std::uniform_int_distribution<int> pauli(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
        PauliFrame f(n);
        for (std::size_t q = 0; q < n; ++q) f.set(q, static_cast<Pauli>(pauli(rng)));
        const auto s = static_syndrome(code, f);
        for (const auto& g : code.z_gauges) EXPECT_EQ(static_syndrome(code, compose(f, g.op.to_frame(n))), s);
        for (const auto& g : code.x_gauges) EXPECT_EQ(static_syndrome(code, compose(f, g.op.to_frame(n))), s);
    }
}

TEST_P(CodeByDistance, ScheduleMeasuresEachGaugeOnce) {
    const int d = GetParam();
    auto code = build_code(d);
    std::size_t zg = 0, xg = 0;
    for (const auto& step : code.schedule.steps) {
        std::vector<int> seen(code.num_qubits(), 0);
        for (const auto& e : step) {
            seen[e.q0]++;
            if (e.kind == EventKind::Cnot) seen[e.q1]++;
            if (e.kind != EventKind::Measure) continue;
            const auto kind = code.schedule.records[e.record].kind;
            zg += kind == RecordKind::ZGauge;
            xg += kind == RecordKind::XGauge;
        }
        // every qubit appears in exactly one event per step (idles included)
        for (int c : seen) ASSERT_EQ(c, 1);
    }
    EXPECT_EQ(zg, code.z_gauges.size());
    EXPECT_EQ(xg, code.x_gauges.size());
}

// Back-propagates every measured observable through the cycle to its ancilla's
// initialization. What is left on the data must be exactly the intended gauge (or the
// identity for flags), and what is left on the ancilla must stabilize its initial state.
TEST_P(CodeByDistance, EachMeasurementReadsItsGauge) {
    const int d = GetParam();
    auto code = build_code(d);
    const auto& steps = code.schedule.steps;
    const std::size_t n = code.num_qubits();
    const std::size_t nd = code.num_data();
    for (std::size_t t = 0; t < steps.size(); ++t) {
        for (const auto& e : steps[t]) {
            if (e.kind != EventKind::Measure) continue;
            PauliFrame f(n);
            f.set(e.q0, e.basis == Basis::Z ? Pauli::Z : Pauli::X);
            std::size_t u = t;
            bool reached_init = false;
            while (u-- > 0) {
                for (const auto& g : steps[u]) {
                    if (g.kind == EventKind::Init && g.q0 == e.q0) reached_init = true;
                }
                if (reached_init) break;
                conjugate_step(f, steps[u]);
            }
            ASSERT_TRUE(reached_init);
            // Ancilla part: only Paulis of the initial basis on ancillas initialized at step u.
            std::map<std::uint32_t, Basis> init_basis;
            for (const auto& g : steps[u]) {
                if (g.kind == EventKind::Init) init_basis[g.q0] = g.basis;
            }
            PauliFrame data(nd);
            for (std::size_t q = 0; q < n; ++q) {
                const Pauli p = f.get(q);
                if (q < nd) {
                    data.set(q, p);
                    continue;
                }
                if (p == Pauli::I) continue;
                auto it = init_basis.find(static_cast<std::uint32_t>(q));
                ASSERT_NE(it, init_basis.end()) << "residue on an ancilla that was not freshly initialized";
                ASSERT_EQ(p, it->second == Basis::Z ? Pauli::Z : Pauli::X);
            }
            const auto& rec = code.schedule.records[e.record];
            switch (rec.kind) {
                case RecordKind::ZGauge: EXPECT_EQ(data, code.z_gauges[rec.index].op.to_frame(nd)); break;
                case RecordKind::XGauge: EXPECT_EQ(data, code.x_gauges[rec.index].op.to_frame(nd)); break;
                default: EXPECT_TRUE(data.is_identity()); break;
            }
        }
    }
}

TEST_P(CodeByDistance, CouplingGraphIsHeavyHex) {
    const int d = GetParam();
    auto code = build_code(d);
    std::vector<int> degree(code.num_qubits(), 0);
    for (auto [a, b] : code.couplings()) {
        ++degree[a];
        ++degree[b];
        // no data-data couplings, and no two ancillas of the same role
        const auto ra = code.qubits[a].role, rb = code.qubits[b].role;
        EXPECT_FALSE(ra == QubitRole::Data && rb == QubitRole::Data);
        EXPECT_NE(ra, rb);
    }
    for (int deg : degree) {
        EXPECT_GE(deg, 1);
        EXPECT_LE(deg, 3);
    }
}

INSTANTIATE_TEST_SUITE_P(Distances, CodeByDistance, ::testing::Values(3, 5, 7, 9, 11));

TEST(Code, RejectsBadDistances) {
    EXPECT_THROW(build_code(4), std::invalid_argument);
    EXPECT_THROW(build_code(1), std::invalid_argument);
    EXPECT_THROW(build_code(15), std::invalid_argument);
}

TEST(Code, DeviceSizedQubitCounts) {
    EXPECT_EQ(build_code(3).num_qubits(), 23u);
    EXPECT_EQ(build_code(7).num_qubits(), 127u);
    EXPECT_EQ(build_code(13).num_qubits(), 433u);
}

TEST(Code, Distance3FirstXStabilizer) {
    auto code = build_code(3);
    Support expected{{1, 1}, {2, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}};
    EXPECT_EQ(support_of(code, code.x_stabilizers[0].op), expected);
    EXPECT_TRUE(all_paulis(code.x_stabilizers[0].op, Pauli::X));
}

TEST(Code, EigenvalueListToBits) {
    auto z = eigenvalues_to_bits({-1, +1, -1, +1, -1, +1, +1, +1, -1, -1, +1, -1});
    auto x = eigenvalues_to_bits({-1, -1, +1, +1});
    EXPECT_EQ(z.to_string(), "101010001101");
    EXPECT_EQ(x.to_string(), "1100");
    EXPECT_THROW(eigenvalues_to_bits({0}), std::invalid_argument);
}

TEST(Code, IdentityHasEmptySyndrome) {
    auto code = build_code(5);
    EXPECT_FALSE(static_syndrome(code, PauliFrame(code.num_data())).any());
}

TEST(Code, CentralZErrorLightsBothXStabilizers) {
    auto code = build_code(3);
    PauliFrame f(code.num_data());
    f.set(code.data_index(2, 2), Pauli::Z);
    auto s = static_syndrome(code, f);
    // brute force: anticommutation with each generator
    for (std::size_t k = 0; k < code.z_stabilizers.size(); ++k) EXPECT_FALSE(s.get(k));
    for (std::size_t k = 0; k < code.x_stabilizers.size(); ++k) {
        EXPECT_EQ(s.get(code.z_stabilizers.size() + k),
                  f.anticommutes(code.x_stabilizers[k].op.to_frame(code.num_data())));
        EXPECT_TRUE(s.get(code.z_stabilizers.size() + k));
    }
}

TEST(Code, SyndromeRejectsAncillaSupport) {
    auto code = build_code(3);
    PauliFrame full(code.num_qubits());
    full.set(code.num_data(), Pauli::X);
    EXPECT_THROW(static_syndrome(code, full), std::invalid_argument);
    PauliFrame ok(code.num_qubits());
    ok.set(0, Pauli::X);
    EXPECT_NO_THROW(static_syndrome(code, ok));
}

TEST(Code, GaugeGroupMembership) {
    auto code = build_code(3);
    const auto n = code.num_data();
    EXPECT_TRUE(in_gauge_group(code, code.z_gauges[0].op.to_frame(n)));
    EXPECT_TRUE(in_gauge_group(code, code.x_gauges[1].op.to_frame(n)));
    EXPECT_FALSE(in_gauge_group(code, code.logical_x.to_frame(n)));
    EXPECT_FALSE(in_gauge_group(code, code.logical_z.to_frame(n)));
}
