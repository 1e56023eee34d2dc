#include "hhqec/code.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace hhqec {

namespace {

PauliOperator make_op(std::vector<std::uint32_t> qubits, Pauli p) {
    std::sort(qubits.begin(), qubits.end());
    PauliOperator op;
    for (auto q : qubits) op.terms.emplace_back(q, p);
    return op;
}

BitVector support_mask(const PauliOperator& op, std::size_t n) {
    BitVector m(n);
    for (const auto& [q, p] : op.terms) m.set(q, true);
    return m;
}

bool flag_exists(int d, int i, int j) {
    if (j < 1 || j > d) return false;
    if (i >= 1 && i <= d - 1) return true;
    if (i == 0) return j <= d - 1;
    if (i == d) return j >= 2;
    return false;
}

}  // namespace

HeavyHexCode build_code(int d) {
    if (d < 3 || d > 13 || d % 2 == 0) {
        throw std::invalid_argument("code distance must be odd and in [3, 13], got " + std::to_string(d));
    }
    HeavyHexCode code;
    code.d = d;

    for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
            code.qubits.push_back({code.data_index(i, j), QubitRole::Data, {double(i), double(j)}});
        }
    }

    std::map<std::pair<int, int>, std::uint32_t> flag_at;
    for (int i = 0; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
            if (!flag_exists(d, i, j)) continue;
            auto q = static_cast<std::uint32_t>(code.qubits.size());
            flag_at[{i, j}] = q;
            code.qubits.push_back({q, QubitRole::Flag, {i + 0.5, double(j)}});
        }
    }

    // Measure qubits bridge F(i,j) and F(i,j+1) wherever i+j is odd.
    for (int i = 0; i <= d; ++i) {
        for (int j = 1; j <= d - 1; ++j) {
            if ((i + j) % 2 == 0) continue;
            auto m = static_cast<std::uint32_t>(code.qubits.size());
            code.qubits.push_back({m, QubitRole::Measure, {i + 0.5, j + 0.5}});
            std::vector<std::uint32_t> support;
            if (i >= 1) {
                support.push_back(code.data_index(i, j));
                support.push_back(code.data_index(i, j + 1));
            }
            if (i + 1 <= d) {
                support.push_back(code.data_index(i + 1, j));
                support.push_back(code.data_index(i + 1, j + 1));
            }
            code.x_gauges.push_back({make_op(support, Pauli::X), m, flag_at.at({i, j}),
                                     flag_at.at({i, j + 1}), i, j});
        }
    }

    std::map<std::pair<int, int>, std::uint32_t> z_gauge_at;
    for (int i = 1; i <= d - 1; ++i) {
        for (int j = 1; j <= d; ++j) {
            z_gauge_at[{i, j}] = static_cast<std::uint32_t>(code.z_gauges.size());
            code.z_gauges.push_back({make_op({code.data_index(i, j), code.data_index(i + 1, j)}, Pauli::Z),
                                     flag_at.at({i, j}), i, j});
        }
    }

    auto z_stabilizer_from = [&](std::vector<std::uint32_t> gauges) {
        PauliFrame f(code.num_data());
        for (auto g : gauges) f = compose(f, code.z_gauges[g].op.to_frame(code.num_data()));
        code.z_stabilizers.push_back({PauliOperator::from_frame(f), std::move(gauges)});
    };
    for (int i = 1; i <= d - 1; ++i) {
        if (i % 2 == 0) z_stabilizer_from({z_gauge_at.at({i, 1})});
        for (int j = 1; j <= d - 1; ++j) {
            if ((i + j) % 2 == 0) z_stabilizer_from({z_gauge_at.at({i, j}), z_gauge_at.at({i, j + 1})});
        }
        if (i % 2 == 1) z_stabilizer_from({z_gauge_at.at({i, d})});
    }

    for (int j = 1; j <= d - 1; ++j) {
        Stabilizer s;
        PauliFrame f(code.num_data());
        for (std::uint32_t g = 0; g < code.x_gauges.size(); ++g) {
            if (code.x_gauges[g].col != j) continue;
            s.gauges.push_back(g);
            f = compose(f, code.x_gauges[g].op.to_frame(code.num_data()));
        }
        s.op = PauliOperator::from_frame(f);
        code.x_stabilizers.push_back(std::move(s));
    }

    std::vector<std::uint32_t> column, row;
    for (int k = 1; k <= d; ++k) {
        column.push_back(code.data_index(k, 1));
        row.push_back(code.data_index(1, k));
    }
    code.logical_x = make_op(column, Pauli::X);
    code.logical_z = make_op(row, Pauli::Z);

    for (const auto& s : code.z_stabilizers) code.z_stabilizer_masks.push_back(support_mask(s.op, code.num_data()));
    for (const auto& s : code.x_stabilizers) code.x_stabilizer_masks.push_back(support_mask(s.op, code.num_data()));
    code.logical_x_mask = support_mask(code.logical_x, code.num_data());
    code.logical_z_mask = support_mask(code.logical_z, code.num_data());

    code.schedule = build_schedule(code);
    return code;
}

MeasurementSchedule build_schedule(const HeavyHexCode& code) {
    MeasurementSchedule sched;
    sched.num_qubits = code.num_qubits();
    const int d = code.d;

    auto data_or_none = [&](int i, int j) -> std::optional<std::uint32_t> {
        if (i < 1 || i > d || j < 1 || j > d) return std::nullopt;
        return code.data_index(i, j);
    };

    // Z round.
    Timestep z_init, z_upper, z_lower, z_measure;
    for (std::uint32_t g = 0; g < code.z_gauges.size(); ++g) {
        const auto& zg = code.z_gauges[g];
        z_init.push_back(Event::init(zg.ancilla, Basis::Z));
        z_upper.push_back(Event::cnot(code.data_index(zg.row, zg.col), zg.ancilla));
        z_lower.push_back(Event::cnot(code.data_index(zg.row + 1, zg.col), zg.ancilla));
        auto rec = static_cast<std::uint32_t>(sched.records.size());
        sched.records.push_back({RecordKind::ZGauge, g});
        z_measure.push_back(Event::measure(zg.ancilla, Basis::Z, rec));
    }

    // X round. Left flags touch their upper data qubit at step 2 and their lower one at
    // step 3; right flags touch lower at step 3 and upper at step 4. A data qubit's two
    // flags always have opposite handedness, so no step touches a data qubit twice.
    std::vector<Timestep> x_steps(7);
    for (std::uint32_t g = 0; g < code.x_gauges.size(); ++g) {
        const auto& xg = code.x_gauges[g];
        const auto upper_l = data_or_none(xg.row, xg.col);
        const auto lower_l = data_or_none(xg.row + 1, xg.col);
        const auto upper_r = data_or_none(xg.row, xg.col + 1);
        const auto lower_r = data_or_none(xg.row + 1, xg.col + 1);

        x_steps[0].push_back(Event::init(xg.measure, Basis::X));
        x_steps[0].push_back(Event::init(xg.left_flag, Basis::Z));
        x_steps[0].push_back(Event::init(xg.right_flag, Basis::Z));
        x_steps[1].push_back(Event::cnot(xg.measure, xg.left_flag));
        x_steps[2].push_back(Event::cnot(xg.measure, xg.right_flag));
        if (upper_l) x_steps[2].push_back(Event::cnot(xg.left_flag, *upper_l));
        if (lower_l) x_steps[3].push_back(Event::cnot(xg.left_flag, *lower_l));
        if (lower_r) x_steps[3].push_back(Event::cnot(xg.right_flag, *lower_r));
        x_steps[4].push_back(Event::cnot(xg.measure, xg.left_flag));
        if (upper_r) x_steps[4].push_back(Event::cnot(xg.right_flag, *upper_r));
        x_steps[5].push_back(Event::cnot(xg.measure, xg.right_flag));

        auto rec = static_cast<std::uint32_t>(sched.records.size());
        sched.records.push_back({RecordKind::XGauge, g});
        x_steps[6].push_back(Event::measure(xg.measure, Basis::X, rec));
        for (auto f : {xg.left_flag, xg.right_flag}) {
            rec = static_cast<std::uint32_t>(sched.records.size());
            sched.records.push_back({RecordKind::Flag, f});
            x_steps[6].push_back(Event::measure(f, Basis::Z, rec));
        }
    }

    sched.steps = {z_init, z_upper, z_lower, z_measure};
    for (auto& s : x_steps) sched.steps.push_back(std::move(s));

    for (auto& step : sched.steps) {
        std::vector<bool> busy(sched.num_qubits, false);
        for (const auto& e : step) {
            if (busy[e.q0] || (e.kind == EventKind::Cnot && busy[e.q1])) {
                throw std::logic_error("schedule touches a qubit twice in one timestep");
            }
            busy[e.q0] = true;
            if (e.kind == EventKind::Cnot) busy[e.q1] = true;
        }
        for (std::uint32_t q = 0; q < sched.num_qubits; ++q) {
            if (!busy[q]) step.push_back(Event::idle(q));
        }
    }
    return sched;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> HeavyHexCode::couplings() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& step : schedule.steps) {
        for (const auto& e : step) {
            if (e.kind != EventKind::Cnot) continue;
            out.emplace_back(std::min(e.q0, e.q1), std::max(e.q0, e.q1));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

BitVector static_syndrome(const HeavyHexCode& code, const PauliFrame& frame) {
    const std::size_t n = code.num_data();
    const PauliFrame* f = &frame;
    PauliFrame trimmed;
    if (frame.size() != n) {
        if (frame.size() != code.num_qubits()) {
            throw std::invalid_argument("frame size matches neither the data register nor the full register");
        }
        for (std::size_t q = n; q < frame.size(); ++q) {
            if (frame.get(q) != Pauli::I) {
                throw std::invalid_argument("static_syndrome: frame acts on a non-data qubit");
            }
        }
        trimmed = PauliFrame(n);
        for (std::size_t q = 0; q < n; ++q) trimmed.set(q, frame.get(q));
        f = &trimmed;
    }
    BitVector s(code.num_stabilizers());
    std::size_t k = 0;
    for (const auto& m : code.z_stabilizer_masks) s.set(k++, f->x().dot(m));
    for (const auto& m : code.x_stabilizer_masks) s.set(k++, f->z().dot(m));
    return s;
}

BitVector eigenvalues_to_bits(const std::vector<int>& eigenvalues) {
    BitVector b(eigenvalues.size());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
        if (eigenvalues[k] == -1) {
            b.set(k, true);
        } else if (eigenvalues[k] != 1) {
            throw std::invalid_argument("eigenvalues must be +1 or -1");
        }
    }
    return b;
}

bool in_gauge_group(const HeavyHexCode& code, const PauliFrame& frame) {
    if (static_syndrome(code, frame).any()) return false;
    const std::size_t n = code.num_data();
    const PauliFrame lx = code.logical_x.to_frame(n);
    const PauliFrame lz = code.logical_z.to_frame(n);
    PauliFrame f(n);
    for (std::size_t q = 0; q < n; ++q) f.set(q, frame.get(q));
    return !f.anticommutes(lx) && !f.anticommutes(lz);
}

}  // namespace hhqec
