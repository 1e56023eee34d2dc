#include <string>

#include "hhqec/code.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

nlohmann::ordered_json sparse(const PauliOperator& op) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& [q, p] : op.terms) out.push_back({q, std::string(1, pauli_char(p))});
    return out;
}

const char* role_name(QubitRole r) {
    switch (r) {
        case QubitRole::Data:
            return "data";
        case QubitRole::Flag:
            return "flag";
        case QubitRole::Measure:
            return "measure";
    }
    return "?";
}

const char* kind_name(EventKind k) {
    switch (k) {
        case EventKind::Init:
            return "init";
        case EventKind::Cnot:
            return "cnot";
        case EventKind::Measure:
            return "measure";
        case EventKind::Idle:
            return "idle";
        case EventKind::Hadamard:
            return "h";
    }
    return "?";
}

}  // namespace

std::string code_to_json(const HeavyHexCode& code) {
    nlohmann::ordered_json j;
    j["d"] = code.d;
    auto& qs = j["qubits"] = nlohmann::ordered_json::array();
    for (const auto& q : code.qubits) {
        qs.push_back({{"index", q.index}, {"role", role_name(q.role)}, {"row", q.coord.row}, {"col", q.coord.col}});
    }
    auto ops = [](const auto& list) {
        auto out = nlohmann::ordered_json::array();
        for (const auto& g : list) out.push_back(sparse(g.op));
        return out;
    };
    j["z_stabilizers"] = ops(code.z_stabilizers);
    j["x_stabilizers"] = ops(code.x_stabilizers);
    j["z_gauges"] = ops(code.z_gauges);
    j["x_gauges"] = ops(code.x_gauges);
    j["logical_x"] = sparse(code.logical_x);
    j["logical_z"] = sparse(code.logical_z);
    auto& steps = j["schedule"] = nlohmann::ordered_json::array();
    for (const auto& step : code.schedule.steps) {
        auto events = nlohmann::ordered_json::array();
        for (const auto& e : step) {
            nlohmann::ordered_json ev;
            ev["kind"] = kind_name(e.kind);
            if (e.kind == EventKind::Cnot) {
                ev["control"] = e.q0;
                ev["target"] = e.q1;
            } else {
                ev["qubit"] = e.q0;
            }
            if (e.kind == EventKind::Init || e.kind == EventKind::Measure) ev["basis"] = e.basis == Basis::X ? "X" : "Z";
            if (e.kind == EventKind::Measure) ev["record"] = e.record;
            events.push_back(ev);
        }
        steps.push_back(events);
    }
    return j.dump(1);
}

}  // namespace hhqec
