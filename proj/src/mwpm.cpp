#include "hhqec/mwpm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "hhqec/blossom.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

struct Group {
    double probability = 0;
    double best = -1;
    BitVector payload;
    std::size_t count = 0;

    void add(double p, const BitVector& part) {
        probability = probability * (1 - p) + p * (1 - probability);
        if (p > best) {
            best = p;
            payload = part;
        }
        ++count;
    }
};

std::string describe_fault(const MemoryCircuit& circuit, const Fault& f) {
    const auto& op = circuit.ops[f.site];
    std::ostringstream os;
    os << "site " << f.site << " (kind " << int(op.kind) << ", qubits " << op.q0 << "," << op.q1 << ") code "
       << int(f.code);
    return os.str();
}

std::int64_t quantize(double w) { return static_cast<std::int64_t>(std::llround(w * DetectorGraph::kScale)); }

// Unit-weight graphs give flagged edges half weight so that a flag breaks ties in their favour.
constexpr double kUnitFlaggedWeight = 0.5;

}  // namespace

BitVector flag_detectors(const ShotRecord& shot) {
    const std::size_t nf = shot.flag_outcomes.empty() ? 0 : shot.flag_outcomes[0].size();
    BitVector out(nf * shot.flag_outcomes.size());
    for (std::size_t c = 0; c < shot.flag_outcomes.size(); ++c) {
        for (auto f : shot.flag_outcomes[c].ones()) out.set(c * nf + f, true);
    }
    return out;
}

DetectorGraph build_detector_graph(const HeavyHexCode& code, const MemoryCircuit& circuit, const NoiseModel& model,
                                   ChainType family, const DetectorGraphOptions& options) {
    DetectorGraph g;
    g.family = family;
    g.basis = circuit.basis;
    g.d = code.d;
    g.cycles = circuit.cycles;
    g.num_data = code.num_data();
    g.family_size = family_size(code, family);
    g.num_detectors = g.family_size * static_cast<std::size_t>(circuit.cycles + 1);
    g.unit_weights = options.unit_weights;
    for (const auto& r : code.schedule.records) g.flags_per_cycle += r.kind == RecordKind::Flag;
    const std::uint32_t boundary = g.boundary();

    const auto rates = resolve_rates(circuit, model);
    const auto& lmask = family == ChainType::XChains ? code.logical_z_mask : code.logical_x_mask;
    using Key = std::pair<std::uint32_t, std::uint32_t>;
    std::map<Key, Group> groups;
    std::map<std::tuple<std::vector<std::uint32_t>, std::uint32_t, std::uint32_t>, Group> flagged;
    std::map<std::vector<std::uint32_t>, double> flag_set_probability;

    FaultPattern single;
    single.faults.resize(1);
    for (std::uint32_t site = 0; site < circuit.ops.size(); ++site) {
        if (rates[site] <= 0) continue;
        const int ncodes = fault_code_count(circuit.ops[site].kind);
        const double p = rates[site] / ncodes;
        for (int c = 1; c <= ncodes; ++c) {
            single.faults[0] = {site, static_cast<std::uint8_t>(c)};
            const ShotRecord rec = simulate(code, circuit, single);
            const auto fired = family_detectors(code, rec, family).ones();
            const BitVector& part = family == ChainType::XChains ? rec.true_frame.x() : rec.true_frame.z();
            if (fired.size() > 2) {
                throw std::runtime_error("fault fires " + std::to_string(fired.size()) +
                                         " detectors in one family: " + describe_fault(circuit, single.faults[0]));
            }
            std::vector<std::uint32_t> flags;
            for (auto f : flag_detectors(rec).ones()) flags.push_back(static_cast<std::uint32_t>(f));
            if (!flags.empty()) {
                double& q = flag_set_probability[flags];
                q = q * (1 - p) + p * (1 - q);
            }
            if (fired.empty()) {
                if (part.dot(lmask)) ++g.undetectable_logical_faults;
                continue;
            }
            const Key key{static_cast<std::uint32_t>(fired[0]),
                          fired.size() == 2 ? static_cast<std::uint32_t>(fired[1]) : boundary};
            if (flags.empty()) {
                groups[key].add(p, part);
            } else {
                flagged[{flags, key.first, key.second}].add(p, part);
            }
        }
    }

    for (auto& [key, grp] : groups) {
        g.edges.push_back({key.first, key.second, grp.probability,
                           options.unit_weights ? 1.0 : -std::log(grp.probability), std::move(grp.payload), grp.count});
    }
    for (auto& [key, grp] : flagged) {
        const auto& [flags, u, v] = key;
        const double cond = std::min(1.0, grp.probability / flag_set_probability.at(flags));
        g.flagged_edges.push_back({flags, u, v, grp.probability, options.unit_weights ? kUnitFlaggedWeight : -std::log(cond),
                                   std::move(grp.payload), grp.count});
    }
    g.finalize();
    return g;
}

DetectorGraph build_detector_graph(const HeavyHexCode& code, const NoiseModel& model, int cycles, MemoryBasis basis,
                                   const DetectorGraphOptions& options) {
    return build_detector_graph(code, build_memory_circuit(code, basis, cycles), model, chain_type_for(basis), options);
}

void DetectorGraph::finalize() {
    const std::size_t n = num_nodes();
    words_ = (num_data + 63) / 64;
    adj_.assign(n, {});
    for (std::uint32_t k = 0; k < edges.size(); ++k) {
        const auto w = quantize(edges[k].weight);
        adj_[edges[k].u].push_back({edges[k].v, w, k});
        adj_[edges[k].v].push_back({edges[k].u, w, k});
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });

    idist_.assign(n * n, kUnreachable);
    dist_.assign(n * n, std::numeric_limits<double>::infinity());
    payload_.assign(n * n * words_, 0);
    using Item = std::pair<std::int64_t, std::uint32_t>;
    std::vector<std::int64_t> best(n);
    std::vector<char> done(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        std::fill(best.begin(), best.end(), kUnreachable);
        std::fill(done.begin(), done.end(), 0);
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        best[s] = 0;
        pq.push({0, s});
        std::uint64_t* row = payload_.data() + s * n * words_;
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (const Arc& a : adj_[u]) {
                const std::int64_t nd = du + a.w;
                if (done[a.to] || nd >= best[a.to]) continue;
                best[a.to] = nd;
                const auto& ew = edges[a.edge].payload.words();
                for (std::size_t w = 0; w < words_; ++w) row[a.to * words_ + w] = row[u * words_ + w] ^ ew[w];
                pq.push({nd, a.to});
            }
        }
        for (std::uint32_t t = 0; t < n; ++t) {
            idist_[s * n + t] = best[t];
            if (best[t] != kUnreachable) dist_[s * n + t] = double(best[t]) / kScale;
        }
    }
}

BitVector DetectorGraph::path_payload(std::uint32_t a, std::uint32_t b) const {
    BitVector out(num_data);
    const std::uint64_t* src = payload_.data() + (a * num_nodes() + b) * words_;
    for (std::size_t q = 0; q < num_data; ++q) {
        if ((src[q >> 6] >> (q & 63)) & 1u) out.set(q, true);
    }
    return out;
}

namespace {

// Shortest paths from each defect on the base graph plus the flagged edges active in this shot.
class FlaggedPaths {
  public:
    FlaggedPaths(const DetectorGraph& g, const std::vector<const FlaggedEdge*>& extra,
                 const std::vector<std::uint32_t>& sources)
        : g_(g), n_(g.num_nodes()) {
        std::vector<std::vector<std::pair<std::uint32_t, const FlaggedEdge*>>> more(n_);
        for (const auto* e : extra) {
            more[e->u].push_back({e->v, e});
            more[e->v].push_back({e->u, e});
        }
        dist_.resize(sources.size());
        payload_.resize(sources.size());
        using Item = std::pair<std::int64_t, std::uint32_t>;
        for (std::size_t i = 0; i < sources.size(); ++i) {
            auto& best = dist_[i];
            auto& pay = payload_[i];
            best.assign(n_, DetectorGraph::kUnreachable);
            pay.assign(n_, BitVector(g.num_data));
            std::vector<char> done(n_, 0);
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
            best[sources[i]] = 0;
            pq.push({0, sources[i]});
            auto relax = [&](std::uint32_t u, std::uint32_t to, std::int64_t w, const BitVector& ep) {
                const std::int64_t nd = best[u] + w;
                if (done[to] || nd >= best[to]) return;
                best[to] = nd;
                pay[to] = pay[u] ^ ep;
                pq.push({nd, to});
            };
            while (!pq.empty()) {
                auto [du, u] = pq.top();
                pq.pop();
                if (done[u]) continue;
                done[u] = 1;
                for (const auto& a : g.adjacency()[u]) relax(u, a.to, a.w, g.edges[a.edge].payload);
                for (const auto& [to, e] : more[u]) relax(u, to, quantize(e->weight), e->payload);
            }
        }
    }

    std::int64_t distance(std::size_t i, std::uint32_t node) const { return dist_[i][node]; }
    const BitVector& payload(std::size_t i, std::uint32_t node) const { return payload_[i][node]; }

  private:
    const DetectorGraph& g_;
    std::size_t n_;
    std::vector<std::vector<std::int64_t>> dist_;
    std::vector<std::vector<BitVector>> payload_;
};

}  // namespace

MatchResult match_defects(const DetectorGraph& graph, const std::vector<std::uint32_t>& defects,
                          const std::vector<std::uint32_t>& fired_flags) {
    MatchResult res;
    res.payload = BitVector(graph.num_data);
    const int m = static_cast<int>(defects.size());
    if (m == 0) return res;
    const std::uint32_t B = graph.boundary();

    std::vector<const FlaggedEdge*> active;
    if (!fired_flags.empty()) {
        for (const auto& e : graph.flagged_edges) {
            if (std::includes(fired_flags.begin(), fired_flags.end(), e.flags.begin(), e.flags.end())) {
                active.push_back(&e);
            }
        }
    }
    std::optional<FlaggedPaths> fp;
    if (!active.empty()) fp.emplace(graph, active, defects);
    auto dist = [&](int i, std::uint32_t node) {
        return fp ? fp->distance(i, node) : graph.int_distance(defects[i], node);
    };

    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const auto w = dist(i, defects[j]);
            if (w != DetectorGraph::kUnreachable) edges.push_back({i, j, w});
            edges.push_back({m + i, m + j, 0});
        }
        const auto wb = dist(i, B);
        if (wb != DetectorGraph::kUnreachable) edges.push_back({i, m + i, wb});
    }
    std::vector<int> mate;
    try {
        mate = min_weight_perfect_matching(2 * m, edges);
    } catch (const std::runtime_error&) {
        throw std::runtime_error("detection events cannot be matched in this detector graph");
    }
    for (int i = 0; i < m; ++i) {
        const int j = mate[i];
        std::uint32_t other;
        if (j >= m) {
            other = B;
        } else if (j > i) {
            other = defects[j];
        } else {
            continue;
        }
        res.weight += dist(i, other);
        if (fp) {
            res.payload ^= fp->payload(i, other);
        } else {
            res.payload ^= graph.path_payload(defects[i], other);
        }
        res.pairs.emplace_back(defects[i], other);
    }
    return res;
}

namespace {

PauliFrame to_correction(const DetectorGraph& graph, const BitVector& payload) {
    PauliFrame corr(graph.num_data);
    if (graph.family == ChainType::XChains) {
        corr.x() = payload;
    } else {
        corr.z() = payload;
    }
    return corr;
}

std::vector<std::uint32_t> ones_u32(const BitVector& v) {
    std::vector<std::uint32_t> out;
    for (auto k : v.ones()) out.push_back(static_cast<std::uint32_t>(k));
    return out;
}

}  // namespace

PauliFrame decode(const DetectorGraph& graph, const BitVector& detectors) {
    return decode(graph, detectors, BitVector());
}

PauliFrame decode(const DetectorGraph& graph, const BitVector& detectors, const BitVector& flags) {
    if (detectors.size() != graph.num_detectors) {
        throw std::invalid_argument("detector vector does not match the graph");
    }
    return to_correction(graph, match_defects(graph, ones_u32(detectors), ones_u32(flags)).payload);
}

PauliFrame decode(const HeavyHexCode& code, const DetectorGraph& graph, const ShotRecord& shot) {
    return decode(graph, family_detectors(code, shot, graph.family), flag_detectors(shot));
}

std::string detector_graph_json(const DetectorGraph& graph) {
    nlohmann::json j;
    j["family"] = graph.family == ChainType::XChains ? "x_chains" : "z_chains";
    j["basis"] = to_string(graph.basis);
    j["d"] = graph.d;
    j["cycles"] = graph.cycles;
    j["family_size"] = graph.family_size;
    j["num_detectors"] = graph.num_detectors;
    j["boundary"] = graph.boundary();
    j["unit_weights"] = graph.unit_weights;
    j["flags_per_cycle"] = graph.flags_per_cycle;
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"u", e.u}, {"v", e.v}, {"probability", e.probability}, {"weight", e.weight},
                         {"num_faults", e.num_faults}, {"payload", e.payload.ones()}});
    }
    auto& flagged = j["flagged_edges"] = nlohmann::json::array();
    for (const auto& e : graph.flagged_edges) {
        flagged.push_back({{"flags", e.flags}, {"u", e.u}, {"v", e.v}, {"probability", e.probability},
                           {"weight", e.weight}, {"num_faults", e.num_faults}, {"payload", e.payload.ones()}});
    }
    return j.dump(1);
}

}  // namespace hhqec
