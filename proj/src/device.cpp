#include "hhqec/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hhqec/bench.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

void check_rate(double v, const std::string& what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << what << " = " << v << " is outside [0, 1]";
        throw std::invalid_argument(os.str());
    }
}

std::pair<std::uint32_t, std::uint32_t> ordered(std::uint32_t a, std::uint32_t b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

void DeviceCalibration::validate() const {
    std::set<std::uint32_t> ids;
    for (const auto& q : qubits) {
        if (!ids.insert(q.id).second) throw std::invalid_argument("duplicate qubit id " + std::to_string(q.id));
        const std::string tag = "qubit " + std::to_string(q.id) + " ";
        check_rate(q.sq_error, tag + "sq_error");
        check_rate(q.init_error, tag + "init_error");
        check_rate(q.idle_error, tag + "idle_error");
        check_rate(q.readout_error, tag + "readout_error");
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::map<std::uint32_t, int> degree;
    for (const auto& c : couplings) {
        const std::string tag = "coupling " + std::to_string(c.a) + "-" + std::to_string(c.b);
        if (!ids.count(c.a) || !ids.count(c.b)) throw std::invalid_argument(tag + " references an unknown qubit");
        if (c.a == c.b) throw std::invalid_argument(tag + " is a self loop");
        if (!seen.insert(ordered(c.a, c.b)).second) throw std::invalid_argument(tag + " is listed twice");
        check_rate(c.twoq_error, tag + " twoq_error");
        if (++degree[c.a] > 3 || ++degree[c.b] > 3) throw std::invalid_argument(tag + " raises a qubit degree above 3");
    }
}

DeviceIndex::DeviceIndex(const DeviceCalibration& cal) {
    cal.validate();
    for (const auto& q : cal.qubits) {
        qubits_[q.id] = q;
        adj_[q.id];
    }
    for (const auto& [id, q] : qubits_) ids_.push_back(id);
    for (const auto& c : cal.couplings) {
        couplings_[ordered(c.a, c.b)] = c.twoq_error;
        adj_[c.a].push_back(c.b);
        adj_[c.b].push_back(c.a);
    }
    for (auto& [id, n] : adj_) std::sort(n.begin(), n.end());
}

const DeviceQubit& DeviceIndex::qubit(std::uint32_t id) const {
    auto it = qubits_.find(id);
    if (it == qubits_.end()) throw std::out_of_range("device has no qubit " + std::to_string(id));
    return it->second;
}

double DeviceIndex::twoq_error(std::uint32_t a, std::uint32_t b) const {
    auto it = couplings_.find(ordered(a, b));
    if (it == couplings_.end()) {
        throw std::out_of_range("device has no coupling " + std::to_string(a) + "-" + std::to_string(b));
    }
    return it->second;
}

bool DeviceIndex::coupled(std::uint32_t a, std::uint32_t b) const { return couplings_.count(ordered(a, b)) > 0; }

const std::vector<std::uint32_t>& DeviceIndex::neighbours(std::uint32_t id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw std::out_of_range("device has no qubit " + std::to_string(id));
    return it->second;
}

DeviceCalibration calibration_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("calibration is not valid JSON: ") + e.what());
    }
    DeviceCalibration cal;
    try {
        cal.device_name = j.at("device_name").get<std::string>();
        for (const auto& q : j.at("qubits")) {
            cal.qubits.push_back({q.at("id").get<std::uint32_t>(), q.at("sq_error").get<double>(),
                                  q.at("init_error").get<double>(), q.at("idle_error").get<double>(),
                                  q.at("readout_error").get<double>()});
        }
        for (const auto& c : j.at("couplings")) {
            cal.couplings.push_back({c.at("a").get<std::uint32_t>(), c.at("b").get<std::uint32_t>(),
                                     c.at("twoq_error").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed calibration: ") + e.what());
    }
    cal.validate();
    return cal;
}

std::string calibration_to_json(const DeviceCalibration& cal) {
    nlohmann::json j;
    j["device_name"] = cal.device_name;
    auto& qs = j["qubits"] = nlohmann::json::array();
    for (const auto& q : cal.qubits) {
        qs.push_back({{"id", q.id},
                      {"sq_error", q.sq_error},
                      {"init_error", q.init_error},
                      {"idle_error", q.idle_error},
                      {"readout_error", q.readout_error}});
    }
    auto& cs = j["couplings"] = nlohmann::json::array();
    for (const auto& c : cal.couplings) cs.push_back({{"a", c.a}, {"b", c.b}, {"twoq_error", c.twoq_error}});
    return j.dump(1);
}

DeviceCalibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return calibration_from_json(ss.str());
}

void save_calibration(const DeviceCalibration& cal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << calibration_to_json(cal) << '\n';
}

DeviceCalibration synthetic_heavy_hex(int rows, int row_length, double rate) {
    if (rows < 2 || row_length < 5) throw std::invalid_argument("heavy-hex lattice needs at least 2 rows of 5");
    check_rate(rate, "rate");
    DeviceCalibration cal;
    std::map<std::pair<int, int>, std::uint32_t> row_id;
    std::uint32_t next = 0;
    auto add_qubit = [&]() {
        cal.qubits.push_back({next, rate, rate, rate, rate});
        return next++;
    };
    auto bridge_offset = [](int r) { return r % 2 == 0 ? 0 : 2; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < row_length; ++c) {
            if ((r == 0 && c == row_length - 1) || (r == rows - 1 && c == 0)) continue;
            row_id[{r, c}] = add_qubit();
            if (c > 0 && row_id.count({r, c - 1})) cal.couplings.push_back({row_id[{r, c - 1}], row_id[{r, c}], rate});
        }
        if (r + 1 == rows) break;
        // bridges are numbered after the row above them, before the row below
        std::vector<std::pair<int, std::uint32_t>> bridges;
        for (int c = bridge_offset(r); c < row_length; c += 4) bridges.emplace_back(c, add_qubit());
        for (auto [c, b] : bridges) {
            cal.couplings.push_back({row_id.at({r, c}), b, rate});
            row_id[{-1 - r, c}] = b;
        }
    }
    // connect bridges downwards now that every row exists
    for (int r = 0; r + 1 < rows; ++r) {
        for (int c = bridge_offset(r); c < row_length; c += 4) {
            cal.couplings.push_back({row_id.at({-1 - r, c}), row_id.at({r + 1, c}), rate});
        }
    }
    std::ostringstream name;
    name << "synthetic-heavy-hex-" << cal.qubits.size();
    cal.device_name = name.str();
    cal.validate();
    return cal;
}

DeviceCalibration synthetic_device(int num_qubits, double rate, double jitter, std::uint64_t seed) {
    DeviceCalibration cal;
    if (num_qubits == 127) {
        cal = synthetic_heavy_hex(7, 15, rate);
    } else if (num_qubits == 433) {
        cal = synthetic_heavy_hex(13, 27, rate);
    } else {
        throw std::invalid_argument("synthetic devices have 127 or 433 qubits");
    }
    if (jitter < 0) throw std::invalid_argument("jitter must be non-negative");
    if (jitter > 0) {
        std::mt19937_64 rng(seed);
        const double span = std::log1p(jitter);
        std::uniform_real_distribution<double> u(-span, span);
        auto draw = [&]() { return std::min(1.0, rate * std::exp(u(rng))); };
        for (auto& q : cal.qubits) {
            q.sq_error = draw();
            q.init_error = draw();
            q.idle_error = draw();
            q.readout_error = draw();
        }
        for (auto& c : cal.couplings) c.twoq_error = draw();
    }
    return cal;
}

std::uint32_t SubgraphPlacement::anchor() const { return *std::min_element(device_qubit.begin(), device_qubit.end()); }

std::vector<SubgraphPlacement> enumerate_placements(const DeviceCalibration& cal, const HeavyHexCode& code) {
    const DeviceIndex dev(cal);
    const std::size_t n = code.num_qubits();
    if (n > dev.ids().size()) return {};

    std::vector<std::vector<std::uint32_t>> cadj(n);
    for (auto [a, b] : code.couplings()) {
        cadj[a].push_back(b);
        cadj[b].push_back(a);
    }
    // BFS order from the lowest-index qubit of maximum degree
    std::uint32_t root = 0;
    for (std::uint32_t q = 0; q < n; ++q) {
        if (cadj[q].size() > cadj[root].size()) root = q;
    }
    std::vector<std::uint32_t> order;
    std::vector<int> pos(n, -1);
    std::queue<std::uint32_t> bfs;
    bfs.push(root);
    pos[root] = 0;
    while (!bfs.empty()) {
        const auto u = bfs.front();
        bfs.pop();
        order.push_back(u);
        for (auto v : cadj[u]) {
            if (pos[v] < 0) {
                pos[v] = 1;
                bfs.push(v);
            }
        }
    }
    if (order.size() != n) throw std::logic_error("code coupling graph is disconnected");
    for (std::size_t k = 0; k < n; ++k) pos[order[k]] = static_cast<int>(k);
    // earlier neighbours of each position; the first one is the parent
    std::vector<std::vector<std::uint32_t>> earlier(n);
    for (std::size_t k = 1; k < n; ++k) {
        for (auto v : cadj[order[k]]) {
            if (pos[v] < static_cast<int>(k)) earlier[k].push_back(v);
        }
        std::sort(earlier[k].begin(), earlier[k].end(), [&](auto a, auto b) { return pos[a] < pos[b]; });
    }

    std::vector<std::uint32_t> image(n);
    std::set<std::uint32_t> used;
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<SubgraphPlacement> out;

    auto fits = [&](std::size_t k, std::uint32_t cand) {
        if (used.count(cand) || dev.neighbours(cand).size() < cadj[order[k]].size()) return false;
        for (auto v : earlier[k]) {
            if (!dev.coupled(image[v], cand)) return false;
        }
        return true;
    };
    std::function<void(std::size_t)> extend = [&](std::size_t k) {
        if (k == n) {
            std::vector<std::uint32_t> key(image);
            std::sort(key.begin(), key.end());
            if (seen.insert(key).second) out.push_back({image, 0.0});
            return;
        }
        for (auto cand : dev.neighbours(image[earlier[k].front()])) {
            if (!fits(k, cand)) continue;
            image[order[k]] = cand;
            used.insert(cand);
            extend(k + 1);
            used.erase(cand);
        }
    };
    for (auto anchor : dev.ids()) {
        if (dev.neighbours(anchor).size() < cadj[root].size()) continue;
        image[root] = anchor;
        used.insert(anchor);
        extend(1);
        used.erase(anchor);
    }
    auto sorted_image = [](const SubgraphPlacement& p) {
        auto v = p.device_qubit;
        std::sort(v.begin(), v.end());
        return v;
    };
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return sorted_image(a) < sorted_image(b); });
    return out;
}

NoiseModel device_model(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement) {
    if (placement.device_qubit.size() != code.num_qubits()) {
        throw std::invalid_argument("placement does not map every code qubit");
    }
    const DeviceIndex dev(cal);
    NoiseModel m;
    for (std::uint32_t q = 0; q < code.num_qubits(); ++q) {
        const auto& dq = dev.qubit(placement.device_qubit[q]);
        m.qubits[q] = {dq.sq_error, dq.init_error, dq.idle_error, dq.readout_error};
    }
    for (auto [a, b] : code.couplings()) {
        m.couplings[{a, b}] = dev.twoq_error(placement.device_qubit[a], placement.device_qubit[b]);
    }
    return m;
}

SourceMeans placement_means(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement) {
    const NoiseModel m = device_model(cal, code, placement);
    SourceMeans s;
    for (const auto& [q, r] : m.qubits) {
        s.sq += r.p_1q;
        s.init += r.p_init;
        s.idle += r.p_idle;
        s.readout += r.p_readout;
    }
    const double nq = static_cast<double>(m.qubits.size());
    s.sq /= nq;
    s.init /= nq;
    s.idle /= nq;
    s.readout /= nq;
    for (const auto& [pair, r] : m.couplings) s.twoq += r;
    if (!m.couplings.empty()) s.twoq /= static_cast<double>(m.couplings.size());
    return s;
}

double score_placement(const DeviceCalibration& cal, const HeavyHexCode& code, const SubgraphPlacement& placement,
                       const InfluenceWeights& w) {
    const SourceMeans s = placement_means(cal, code, placement);
    return w.w_1q * s.sq + w.w_init * s.init + w.w_idle * s.idle + w.w_readout * s.readout + w.w_2q * s.twoq;
}

std::vector<SubgraphPlacement> rank_placements(const DeviceCalibration& cal, const HeavyHexCode& code,
                                               const InfluenceWeights& weights) {
    auto placements = enumerate_placements(cal, code);
    for (auto& p : placements) p.score = score_placement(cal, code, p, weights);
    std::stable_sort(placements.begin(), placements.end(), [](const auto& a, const auto& b) { return a.score < b.score; });
    return placements;
}

InfluenceEstimate estimate_influence_weights(const HeavyHexCode& code, double base_p, long shots, MemoryBasis basis,
                                             std::uint64_t seed) {
    if (!(base_p > 0 && base_p <= 0.05)) throw std::invalid_argument("base_p must lie in (0, 0.05]");
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    InfluenceEstimate est;
    std::uint64_t stream = 0;
    for (auto source : kAllSources) {
        PointSpec spec;
        spec.d = code.d;
        spec.basis = basis;
        spec.model = single_source_model(source, base_p);
        spec.noise = to_string(source);
        spec.p = base_p;
        spec.shots = shots;
        spec.seed = derive_seed(seed, stream++);
        const SweepRow row = logical_error_rate(code, spec);
        est.ler.push_back(row.ler);
        est.failures.push_back(row.failures);
    }
    if (est.failures[0] == 0) {
        throw std::runtime_error("single-qubit-gate source produced no logical failures; raise shots or base_p");
    }
    const double ref = est.ler[0];
    est.weights = {1.0, est.ler[1] / ref, est.ler[2] / ref, est.ler[3] / ref, est.ler[4] / ref};
    return est;
}

}  // namespace hhqec
