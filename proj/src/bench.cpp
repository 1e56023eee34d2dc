#include "hhqec/bench.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hhqec/ann.hpp"
#include "hhqec/mwpm.hpp"
#include "hhqec/sim.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::string to_string(DecoderKind k) { return k == DecoderKind::Mwpm ? "mwpm" : "ann"; }

DecoderKind decoder_from_string(const std::string& s) {
    if (s == "mwpm") return DecoderKind::Mwpm;
    if (s == "ann") return DecoderKind::Ann;
    throw std::invalid_argument("unknown decoder '" + s + "'");
}

double probit(double q) { return boost::math::quantile(boost::math::normal(), q); }

Interval wald_interval(long failures, long shots, double level) {
    if (shots <= 0 || failures < 0 || failures > shots) throw std::invalid_argument("need 0 <= failures <= shots");
    const double p = double(failures) / double(shots);
    const double half = probit(level) * std::sqrt(p * (1 - p) / double(shots));
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

std::string csv_header() { return "distance,basis,decoder,noise,p,shots,failures,declared_failures,ler,ci_low,ci_high,seed"; }

std::string to_csv(const SweepRow& r) {
    std::ostringstream os;
    os << r.distance << ',' << to_string(r.basis) << ',' << to_string(r.decoder) << ',' << r.noise << ','
       << fmt("%.6g", r.p) << ',' << r.shots << ',' << r.failures << ',' << r.declared_failures << ','
       << fmt("%.8g", r.ler) << ',' << fmt("%.8g", r.ci_low) << ',' << fmt("%.8g", r.ci_high) << ',' << r.seed;
    return os.str();
}

std::string to_json(const SweepRow& r) {
    nlohmann::ordered_json j;
    j["distance"] = r.distance;
    j["basis"] = to_string(r.basis);
    j["decoder"] = to_string(r.decoder);
    j["noise"] = r.noise;
    j["p"] = r.p;
    j["shots"] = r.shots;
    j["failures"] = r.failures;
    j["declared_failures"] = r.declared_failures;
    j["ler"] = r.ler;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["seed"] = r.seed;
    return j.dump();
}

SweepRow logical_error_rate(const HeavyHexCode& code, const PointSpec& spec) {
    if (spec.shots < 1) throw std::invalid_argument("shots must be positive");
    if (spec.d != code.d) throw std::invalid_argument("point distance does not match the code");
    if (spec.decoder == DecoderKind::Ann) {
        if (spec.mlp == nullptr) throw std::invalid_argument("the ann decoder needs a trained model");
        if (spec.mlp->d != code.d || spec.mlp->layer_sizes != mlp_layer_sizes(code.d)) {
            throw std::invalid_argument("model was trained for a different distance");
        }
    }
    const MemoryCircuit circuit = build_memory_circuit(code, spec.basis, code.d);
    const FaultSampler sampler(circuit, spec.model);

    SweepRow row;
    row.distance = code.d;
    row.basis = spec.basis;
    row.decoder = spec.decoder;
    row.noise = spec.noise;
    row.p = spec.p;
    row.shots = spec.shots;
    row.seed = spec.report_seed.value_or(spec.seed);

    if (spec.decoder == DecoderKind::Mwpm) {
        const DetectorGraph graph = build_detector_graph(code, circuit, spec.model, chain_type_for(spec.basis),
                                                         {.unit_weights = spec.unit_weights});
        for (long s = 0; s < spec.shots; ++s) {
            std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s)));
            const ShotRecord shot = simulate(code, circuit, sampler.sample(rng));
            if (!correction_succeeds(code, shot.true_frame, decode(code, graph, shot), spec.basis)) ++row.failures;
        }
    } else {
        for (long s = 0; s < spec.shots; ++s) {
            std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s)));
            const ShotRecord shot = simulate(code, circuit, sampler.sample(rng));
            const AnnDecodeResult res = decode_ann(code, *spec.mlp, shot, spec.max_resamples, rng);
            if (res.declared_failure) {
                ++row.declared_failures;
                ++row.failures;
            } else if (!correction_succeeds(code, shot.true_frame, res.correction, spec.basis)) {
                ++row.failures;
            }
        }
    }
    row.ler = double(row.failures) / double(row.shots);
    const Interval ci = wald_interval(row.failures, row.shots, spec.ci_level);
    row.ci_low = ci.low;
    row.ci_high = ci.high;
    return row;
}

std::vector<double> parse_p_values(const std::string& spec) {
    std::vector<double> out;
    const auto parts = split(spec, ':');
    if (parts.size() == 3) {
        const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
        const int n = static_cast<int>(parse_double(parts[2]));
        if (!(lo > 0) || !(hi > lo) || n < 2) throw std::invalid_argument("range must be lo:hi:count with 0 < lo < hi, count >= 2");
        for (int k = 0; k < n; ++k) out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (n - 1)));
        out.front() = lo;
        out.back() = hi;
    } else if (parts.size() == 1) {
        for (const auto& s : split(spec, ',')) out.push_back(parse_double(s));
    } else {
        throw std::invalid_argument("cannot parse p values '" + spec + "'");
    }
    if (out.empty()) throw std::invalid_argument("no p values given");
    return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    for (const auto& s : split(spec, ',')) {
        const double v = parse_double(s);
        if (v != std::floor(v)) throw std::invalid_argument("not an integer: '" + s + "'");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::optional<double> estimate_crossover(const std::vector<double>& p, const std::vector<double>& ler_small,
                                         const std::vector<double>& ler_large) {
    if (p.size() != ler_small.size() || p.size() != ler_large.size()) {
        throw std::invalid_argument("crossover inputs differ in length");
    }
    std::vector<double> xs, fs;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0 || ler_small[k] <= 0 || ler_large[k] <= 0) continue;
        xs.push_back(std::log(p[k]));
        fs.push_back(std::log(ler_large[k]) - std::log(ler_small[k]));
    }
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        if (fs[k] < 0 && fs[k + 1] >= 0) {
            const double x = xs[k] - fs[k] * (xs[k + 1] - xs[k]) / (fs[k + 1] - fs[k]);
            return std::exp(x);
        }
    }
    return std::nullopt;
}

void SweepConfig::validate() const {
    if (distances.empty()) throw std::invalid_argument("no distances given");
    if (p_values.empty()) throw std::invalid_argument("no p values given");
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    for (std::size_t k = 0; k < p_values.size(); ++k) {
        if (!(p_values[k] >= 0 && p_values[k] <= 1)) throw std::invalid_argument("p values must lie in [0, 1]");
        if (k > 0 && !(p_values[k] > p_values[k - 1])) throw std::invalid_argument("p values must be strictly increasing");
    }
    for (int d : distances) {
        if (d < 3 || d > 13 || d % 2 == 0) throw std::invalid_argument("distances must be odd, 3 to 13");
        if (decoder == DecoderKind::Ann && (!models.count(d) || models.at(d) == nullptr)) {
            throw std::invalid_argument("no ann model for d=" + std::to_string(d));
        }
    }
}

SweepResult threshold_sweep(const SweepConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult result;
    auto distances = config.distances;
    std::sort(distances.begin(), distances.end());
    distances.erase(std::unique(distances.begin(), distances.end()), distances.end());
    std::map<int, std::vector<double>> lers;
    for (int d : distances) {
        const HeavyHexCode code = build_code(d);
        for (std::size_t k = 0; k < config.p_values.size(); ++k) {
            PointSpec spec;
            spec.d = d;
            spec.basis = config.basis;
            spec.decoder = config.decoder;
            spec.model = uniform_model(config.p_values[k]);
            spec.p = config.p_values[k];
            spec.shots = config.shots;
            spec.seed = derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(d)), k);
            spec.report_seed = config.seed;
            spec.mlp = config.decoder == DecoderKind::Ann ? config.models.at(d) : nullptr;
            spec.max_resamples = config.max_resamples;
            spec.unit_weights = config.unit_weights;
            spec.ci_level = config.ci_level;
            result.rows.push_back(logical_error_rate(code, spec));
            lers[d].push_back(result.rows.back().ler);
        }
    }
    for (std::size_t k = 0; k + 1 < distances.size(); ++k) {
        const int a = distances[k], b = distances[k + 1];
        result.crossovers.push_back({a, b, estimate_crossover(config.p_values, lers[a], lers[b])});
    }
    result.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) out += to_csv(r) + "\n";
    return out;
}

std::string sweep_summary_json(const SweepConfig& config, const SweepResult& result) {
    nlohmann::ordered_json j;
    j["decoder"] = to_string(config.decoder);
    j["basis"] = to_string(config.basis);
    j["distances"] = config.distances;
    j["p_values"] = config.p_values;
    j["shots"] = config.shots;
    j["seed"] = config.seed;
    j["unit_weights"] = config.unit_weights;
    j["ci_level"] = config.ci_level;
    auto& cs = j["crossovers"] = nlohmann::ordered_json::array();
    for (const auto& c : result.crossovers) {
        nlohmann::ordered_json e;
        e["d_low"] = c.d_low;
        e["d_high"] = c.d_high;
        e["p"] = c.p ? nlohmann::ordered_json(*c.p) : nlohmann::ordered_json(nullptr);
        cs.push_back(e);
    }
    if (!result.crossovers.empty() && result.crossovers.front().p) {
        j["crossover"] = *result.crossovers.front().p;
    } else {
        j["crossover"] = nullptr;
    }
    j["rows"] = result.rows.size();
    j["runtime_seconds"] = result.runtime_seconds;
    return j.dump(1);
}

}  // namespace hhqec
