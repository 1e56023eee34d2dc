#include "hhqec/ann.hpp"

#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace hhqec {

std::size_t ann_input_size(int d) { return static_cast<std::size_t>(d) * stabilizers_per_cycle(d); }
std::size_t ann_output_size(int d) { return 2 * static_cast<std::size_t>(d) * static_cast<std::size_t>(d); }

BitVector ann_input(const HeavyHexCode& code, const ShotRecord& shot) {
    const std::size_t ns = code.num_stabilizers();
    const std::size_t nz = code.z_stabilizers.size();
    const bool memz = shot.basis == MemoryBasis::MemZ;
    const std::size_t lo = memz ? 0 : nz, hi = memz ? nz : ns;
    BitVector out(ns * shot.stabilizer_outcomes.size());
    const auto& first = shot.stabilizer_outcomes.front();
    for (std::size_t c = 0; c < shot.stabilizer_outcomes.size(); ++c) {
        const bool last = c + 1 == shot.stabilizer_outcomes.size();
        const auto& row = shot.stabilizer_outcomes[c];
        for (std::size_t s = 0; s < ns; ++s) {
            bool v;
            if (s >= lo && s < hi) {
                v = last ? shot.reconstructed_syndrome.get(s) : row.get(s);
            } else {
                v = row.get(s) ^ first.get(s);
            }
            if (v) out.set(c * ns + s, true);
        }
    }
    return out;
}

BitVector ann_label(const PauliFrame& frame) {
    BitVector out(2 * frame.size());
    for (std::size_t q = 0; q < frame.size(); ++q) {
        if (frame.x().get(q)) out.set(2 * q, true);
        if (frame.z().get(q)) out.set(2 * q + 1, true);
    }
    return out;
}

PauliFrame frame_from_label(const BitVector& label) {
    PauliFrame f(label.size() / 2);
    for (std::size_t q = 0; q < f.size(); ++q) f.set(q, pauli_from_bits(label.get(2 * q), label.get(2 * q + 1)));
    return f;
}

BitVector basis_syndrome(const HeavyHexCode& code, const PauliFrame& frame, MemoryBasis basis) {
    const bool memz = basis == MemoryBasis::MemZ;
    const auto& masks = memz ? code.z_stabilizer_masks : code.x_stabilizer_masks;
    const BitVector& part = memz ? frame.x() : frame.z();
    BitVector out(masks.size());
    for (std::size_t s = 0; s < masks.size(); ++s) out.set(s, part.dot(masks[s]));
    return out;
}

BitVector final_syndrome(const HeavyHexCode& code, const ShotRecord& shot) {
    const ChainType fam = chain_type_for(shot.basis);
    const std::size_t off = family_offset(code, fam), n = family_size(code, fam);
    BitVector out(n);
    for (std::size_t s = 0; s < n; ++s) out.set(s, shot.reconstructed_syndrome.get(off + s));
    return out;
}

void GaugeReducer::Basis::insert(BitVector v) {
    v = reduce(std::move(v));
    if (!v.any()) return;
    const std::size_t pivot = v.ones().back();
    for (auto& r : rows) {
        if (r.get(pivot)) r ^= v;
    }
    rows.push_back(std::move(v));
    pivots.push_back(pivot);
}

BitVector GaugeReducer::Basis::reduce(BitVector v) const {
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (v.get(pivots[k])) v ^= rows[k];
    }
    return v;
}

GaugeReducer::GaugeReducer(const HeavyHexCode& code) {
    const std::size_t n = code.num_data();
    for (const auto& g : code.x_gauges) x_.insert(g.op.to_frame(n).x());
    for (const auto& g : code.z_gauges) z_.insert(g.op.to_frame(n).z());
}

PauliFrame GaugeReducer::reduce(const PauliFrame& frame) const {
    PauliFrame out(frame.size());
    out.x() = x_.reduce(frame.x());
    out.z() = z_.reduce(frame.z());
    return out;
}

DatasetGenerator::DatasetGenerator(const HeavyHexCode& code, MemoryBasis basis, int cycles, const NoiseModel& model,
                                   std::uint64_t seed, bool canonical_labels)
    : code_(code),
      circuit_(build_memory_circuit(code, basis, cycles)),
      sampler_(circuit_, model),
      reducer_(code),
      seed_(seed),
      canonical_(canonical_labels) {}

TrainingExample DatasetGenerator::next() {
    std::mt19937_64 rng(derive_seed(seed_, index_++));
    const ShotRecord shot = simulate(code_, circuit_, sampler_.sample(rng));
    return {shot.basis, ann_input(code_, shot), ann_label(canonical_ ? reducer_.reduce(shot.true_frame) : shot.true_frame)};
}

Eigen::VectorXd to_eigen(const BitVector& bits) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(bits.size()));
    for (auto k : bits.ones()) v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

void generate_dataset(DatasetGenerator& gen, std::size_t count, Eigen::MatrixXd& inputs, Eigen::MatrixXd& labels) {
    if (count == 0) throw std::invalid_argument("dataset needs at least one example");
    for (std::size_t k = 0; k < count; ++k) {
        const auto ex = gen.next();
        if (k == 0) {
            inputs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ex.input.size()), static_cast<Eigen::Index>(count));
            labels = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ex.label.size()), static_cast<Eigen::Index>(count));
        }
        const auto col = static_cast<Eigen::Index>(k);
        for (auto i : ex.input.ones()) inputs(static_cast<Eigen::Index>(i), col) = 1.0;
        for (auto i : ex.label.ones()) labels(static_cast<Eigen::Index>(i), col) = 1.0;
    }
}

void write_example_jsonl(std::ostream& out, const TrainingExample& ex) {
    nlohmann::json j;
    j["basis"] = to_string(ex.basis);
    j["input"] = ex.input.to_string();
    j["label"] = ex.label.to_string();
    out << j.dump() << '\n';
}

TrainingExample parse_example_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    return {memory_basis_from_string(j.at("basis").get<std::string>()),
            BitVector::from_string(j.at("input").get<std::string>()),
            BitVector::from_string(j.at("label").get<std::string>())};
}

AnnDecodeResult decode_ann_probabilities(const HeavyHexCode& code, const Eigen::VectorXd& probabilities,
                                         const BitVector& target, MemoryBasis basis, int max_resamples,
                                         std::mt19937_64& rng) {
    if (max_resamples < 0) throw std::invalid_argument("max_resamples must be non-negative");
    if (static_cast<std::size_t>(probabilities.size()) != 2 * code.num_data()) {
        throw std::invalid_argument("network output does not match the code");
    }
    AnnDecodeResult res;
    BitVector bits(static_cast<std::size_t>(probabilities.size()));
    for (Eigen::Index k = 0; k < probabilities.size(); ++k) bits.set(static_cast<std::size_t>(k), probabilities(k) > 0.5);
    PauliFrame corr = frame_from_label(bits);
    if (basis_syndrome(code, corr, basis) == target) {
        res.correction = std::move(corr);
        return res;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= max_resamples; ++n) {
        for (Eigen::Index k = 0; k < probabilities.size(); ++k) bits.set(static_cast<std::size_t>(k), u(rng) < probabilities(k));
        corr = frame_from_label(bits);
        if (basis_syndrome(code, corr, basis) == target) {
            res.correction = std::move(corr);
            res.resamples = n;
            return res;
        }
    }
    res.declared_failure = true;
    res.resamples = max_resamples;
    return res;
}

AnnDecodeResult decode_ann(const HeavyHexCode& code, const Mlp& mlp, const BitVector& input, const BitVector& target,
                           MemoryBasis basis, int max_resamples, std::mt19937_64& rng) {
    return decode_ann_probabilities(code, forward(mlp, to_eigen(input)), target, basis, max_resamples, rng);
}

AnnDecodeResult decode_ann(const HeavyHexCode& code, const Mlp& mlp, const ShotRecord& shot, int max_resamples,
                           std::mt19937_64& rng) {
    return decode_ann(code, mlp, ann_input(code, shot), final_syndrome(code, shot), shot.basis, max_resamples, rng);
}

}  // namespace hhqec
