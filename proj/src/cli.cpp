#include "hhqec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hhqec/ann.hpp"
#include "hhqec/bench.hpp"
#include "hhqec/device.hpp"
#include "hhqec/mlp.hpp"
#include "hhqec/mwpm.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

template <class F>
auto usage(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

MemoryBasis basis_arg(const std::string& s) {
    return usage([&] { return memory_basis_from_string(s); });
}

InfluenceWeights weights_arg(const std::string& s) {
    const auto v = usage([&] { return parse_p_values(s); });
    if (v.size() != 5) throw UsageError("--weights needs five values: 1q,init,idle,readout,2q");
    return {v[0], v[1], v[2], v[3], v[4]};
}

void check_distance(int d) {
    if (d < 3 || d > 13 || d % 2 == 0) throw UsageError("distance must be odd, 3 to 13");
}

void check_rate(double p, const char* name) {
    if (!(p >= 0 && p <= 1)) throw UsageError(std::string(name) + " must lie in [0, 1]");
}

struct ScoredPlacement {
    std::size_t id;
    SubgraphPlacement placement;
    SourceMeans means;
};

std::vector<ScoredPlacement> ranked(const DeviceCalibration& cal, const HeavyHexCode& code,
                                    const InfluenceWeights& w) {
    std::vector<ScoredPlacement> out;
    auto all = enumerate_placements(cal, code);
    for (std::size_t k = 0; k < all.size(); ++k) {
        all[k].score = score_placement(cal, code, all[k], w);
        out.push_back({k, all[k], placement_means(cal, code, all[k])});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.placement.score < b.placement.score; });
    return out;
}

Json score_summary(const std::vector<ScoredPlacement>& rows) {
    Json j;
    j["placements"] = rows.size();
    if (rows.empty()) {
        j["score_min"] = nullptr;
        j["score_median"] = nullptr;
        j["score_max"] = nullptr;
    } else {
        j["score_min"] = rows.front().placement.score;
        j["score_median"] = rows[(rows.size() - 1) / 2].placement.score;
        j["score_max"] = rows.back().placement.score;
    }
    return j;
}

// gen-data

struct GenDataArgs {
    int d = 0;
    double p = 1e-3;
    long count = 0;
    std::string basis = "memx";
    int cycles = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool raw_labels = false;
};

void gen_data(const GenDataArgs& a, std::ostream& out) {
    check_distance(a.d);
    check_rate(a.p, "--p");
    if (a.count < 1) throw UsageError("--count must be positive");
    const HeavyHexCode code = build_code(a.d);
    DatasetGenerator gen(code, basis_arg(a.basis), a.cycles > 0 ? a.cycles : a.d, uniform_model(a.p), a.seed,
                         !a.raw_labels);
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + a.out + "' for writing");
    for (long k = 0; k < a.count; ++k) write_example_jsonl(f, gen.next());
    if (!f) throw std::runtime_error("failed writing '" + a.out + "'");
    Json j;
    j["examples"] = a.count;
    j["input_size"] = ann_input_size(a.d);
    j["label_size"] = ann_output_size(a.d);
    j["out"] = a.out;
    out << j.dump() << '\n';
}

// train

struct TrainArgs {
    int d = 0;
    std::string data;
    double p = 1e-3;
    long count = 100000;
    std::string basis = "memx";
    int epochs = 10;
    int batch = 256;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    std::string out;
    std::string loss_out;
};

void train_cmd(const TrainArgs& a, std::ostream& out) {
    check_distance(a.d);
    check_rate(a.p, "--p");
    if (a.epochs < 1 || a.batch < 1 || !(a.lr > 0)) throw UsageError("--epochs, --batch and --lr must be positive");
    const HeavyHexCode code = build_code(a.d);
    Eigen::MatrixXd X, Y;
    long examples = 0;
    if (!a.data.empty()) {
        std::ifstream f(a.data);
        if (!f) throw std::runtime_error("cannot open '" + a.data + "'");
        std::vector<TrainingExample> rows;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            rows.push_back(parse_example_jsonl(line));
            if (rows.back().input.size() != ann_input_size(a.d) || rows.back().label.size() != ann_output_size(a.d)) {
                throw std::runtime_error("example " + std::to_string(rows.size()) + " does not match d=" +
                                         std::to_string(a.d));
            }
        }
        if (rows.empty()) throw std::runtime_error("no examples in '" + a.data + "'");
        examples = static_cast<long>(rows.size());
        X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ann_input_size(a.d)), examples);
        Y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ann_output_size(a.d)), examples);
        for (Eigen::Index k = 0; k < examples; ++k) {
            X.col(k) = to_eigen(rows[static_cast<std::size_t>(k)].input);
            Y.col(k) = to_eigen(rows[static_cast<std::size_t>(k)].label);
        }
    } else {
        if (a.count < 1) throw UsageError("--count must be positive");
        DatasetGenerator gen(code, basis_arg(a.basis), a.d, uniform_model(a.p), derive_seed(a.seed, 0));
        generate_dataset(gen, static_cast<std::size_t>(a.count), X, Y);
        examples = a.count;
    }
    Mlp mlp = init_mlp(a.d, derive_seed(a.seed, 1));
    TrainConfig cfg;
    cfg.batch = a.batch;
    cfg.epochs = a.epochs;
    cfg.learning_rate = a.lr;
    std::mt19937_64 rng(derive_seed(a.seed, 2));
    const auto trace = train(mlp, X, Y, cfg, rng);

    Json config;
    config["data"] = a.data.empty() ? Json(nullptr) : Json(a.data);
    config["p"] = a.p;
    config["basis"] = a.basis;
    config["examples"] = examples;
    config["epochs"] = a.epochs;
    config["batch"] = a.batch;
    config["learning_rate"] = a.lr;
    config["seed"] = a.seed;
    config["canonical_labels"] = a.data.empty();
    mlp.config_json = config.dump();
    save_mlp(mlp, a.out);

    if (!a.loss_out.empty()) {
        std::string csv = "step,loss\n";
        for (std::size_t k = 0; k < trace.size(); ++k) csv += std::to_string(k) + "," + fmt(trace[k]) + "\n";
        write_file(a.loss_out, csv);
    }
    const std::size_t per_epoch = trace.size() / static_cast<std::size_t>(a.epochs);
    double last = 0;
    for (std::size_t k = trace.size() - per_epoch; k < trace.size(); ++k) last += trace[k];
    Json j;
    j["examples"] = examples;
    j["parameters"] = mlp.num_parameters();
    j["steps"] = trace.size();
    j["final_epoch_loss"] = per_epoch ? last / double(per_epoch) : 0.0;
    j["out"] = a.out;
    out << j.dump() << '\n';
}

// eval

struct EvalArgs {
    std::string decoder = "mwpm";
    std::string model;
    int d = 0;
    double p = 1e-3;
    long shots = 10000;
    std::string basis = "memx";
    std::uint64_t seed = 0;
    bool unit_weights = false;
    int max_resamples = 100;
    double ci_level = 0.975;
    std::string calibration;
    std::string placement = "best";
    std::string weights = "1,17,41,65,100";
    std::string out;
};

void eval_cmd(const EvalArgs& a, std::ostream& out) {
    const DecoderKind kind = usage([&] { return decoder_from_string(a.decoder); });
    std::unique_ptr<Mlp> mlp;
    int d = a.d;
    if (kind == DecoderKind::Ann) {
        if (a.model.empty()) throw UsageError("--decoder ann needs --model");
        mlp = std::make_unique<Mlp>(load_mlp(a.model));
        if (d == 0) d = mlp->d;
    }
    if (d == 0) throw UsageError("--d is required");
    check_distance(d);
    check_rate(a.p, "--p");
    if (a.shots < 1) throw UsageError("--shots must be positive");
    if (a.max_resamples < 0) throw UsageError("--max-resamples must be non-negative");
    if (!(a.ci_level > 0.5 && a.ci_level < 1)) throw UsageError("--ci-level must lie in (0.5, 1)");

    const HeavyHexCode code = build_code(d);
    PointSpec spec;
    spec.d = d;
    spec.basis = basis_arg(a.basis);
    spec.decoder = kind;
    spec.shots = a.shots;
    spec.seed = a.seed;
    spec.mlp = mlp.get();
    spec.max_resamples = a.max_resamples;
    spec.unit_weights = a.unit_weights;
    spec.ci_level = a.ci_level;

    Json extra;
    if (a.calibration.empty()) {
        spec.model = uniform_model(a.p);
        spec.p = a.p;
    } else {
        const DeviceCalibration cal = load_calibration(a.calibration);
        const auto rows = ranked(cal, code, weights_arg(a.weights));
        if (rows.empty()) throw std::runtime_error("the device has no placement for d=" + std::to_string(d));
        std::size_t pick;
        if (a.placement == "best") {
            pick = 0;
        } else if (a.placement == "median") {
            pick = (rows.size() - 1) / 2;
        } else if (a.placement == "worst") {
            pick = rows.size() - 1;
        } else {
            const auto v = usage([&] { return parse_int_list(a.placement); });
            if (v.size() != 1 || v[0] < 0 || static_cast<std::size_t>(v[0]) >= rows.size()) {
                throw UsageError("--placement must be best, median, worst or a rank below " +
                                 std::to_string(rows.size()));
            }
            pick = static_cast<std::size_t>(v[0]);
        }
        const auto& chosen = rows[pick];
        spec.model = device_model(cal, code, chosen.placement);
        spec.p = chosen.means.overall();
        spec.noise = "device:" + cal.device_name + "#" + std::to_string(chosen.id);
        extra = score_summary(rows);
        extra["placement_id"] = chosen.id;
        extra["placement_rank"] = pick;
        extra["anchor_qubit"] = chosen.placement.anchor();
        extra["score"] = chosen.placement.score;
    }
    const SweepRow row = logical_error_rate(code, spec);
    Json j = Json::parse(to_json(row));
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    if (!a.out.empty()) write_file(a.out, csv_header() + "\n" + to_csv(row) + "\n");
    out << j.dump() << '\n';
}

// sweep

struct SweepArgs {
    std::string decoder = "mwpm";
    std::string distances = "3,5";
    std::string p = "2e-4:2e-3:8";
    long shots = 10000;
    std::string basis = "memx";
    std::uint64_t seed = 0;
    std::vector<std::string> models;
    bool unit_weights = false;
    int max_resamples = 100;
    double ci_level = 0.975;
    std::string out;
    std::string summary;
};

void sweep_cmd(const SweepArgs& a, std::ostream& out) {
    SweepConfig cfg;
    cfg.decoder = usage([&] { return decoder_from_string(a.decoder); });
    cfg.distances = usage([&] { return parse_int_list(a.distances); });
    cfg.p_values = usage([&] { return parse_p_values(a.p); });
    cfg.shots = a.shots;
    cfg.basis = basis_arg(a.basis);
    cfg.seed = a.seed;
    cfg.unit_weights = a.unit_weights;
    cfg.max_resamples = a.max_resamples;
    cfg.ci_level = a.ci_level;
    std::vector<std::unique_ptr<Mlp>> owned;
    for (const auto& path : a.models) {
        owned.push_back(std::make_unique<Mlp>(load_mlp(path)));
        cfg.models[owned.back()->d] = owned.back().get();
    }
    usage([&] {
        cfg.validate();
        return 0;
    });
    const SweepResult res = threshold_sweep(cfg);
    write_file(a.out, sweep_csv(res.rows));
    const std::string summary = sweep_summary_json(cfg, res);
    if (!a.summary.empty()) write_file(a.summary, summary + "\n");
    out << summary << '\n';
}

// subgraph-rank

struct RankArgs {
    std::string calibration;
    int d = 0;
    std::string weights = "1,17,41,65,100";
    std::string out;
    std::string summary;
};

void rank_cmd(const RankArgs& a, std::ostream& out) {
    check_distance(a.d);
    const InfluenceWeights w = weights_arg(a.weights);
    const DeviceCalibration cal = load_calibration(a.calibration);
    const HeavyHexCode code = build_code(a.d);
    const auto rows = ranked(cal, code, w);
    std::string csv = "rank,placement_id,anchor_qubit,score,mean_1q,mean_init,mean_idle,mean_readout,mean_2q\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        csv += std::to_string(k) + "," + std::to_string(r.id) + "," + std::to_string(r.placement.anchor()) + "," +
               fmt(r.placement.score) + "," + fmt(r.means.sq) + "," + fmt(r.means.init) + "," + fmt(r.means.idle) +
               "," + fmt(r.means.readout) + "," + fmt(r.means.twoq) + "\n";
    }
    write_file(a.out, csv);
    Json j;
    j["device"] = cal.device_name;
    j["distance"] = a.d;
    j["weights"] = {w.w_1q, w.w_init, w.w_idle, w.w_readout, w.w_2q};
    const Json scores = score_summary(rows);
    for (auto it = scores.begin(); it != scores.end(); ++it) j[it.key()] = it.value();
    if (!a.summary.empty()) write_file(a.summary, j.dump(1) + "\n");
    out << j.dump() << '\n';
}

// influence-weights

struct InfluenceArgs {
    int d = 3;
    double p = 2e-3;
    long shots = 100000;
    std::string basis = "memx";
    std::uint64_t seed = 0;
    std::string out;
};

void influence_cmd(const InfluenceArgs& a, std::ostream& out) {
    check_distance(a.d);
    check_rate(a.p, "--p");
    if (a.shots < 1) throw UsageError("--shots must be positive");
    const HeavyHexCode code = build_code(a.d);
    const InfluenceEstimate est = estimate_influence_weights(code, a.p, a.shots, basis_arg(a.basis), a.seed);
    Json j;
    j["distance"] = a.d;
    j["basis"] = a.basis;
    j["p"] = a.p;
    j["shots"] = a.shots;
    j["seed"] = a.seed;
    const double w[] = {est.weights.w_1q, est.weights.w_init, est.weights.w_idle, est.weights.w_readout,
                        est.weights.w_2q};
    std::size_t k = 0;
    for (ErrorSource s : kAllSources) {
        Json e;
        e["weight"] = w[k];
        e["ler"] = est.ler[k];
        e["failures"] = est.failures[k];
        j["sources"][to_string(s)] = e;
        ++k;
    }
    if (!a.out.empty()) write_file(a.out, j.dump(1) + "\n");
    out << j.dump() << '\n';
}

// make-synthetic-device

struct SyntheticArgs {
    int qubits = 127;
    double rate = 1e-3;
    double jitter = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void synthetic_cmd(const SyntheticArgs& a, std::ostream& out) {
    if (a.qubits != 127 && a.qubits != 433) throw UsageError("--qubits must be 127 or 433");
    check_rate(a.rate, "--rate");
    if (a.jitter < 0) throw UsageError("--jitter must be non-negative");
    const DeviceCalibration cal = synthetic_device(a.qubits, a.rate, a.jitter, a.seed);
    save_calibration(cal, a.out);
    Json j;
    j["device"] = cal.device_name;
    j["qubits"] = cal.qubits.size();
    j["couplings"] = cal.couplings.size();
    j["out"] = a.out;
    out << j.dump() << '\n';
}

// dump-code

struct DumpArgs {
    int d = 3;
    std::string out;
};

void dump_cmd(const DumpArgs& a, std::ostream& out) {
    check_distance(a.d);
    const std::string text = code_to_json(build_code(a.d)) + "\n";
    if (a.out.empty()) {
        out << text;
    } else {
        write_file(a.out, text);
    }
}

const std::vector<std::string> kBases = {"memx", "memz"};
const std::vector<std::string> kDecoders = {"mwpm", "ann"};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heavy-hex subsystem code simulation and decoding"};
    app.require_subcommand(1);

    GenDataArgs gd;
    auto* gen = app.add_subcommand("gen-data", "Write simulated training examples as JSON lines");
    gen->add_option("-d,--distance", gd.d, "Code distance")->required();
    gen->add_option("--p", gd.p, "Physical error rate");
    gen->add_option("--count", gd.count, "Number of examples")->required();
    gen->add_option("--basis", gd.basis, "memx or memz")->check(CLI::IsMember(kBases));
    gen->add_option("--cycles", gd.cycles, "Syndrome cycles (default: distance)");
    gen->add_option("--seed", gd.seed, "Base seed");
    gen->add_flag("--raw-labels", gd.raw_labels, "Label with the raw error frame instead of its gauge-reduced form");
    gen->add_option("--out", gd.out, "Output JSONL file")->required();

    TrainArgs tr;
    auto* trn = app.add_subcommand("train", "Train a feed-forward decoder");
    trn->add_option("-d,--distance", tr.d, "Code distance")->required();
    trn->add_option("--data", tr.data, "JSONL examples (default: simulate --count examples at --p)");
    trn->add_option("--p", tr.p, "Physical error rate for simulated data");
    trn->add_option("--count", tr.count, "Number of simulated examples");
    trn->add_option("--basis", tr.basis, "memx or memz")->check(CLI::IsMember(kBases));
    trn->add_option("--epochs", tr.epochs);
    trn->add_option("--batch", tr.batch);
    trn->add_option("--lr", tr.lr, "Adam learning rate");
    trn->add_option("--seed", tr.seed, "Base seed for data, initialisation and shuffling");
    trn->add_option("--out", tr.out, "Model JSON file")->required();
    trn->add_option("--loss-out", tr.loss_out, "Per-batch loss CSV");

    EvalArgs ev;
    auto* evl = app.add_subcommand("eval", "Estimate one logical error rate");
    evl->add_option("--decoder", ev.decoder)->check(CLI::IsMember(kDecoders));
    evl->add_option("--model", ev.model, "Model JSON for the ann decoder");
    evl->add_option("-d,--distance", ev.d, "Code distance (ann: defaults to the model's)");
    evl->add_option("--p", ev.p, "Physical error rate");
    evl->add_option("--shots", ev.shots);
    evl->add_option("--basis", ev.basis, "memx or memz")->check(CLI::IsMember(kBases));
    evl->add_option("--seed", ev.seed);
    evl->add_flag("--unit-weights", ev.unit_weights, "Match with unit edge weights");
    evl->add_option("--max-resamples", ev.max_resamples);
    evl->add_option("--ci-level", ev.ci_level, "One-sided normal quantile of the interval");
    evl->add_option("--calibration", ev.calibration, "Device calibration JSON; replaces the uniform --p model");
    evl->add_option("--placement", ev.placement, "best, median, worst or a rank index");
    evl->add_option("--weights", ev.weights, "Placement score weights: 1q,init,idle,readout,2q");
    evl->add_option("--out", ev.out, "Also write the row as CSV");

    SweepArgs sw;
    auto* swp = app.add_subcommand("sweep", "Logical error rate against physical error rate");
    swp->add_option("--decoder", sw.decoder)->check(CLI::IsMember(kDecoders));
    swp->add_option("--distances", sw.distances, "Comma-separated distances");
    swp->add_option("--p", sw.p, "lo:hi:count (log-spaced) or a comma-separated list");
    swp->add_option("--shots", sw.shots, "Shots per point");
    swp->add_option("--basis", sw.basis, "memx or memz")->check(CLI::IsMember(kBases));
    swp->add_option("--seed", sw.seed);
    swp->add_option("--model", sw.models, "Model JSON per distance (ann)");
    swp->add_flag("--unit-weights", sw.unit_weights);
    swp->add_option("--max-resamples", sw.max_resamples);
    swp->add_option("--ci-level", sw.ci_level);
    swp->add_option("--out", sw.out, "Output CSV")->required();
    swp->add_option("--summary", sw.summary, "Summary JSON");

    RankArgs rk;
    auto* rnk = app.add_subcommand("subgraph-rank", "Rank code placements on a device");
    rnk->add_option("--calibration", rk.calibration, "Device calibration JSON")->required();
    rnk->add_option("-d,--distance", rk.d, "Code distance")->required();
    rnk->add_option("--weights", rk.weights, "Score weights: 1q,init,idle,readout,2q");
    rnk->add_option("--out", rk.out, "Output CSV")->required();
    rnk->add_option("--summary", rk.summary, "Summary JSON");

    InfluenceArgs in;
    auto* inf = app.add_subcommand("influence-weights", "Estimate per-source influence weights");
    inf->add_option("-d,--distance", in.d);
    inf->add_option("--p", in.p, "Rate of the active source");
    inf->add_option("--shots", in.shots, "Shots per source");
    inf->add_option("--basis", in.basis, "memx or memz")->check(CLI::IsMember(kBases));
    inf->add_option("--seed", in.seed);
    inf->add_option("--out", in.out, "Output JSON");

    SyntheticArgs sy;
    auto* syn = app.add_subcommand("make-synthetic-device", "Write a synthetic heavy-hex calibration");
    syn->add_option("--qubits", sy.qubits, "127 or 433");
    syn->add_option("--rate", sy.rate, "Base error rate");
    syn->add_option("--jitter", sy.jitter, "Log-uniform spread around the base rate");
    syn->add_option("--seed", sy.seed);
    syn->add_option("--out", sy.out, "Calibration JSON")->required();

    DumpArgs du;
    auto* dmp = app.add_subcommand("dump-code", "Print the code and its schedule as JSON");
    dmp->add_option("-d,--distance", du.d);
    dmp->add_option("--out", du.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) gen_data(gd, out);
        if (trn->parsed()) train_cmd(tr, out);
        if (evl->parsed()) eval_cmd(ev, out);
        if (swp->parsed()) sweep_cmd(sw, out);
        if (rnk->parsed()) rank_cmd(rk, out);
        if (inf->parsed()) influence_cmd(in, out);
        if (syn->parsed()) synthetic_cmd(sy, out);
        if (dmp->parsed()) dump_cmd(du, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace hhqec
