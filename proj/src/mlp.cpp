#include "hhqec/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hhqec/code.hpp"
#include "json.hpp"

namespace hhqec {

namespace {

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// log(1 + e^z) without overflow
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_input(const Mlp& mlp, Eigen::Index rows) {
    if (mlp.layer_sizes.empty() || rows != mlp.layer_sizes.front()) {
        throw std::invalid_argument("input length does not match the network");
    }
}

// Pre-activations of every layer, column per example.
std::vector<Eigen::MatrixXd> pre_activations(const Mlp& mlp, const Eigen::MatrixXd& inputs,
                                             std::vector<Eigen::MatrixXd>& acts) {
    check_input(mlp, inputs.rows());
    std::vector<Eigen::MatrixXd> zs;
    acts.clear();
    acts.push_back(inputs);
    for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
        Eigen::MatrixXd z = mlp.weights[l] * acts.back();
        z.colwise() += mlp.biases[l];
        zs.push_back(z);
        if (l + 1 < mlp.num_layers()) acts.push_back(relu(z));
    }
    return zs;
}

MlpGradients zeros_like(const Mlp& mlp) {
    MlpGradients g;
    for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
        g.weights.push_back(Eigen::MatrixXd::Zero(mlp.weights[l].rows(), mlp.weights[l].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(mlp.biases[l].size()));
    }
    return g;
}

double loss_from_logits(const Eigen::MatrixXd& z, const Eigen::MatrixXd& y) {
    double total = 0;
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        for (Eigen::Index r = 0; r < z.rows(); ++r) total += softplus(z(r, c)) - y(r, c) * z(r, c);
    }
    return total / static_cast<double>(z.size());
}

}  // namespace

std::size_t Mlp::num_parameters() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

std::vector<int> mlp_layer_sizes(int d) {
    const int in = d * static_cast<int>(stabilizers_per_cycle(d));
    const int out = 2 * d * d;
    std::vector<int> sizes{in};
    for (int k = 1; k <= 2; ++k) sizes.push_back(static_cast<int>(std::lround(in + (out - in) * k / 3.0)));
    sizes.push_back(out);
    return sizes;
}

Mlp init_mlp(const std::vector<int>& sizes, std::uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("network needs at least two layers");
    Mlp mlp;
    mlp.layer_sizes = sizes;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        if (sizes[l] <= 0 || sizes[l + 1] <= 0) throw std::invalid_argument("layer sizes must be positive");
        const double a = 1.0 / std::sqrt(double(sizes[l]));
        std::uniform_real_distribution<double> u(-a, a);
        Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = u(rng);
        }
        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(Eigen::VectorXd::Zero(sizes[l + 1]));
    }
    return mlp;
}

Mlp init_mlp(int d, std::uint64_t seed) {
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("distance must be odd and at least 3");
    Mlp mlp = init_mlp(mlp_layer_sizes(d), seed);
    mlp.d = d;
    return mlp;
}

Eigen::MatrixXd forward_batch(const Mlp& mlp, const Eigen::MatrixXd& inputs) {
    std::vector<Eigen::MatrixXd> acts;
    auto zs = pre_activations(mlp, inputs, acts);
    return sigmoid(zs.back());
}

Eigen::VectorXd forward(const Mlp& mlp, const Eigen::VectorXd& input) { return forward_batch(mlp, input); }

double bce_loss(const Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) {
    std::vector<Eigen::MatrixXd> acts;
    auto zs = pre_activations(mlp, inputs, acts);
    return loss_from_logits(zs.back(), labels);
}

double backprop(const Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels, MlpGradients& grad) {
    std::vector<Eigen::MatrixXd> acts;
    auto zs = pre_activations(mlp, inputs, acts);
    if (labels.rows() != zs.back().rows() || labels.cols() != inputs.cols()) {
        throw std::invalid_argument("label shape does not match the network");
    }
    const double loss = loss_from_logits(zs.back(), labels);
    if (grad.weights.size() != mlp.num_layers()) grad = zeros_like(mlp);

    Eigen::MatrixXd delta = (sigmoid(zs.back()) - labels) / static_cast<double>(labels.size());
    for (std::size_t l = mlp.num_layers(); l-- > 0;) {
        grad.weights[l].noalias() = delta * acts[l].transpose();
        grad.biases[l] = delta.rowwise().sum();
        if (l == 0) break;
        Eigen::MatrixXd back = mlp.weights[l].transpose() * delta;
        delta = back.cwiseProduct(zs[l - 1].unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; }));
    }
    return loss;
}

double gradient_check(const Mlp& mlp, const Eigen::VectorXd& input, const Eigen::VectorXd& label, double epsilon) {
    if (epsilon < 1e-7 || epsilon > 1e-3) throw std::invalid_argument("epsilon must lie in [1e-7, 1e-3]");
    MlpGradients grad;
    backprop(mlp, input, label, grad);
    Mlp probe = mlp;
    double worst = 0;
    auto compare = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + epsilon;
        const double up = bce_loss(probe, input, label);
        param = saved - epsilon;
        const double down = bce_loss(probe, input, label);
        param = saved;
        const double numeric = (up - down) / (2 * epsilon);
        const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        worst = std::max(worst, std::abs(analytic - numeric) / scale);
    };
    for (std::size_t l = 0; l < probe.num_layers(); ++l) {
        for (Eigen::Index r = 0; r < probe.weights[l].rows(); ++r) {
            for (Eigen::Index c = 0; c < probe.weights[l].cols(); ++c) compare(probe.weights[l](r, c), grad.weights[l](r, c));
        }
        for (Eigen::Index r = 0; r < probe.biases[l].size(); ++r) compare(probe.biases[l](r), grad.biases[l](r));
    }
    return worst;
}

AdamOptimizer::AdamOptimizer(const Mlp& mlp, const TrainConfig& config)
    : cfg_(config), grad_(zeros_like(mlp)), m_(zeros_like(mlp)), v_(zeros_like(mlp)) {}

double AdamOptimizer::step(Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels) {
    const double loss = backprop(mlp, inputs, labels, grad_);
    if (!std::isfinite(loss)) {
        throw std::runtime_error("training diverged at step " + std::to_string(t_) + " (loss not finite)");
    }
    ++t_;
    const double c1 = 1 - std::pow(cfg_.beta1, double(t_));
    const double c2 = 1 - std::pow(cfg_.beta2, double(t_));
    auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
        m = cfg_.beta1 * m + (1 - cfg_.beta1) * g;
        v = cfg_.beta2 * v + (1 - cfg_.beta2) * g.cwiseProduct(g);
        param.array() -= cfg_.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg_.eps);
    };
    for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
        update(mlp.weights[l], grad_.weights[l], m_.weights[l], v_.weights[l]);
        update(mlp.biases[l], grad_.biases[l], m_.biases[l], v_.biases[l]);
    }
    return loss;
}

std::vector<double> train(Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels,
                          const TrainConfig& config, std::mt19937_64& rng) {
    const Eigen::Index n = inputs.cols();
    if (n == 0) throw std::invalid_argument("empty dataset");
    if (labels.cols() != n) throw std::invalid_argument("inputs and labels differ in example count");
    if (config.batch <= 0 || config.epochs <= 0) throw std::invalid_argument("batch and epochs must be positive");
    AdamOptimizer opt(mlp, config);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::vector<double> trace;
    Eigen::MatrixXd bx, by;
    for (int e = 0; e < config.epochs; ++e) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index start = 0; start < n; start += config.batch) {
            const Eigen::Index b = std::min<Eigen::Index>(config.batch, n - start);
            bx.resize(inputs.rows(), b);
            by.resize(labels.rows(), b);
            for (Eigen::Index k = 0; k < b; ++k) {
                bx.col(k) = inputs.col(order[static_cast<std::size_t>(start + k)]);
                by.col(k) = labels.col(order[static_cast<std::size_t>(start + k)]);
            }
            trace.push_back(opt.step(mlp, bx, by));
        }
    }
    return trace;
}

std::string mlp_to_json(const Mlp& mlp) {
    nlohmann::json j;
    j["format"] = "hh-mlp/1";
    j["d"] = mlp.d;
    j["layer_sizes"] = mlp.layer_sizes;
    auto& ws = j["weights"] = nlohmann::json::array();
    auto& bs = j["biases"] = nlohmann::json::array();
    for (std::size_t l = 0; l < mlp.num_layers(); ++l) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < mlp.weights[l].rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(mlp.weights[l].cols()));
            for (Eigen::Index c = 0; c < mlp.weights[l].cols(); ++c) row[static_cast<std::size_t>(c)] = mlp.weights[l](r, c);
            rows.push_back(row);
        }
        ws.push_back(rows);
        bs.push_back(std::vector<double>(mlp.biases[l].data(), mlp.biases[l].data() + mlp.biases[l].size()));
    }
    j["config"] = nlohmann::json::parse(mlp.config_json);
    return j.dump();
}

Mlp mlp_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "hh-mlp/1") throw std::runtime_error("not an hh-mlp/1 model file");
    Mlp mlp;
    mlp.d = j.at("d").get<int>();
    mlp.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    if (ws.size() + 1 != mlp.layer_sizes.size() || bs.size() != ws.size()) {
        throw std::runtime_error("model file layer count mismatch");
    }
    for (std::size_t l = 0; l < ws.size(); ++l) {
        const int rows = mlp.layer_sizes[l + 1], cols = mlp.layer_sizes[l];
        if (ws[l].size() != std::size_t(rows) || bs[l].size() != std::size_t(rows)) {
            throw std::runtime_error("model file weight shape mismatch");
        }
        Eigen::MatrixXd w(rows, cols);
        Eigen::VectorXd b(rows);
        for (int r = 0; r < rows; ++r) {
            const auto row = ws[l][std::size_t(r)].get<std::vector<double>>();
            if (row.size() != std::size_t(cols)) throw std::runtime_error("model file weight shape mismatch");
            for (int c = 0; c < cols; ++c) w(r, c) = row[std::size_t(c)];
            b(r) = bs[l][std::size_t(r)].get<double>();
        }
        mlp.weights.push_back(std::move(w));
        mlp.biases.push_back(std::move(b));
    }
    if (j.contains("config")) mlp.config_json = j["config"].dump();
    return mlp;
}

void save_mlp(const Mlp& mlp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << mlp_to_json(mlp) << '\n';
}

Mlp load_mlp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return mlp_from_json(ss.str());
}

}  // namespace hhqec
