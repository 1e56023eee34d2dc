#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hhqec {

/// Dense network: ReLU hidden layers, sigmoid output.
///
/// weights[l] has shape (layer_sizes[l+1], layer_sizes[l]).
struct Mlp {
    int d = 0;
    std::vector<int> layer_sizes;
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    /// Free-form training configuration, echoed into the model file.
    std::string config_json = "{}";

    std::size_t num_layers() const { return weights.size(); }
    std::size_t num_parameters() const;
};

/// [in, h1, h2, out] with in = d (d^2 + 2d - 3) / 2, out = 2 d^2 and the hidden
/// sizes linearly interpolated between them.
std::vector<int> mlp_layer_sizes(int d);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
Mlp init_mlp(const std::vector<int>& sizes, std::uint64_t seed);
Mlp init_mlp(int d, std::uint64_t seed);

Eigen::VectorXd forward(const Mlp& mlp, const Eigen::VectorXd& input);
/// Column-per-example batch forward pass; returns output probabilities.
Eigen::MatrixXd forward_batch(const Mlp& mlp, const Eigen::MatrixXd& inputs);

struct MlpGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Mean binary cross-entropy over every output of every example (columns).
double bce_loss(const Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels);

/// Loss and its gradient with respect to every parameter.
double backprop(const Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels, MlpGradients& grad);

/// Largest relative difference between analytic and central finite-difference
/// gradients over all parameters, for a single example.
double gradient_check(const Mlp& mlp, const Eigen::VectorXd& input, const Eigen::VectorXd& label, double epsilon);

struct TrainConfig {
    int batch = 256;
    int epochs = 1;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class AdamOptimizer {
  public:
    AdamOptimizer(const Mlp& mlp, const TrainConfig& config);

    /// One update on a batch; returns the batch loss before the update.
    /// Throws std::runtime_error if the loss is not finite.
    double step(Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels);
    long steps() const { return t_; }

  private:
    TrainConfig cfg_;
    long t_ = 0;
    MlpGradients grad_;
    MlpGradients m_;
    MlpGradients v_;
};

/// Mini-batch Adam over a materialised dataset (one example per column). Batches are
/// taken in a seeded shuffled order each epoch. Returns the per-batch loss trace.
std::vector<double> train(Mlp& mlp, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& labels,
                          const TrainConfig& config, std::mt19937_64& rng);

std::string mlp_to_json(const Mlp& mlp);
Mlp mlp_from_json(const std::string& text);
void save_mlp(const Mlp& mlp, const std::string& path);
Mlp load_mlp(const std::string& path);

}  // namespace hhqec
