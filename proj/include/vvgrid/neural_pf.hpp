// One-hidden-layer ReLU surrogate of the power flow, with manual
// backpropagation and Adam training under min-max scaling.
//
// Model: v = descale(W2 * relu(W1 * scale([p; q]) + b)). There is no output
// bias. The ReLU subgradient at exactly 0 is taken as 0 everywhere in this
// project.
#pragma once

#include "vvgrid/dataset.hpp"
#include "vvgrid/scaler.hpp"
#include "vvgrid/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vvgrid {

struct NeuralPfModel {
    Mat w1;  // K x 2N
    Vec b;   // K
    Mat w2;  // N x K
    MinMaxScaler in_scaler;
    MinMaxScaler out_scaler;

    Eigen::Index hidden_width() const { return w1.rows(); }
    Eigen::Index n_buses() const { return w2.rows(); }
};

struct PfTrainConfig {
    double learning_rate = 1e-4;
    int epochs = 2000;
    int batch_size = 64;
    std::uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    int hidden_width = 64;
};

// Seeded Glorot-uniform weights, zero bias; scalers default to identity until
// train_pf fits them on the training split.
NeuralPfModel init_pf_model(Eigen::Index n_buses, Eigen::Index hidden_width, std::uint64_t seed);

VoltageProfile nn_forward(const NeuralPfModel& model, const Vec& net_p, const Vec& net_q);

// Batch forward in scaled space; rows of x_scaled are samples.
Mat nn_forward_scaled(const NeuralPfModel& model, const Mat& x_scaled);

struct PfGradients {
    Mat dw1;
    Vec db;
    Mat dw2;
};

// Mean squared scaled-output error over all (row, output) entries.
double pf_batch_loss(const NeuralPfModel& model, const Mat& inputs, const Mat& outputs);

// Exact gradients of pf_batch_loss. Inputs/outputs are raw per-unit values.
PfGradients nn_backward(const NeuralPfModel& model, const Mat& inputs, const Mat& outputs);

struct PfTrainResult {
    NeuralPfModel model;
    std::vector<double> epoch_loss;  // mean scaled-space training loss
};

// Seeded mini-batch Adam. Scalers are fit on the given (training) rows only.
// Throws DivergenceDetected if the loss becomes non-finite.
PfTrainResult train_pf(const PfDataset& train, const PfTrainConfig& config);

// Mean over rows and buses of squared error in unscaled per-unit volts.
using Predictor = std::function<Vec(const Vec& net_p, const Vec& net_q)>;
double mse_eval(const Predictor& predict, const PfDataset& split);
double mse_eval(const NeuralPfModel& model, const PfDataset& split);

// Jacobian of the raw-voltage output with respect to the raw q inputs at a
// point, with ReLU masks frozen there (used by the MILP bound checks and the
// equilibrium layer).
Mat nn_q_jacobian(const NeuralPfModel& model, const Vec& net_p, const Vec& net_q);

void save_pf_model(const NeuralPfModel& model, const std::string& path);
NeuralPfModel load_pf_model(const std::string& path);

}  // namespace vvgrid
