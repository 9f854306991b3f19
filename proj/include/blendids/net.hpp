#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blendids/adam.hpp"
#include "blendids/matrix.hpp"

namespace blendids {

// softmax_xent: softmax outputs trained on cross-entropy (the default).
// sigmoid_mse: independent sigmoid output units trained on half squared
// error, whose output delta is the classic o*(1-o)*(t-o) signal.
enum class OutputMode { SoftmaxCrossEntropy, SigmoidSquaredError };

OutputMode output_mode_from_string(const std::string& s);
std::string to_string(OutputMode mode);

struct NetModel {
    std::vector<std::size_t> layer_sizes;        // [d_in, hidden..., C]
    std::vector<Matrix> weights;                 // weights[l]: sizes[l+1] x sizes[l]
    std::vector<std::vector<double>> biases;
    OutputMode output_mode = OutputMode::SoftmaxCrossEntropy;
    double final_loss = 0.0;                     // mean training loss of the last epoch
};

// Sized but unfitted net: Xavier-uniform weights, zero biases.
NetModel init_net(const std::vector<std::size_t>& layer_sizes, OutputMode mode,
                  std::uint64_t seed);

struct Activations {
    std::vector<std::vector<double>> outputs;    // outputs[0] is the input row
};

std::vector<double> softmax(std::span<const double> logits);

// Hidden units apply the logistic sigmoid; the last layer applies softmax or
// per-unit sigmoid depending on the mode. All layer outputs are retained for
// the backward pass.
Activations forward(const NetModel& net, std::span<const double> x);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

// Gradients of the mode's loss (descent direction), so they line up with
// central finite differences of loss_value. The weight gradient for w_rj is
// delta_j * o_r and the bias gradient is delta_j, where delta is the
// loss derivative at the unit input.
Gradients backward(const NetModel& net, const Activations& acts,
                   std::span<const double> target);

// Cross-entropy or half squared error per the net's output mode.
double loss_value(const NetModel& net, std::span<const double> output,
                  std::span<const double> target);

// o*(1-o)*(t-o): the error signal of a sigmoid output unit under half squared
// error. backward() propagates its negative.
double sigmoid_output_error(double output, double target);

struct TrainSpec {
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
    std::size_t patience = 0;      // >0 enables early stop on a held-back slice
    bool plain_sgd = false;        // mirror of the per-sample delta-rule update
    double sgd_rate = 0.5;
    AdamConfig adam;
};

// Mini-batch training. Throws TrainError naming the epoch if the loss or any
// parameter goes non-finite.
NetModel train_net(const Matrix& x, std::span<const int> y, int classes,
                   const std::vector<std::size_t>& layer_sizes, const TrainSpec& spec,
                   OutputMode mode = OutputMode::SoftmaxCrossEntropy);

struct NetPrediction {
    int label = 0;
    std::vector<double> probabilities;
};

NetPrediction predict_net(const NetModel& net, std::span<const double> x);
std::vector<int> predict_net_labels(const NetModel& net, const Matrix& rows);

} // namespace blendids
