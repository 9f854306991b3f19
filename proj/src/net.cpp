#include "blendids/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blendids/errors.hpp"
#include "blendids/rng.hpp"

namespace blendids {

OutputMode output_mode_from_string(const std::string& s) {
    if (s == "softmax_xent") return OutputMode::SoftmaxCrossEntropy;
    if (s == "sigmoid_mse") return OutputMode::SigmoidSquaredError;
    throw ConfigError("unknown output mode '" + s + "' (expected softmax_xent or sigmoid_mse)");
}

std::string to_string(OutputMode mode) {
    return mode == OutputMode::SoftmaxCrossEntropy ? "softmax_xent" : "sigmoid_mse";
}

namespace {

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

void check_net(const NetModel& net, std::size_t input_size) {
    if (net.layer_sizes.empty() || net.layer_sizes.front() != input_size) {
        throw ShapeError("net expects " +
                         (net.layer_sizes.empty() ? std::string("unsized")
                                                  : std::to_string(net.layer_sizes.front())) +
                         " inputs, got " + std::to_string(input_size));
    }
}

} // namespace

std::vector<double> softmax(std::span<const double> logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - peak);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

NetModel init_net(const std::vector<std::size_t>& layer_sizes, OutputMode mode,
                  std::uint64_t seed) {
    if (layer_sizes.size() < 3) {
        throw ConfigError("network needs at least one hidden layer ([input, hidden..., output])");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) throw ConfigError("network layer sizes must be positive");
    }

    NetModel net;
    net.layer_sizes = layer_sizes;
    net.output_mode = mode;
    auto rng = make_rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const std::size_t fan_in = layer_sizes[l];
        const std::size_t fan_out = layer_sizes[l + 1];
        const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> uniform(-r, r);
        Matrix w(fan_out, fan_in);
        for (double& v : w.values) v = uniform(rng);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(fan_out, 0.0);
    }
    return net;
}

Activations forward(const NetModel& net, std::span<const double> x) {
    check_net(net, x.size());
    for (double v : x) {
        if (!std::isfinite(v)) throw DataError("non-finite network input");
    }

    Activations acts;
    acts.outputs.emplace_back(x.begin(), x.end());
    const std::size_t layers = net.weights.size();
    for (std::size_t l = 0; l < layers; ++l) {
        const Matrix& w = net.weights[l];
        const auto& prev = acts.outputs.back();
        std::vector<double> z(w.rows);
        for (std::size_t j = 0; j < w.rows; ++j) {
            double s = net.biases[l][j];
            const auto wrow = w.row(j);
            for (std::size_t r = 0; r < wrow.size(); ++r) s += wrow[r] * prev[r];
            z[j] = s;
        }
        const bool last = l + 1 == layers;
        if (!last) {
            for (double& v : z) v = sigmoid(v);
        } else if (net.output_mode == OutputMode::SoftmaxCrossEntropy) {
            z = softmax(z);
        } else {
            for (double& v : z) v = sigmoid(v);
        }
        acts.outputs.push_back(std::move(z));
    }
    return acts;
}

double sigmoid_output_error(double output, double target) {
    return output * (1.0 - output) * (target - output);
}

Gradients backward(const NetModel& net, const Activations& acts,
                   std::span<const double> target) {
    const std::size_t layers = net.weights.size();
    if (acts.outputs.size() != layers + 1) throw ShapeError("activations do not match this net");
    const auto& out = acts.outputs.back();
    if (target.size() != out.size()) throw ShapeError("target size does not match output layer");

    Gradients grads;
    grads.weights.resize(layers);
    grads.biases.resize(layers);

    // delta = dLoss/dInput of the current layer, starting at the output.
    std::vector<double> delta(out.size());
    if (net.output_mode == OutputMode::SoftmaxCrossEntropy) {
        for (std::size_t j = 0; j < out.size(); ++j) delta[j] = out[j] - target[j];
    } else {
        for (std::size_t j = 0; j < out.size(); ++j) {
            delta[j] = -sigmoid_output_error(out[j], target[j]);
        }
    }

    for (std::size_t l = layers; l-- > 0;) {
        const auto& below = acts.outputs[l];
        Matrix dw(delta.size(), below.size());
        for (std::size_t j = 0; j < delta.size(); ++j) {
            auto drow = dw.row(j);
            for (std::size_t r = 0; r < below.size(); ++r) drow[r] = delta[j] * below[r];
        }
        grads.weights[l] = std::move(dw);
        grads.biases[l] = delta;

        if (l == 0) break;
        const Matrix& w = net.weights[l];
        std::vector<double> next(below.size(), 0.0);
        for (std::size_t j = 0; j < delta.size(); ++j) {
            const auto wrow = w.row(j);
            for (std::size_t r = 0; r < below.size(); ++r) next[r] += wrow[r] * delta[j];
        }
        for (std::size_t r = 0; r < below.size(); ++r) {
            next[r] *= below[r] * (1.0 - below[r]);
        }
        delta = std::move(next);
    }
    return grads;
}

double loss_value(const NetModel& net, std::span<const double> output,
                  std::span<const double> target) {
    if (output.size() != target.size()) throw ShapeError("loss: output/target size mismatch");
    if (net.output_mode == OutputMode::SoftmaxCrossEntropy) {
        double loss = 0.0;
        for (std::size_t j = 0; j < output.size(); ++j) {
            if (target[j] > 0.0) loss -= target[j] * std::log(output[j]);
        }
        return loss;
    }
    double loss = 0.0;
    for (std::size_t j = 0; j < output.size(); ++j) {
        const double e = target[j] - output[j];
        loss += 0.5 * e * e;
    }
    return loss;
}

namespace {

struct Trainer {
    NetModel& net;
    const TrainSpec& spec;
    std::vector<AdamState> weight_states;
    std::vector<AdamState> bias_states;

    explicit Trainer(NetModel& n, const TrainSpec& s) : net(n), spec(s) {
        weight_states.resize(net.weights.size(), AdamState{spec.adam, {}, {}, 0});
        bias_states.resize(net.weights.size(), AdamState{spec.adam, {}, {}, 0});
    }

    void apply(const Gradients& grads) {
        for (std::size_t l = 0; l < net.weights.size(); ++l) {
            if (spec.plain_sgd) {
                for (std::size_t i = 0; i < net.weights[l].values.size(); ++i) {
                    net.weights[l].values[i] -= spec.sgd_rate * grads.weights[l].values[i];
                }
                for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
                    net.biases[l][i] -= spec.sgd_rate * grads.biases[l][i];
                }
            } else {
                adam_step(net.weights[l].values, grads.weights[l].values, weight_states[l]);
                adam_step(net.biases[l], grads.biases[l], bias_states[l]);
            }
        }
    }
};

void accumulate(Gradients& total, const Gradients& sample) {
    if (total.weights.empty()) {
        total = sample;
        return;
    }
    for (std::size_t l = 0; l < total.weights.size(); ++l) {
        for (std::size_t i = 0; i < total.weights[l].values.size(); ++i) {
            total.weights[l].values[i] += sample.weights[l].values[i];
        }
        for (std::size_t i = 0; i < total.biases[l].size(); ++i) {
            total.biases[l][i] += sample.biases[l][i];
        }
    }
}

void scale(Gradients& grads, double factor) {
    for (auto& w : grads.weights) {
        for (double& v : w.values) v *= factor;
    }
    for (auto& b : grads.biases) {
        for (double& v : b) v *= factor;
    }
}

bool params_finite(const NetModel& net) {
    for (const auto& w : net.weights) {
        for (double v : w.values) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& b : net.biases) {
        for (double v : b) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

double mean_loss(const NetModel& net, const Matrix& x, std::span<const std::size_t> rows,
                 const std::vector<std::vector<double>>& targets) {
    double total = 0.0;
    for (std::size_t r : rows) {
        const auto acts = forward(net, x.row(r));
        total += loss_value(net, acts.outputs.back(), targets[r]);
    }
    return total / static_cast<double>(rows.size());
}

} // namespace

NetModel train_net(const Matrix& x, std::span<const int> y, int classes,
                   const std::vector<std::size_t>& layer_sizes, const TrainSpec& spec,
                   OutputMode mode) {
    if (x.rows == 0) throw DataError("cannot train a network on an empty dataset");
    if (x.rows != y.size()) throw ShapeError("feature/label row counts differ");
    if (layer_sizes.size() < 3) {
        throw ConfigError("network needs at least one hidden layer ([input, hidden..., output])");
    }
    if (layer_sizes.front() != x.cols) {
        throw ConfigError("network input width " + std::to_string(layer_sizes.front()) +
                          " does not match the " + std::to_string(x.cols) + " data columns");
    }
    if (layer_sizes.back() != static_cast<std::size_t>(classes)) {
        throw ConfigError("network output width must equal the class count");
    }
    if (spec.epochs == 0 || spec.batch_size == 0) {
        throw ConfigError("epochs and batch size must be >= 1");
    }

    NetModel net = init_net(layer_sizes, mode, derive_stream(spec.seed, 0));
    auto rng = make_rng(derive_stream(spec.seed, 1));

    std::vector<std::vector<double>> targets(x.rows,
                                             std::vector<double>(static_cast<std::size_t>(classes), 0.0));
    for (std::size_t r = 0; r < x.rows; ++r) {
        targets[r][static_cast<std::size_t>(y[r])] = 1.0;
    }

    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), 0);

    // Optional early stop: hold back ~10% as a validation slice.
    std::vector<std::size_t> val_rows;
    if (spec.patience > 0 && x.rows >= 10) {
        std::shuffle(order.begin(), order.end(), rng);
        const std::size_t keep = x.rows - std::max<std::size_t>(1, x.rows / 10);
        for (std::size_t i = keep; i < order.size(); ++i) val_rows.push_back(order[i]);
        order.resize(keep);
    }

    Trainer trainer(net, spec);
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    NetModel best_net;

    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += spec.batch_size) {
            const std::size_t stop = std::min(start + spec.batch_size, order.size());
            Gradients batch;
            for (std::size_t i = start; i < stop; ++i) {
                const std::size_t r = order[i];
                const auto acts = forward(net, x.row(r));
                epoch_loss += loss_value(net, acts.outputs.back(), targets[r]);
                accumulate(batch, backward(net, acts, targets[r]));
            }
            scale(batch, 1.0 / static_cast<double>(stop - start));
            trainer.apply(batch);
        }
        epoch_loss /= static_cast<double>(order.size());
        net.final_loss = epoch_loss;

        if (!std::isfinite(epoch_loss) || !params_finite(net)) {
            throw TrainError("network training diverged at epoch " + std::to_string(epoch + 1));
        }

        if (!val_rows.empty()) {
            const double val = mean_loss(net, x, val_rows, targets);
            if (val < best_val) {
                best_val = val;
                best_net = net;
                stale = 0;
            } else if (++stale > spec.patience) {
                break;
            }
        }
    }
    // With early stop active the best snapshot wins over the final epoch.
    if (!val_rows.empty()) return best_net;
    return net;
}

NetPrediction predict_net(const NetModel& net, std::span<const double> x) {
    const auto acts = forward(net, x);
    const auto& out = acts.outputs.back();
    NetPrediction p;
    p.probabilities.assign(out.begin(), out.end());
    p.label = static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
    return p;
}

std::vector<int> predict_net_labels(const NetModel& net, const Matrix& rows) {
    std::vector<int> out;
    out.reserve(rows.rows);
    for (std::size_t r = 0; r < rows.rows; ++r) out.push_back(predict_net(net, rows.row(r)).label);
    return out;
}

} // namespace blendids
