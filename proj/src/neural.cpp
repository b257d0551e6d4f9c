#include "pswm/neural.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "pswm/errors.hpp"

namespace pswm {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ContractError("Rng::below requires n > 0");
    // Rejection sampling over the largest multiple of n keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

namespace {

void check_layer_sizes(std::span<const std::size_t> sizes) {
    if (sizes.size() < 2) throw ContractError("network needs at least an input and an output layer");
    for (auto s : sizes) {
        if (s == 0) throw ContractError("every layer needs at least one unit");
    }
}

void check_shapes(const Network& net) {
    check_layer_sizes(net.layer_sizes);
    if (net.weights.size() != net.layer_sizes.size() - 1) throw ContractError("weight matrix count mismatch");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        if (net.weights[l].rows() != net.layer_sizes[l] + 1 || net.weights[l].cols() != net.layer_sizes[l + 1]) {
            throw ContractError("weight matrix " + std::to_string(l) + " has the wrong shape");
        }
    }
}

}  // namespace

bool mcp_fire(std::span<const double> inputs, std::span<const double> weights, double threshold) {
    if (inputs.size() != weights.size()) throw ContractError("mcp_fire: inputs and weights differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) sum += inputs[i] * weights[i];
    return sum > threshold;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Activations forward(const Network& net, std::span<const double> input) {
    check_shapes(net);
    if (input.size() != net.input_size()) throw ContractError("forward: input length does not match the input layer");

    Activations acts(net.layer_sizes.size());
    acts[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Matrix& w = net.weights[l];
        const auto& below = acts[l];
        const std::size_t bias_row = below.size();
        auto& above = acts[l + 1];
        above.resize(w.cols());
        for (std::size_t j = 0; j < w.cols(); ++j) {
            double x = w(bias_row, j);
            for (std::size_t i = 0; i < below.size(); ++i) x += below[i] * w(i, j);
            above[j] = sigmoid(x);
        }
    }
    return acts;
}

double error(std::span<const double> output, std::span<const double> desired) {
    if (output.size() != desired.size()) throw ContractError("error: output and desired differ in length");
    double e = 0.0;
    for (std::size_t j = 0; j < output.size(); ++j) {
        const double diff = output[j] - desired[j];
        e += diff * diff;
    }
    return 0.5 * e;
}

Gradients backprop(const Network& net, const Activations& activations, std::span<const double> desired) {
    check_shapes(net);
    const std::size_t layers = net.layer_sizes.size();
    if (activations.size() != layers) throw ContractError("backprop: activation layer count mismatch");
    for (std::size_t l = 0; l < layers; ++l) {
        if (activations[l].size() != net.layer_sizes[l]) throw ContractError("backprop: activation shape mismatch");
    }
    if (desired.size() != net.output_size()) throw ContractError("backprop: desired length mismatch");

    Gradients g;
    g.ea.resize(layers);
    g.ei.resize(layers);
    g.ew.resize(net.weights.size());

    const auto& out = activations.back();
    g.ea.back().resize(out.size());
    for (std::size_t j = 0; j < out.size(); ++j) g.ea.back()[j] = out[j] - desired[j];

    for (std::size_t l = layers - 1; l >= 1; --l) {
        const auto& y = activations[l];
        auto& ei = g.ei[l];
        ei.resize(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) ei[j] = g.ea[l][j] * y[j] * (1.0 - y[j]);

        const Matrix& w = net.weights[l - 1];
        const auto& y_below = activations[l - 1];
        Matrix& ew = g.ew[l - 1];
        ew = Matrix(w.rows(), w.cols());
        for (std::size_t i = 0; i < y_below.size(); ++i) {
            for (std::size_t j = 0; j < ei.size(); ++j) ew(i, j) = ei[j] * y_below[i];
        }
        for (std::size_t j = 0; j < ei.size(); ++j) ew(y_below.size(), j) = ei[j];

        auto& ea_below = g.ea[l - 1];
        ea_below.assign(y_below.size(), 0.0);
        for (std::size_t i = 0; i < y_below.size(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < ei.size(); ++j) sum += ei[j] * w(i, j);
            ea_below[i] = sum;
        }
    }
    return g;
}

void apply_gradients_in_place(Network& net, const Gradients& g, double learning_rate) {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ContractError("learning rate must be a positive finite number");
    }
    if (g.ew.size() != net.weights.size()) throw ContractError("apply_gradients: gradient layer count mismatch");
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        auto w = net.weights[l].values();
        auto ew = g.ew[l].values();
        if (g.ew[l].rows() != net.weights[l].rows() || g.ew[l].cols() != net.weights[l].cols()) {
            throw ContractError("apply_gradients: gradient shape mismatch");
        }
        for (std::size_t k = 0; k < w.size(); ++k) w[k] -= learning_rate * ew[k];
    }
}

Network apply_gradients(const Network& net, const Gradients& g, double learning_rate) {
    Network out = net;
    apply_gradients_in_place(out, g, learning_rate);
    return out;
}

Network zero_network(std::span<const std::size_t> layer_sizes) {
    check_layer_sizes(layer_sizes);
    Network net;
    net.layer_sizes.assign(layer_sizes.begin(), layer_sizes.end());
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        net.weights.emplace_back(layer_sizes[l] + 1, layer_sizes[l + 1]);
    }
    return net;
}

Network init_weights(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
    Network net = zero_network(layer_sizes);
    Rng rng(seed);
    for (auto& m : net.weights) {
        for (double& w : m.values()) w = rng.uniform(-0.5, 0.5);
    }
    return net;
}

TrainResult train(Network net, std::span<const TrainingExample> data, std::size_t epochs,
                  double learning_rate, std::uint64_t seed) {
    check_shapes(net);
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ContractError("learning rate must be a positive finite number");
    }
    if (epochs > 0 && data.empty()) throw ContractError("train: no training examples");
    for (const auto& ex : data) {
        if (ex.features.size() != net.input_size() || ex.desired.size() != net.output_size()) {
            throw ContractError("train: example shape does not match the network");
        }
    }

    TrainResult result;
    result.epoch_mean_error.reserve(epochs);
    Rng rng(seed);
    std::vector<std::size_t> order(data.size());
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        double total = 0.0;
        for (std::size_t idx : order) {
            const auto& ex = data[idx];
            const auto acts = forward(net, ex.features);
            total += error(acts.back(), ex.desired);
            apply_gradients_in_place(net, backprop(net, acts, ex.desired), learning_rate);
        }
        result.epoch_mean_error.push_back(total / static_cast<double>(data.size()));
    }
    result.net = std::move(net);
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw ContractError("cannot format weight");
    return std::string(buf, ptr);
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && line[pos] == ' ') ++pos;
        if (pos == line.size()) break;
        std::size_t end = line.find(' ', pos);
        if (end == std::string_view::npos) end = line.size();
        out.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DataError(std::string("model: malformed ") + what + " '" + std::string(field) + "'");
    }
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

void write_model(const Network& net, std::ostream& out) {
    check_shapes(net);
    out << kModelMagic << '\n';
    for (std::size_t l = 0; l < net.layer_sizes.size(); ++l) {
        if (l) out << ' ';
        out << net.layer_sizes[l];
    }
    out << '\n';
    for (const auto& m : net.weights) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const auto row = m.row(r);
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (!std::isfinite(row[c])) throw ContractError("cannot save a network with non-finite weights");
                if (c) out << ' ';
                out << format_double(row[c]);
            }
            out << '\n';
        }
    }
}

Network read_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kModelMagic) {
        throw DataError("model: bad header, expected '" + std::string(kModelMagic) + "'");
    }
    if (!std::getline(in, line)) throw DataError("model: missing layer sizes");
    line = strip_cr(line);
    std::vector<std::size_t> sizes;
    for (auto field : split_spaces(line)) sizes.push_back(parse_number<std::size_t>(field, "layer size"));
    if (sizes.size() < 2) throw DataError("model: need at least two layer sizes");
    for (auto s : sizes) {
        if (s == 0) throw DataError("model: layer size 0");
    }

    Network net = zero_network(sizes);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        Matrix& m = net.weights[l];
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (!std::getline(in, line)) throw DataError("model: truncated weights in matrix " + std::to_string(l));
            line = strip_cr(line);
            const auto fields = split_spaces(line);
            if (fields.size() != m.cols()) {
                throw DataError("model: matrix " + std::to_string(l) + " row " + std::to_string(r) + " has " +
                                std::to_string(fields.size()) + " entries, expected " + std::to_string(m.cols()));
            }
            for (std::size_t c = 0; c < fields.size(); ++c) {
                const double v = parse_number<double>(fields[c], "weight");
                if (!std::isfinite(v)) throw DataError("model: non-finite weight");
                m(r, c) = v;
            }
        }
    }
    while (std::getline(in, line)) {
        if (!strip_cr(line).empty()) throw DataError("model: trailing data after weights");
    }
    return net;
}

void save_model(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write model file " + path.string());
    write_model(net, out);
    if (!out.flush()) throw DataError("failed writing model file " + path.string());
}

Network load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path.string());
    return read_model(in);
}

}  // namespace pswm
