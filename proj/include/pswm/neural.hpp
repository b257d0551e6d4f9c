#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pswm {

/// Dense row-major matrix. For a weight matrix, row i is the source unit and
/// column j the target unit; the last row belongs to the bias unit.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Layered feed-forward sigmoid network. Every non-output layer carries one
/// bias unit with constant activation 1.0, so a threshold T is the negated
/// bias weight. weights[l] has shape (layer_sizes[l] + 1) x layer_sizes[l + 1].
struct Network {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }

    bool operator==(const Network&) const = default;
};

/// Per-layer unit activations; layer 0 is the raw input.
using Activations = std::vector<std::vector<double>>;

/// Error derivatives. ea/ei are indexed by layer like Activations; ei[0] is
/// left empty since input units have no incoming weights. ew mirrors weights.
struct Gradients {
    std::vector<std::vector<double>> ea;
    std::vector<std::vector<double>> ei;
    std::vector<Matrix> ew;
};

struct TrainingExample {
    std::vector<double> features;
    std::vector<double> desired;
};

struct TrainResult {
    Network net;
    std::vector<double> epoch_mean_error;
};

/// Seeded source for weight init and epoch shuffles. Backed by std::mt19937_64;
/// the reductions to [0,1) and [0,n) are spelled out here so sequences do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer on [0, n), n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

/// McCulloch-Pitts threshold unit: fires iff sum(x_i * w_i) > threshold.
bool mcp_fire(std::span<const double> inputs, std::span<const double> weights, double threshold);

double sigmoid(double x);

Activations forward(const Network& net, std::span<const double> input);

/// E = 1/2 * sum (y_j - d_j)^2
double error(std::span<const double> output, std::span<const double> desired);

/// Output layer:  EA_j = y_j - d_j
/// Every layer:   EI_j = EA_j * y_j * (1 - y_j)
///                EW_ij = EI_j * y_i   (y_i = 1.0 on the bias row)
/// Layer below:   EA_i = sum_j EI_j * W_ij   (bias row excluded)
Gradients backprop(const Network& net, const Activations& activations, std::span<const double> desired);

/// W_ij <- W_ij - learning_rate * EW_ij
Network apply_gradients(const Network& net, const Gradients& g, double learning_rate);
void apply_gradients_in_place(Network& net, const Gradients& g, double learning_rate);

/// Weights uniform on [-0.5, 0.5], drawn matrix by matrix in row-major order.
Network init_weights(std::span<const std::size_t> layer_sizes, std::uint64_t seed);
Network zero_network(std::span<const std::size_t> layer_sizes);

/// Online gradient descent. Each epoch visits the examples in a Fisher-Yates
/// shuffle drawn from Rng(seed); the trace records the mean pre-update E.
TrainResult train(Network net, std::span<const TrainingExample> data, std::size_t epochs,
                  double learning_rate, std::uint64_t seed);

// Model file (UTF-8 text):
//   PSWM-MODEL v1
//   <layer sizes, space separated>
//   <one line per weight row: source units ascending, bias row last; matrices in layer order>
// Floats use the shortest representation that parses back to the same double.
void write_model(const Network& net, std::ostream& out);
Network read_model(std::istream& in);
void save_model(const Network& net, const std::filesystem::path& path);
Network load_model(const std::filesystem::path& path);

inline constexpr std::string_view kModelMagic = "PSWM-MODEL v1";

}  // namespace pswm
