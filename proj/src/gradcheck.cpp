#include "pswm/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace pswm {

std::vector<Matrix> numeric_weight_gradients(const Network& net, std::span<const double> input,
                                             std::span<const double> desired, double h) {
    Network probe = net;
    std::vector<Matrix> out;
    out.reserve(net.weights.size());
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        Matrix grad(probe.weights[l].rows(), probe.weights[l].cols());
        auto w = probe.weights[l].values();
        auto gv = grad.values();
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double saved = w[k];
            w[k] = saved + h;
            const double plus = error(forward(probe, input).back(), desired);
            w[k] = saved - h;
            const double minus = error(forward(probe, input).back(), desired);
            w[k] = saved;
            gv[k] = (plus - minus) / (2.0 * h);
        }
        out.push_back(std::move(grad));
    }
    return out;
}

double relative_error(double analytic, double numeric) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    return std::abs(analytic - numeric) / scale;
}

GradCheckReport run_gradient_check(std::uint64_t seed, const GradCheckOptions& options) {
    Rng rng(seed);
    GradCheckReport report;
    for (std::size_t n = 0; n < options.networks; ++n) {
        const std::size_t layer_count = 2 + rng.below(2);
        std::vector<std::size_t> sizes(layer_count);
        for (auto& s : sizes) s = 1 + rng.below(5);

        Network net = zero_network(sizes);
        for (auto& m : net.weights) {
            for (double& w : m.values()) w = rng.uniform(-1.0, 1.0);
        }
        std::vector<double> input(sizes.front());
        for (double& x : input) x = rng.uniform(-1.0, 1.0);
        std::vector<double> desired(sizes.back());
        for (double& d : desired) d = rng.uniform01();

        Gradients g = backprop(net, forward(net, input), desired);
        if (options.corrupt_analytic != 0.0) g.ew.front()(0, 0) += options.corrupt_analytic;
        const auto numeric = numeric_weight_gradients(net, input, desired, options.h);

        for (std::size_t l = 0; l < numeric.size(); ++l) {
            const auto a = g.ew[l].values();
            const auto b = numeric[l].values();
            for (std::size_t k = 0; k < a.size(); ++k) {
                report.max_relative_error = std::max(report.max_relative_error, relative_error(a[k], b[k]));
                ++report.weights_checked;
            }
        }
        ++report.networks;
    }
    return report;
}

}  // namespace pswm
