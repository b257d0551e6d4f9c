#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pswm/errors.hpp"
#include "pswm/gradcheck.hpp"
#include "pswm/neural.hpp"
#include "test_util.hpp"

using namespace pswm;

namespace {

// Finite-difference oracle built only on forward() and error().
double loss(const Network& net, const std::vector<double>& x, const std::vector<double>& d) {
    return error(forward(net, x).back(), d);
}

double central_difference(Network net, std::size_t layer, std::size_t r, std::size_t c, const std::vector<double>& x,
                          const std::vector<double>& d, double h = 1e-4) {
    const double w = net.weights[layer](r, c);
    net.weights[layer](r, c) = w + h;
    const double plus = loss(net, x, d);
    net.weights[layer](r, c) = w - h;
    const double minus = loss(net, x, d);
    return (plus - minus) / (2 * h);
}

Network random_network(std::mt19937_64& rng, std::vector<std::size_t> sizes) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Network net = zero_network(sizes);
    for (auto& m : net.weights)
        for (double& w : m.values()) w = u(rng);
    return net;
}

std::vector<TrainingExample> xor_data() {
    return {{{0, 0}, {0}}, {{0, 1}, {1}}, {{1, 0}, {1}}, {{1, 1}, {0}}};
}

}  // namespace

TEST_CASE("mcp_fire uses a strict threshold") {
    const std::vector<double> zero{0, 0, 0}, w{0.7, 0.6, 0.5};
    CHECK_FALSE(mcp_fire(zero, w, 0.5));
    CHECK(mcp_fire(std::vector<double>{1, 1, 0}, w, 1.0));
    CHECK_FALSE(mcp_fire(std::vector<double>{1, 0, 0}, std::vector<double>{0.5, 0, 0}, 0.5));
    CHECK_THROWS_AS(mcp_fire(zero, std::vector<double>{1.0}, 0.0), ContractError);
}

TEST_CASE("sigmoid") {
    CHECK(sigmoid(0.0) == 0.5);
    for (double x : {-40.0, -5.0, -0.3, 0.1, 2.0, 35.0}) {
        CHECK(std::abs(sigmoid(x) + sigmoid(-x) - 1.0) <= 1e-12);
        CHECK(sigmoid(x) > 0.0);
        CHECK(sigmoid(x) < 1.0);
    }
}

TEST_CASE("forward pass") {
    const std::size_t sizes[] = {3, 4, 2};
    SUBCASE("zero weights give 0.5 everywhere past the input") {
        const auto acts = forward(zero_network(sizes), std::vector<double>{0.3, -2.0, 7.0});
        CHECK(acts[0] == std::vector<double>{0.3, -2.0, 7.0});
        for (std::size_t l = 1; l < acts.size(); ++l)
            for (double y : acts[l]) CHECK(y == 0.5);
    }
    SUBCASE("single connection") {
        const std::size_t one[] = {1, 1};
        Network net = zero_network(one);
        net.weights[0](0, 0) = 0.25;
        const auto acts = forward(net, std::vector<double>{1.0});
        CHECK(acts[1][0] == doctest::Approx(1.0 / (1.0 + std::exp(-0.25))).epsilon(1e-15));
    }
    SUBCASE("bias row acts as a negated threshold") {
        const std::size_t one[] = {1, 1};
        Network net = zero_network(one);
        net.weights[0](0, 0) = 2.0;
        net.weights[0](1, 0) = -1.5;
        CHECK(forward(net, std::vector<double>{1.0})[1][0] == doctest::Approx(sigmoid(0.5)).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(forward(zero_network(sizes), std::vector<double>{1.0}), ContractError);
    }
}

TEST_CASE("squared error") {
    CHECK(error(std::vector<double>{0.2, 0.7}, std::vector<double>{0.2, 0.7}) == 0.0);
    CHECK(error(std::vector<double>{0.8}, std::vector<double>{0.3}) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(error(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 1.0);
    CHECK_THROWS_AS(error(std::vector<double>{1}, std::vector<double>{1, 2}), ContractError);
}

TEST_CASE("backprop steps on hand-built activations") {
    const std::size_t one[] = {1, 1};
    Network net = zero_network(one);
    SUBCASE("y = 0.8, d = 0.3, source activity 1.0") {
        const Activations acts{{1.0}, {0.8}};
        const auto g = backprop(net, acts, std::vector<double>{0.3});
        CHECK(g.ea[1][0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(g.ei[1][0] == doctest::Approx(0.08).epsilon(1e-14));
        CHECK(g.ew[0](0, 0) == doctest::Approx(0.08).epsilon(1e-14));
        CHECK(g.ew[0](1, 0) == doctest::Approx(0.08).epsilon(1e-14));  // bias
    }
    SUBCASE("zero error gives zero output derivatives") {
        const Activations acts{{0.4}, {0.7}};
        const auto g = backprop(net, acts, std::vector<double>{0.7});
        CHECK(g.ea[1][0] == 0.0);
        CHECK(g.ei[1][0] == 0.0);
        CHECK(g.ew[0](0, 0) == 0.0);
    }
    SUBCASE("saturated units pass no error") {
        for (double y : {0.0, 1.0}) {
            const Activations acts{{0.4}, {y}};
            const auto g = backprop(net, acts, std::vector<double>{0.5});
            CHECK(g.ea[1][0] != 0.0);
            CHECK(g.ei[1][0] == 0.0);
        }
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(backprop(net, Activations{{1.0}}, std::vector<double>{0.3}), ContractError);
        CHECK_THROWS_AS(backprop(net, Activations{{1.0}, {0.5}}, std::vector<double>{0.3, 0.1}), ContractError);
    }
}

TEST_CASE("hidden EA on a 1-1-1 chain matches the composed product") {
    const std::size_t sizes[] = {1, 1, 1};
    Network net = zero_network(sizes);
    net.weights[0](0, 0) = 0.6;
    net.weights[0](1, 0) = -0.2;
    net.weights[1](0, 0) = -1.3;
    net.weights[1](1, 0) = 0.4;
    const std::vector<double> x{0.9}, d{1.0};
    const auto acts = forward(net, x);
    const auto g = backprop(net, acts, d);

    const double h = acts[1][0], y = acts[2][0];
    const double out_ei = (y - d[0]) * y * (1 - y);
    const double hidden_ea = out_ei * net.weights[1](0, 0);
    CHECK(g.ea[1][0] == doctest::Approx(hidden_ea).epsilon(1e-15));
    CHECK(g.ei[1][0] == doctest::Approx(hidden_ea * h * (1 - h)).epsilon(1e-15));
    CHECK(g.ew[0](0, 0) == doctest::Approx(hidden_ea * h * (1 - h) * x[0]).epsilon(1e-15));
    CHECK(g.ea[0][0] == doctest::Approx(hidden_ea * h * (1 - h) * net.weights[0](0, 0)).epsilon(1e-15));
}

TEST_CASE("every EW matches central finite differences on random networks") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(1, 5);
    std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::size_t> sizes(2 + trial % 3);
        for (auto& s : sizes) s = size(rng);
        const Network net = random_network(rng, sizes);
        std::vector<double> x(sizes.front()), d(sizes.back());
        for (double& v : x) v = u(rng);
        for (double& v : d) v = t(rng);

        const auto g = backprop(net, forward(net, x), d);
        for (std::size_t l = 0; l < net.weights.size(); ++l)
            for (std::size_t r = 0; r < net.weights[l].rows(); ++r)
                for (std::size_t c = 0; c < net.weights[l].cols(); ++c) {
                    const double numeric = central_difference(net, l, r, c, x, d);
                    const double analytic = g.ew[l](r, c);
                    const double rel = std::abs(analytic - numeric) /
                                       std::max({std::abs(analytic), std::abs(numeric), 1e-8});
                    worst = std::max(worst, rel);
                }
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("library gradient check agrees and detects corruption") {
    const auto ok = run_gradient_check(42);
    CHECK(ok.networks == 24);
    CHECK(ok.weights_checked > 0);
    CHECK(std::isfinite(ok.max_relative_error));
    CHECK(ok.max_relative_error <= kGradCheckTolerance);

    GradCheckOptions bad;
    bad.corrupt_analytic = 1e-3;
    CHECK(run_gradient_check(42, bad).max_relative_error > kGradCheckTolerance);
}

TEST_CASE("apply_gradients") {
    const std::size_t one[] = {1, 1};
    Network net = zero_network(one);
    net.weights[0](0, 0) = 0.5;
    Gradients g;
    g.ew.emplace_back(2, 1);
    CHECK(apply_gradients(net, g, 0.5) == net);

    g.ew[0](0, 0) = 0.08;
    CHECK(apply_gradients(net, g, 0.5).weights[0](0, 0) == doctest::Approx(0.46).epsilon(1e-15));
    CHECK_THROWS_AS(apply_gradients(net, g, 0.0), ContractError);
    CHECK_THROWS_AS(apply_gradients(net, g, -0.1), ContractError);

    SUBCASE("small steps reduce the error") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0), t(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const Network n = random_network(rng, {3, 4, 2});
            std::vector<double> x{u(rng), u(rng), u(rng)}, d{t(rng), t(rng)};
            const auto acts = forward(n, x);
            const double before = error(acts.back(), d);
            if (before < 1e-9) continue;
            const double after = loss(apply_gradients(n, backprop(n, acts, d), 1e-3), x, d);
            CHECK(after < before);
        }
    }
}

TEST_CASE("init_weights") {
    const std::size_t sizes[] = {2, 4, 1};
    const auto a = init_weights(sizes, 42);
    CHECK(a == init_weights(sizes, 42));
    CHECK(a != init_weights(sizes, 43));
    CHECK(a.weights[0].rows() == 3);
    CHECK(a.weights[0].cols() == 4);
    CHECK(a.weights[1].rows() == 5);
    CHECK(a.weights[1].cols() == 1);
    for (const auto& m : a.weights)
        for (double w : m.values()) {
            CHECK(w >= -0.5);
            CHECK(w <= 0.5);
        }
    const std::size_t bad[] = {2, 0, 1};
    CHECK_THROWS_AS(init_weights(bad, 1), ContractError);
    const std::size_t single[] = {2};
    CHECK_THROWS_AS(init_weights(single, 1), ContractError);
}

TEST_CASE("train") {
    const std::size_t sizes[] = {2, 2, 1};
    const auto net = init_weights(sizes, 42);
    const auto data = xor_data();

    SUBCASE("zero epochs is the identity") {
        const auto r = train(net, data, 0, 0.5, 42);
        CHECK(r.net == net);
        CHECK(r.epoch_mean_error.empty());
        CHECK(train(net, {}, 0, 0.5, 1).net == net);
    }
    SUBCASE("contract errors") {
        CHECK_THROWS_AS(train(net, {}, 1, 0.5, 1), ContractError);
        CHECK_THROWS_AS(train(net, data, 1, 0.0, 1), ContractError);
        std::vector<TrainingExample> wrong{{{1.0}, {0.0}}};
        CHECK_THROWS_AS(train(net, wrong, 1, 0.5, 1), ContractError);
    }
    SUBCASE("XOR converges and is reproducible") {
        const auto r = train(net, data, 20000, 0.5, 42);
        CHECK(r.epoch_mean_error.size() == 20000);
        for (const auto& ex : data) CHECK(loss(r.net, ex.features, ex.desired) < 0.05);
        const auto again = train(net, data, 20000, 0.5, 42);
        std::ostringstream a, b;
        write_model(r.net, a);
        write_model(again.net, b);
        CHECK(a.str() == b.str());
        CHECK(again.epoch_mean_error == r.epoch_mean_error);
    }
}

TEST_CASE("model persistence") {
    testing::TempDir dir;
    const std::size_t sizes[] = {2, 4, 1};

    SUBCASE("fresh network roundtrip") {
        const auto net = init_weights(sizes, 3);
        save_model(net, dir / "m.txt");
        CHECK(load_model(dir / "m.txt") == net);
    }
    SUBCASE("trained XOR roundtrip behaves identically") {
        const std::size_t xor_sizes[] = {2, 2, 1};
        const auto trained = train(init_weights(xor_sizes, 42), xor_data(), 3000, 0.5, 42).net;
        save_model(trained, dir / "xor.txt");
        const auto loaded = load_model(dir / "xor.txt");
        CHECK(loaded == trained);
        for (const auto& ex : xor_data()) CHECK(forward(loaded, ex.features) == forward(trained, ex.features));
    }
    SUBCASE("layout") {
        const std::size_t one[] = {1, 1};
        Network net = zero_network(one);
        net.weights[0](0, 0) = 0.1;
        net.weights[0](1, 0) = -2.5;
        std::ostringstream out;
        write_model(net, out);
        CHECK(out.str() == "PSWM-MODEL v1\n1 1\n0.1\n-2.5\n");
    }
    SUBCASE("corruption is a data error") {
        for (const char* text : {
                 "PSWM-MODEL v2\n1 1\n0.1\n-2.5\n",
                 "PSWM-MODEL v1\n1 x\n0.1\n-2.5\n",
                 "PSWM-MODEL v1\n1 2\n0.1\n-2.5\n",
                 "PSWM-MODEL v1\n1 1\n0.1\n",
                 "PSWM-MODEL v1\n1 1\n0.1\n-2.5\n7\n",
                 "PSWM-MODEL v1\n1 1\n0.1\nnan\n",
                 "PSWM-MODEL v1\n1 0\n",
                 "",
             }) {
            std::istringstream in(text);
            CHECK_THROWS_AS(read_model(in), DataError);
        }
        CHECK_THROWS_AS(load_model(dir / "absent.txt"), DataError);
    }
}
