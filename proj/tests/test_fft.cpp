#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "cdc/fft.hpp"
#include "oracles.hpp"

using cplx = std::complex<double>;

namespace {

cdc::cvector random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cdc::cvector x(n);
    for (auto& c : x) c = cplx(u(gen), u(gen));
    return x;
}

}  // namespace

TEST_CASE("dft matches the direct O(n^2) transform") {
    for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 12, 16, 31, 64, 97, 128}) {
        const cdc::cvector x = random_signal(n, 1000 + n);
        const auto fast = cdc::dft_forward(x);
        const auto slow = oracle::direct_dft(
            std::vector<cplx>(x.begin(), x.end()), -1);
        REQUIRE(fast.size() == n);
        CHECK(oracle::rel_err_l2(std::vector<cplx>(fast.begin(), fast.end()),
                                 slow) < 1e-12);

        const auto fast_inv = cdc::dft_inverse(x);
        const auto slow_inv = oracle::direct_dft(
            std::vector<cplx>(x.begin(), x.end()), +1);
        CHECK(oracle::rel_err_l2(
                  std::vector<cplx>(fast_inv.begin(), fast_inv.end()),
                  slow_inv) < 1e-12);
    }
}

TEST_CASE("dft round trip is lossless at 1e-12") {
    for (std::size_t n : {1,    2,    8,     12,    100,   257,
                          1000, 4096, 12289, 65536, 100000}) {
        const cdc::cvector x = random_signal(n, 7 * n + 1);
        const auto back = cdc::dft_inverse(cdc::dft_forward(x));
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::norm(back[i] - x[i]);
            den += std::norm(x[i]);
        }
        CHECK(std::sqrt(num / den) < 1e-12);
    }
}

TEST_CASE("dft preserves energy (Parseval)") {
    for (std::size_t n : {8, 12, 257, 4096, 100000}) {
        const cdc::cvector x = random_signal(n, 31 * n);
        const auto X = cdc::dft_forward(x);
        double ex = 0.0, ef = 0.0;
        for (const auto& c : x) ex += std::norm(c);
        for (const auto& c : X) ef += std::norm(c);
        CHECK(ef / static_cast<double>(n) == Catch::Approx(ex).epsilon(1e-12));
    }
}

TEST_CASE("dft of an impulse is flat and of a tone is an impulse") {
    const std::size_t n = 48;
    cdc::cvector delta(n, cplx(0.0, 0.0));
    delta[0] = 1.0;
    for (const auto& c : cdc::dft_forward(delta))
        CHECK(std::abs(c - cplx(1.0, 0.0)) < 1e-13);

    const std::size_t k0 = 5;
    cdc::cvector tone(n);
    for (std::size_t m = 0; m < n; ++m)
        tone[m] = std::polar(1.0, 2.0 * std::numbers::pi *
                                      static_cast<double>(k0 * m) /
                                      static_cast<double>(n));
    const auto spec = cdc::dft_forward(tone);
    for (std::size_t k = 0; k < n; ++k) {
        const double want = (k == k0) ? static_cast<double>(n) : 0.0;
        CHECK(std::abs(spec[k] - want) < 1e-10);
    }
}

TEST_CASE("dft rejects empty input") {
    CHECK_THROWS_AS(cdc::dft_forward(cdc::cvector{}), std::invalid_argument);
    CHECK_THROWS_AS(cdc::dft_inverse(cdc::cvector{}), std::invalid_argument);
}
