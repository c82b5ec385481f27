#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "cdc/errors.hpp"
#include "cdc/ola.hpp"
#include "cdc/rng.hpp"
#include "cdc/signal_io.hpp"
#include "oracles.hpp"

using cdc::complexd;
using cdc::cvector;
using cdc::OlaConfig;
using cdc::OverlapSaveEngine;
using cdc::TapVector;

namespace {

cvector random_signal(std::size_t n, std::uint64_t seed) {
    cdc::Rng rng(seed);
    cvector x(n);
    for (auto& v : x) {
        double re = 0.0, im = 0.0;
        rng.next_gaussian_pair(re, im);
        v = complexd(re, im);
    }
    return x;
}

TapVector random_tap_vector(int len, std::uint64_t seed) {
    TapVector t;
    t.taps = random_signal(static_cast<std::size_t>(len), seed);
    t.center = (len - 1) / 2;
    return t;
}

std::string temp_path(const std::string& name) {
    return std::string("ola_test_") + name;
}

}  // namespace

TEST_CASE("identity taps pass the stream through unchanged") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{
             {8, 4}, {16, 16}, {64, 7}}) {
        OverlapSaveEngine engine(OlaConfig{n, m}, cdc::identity_taps());
        const cvector x = random_signal(static_cast<std::size_t>(6 * m), 11);
        const cvector y = engine.filter(x);
        REQUIRE(y.size() == x.size());
        CHECK(oracle::max_abs_diff(y, x) < 1e-13);
    }
}

TEST_CASE("zero-padded taps give the exact causal linear convolution") {
    struct Case {
        int n, m, taps;
    };
    for (const Case& c : {Case{8, 4, 5}, Case{8, 4, 3}, Case{64, 16, 49},
                          Case{256, 128, 129}}) {
        CAPTURE(c.n, c.m, c.taps);
        REQUIRE(c.taps <= c.n - c.m + 1);
        const TapVector h = random_tap_vector(c.taps, 97 + c.n);
        const cvector x =
            random_signal(static_cast<std::size_t>(16 * c.m), 5 + c.n);
        const cvector got =
            cdc::ola_filter_stream(OlaConfig{c.n, c.m}, h, x);
        const cvector want = oracle::direct_linear_conv(x, h.taps);
        CHECK(oracle::rel_err_l2(got, want) < 1e-12);
    }
}

TEST_CASE("each output of a block sees its own rotation of the taps") {
    // Worked example with all fft_size tap positions populated: output j of
    // a block equals sum_i window[i] * h[(n - m + j - i) mod n], i.e. the
    // (n - m + j)-th entry of the circular convolution of the window with
    // the taps. Checked term by term against hand-rolled inner products.
    const int n = 8, m = 4;
    TapVector h;
    h.taps.resize(n);
    for (int i = 0; i < n; ++i)
        h.taps[static_cast<std::size_t>(i)] = complexd(double(n - i), 0.0);
    h.center = 0;

    OverlapSaveEngine engine(OlaConfig{n, m}, h);
    cvector history(static_cast<std::size_t>(n - m), complexd(0.0, 0.0));
    const cvector x = random_signal(static_cast<std::size_t>(3 * m), 23);

    for (std::size_t pos = 0; pos < x.size(); pos += m) {
        const cvector block(x.begin() + pos, x.begin() + pos + m);
        const cvector got = engine.process_block(block);

        cvector window = history;
        window.insert(window.end(), block.begin(), block.end());
        for (int j = 0; j < m; ++j) {
            complexd want(0.0, 0.0);
            for (int i = 0; i < n; ++i)
                want += window[static_cast<std::size_t>(i)] *
                        h.taps[static_cast<std::size_t>(
                            ((n - m + j - i) % n + n) % n)];
            CHECK(std::abs(got[static_cast<std::size_t>(j)] - want) < 1e-12);
        }
        history.assign(window.begin() + m, window.end());
    }
}

TEST_CASE("full-length taps match per-block circular convolution") {
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{
             {8, 4}, {16, 16}, {32, 5}}) {
        CAPTURE(n, m);
        const TapVector h = random_tap_vector(n, 41 + static_cast<unsigned>(n));
        OverlapSaveEngine engine(OlaConfig{n, m}, h);

        cvector history(static_cast<std::size_t>(n - m), complexd(0.0, 0.0));
        const cvector x = random_signal(static_cast<std::size_t>(10 * m),
                                        301 + static_cast<unsigned>(n));
        for (std::size_t pos = 0; pos < x.size(); pos += m) {
            const cvector block(x.begin() + pos, x.begin() + pos + m);
            const cvector got = engine.process_block(block);

            cvector window = history;
            window.insert(window.end(), block.begin(), block.end());
            const cvector circ = oracle::circular_conv(window, h.taps);
            const cvector want(circ.end() - m, circ.end());
            CHECK(oracle::max_abs_diff(got, want) < 1e-11);
            history.assign(window.begin() + m, window.end());
        }
    }
}

TEST_CASE("engine output is linear in the input") {
    const OlaConfig cfg{32, 8};
    const TapVector h = random_tap_vector(32, 7);
    const cvector x = random_signal(64, 1);
    const cvector y = random_signal(64, 2);
    const complexd a(1.25, -0.5), b(-0.75, 2.0);

    cvector mix(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mix[i] = a * x[i] + b * y[i];

    const cvector fx = cdc::ola_filter_stream(cfg, h, x);
    const cvector fy = cdc::ola_filter_stream(cfg, h, y);
    const cvector fmix = cdc::ola_filter_stream(cfg, h, mix);
    for (std::size_t i = 0; i < fmix.size(); ++i)
        CHECK(std::abs(fmix[i] - (a * fx[i] + b * fy[i])) < 1e-11);
}

TEST_CASE("block-by-block and whole-stream calls agree exactly") {
    const OlaConfig cfg{64, 16};
    const TapVector h = random_tap_vector(40, 13);
    const cvector x = random_signal(16 * 9, 17);

    OverlapSaveEngine whole(cfg, h);
    const cvector all = whole.filter(x);

    OverlapSaveEngine stepped(cfg, h);
    cvector pieced;
    for (std::size_t pos = 0; pos < x.size(); pos += 16) {
        const cvector block(x.begin() + pos, x.begin() + pos + 16);
        const cvector y = stepped.process_block(block);
        pieced.insert(pieced.end(), y.begin(), y.end());
    }
    REQUIRE(pieced.size() == all.size());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(pieced[i] == all[i]);
}

TEST_CASE("reset restores the initial state") {
    OverlapSaveEngine engine(OlaConfig{16, 4}, random_tap_vector(16, 3));
    CHECK(engine.warmup_length() == 12);
    const cvector x = random_signal(20, 9);

    cvector first;
    for (std::size_t pos = 0; pos < x.size(); pos += 4) {
        const cvector y =
            engine.process_block(cvector(x.begin() + pos, x.begin() + pos + 4));
        first.insert(first.end(), y.begin(), y.end());
    }
    engine.reset();
    cvector second;
    for (std::size_t pos = 0; pos < x.size(); pos += 4) {
        const cvector y =
            engine.process_block(cvector(x.begin() + pos, x.begin() + pos + 4));
        second.insert(second.end(), y.begin(), y.end());
    }
    for (std::size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
}

TEST_CASE("engine rejects invalid configurations and inputs") {
    CHECK_THROWS_AS(
        OverlapSaveEngine(OlaConfig{0, 0}, cdc::identity_taps()),
        cdc::config_error);
    CHECK_THROWS_AS(
        OverlapSaveEngine(OlaConfig{8, 9}, cdc::identity_taps()),
        cdc::config_error);
    CHECK_THROWS_AS(
        OverlapSaveEngine(OlaConfig{8, 4}, random_tap_vector(9, 1)),
        cdc::config_error);
    CHECK_THROWS_AS(OverlapSaveEngine(OlaConfig{8, 4}, TapVector{}),
                    cdc::config_error);

    OverlapSaveEngine engine(OlaConfig{8, 4}, cdc::identity_taps());
    CHECK_THROWS_AS(engine.process_block(random_signal(3, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(engine.filter(random_signal(10, 1)),
                    std::invalid_argument);
}

TEST_CASE("signal files round-trip bit for bit") {
    const std::string path = temp_path("roundtrip.sig");
    const cvector x = random_signal(257, 77);
    cdc::write_signal(path, x);
    const cvector back = cdc::read_signal(path);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);

    cdc::write_signal(path, cvector{});
    CHECK(cdc::read_signal(path).empty());
    std::remove(path.c_str());
}

TEST_CASE("signal reader rejects missing, foreign and truncated files") {
    CHECK_THROWS_AS(cdc::read_signal("no_such_dir/no_such_file.sig"),
                    cdc::io_error);

    const std::string bad = temp_path("bad_magic.sig");
    {
        std::ofstream out(bad, std::ios::binary);
        out << "NOTASIGNALFILE................";
    }
    CHECK_THROWS_AS(cdc::read_signal(bad), cdc::io_error);
    std::remove(bad.c_str());

    const std::string cut = temp_path("truncated.sig");
    cdc::write_signal(cut, random_signal(8, 5));
    {
        // Chop the file mid-sample.
        std::ifstream in(cut, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
        in.close();
        bytes.resize(bytes.size() - 20);
        std::ofstream out(cut, std::ios::binary | std::ios::trunc);
        out << bytes;
    }
    CHECK_THROWS_AS(cdc::read_signal(cut), cdc::io_error);
    std::remove(cut.c_str());
}
