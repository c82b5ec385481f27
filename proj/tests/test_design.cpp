#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "cdc/design.hpp"
#include "cdc/fft.hpp"
#include "oracles.hpp"

using cplx = std::complex<double>;
using cdc::DispersionK;

namespace {

constexpr double kPi = std::numbers::pi;

// Band integral (1/2pi) Int_{-Omega}^{Omega} exp(j(K x^2 + d x)) dx by
// adaptive quadrature: the defining integral of the ideal tap.
cplx ideal_tap_by_quadrature(double d, double k, double omega) {
    const cplx v = oracle::integrate(
        [d, k](double x) { return std::polar(1.0, k * x * x + d * x); },
        -omega, omega, 1e-12, 1e-14);
    return v / (2.0 * kPi);
}

// Cached oracle taps for the explicit-matrix design checks.
class TapOracle {
  public:
    TapOracle(double k, double omega) : k_(k), omega_(omega) {}
    cplx operator()(int d) {
        auto it = cache_.find(d);
        if (it != cache_.end()) return it->second;
        const cplx v = ideal_tap_by_quadrature(d, k_, omega_);
        cache_.emplace(d, v);
        return v;
    }

  private:
    double k_, omega_;
    std::map<int, cplx> cache_;
};

// Brute-force reference for the joint per-output design: build the cyclic
// shift matrices S_m explicitly, assemble R = sum S_m^T Q S_m and
// e = sum S_m^T d_m, and solve with a rank-revealing QR.
Eigen::VectorXcd explicit_matrix_design(int n, int m_blk, double omega,
                                        double k, TapOracle& tap) {
    const int ell = n - m_blk + 1;
    const int center = (ell - 1) / 2;

    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            q(i, j) = (i == j) ? omega / kPi
                               : std::sin(omega * (i - j)) / ((i - j) * kPi);

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    for (int m = 0; m < m_blk; ++m) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (int l = 0; l < n; ++l) s(l, ((l - m) % n + n) % n) = 1.0;
        Eigen::VectorXcd d(n);
        for (int i = 0; i < n; ++i) d(i) = tap(i - center - m);
        r += s.transpose() * q * s;
        e += s.transpose() * d;
    }
    return r.cast<cplx>().colPivHouseholderQr().solve(e);
}

cdc::TapVector random_taps(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cdc::TapVector t;
    t.taps.resize(static_cast<std::size_t>(n));
    for (auto& c : t.taps) c = cplx(u(gen), u(gen));
    t.center = 0;
    return t;
}

}  // namespace

TEST_CASE("ideal tap matches the band integral") {
    for (double k : {0.5, 12.74}) {
        for (double omega : {kPi, 0.8 * kPi, 0.5 * kPi}) {
            for (double d : {-50.0, -7.0, -1.0, 0.0, 0.5, 3.0, 20.0, 49.0}) {
                const cplx want = ideal_tap_by_quadrature(d, k, omega);
                const cplx got = cdc::ideal_tap(d, DispersionK{k}, omega);
                INFO("K=" << k << " omega=" << omega << " d=" << d);
                CHECK(std::abs(got - want) <= 1e-9 * std::abs(want) + 1e-14);
            }
        }
    }
}

TEST_CASE("ideal tap is even in the lag") {
    for (double d : {0.25, 1.0, 7.0, 33.0, 128.0}) {
        CHECK(cdc::ideal_tap(d, DispersionK{2.0}) ==
              cdc::ideal_tap(-d, DispersionK{2.0}));
        CHECK(cdc::ideal_tap(d, DispersionK{0.7}, 0.6 * kPi) ==
              cdc::ideal_tap(-d, DispersionK{0.7}, 0.6 * kPi));
    }
}

TEST_CASE("ideal tap rejects non-positive K and bad bands") {
    CHECK_THROWS_AS(cdc::ideal_tap(0.0, DispersionK{0.0}), std::domain_error);
    CHECK_THROWS_AS(cdc::ideal_tap(0.0, DispersionK{-1.0}), std::domain_error);
    CHECK_THROWS_AS(cdc::ideal_tap(0.0, DispersionK{1.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(cdc::ideal_tap(0.0, DispersionK{1.0}, 3.5), std::domain_error);
}

TEST_CASE("gram matrix entries match their defining integrals") {
    for (double omega : {kPi / 2.0, 0.3 * kPi}) {
        const auto q = cdc::gram_matrix(4, omega);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const cplx want = oracle::integrate(
                                      [i, j](double x) {
                                          return std::polar(1.0, -(i - j) * x);
                                      },
                                      -omega, omega, 1e-13, 1e-14) /
                                  (2.0 * kPi);
                CHECK(std::abs(q.entry(i, j) - want.real()) < 1e-12);
                CHECK(std::abs(want.imag()) < 1e-14);
            }
        }
    }
}

TEST_CASE("gram matrix at full bandwidth is the identity") {
    const auto q = cdc::gram_matrix(64);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            CHECK(std::abs(q.entry(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("rhs vector entries are ideal taps at shifted lags") {
    const auto spec = cdc::make_design_spec(8, 4);
    TapOracle tap(0.5, kPi);
    for (int m : {0, 3}) {
        const auto d = cdc::rhs_vector(m, spec, DispersionK{0.5});
        REQUIRE(d.size() == 8);
        for (int i = 0; i < 8; ++i) {
            const cplx want = tap(i - 2 - m);
            CHECK(std::abs(d[static_cast<std::size_t>(i)] - want) < 1e-10);
        }
    }
    CHECK_THROWS_AS(cdc::rhs_vector(4, spec, DispersionK{0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cdc::rhs_vector(-1, spec, DispersionK{0.5}),
                    std::invalid_argument);
}

TEST_CASE("cyclic shift rotates, composes and inverts exactly") {
    const auto h = random_taps(12, 99);
    const auto s1 = cdc::cyclic_shift(h, 1);
    CHECK(s1.taps[0] == h.taps[11]);
    CHECK(s1.taps[1] == h.taps[0]);

    const auto a = cdc::cyclic_shift(cdc::cyclic_shift(h, 5), 9);
    const auto b = cdc::cyclic_shift(h, 14);
    CHECK(a.taps == b.taps);
    CHECK(cdc::cyclic_shift(h, 12).taps == h.taps);
    CHECK(cdc::cyclic_shift(cdc::cyclic_shift(h, 7), -7).taps == h.taps);
}

TEST_CASE("full-band time domain design is the windowed ideal response") {
    const DispersionK k{2.0};
    const auto h = cdc::time_domain_design(9, k);
    REQUIRE(h.taps.size() == 9);
    CHECK(h.center == 4);
    for (int i = 0; i < 9; ++i) {
        CHECK(h.taps[static_cast<std::size_t>(i)] == cdc::ideal_tap(i - 4, k));
        CHECK(h.taps[static_cast<std::size_t>(i)] ==
              h.taps[static_cast<std::size_t>(8 - i)]);
    }
}

TEST_CASE("band-limited time domain design matches a dense-grid LS fit") {
    const int ell = 9;
    const double k = 0.8;
    const double omega = 0.8 * kPi;
    const auto h = cdc::time_domain_design(ell, DispersionK{k}, omega);

    // Weighted discrete LS over 4097 points with Simpson weights, i.e. a
    // quadrature-faithful discretization of the continuous objective.
    const int g_count = 4097;
    Eigen::MatrixXcd a(g_count, ell);
    Eigen::VectorXcd t(g_count);
    const double step = 2.0 * omega / (g_count - 1);
    for (int g = 0; g < g_count; ++g) {
        const double x = -omega + g * step;
        double w = (g == 0 || g == g_count - 1) ? 1.0 : (g % 2 == 1 ? 4.0 : 2.0);
        w = std::sqrt(w);
        for (int l = 0; l < ell; ++l)
            a(g, l) = w * std::polar(1.0, -l * x);
        t(g) = w * std::polar(1.0, k * x * x - ((ell - 1) / 2) * x);
    }
    const Eigen::VectorXcd fit = a.colPivHouseholderQr().solve(t);
    for (int l = 0; l < ell; ++l)
        CHECK(std::abs(h.taps[static_cast<std::size_t>(l)] - fit(l)) < 1e-6);
}

TEST_CASE("full-band joint design matches explicit normal equations") {
    for (double k : {0.5, 2.0}) {
        TapOracle tap(k, kPi);
        const auto got = cdc::overlap_save_design(cdc::make_design_spec(8, 4),
                                                  DispersionK{k});
        const auto want = explicit_matrix_design(8, 4, kPi, k, tap);
        REQUIRE(got.taps.size() == 8);
        for (int i = 0; i < 8; ++i)
            CHECK(std::abs(got.taps[static_cast<std::size_t>(i)] - want(i)) <
                  1e-9);
    }
}

TEST_CASE("band-limited joint design matches explicit normal equations") {
    const double omega = 0.7 * kPi;
    const double k = 1.3;
    TapOracle tap(k, omega);
    const auto got = cdc::overlap_save_design(
        cdc::make_design_spec(16, 4, omega), DispersionK{k});
    const auto want = explicit_matrix_design(16, 4, omega, k, tap);
    REQUIRE(got.taps.size() == 16);
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs(got.taps[static_cast<std::size_t>(i)] - want(i)) < 1e-8);
}

TEST_CASE("full-band joint design taps are palindromic") {
    const auto spec = cdc::make_design_spec(16, 4);
    const auto h = cdc::overlap_save_design(spec, DispersionK{2.0});
    const int ell = spec.filter_length;  // 13
    for (int i = 0; i < ell; ++i)
        CHECK(h.taps[static_cast<std::size_t>(i)] ==
              h.taps[static_cast<std::size_t>(ell - 1 - i)]);
    for (int j = 1; j < spec.block_size; ++j)
        CHECK(h.taps[static_cast<std::size_t>(ell - 1 + j)] ==
              h.taps[static_cast<std::size_t>(ell - 1 + spec.block_size - j)]);
}

TEST_CASE("total LS error agrees with its matrix form") {
    const auto spec = cdc::make_design_spec(8, 4);
    const DispersionK k{2.0};
    const auto h = cdc::overlap_save_design(spec, k);

    // epsilon = sum_m [h_m^H Q h_m - 2 Re(h_m^H d_m)] + M Omega/pi with
    // h_m = S_m h; Q is the identity at full bandwidth.
    double matrix_eps = 4.0;  // M * Omega/pi
    for (int m = 0; m < 4; ++m) {
        const auto hm = cdc::cyclic_shift(h, m);
        const auto dm = cdc::rhs_vector(m, spec, k);
        for (int i = 0; i < 8; ++i) {
            matrix_eps += std::norm(hm.taps[static_cast<std::size_t>(i)]);
            matrix_eps -= 2.0 * std::real(
                                    std::conj(hm.taps[static_cast<std::size_t>(i)]) *
                                    dm[static_cast<std::size_t>(i)]);
        }
    }
    const double quad_eps = cdc::total_ls_error(h, spec, k, 4096);
    CHECK(quad_eps == Catch::Approx(matrix_eps).epsilon(1e-4));
}

TEST_CASE("joint design minimizes the total LS error") {
    const auto spec = cdc::make_design_spec(8, 4);
    const DispersionK k{2.0};
    const auto h = cdc::overlap_save_design(spec, k);
    const double best = cdc::total_ls_error(h, spec, k, 512);

    std::mt19937_64 gen(4242);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        auto perturbed = h;
        for (auto& c : perturbed.taps) c += cplx(u(gen), u(gen));
        CHECK(cdc::total_ls_error(perturbed, spec, k, 512) >= best);
    }

    // The zero-padded classic design is a feasible point, so it can never
    // beat the joint optimum.
    const auto td = cdc::time_domain_design(spec.filter_length, k);
    CHECK(cdc::total_ls_error(td, spec, k, 512) >= best);
}

TEST_CASE("band-limited time domain design minimizes its own objective") {
    const double omega = 0.8 * kPi;
    const DispersionK k{0.8};
    const int ell = 9;
    // Single-output geometry: fft_size = L, block_size = 1 reduces the total
    // error to the plain one-filter band-limited LS objective.
    const cdc::DesignSpec single{ell, 1, ell, omega};
    const auto h = cdc::time_domain_design(ell, k, omega);
    const double best = cdc::total_ls_error(h, single, k, 2048);

    std::mt19937_64 gen(555);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        auto perturbed = h;
        for (auto& c : perturbed.taps) c += cplx(u(gen), u(gen));
        CHECK(cdc::total_ls_error(perturbed, single, k, 2048) >= best);
    }
}

TEST_CASE("ill-conditioned narrow-band solves fail loudly") {
    try {
        cdc::time_domain_design(21, DispersionK{1.0}, 0.01 * kPi);
        FAIL("expected solver_error");
    } catch (const cdc::solver_error& e) {
        CHECK(e.condition > 1e12);
    }
}

TEST_CASE("frequency response matches the DFT on the DFT grid") {
    const auto h = random_taps(8, 321);
    std::vector<double> grid(8);
    for (int g = 0; g < 8; ++g) grid[g] = 2.0 * kPi * g / 8.0;
    const auto resp = cdc::frequency_response(h, grid);
    const auto spec = cdc::dft_forward(h.taps);
    for (int g = 0; g < 8; ++g)
        CHECK(std::abs(resp[static_cast<std::size_t>(g)] -
                       spec[static_cast<std::size_t>(g)]) < 1e-12);
}

TEST_CASE("design spec validation rejects inconsistent geometry") {
    CHECK_THROWS_AS(cdc::make_design_spec(8, 3), cdc::config_error);   // even L
    CHECK_THROWS_AS(cdc::make_design_spec(4, 8), cdc::config_error);   // M > N
    CHECK_THROWS_AS(cdc::make_design_spec(8, 0), cdc::config_error);
    CHECK_THROWS_AS(cdc::make_design_spec(8, 4, -1.0), cdc::config_error);
    CHECK_THROWS_AS(cdc::make_design_spec(8, 4, 4.0), cdc::config_error);
    const cdc::DesignSpec bad{8, 4, 7, kPi};  // L != N - M + 1
    CHECK_THROWS_AS(cdc::validate(bad), cdc::config_error);
    CHECK_THROWS_AS(
        cdc::overlap_save_design(cdc::make_design_spec(8, 4), DispersionK{0.0}),
        std::domain_error);
}
