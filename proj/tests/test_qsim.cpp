#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "subdist/block_encoding.hpp"
#include "subdist/qsim.hpp"

using namespace subdist;

namespace {

Matrix real_matrix(int r, int c, std::initializer_list<double> vals) {
    Matrix m(r, c);
    int i = 0;
    for (double v : vals) m.a[i++] = v;
    return m;
}

// evolution closure for a fixed symmetric matrix: exp(-i h t)
EvolutionFn exp_evolution(const Matrix& h) {
    return [h](double t) { return matrix_exp_unitary(h, t); };
}

double purity(const DensityState& s) {
    Matrix sq = mul(s.rho, s.rho);
    double p = 0;
    for (int i = 0; i < sq.rows; ++i) p += sq(i, i).real();
    return p;
}

std::vector<double> phase_marginal(const DensityState& s) {
    const int t = s.registers[s.register_index("phase")].dim;
    const int rest = s.dim() / t;
    std::vector<double> m(t, 0.0);
    for (int j = 0; j < t; ++j)
        for (int r = 0; r < rest; ++r) m[j] += s.rho(j * rest + r, j * rest + r).real();
    return m;
}

} // namespace

TEST_CASE("uniform_mixed_state") {
    auto s1 = uniform_mixed_state(1);
    CHECK(s1.rho(0, 0) == cx(1.0, 0));
    auto s2 = uniform_mixed_state(2);
    CHECK(s2.rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(s2.rho(1, 1).real() == doctest::Approx(0.5));
    auto s8 = uniform_mixed_state(8);
    validate_density(s8);
    CHECK(purity(s8) == doctest::Approx(1.0 / 8));
    CHECK_THROWS_AS((void)uniform_mixed_state(0), invalid_input_error);
}

TEST_CASE("qpe with identity evolution puts the phase register at zero") {
    auto in = uniform_mixed_state(2);
    auto out = qpe([](double) { return Matrix::identity(2); }, in, 3, 1.0);
    validate_density(out);
    auto m = phase_marginal(out);
    CHECK(m[0] == doctest::Approx(1.0));
    for (int j = 1; j < 8; ++j) CHECK(std::abs(m[j]) <= 1e-12);
}

TEST_CASE("qpe reads an exactly representable phase deterministically") {
    // single eigenvalue with phase 1/4 at two bits -> register |01>
    Matrix h = real_matrix(1, 1, {2.0 * M_PI * 0.25});
    auto out = qpe(exp_evolution(h), uniform_mixed_state(1), 2, 1.0);
    auto m = phase_marginal(out);
    CHECK(m[1] == doctest::Approx(1.0));
    CHECK(std::abs(m[0]) + std::abs(m[2]) + std::abs(m[3]) <= 1e-12);
}

TEST_CASE("qpe kernel matches the closed-form Fejer distribution") {
    const double phi = 1.0 / 3.0;
    const int bits = 4, t = 16;
    Matrix h = real_matrix(1, 1, {2.0 * M_PI * phi});
    auto out = qpe(exp_evolution(h), uniform_mixed_state(1), bits, 1.0);
    auto m = phase_marginal(out);
    for (int j = 0; j < t; ++j) {
        const double delta = phi - static_cast<double>(j) / t;
        const double want = std::pow(std::sin(M_PI * t * delta) / (t * std::sin(M_PI * delta)), 2);
        CHECK(std::abs(m[j] - want) <= 1e-9);
    }
    // the spectral kernel helper agrees with the dense route to roundoff
    auto km = phase_kernel_mass(phi, bits);
    for (int j = 0; j < t; ++j) CHECK(std::abs(m[j] - km[j]) <= 1e-12);
}

TEST_CASE("qpe is lossless on exactly representable spectra") {
    // two eigenvalues with 3-bit phases 1/8 and 3/4 on a mixed 2-dim system
    Matrix h = real_matrix(2, 2, {2.0 * M_PI / 8.0, 0, 0, 2.0 * M_PI * 0.75});
    auto out = qpe(exp_evolution(h), uniform_mixed_state(2), 3, 1.0);
    validate_density(out);
    // ideal form: (1/2)(|1><1| (x) |0><0| + |6><6| (x) |1><1|)
    Matrix ideal(16, 16);
    ideal(1 * 2 + 0, 1 * 2 + 0) = 0.5;
    ideal(6 * 2 + 1, 6 * 2 + 1) = 0.5;
    auto eigs = herm_eig_values(sub(out.rho, ideal));
    double td = 0;
    for (double e : eigs) td += std::abs(e);
    CHECK(td / 2 <= 1e-9);
}

TEST_CASE("qpe rejects a non-unitary evolution") {
    auto bad = [](double) { return scale(Matrix::identity(2), 0.5); };
    CHECK_THROWS_AS((void)qpe(bad, uniform_mixed_state(2), 2, 1.0), precondition_error);
}

TEST_CASE("rotate_arccos branch amplitudes") {
    // phase register deterministically |0>: lambda-tilde 0 -> amplitude 1
    Matrix h = real_matrix(1, 1, {0.0});
    auto st = qpe(exp_evolution(h), uniform_mixed_state(1), 2, 1.0);
    auto rc = rotate_arccos(st, 4.0);
    validate_density(rc.state);
    CHECK(ancilla_zero_probability(rc.state) == doctest::Approx(1.0));
    CHECK(rc.clamped_bins == 2); // bins 2 and 3 exceed lambda = 1
    CHECK(rc.clamped_mass <= 1e-12);

    // branch lambda = 1: amplitude 0 -> ancilla |1>
    Matrix h1 = real_matrix(1, 1, {2.0 * M_PI * 0.25});
    auto st1 = qpe(exp_evolution(h1), uniform_mixed_state(1), 2, 1.0); // bin 1
    auto rc1 = rotate_arccos(st1, 4.0);                                // lt = 1
    CHECK(ancilla_zero_probability(rc1.state) <= 1e-12);

    // branch lambda = 1/2: P(0) = (arccos(sqrt(1/2))/(pi/2))^2 = 1/4
    auto rc2 = rotate_arccos(st1, 2.0); // bin 1 * 2/4 = 1/2
    CHECK(ancilla_zero_probability(rc2.state) == doctest::Approx(0.25));
}

TEST_CASE("rotate_log branch amplitudes") {
    Matrix h = real_matrix(1, 1, {2.0 * M_PI * 0.25});
    auto st = qpe(exp_evolution(h), uniform_mixed_state(1), 2, 1.0); // bin 1

    // lambda = 1 -> amplitude 0 -> ancilla never reads 0
    auto rc = rotate_log(st, 4.0, 1.0);
    CHECK(ancilla_zero_probability(rc.state) <= 1e-12);

    // lambda = e^{-1}, log_scale 1 -> amplitude -1, P(0) = 1
    const double lam = std::exp(-1.0);
    auto rc1 = rotate_log(st, 4.0 * lam, 1.0); // bin 1 -> lt = e^{-1}
    CHECK(ancilla_zero_probability(rc1.state) == doctest::Approx(1.0));

    // lambda = 1/2, log_scale 2 -> P(0) = (ln(1/2)/2)^2
    auto rc2 = rotate_log(st, 2.0, 2.0);
    const double want = std::pow(std::log(0.5) / 2.0, 2);
    CHECK(ancilla_zero_probability(rc2.state) == doctest::Approx(want));
    CHECK_THROWS_AS((void)rotate_log(st, 2.0, 0.0), invalid_input_error);
}

TEST_CASE("ancilla_zero_probability on hand-built states") {
    DensityState s;
    s.registers = {{"phase", 1}, {"ancilla", 2}};
    s.rho = Matrix(2, 2);
    s.rho(0, 0) = 1.0;
    CHECK(ancilla_zero_probability(s) == doctest::Approx(1.0));
    s.rho(0, 0) = 0.5;
    s.rho(1, 1) = 0.5;
    s.rho(0, 1) = 0.5;
    s.rho(1, 0) = 0.5;
    CHECK(ancilla_zero_probability(s) == doctest::Approx(0.5));
}

TEST_CASE("full arccos pipeline on the analytic spectrum reproduces p0 = 1/8") {
    // K with eigenvalues {1, 1/2}; phase scale 2 makes both representable.
    Matrix k = real_matrix(2, 2, {1.0, 0, 0, 0.5});
    const double a_scale = 2.0;
    auto st = qpe(exp_evolution(k), uniform_mixed_state(2), 5, 2.0 * M_PI / a_scale);
    auto rc = rotate_arccos(st, a_scale);
    validate_density(rc.state, 1e-9, 0); // dim 256: skip the PSD eigensolve
    CHECK(std::abs(ancilla_zero_probability(rc.state) - 0.125) <= 1e-9);
}

TEST_CASE("eq-18 identity on a random exactly representable spectrum") {
    const int bits = 5;
    const double a_scale = 2.0;
    std::vector<double> lams{0.25, 0.8125, 1.0};
    Matrix k = Matrix::diag(lams);
    auto st = qpe(exp_evolution(k), uniform_mixed_state(3), bits, 2.0 * M_PI / a_scale);
    auto rc = rotate_arccos(st, a_scale);
    double want = 0;
    for (double lam : lams) {
        const double x = std::acos(std::sqrt(lam));
        want += 4.0 / (M_PI * M_PI * 3.0) * x * x;
    }
    CHECK(std::abs(ancilla_zero_probability(rc.state) - want) <= 1e-9);
}

TEST_CASE("sampling") {
    DensityState s;
    s.registers = {{"phase", 1}, {"ancilla", 2}};
    s.rho = Matrix(2, 2);
    s.rho(0, 0) = 1.0;
    auto rec = sample_ancilla(s, 1000, 42);
    CHECK(rec.zeros == 1000);
    s.rho(0, 0) = 0.0;
    s.rho(1, 1) = 1.0;
    auto rec0 = sample_ancilla(s, 1000, 42);
    CHECK(rec0.zeros == 0);

    // binomial concentration: p = 1/8, 1e5 shots, 50 seeds, 3-sigma band
    const double p = 0.125;
    const double band = 3.0 * std::sqrt(p * (1 - p) / 1e5);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto r = sample_bernoulli(p, 100000, seed);
        if (std::abs(r.p_hat - p) <= band) ++ok;
    }
    CHECK(ok >= 47);

    // determinism: bit-identical records
    auto a = sample_bernoulli(0.3, 5000, 99);
    auto b = sample_bernoulli(0.3, 5000, 99);
    CHECK(a.zeros == b.zeros);
    CHECK(a.p_hat == b.p_hat);
    CHECK_THROWS_AS((void)sample_bernoulli(0.5, 0, 1), invalid_input_error);
}

TEST_CASE("power_method_min_eig") {
    CHECK(power_method_min_eig(Matrix::identity(3), 10, 1) == doctest::Approx(1.0));
    CHECK(power_method_min_eig(real_matrix(2, 2, {1, 0, 0, 0.25}), 500, 1) ==
          doctest::Approx(0.25).epsilon(1e-8));

    // random Gram matrix oracle
    Matrix m = random_orthonormal(6, 3, 21);
    Matrix n = random_orthonormal(6, 3, 1021);
    Matrix g = mul(transpose(m), n);
    Matrix k = mul(transpose(g), g);
    const double est = power_method_min_eig(k, 2000, 21);
    const double want = sym_eig(k).eigvals.front();
    CHECK(std::abs(est - want) <= 1e-6);

    const int auto_iters = power_method_auto_iters(k, 21);
    CHECK(auto_iters >= 200);
    CHECK_THROWS_AS((void)power_method_min_eig(k, 0, 1), invalid_input_error);
}

TEST_CASE("phase kernel masses sum to one and localize") {
    for (double phi : {0.0, 0.31, 0.5, 0.77}) {
        auto m = phase_kernel_mass(phi, 7);
        double s = 0;
        for (double v : m) s += v;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        const int t = 128;
        int peak = static_cast<int>(std::round(phi * t)) % t;
        double local = 0;
        for (int d = -2; d <= 2; ++d) local += m[((peak + d) % t + t) % t];
        CHECK(local >= 0.5);
    }
}

TEST_CASE("lemma-4 style bound: p0 gap is controlled by the bin-error epsilon") {
    // fixed instance with non-representable phases, swept over bits
    std::vector<double> lams{0.17, 0.445, 0.83};
    const double a_scale = 2.0;
    const int k = static_cast<int>(lams.size());
    std::vector<double> gaps, epsps;
    for (int bits = 4; bits <= 10; ++bits) {
        const int t = 1 << bits;
        double p0 = 0, pt = 0, ep2 = 0;
        for (double lam : lams) {
            auto mass = phase_kernel_mass(lam / a_scale, bits);
            const double xi = std::acos(std::sqrt(lam)) / (M_PI / 2);
            p0 += xi * xi / k;
            for (int j = 0; j < t; ++j) {
                const double lt = std::min(1.0, static_cast<double>(j) * a_scale / t);
                const double xj = std::acos(std::sqrt(lt)) / (M_PI / 2);
                pt += mass[j] * xj * xj / k;
                ep2 += mass[j] * (xj - xi) * (xj - xi) / k;
            }
        }
        gaps.push_back(std::abs(pt - p0));
        epsps.push_back(std::sqrt(ep2));
    }
    // rigorous form of the bound: |p~ - p| <= 2 * eps_p
    for (std::size_t i = 0; i < gaps.size(); ++i) CHECK(gaps[i] <= 2.0 * epsps[i]);
    // the measured ratio stays bounded across the sweep (O-form of the lemma)
    std::vector<double> ratios;
    for (std::size_t i = 0; i < gaps.size(); ++i)
        if (epsps[i] > 0) ratios.push_back(gaps[i] / epsps[i]);
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[sorted.size() / 2];
    for (double r : ratios) CHECK(r <= std::max(4.0 * med, 2.0));
}

TEST_CASE("density invariants hold after every operation") {
    Matrix h = real_matrix(2, 2, {0.9, 0.2, 0.2, 0.4});
    auto st0 = uniform_mixed_state(2);
    validate_density(st0);
    auto st1 = qpe(exp_evolution(h), st0, 3, 1.3);
    validate_density(st1);
    auto st2 = rotate_arccos(st1, 2.0).state;
    validate_density(st2);
    auto st3 = rotate_log(st1, 2.0, 3.0).state;
    validate_density(st3);
}
