#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "subdist/distances.hpp"
#include "subdist/pipeline.hpp"
#include "subdist/qsim.hpp"

using namespace subdist;

namespace {

Matrix real_matrix(int r, int c, std::initializer_list<double> vals) {
    Matrix m(r, c);
    int i = 0;
    for (double v : vals) m.a[i++] = v;
    return m;
}

Matrix analytic_m() { return real_matrix(3, 2, {1, 0, 0, 1, 0, 0}); }
Matrix analytic_n() {
    const double s = 1.0 / std::sqrt(2.0);
    return real_matrix(3, 2, {1, 0, 0, s, 0, s});
}

struct TempMatrixFile {
    std::string path;
    TempMatrixFile(const std::string& name, const Matrix& m) : path(name) {
        save_matrix(path, m);
    }
    ~TempMatrixFile() { std::remove(path.c_str()); }
};

RunConfig file_config(const std::string& mp, const std::string& np) {
    RunConfig cfg;
    cfg.m_path = mp;
    cfg.n_path = np;
    cfg.sampling = SamplingMode::exact;
    return cfg;
}

RunConfig generated_orthonormal(int n, int k, std::uint64_t sm, std::uint64_t sn) {
    RunConfig cfg;
    cfg.use_generator = true;
    cfg.gen.kind = "orthonormal";
    cfg.gen.n = n;
    cfg.gen.k = k;
    cfg.gen.seed_m = sm;
    cfg.gen.seed_n = sn;
    cfg.sampling = SamplingMode::exact;
    return cfg;
}

RunConfig generated_spd(int n, double kappa, std::uint64_t sm, std::uint64_t sn) {
    RunConfig cfg;
    cfg.distance = DistanceKind::ellipsoid;
    cfg.use_generator = true;
    cfg.gen.kind = "spd";
    cfg.gen.n = n;
    cfg.gen.kappa = kappa;
    cfg.gen.seed_m = sm;
    cfg.gen.seed_n = sn;
    cfg.sampling = SamplingMode::exact;
    return cfg;
}

} // namespace

TEST_CASE("matrix file round trip") {
    Matrix m = random_gaussian(3, 4, 123);
    save_matrix("tmp_roundtrip.txt", m);
    Matrix r = load_matrix("tmp_roundtrip.txt");
    CHECK(max_abs_diff(m, r) == 0.0);
    std::remove("tmp_roundtrip.txt");

    {
        std::ofstream f("tmp_comments.txt");
        f << "# a comment\n2 2\n1 2 # trailing comment\n3 4\n";
    }
    Matrix c = load_matrix("tmp_comments.txt");
    CHECK(c(1, 1).real() == 4.0);
    std::remove("tmp_comments.txt");

    {
        std::ofstream f("tmp_bad.txt");
        f << "2 2\n1 2 3\n";
    }
    CHECK_THROWS_AS((void)load_matrix("tmp_bad.txt"), invalid_input_error);
    std::remove("tmp_bad.txt");
    CHECK_THROWS_AS((void)load_matrix("no_such_file.txt"), invalid_input_error);
}

TEST_CASE("config validation") {
    RunConfig cfg = generated_orthonormal(4, 2, 1, 2);
    cfg.qpe_bits = 0;
    CHECK_THROWS_AS((void)run_grassmann(cfg), invalid_input_error);
    cfg.qpe_bits = 17;
    CHECK_THROWS_AS((void)run_grassmann(cfg), invalid_input_error);
    cfg.qpe_bits = 8;
    cfg.eps_h = 0.0;
    CHECK_THROWS_AS((void)run_grassmann(cfg), invalid_input_error);
    cfg.eps_h = 1e-8;
    cfg.sampling = SamplingMode::shots;
    cfg.shots = 0;
    CHECK_THROWS_AS((void)run_grassmann(cfg), invalid_input_error);
}

TEST_CASE("grassmann pipeline: identical subspaces give zero everywhere") {
    RunConfig cfg = generated_orthonormal(5, 2, 7, 7);
    cfg.qpe_bits = 6;
    auto rep = run_grassmann(cfg);
    CHECK(rep.classical_value <= 3e-5);
    CHECK(rep.degenerate);
    CHECK(rep.exact_p0 <= 1e-9);
    CHECK(rep.quantum_estimate <= 1e-4);
}

TEST_CASE("grassmann pipeline: analytic instance in exact-phase conditions") {
    TempMatrixFile fm("tmp_analytic_m.txt", analytic_m());
    TempMatrixFile fn("tmp_analytic_n.txt", analytic_n());
    RunConfig cfg = file_config(fm.path, fn.path);
    cfg.qpe_bits = 6;
    auto rep = run_grassmann(cfg);
    CHECK(rep.exact_phase);
    CHECK(std::abs(rep.exact_p0 - 0.125) <= 1e-9);
    CHECK(std::abs(rep.quantum_estimate - M_PI / 4) <= 1e-8);
    CHECK(std::abs(rep.classical_value - M_PI / 4) <= 1e-12);
    CHECK(rep.alpha_total == doctest::Approx(2.0));
    // report invariant: the estimate is exactly the Eq.-18 reconstruction
    CHECK(rep.quantum_estimate ==
          (M_PI / 2) * std::sqrt(static_cast<double>(rep.k)) * std::sqrt(rep.sampled_p0));
}

TEST_CASE("grassmann pipeline converges to the classical oracle") {
    RunConfig cfg = generated_orthonormal(8, 3, 13, 1013);
    cfg.qpe_bits = 10;
    cfg.sampling = SamplingMode::shots;
    cfg.shots = 1000000;
    cfg.seed = 5;
    auto rep = run_grassmann(cfg);
    CHECK(std::abs(rep.quantum_estimate - rep.classical_value) <= 0.02);
    CHECK(rep.ideal_p0 > 0);
    CHECK(rep.leaked_mass >= 0);
}

TEST_CASE("spectral pipeline matches the dense register machine") {
    RunConfig cfg = generated_orthonormal(4, 2, 33, 44);
    cfg.qpe_bits = 5;
    auto rep = run_grassmann(cfg);

    // dense route with the same encoding, phase scale, and rotation
    auto [m, n] = config_inputs(cfg);
    BlockEncoding be = gram_block_encoding(m, n);
    Matrix blk = scale(extract_block(be), be.alpha);
    Matrix k_pad(be.system_dim, be.system_dim);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k_pad(i, j) = 0.5 * (blk(i, j).real() + blk(j, i).real());
    DensityState in;
    in.registers = {{"system", be.system_dim}};
    in.rho = Matrix(be.system_dim, be.system_dim);
    for (int i = 0; i < 2; ++i) in.rho(i, i) = 0.5; // mixed over the real k
    auto evo = [&](double t) { return matrix_exp_unitary(k_pad, t); };
    auto st = qpe(evo, in, 5, 2.0 * M_PI / rep.alpha_total);
    auto rc = rotate_arccos(st, rep.alpha_total);
    const double dense_p0 = ancilla_zero_probability(rc.state);
    CHECK(std::abs(dense_p0 - rep.exact_p0) <= 1e-12);
}

TEST_CASE("ellipsoid pipeline: identical inputs") {
    RunConfig cfg = generated_spd(3, 2.0, 11, 11);
    cfg.qpe_bits = 6;
    auto rep = run_ellipsoid(cfg);
    CHECK(rep.classical_value <= 1e-10);
    CHECK(rep.quantum_estimate <= 1e-6);
    CHECK(rep.degenerate);
}

TEST_CASE("ellipsoid pipeline: analytic diagonal instance with ideal phases") {
    TempMatrixFile fm("tmp_ell_m.txt", Matrix::identity(2));
    TempMatrixFile fn("tmp_ell_n.txt", scale(Matrix::identity(2), std::exp(-1.0)));
    RunConfig cfg = file_config(fm.path, fn.path);
    cfg.distance = DistanceKind::ellipsoid;
    cfg.qpe_bits = 8;
    cfg.phase_mode = PhaseMode::ideal;
    auto rep = run_ellipsoid(cfg);
    CHECK(std::abs(rep.classical_value - std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(rep.quantum_estimate - std::sqrt(2.0)) <= 1e-6);
    // report invariant: estimate = sqrt(n * p) * log_scale exactly
    CHECK(rep.quantum_estimate ==
          std::sqrt(static_cast<double>(rep.n) * rep.sampled_p0) * rep.log_scale);
}

TEST_CASE("ellipsoid pipeline converges at 12 bits") {
    RunConfig cfg = generated_spd(4, 2.0, 21, 22);
    cfg.qpe_bits = 12;
    auto rep = run_ellipsoid(cfg);
    CHECK(std::abs(rep.quantum_estimate - rep.classical_value) <= 0.02);
    CHECK(rep.log_scale > 0);
}

TEST_CASE("extension distances on the analytic instance") {
    TempMatrixFile fm("tmp_ext_m.txt", analytic_m());
    TempMatrixFile fn("tmp_ext_n.txt", analytic_n());
    for (auto kind : {DistanceKind::asimov, DistanceKind::projection, DistanceKind::chordal}) {
        RunConfig cfg = file_config(fm.path, fn.path);
        cfg.distance = kind;
        cfg.qpe_bits = 6;
        cfg.seed = 3;
        auto rep = run_extension(cfg);
        double want = kind == DistanceKind::asimov ? M_PI / 4
                      : kind == DistanceKind::projection ? 1.0 / std::sqrt(2.0)
                                                         : std::sqrt(0.5);
        CHECK(std::abs(rep.classical_value - want) <= 1e-12);
        CHECK(std::abs(rep.quantum_estimate - want) <= 1e-6);
    }
}

TEST_CASE("extension distances vanish on identical subspaces") {
    for (auto kind : {DistanceKind::asimov, DistanceKind::projection, DistanceKind::chordal}) {
        RunConfig cfg = generated_orthonormal(6, 2, 9, 9);
        cfg.distance = kind;
        cfg.qpe_bits = 6;
        auto rep = run_extension(cfg);
        CHECK(rep.classical_value <= 3e-5);
        CHECK(rep.quantum_estimate <= 1e-3);
    }
}

TEST_CASE("extension distances track the classical oracles on random input") {
    for (auto kind : {DistanceKind::asimov, DistanceKind::projection, DistanceKind::chordal}) {
        RunConfig cfg = generated_orthonormal(8, 3, 13, 1013);
        cfg.distance = kind;
        cfg.qpe_bits = 10;
        cfg.seed = 17;
        auto rep = run_extension(cfg);
        CHECK(std::abs(rep.quantum_estimate - rep.classical_value) <= 0.02);
    }
}

TEST_CASE("blackbox and memory models agree") {
    RunConfig cfg = generated_orthonormal(6, 2, 51, 151);
    cfg.qpe_bits = 9;
    auto bb = run_grassmann(cfg);
    cfg.model = InputModel::memory;
    auto mem = run_grassmann(cfg);
    const double err_bb = std::abs(bb.quantum_estimate - bb.classical_value);
    const double err_mem = std::abs(mem.quantum_estimate - mem.classical_value);
    CHECK(std::abs(bb.quantum_estimate - mem.quantum_estimate) <=
          2.0 * (err_bb + err_mem) + 1e-9);
}

TEST_CASE("memory-model ellipsoid pipeline") {
    RunConfig cfg = generated_spd(3, 2.0, 31, 32);
    cfg.model = InputModel::memory;
    cfg.qpe_bits = 12;
    auto rep = run_ellipsoid(cfg);
    CHECK(std::abs(rep.quantum_estimate - rep.classical_value) <= 0.03);
}

TEST_CASE("jacobi_anger pipeline matches exact mode at tight accuracy") {
    RunConfig cfg = generated_orthonormal(4, 2, 61, 161);
    cfg.model = InputModel::memory; // small encoding alpha keeps the series short
    cfg.qpe_bits = 6;
    auto exact = run_grassmann(cfg);
    cfg.evolution = EvolutionMode::jacobi_anger;
    cfg.eps_h = 1e-8;
    auto ja = run_grassmann(cfg);
    CHECK(std::abs(ja.exact_p0 - exact.exact_p0) <= 1e-6);
    CHECK(std::abs(ja.ideal_p0 - exact.ideal_p0) <= 1e-6);
    CHECK(std::abs(ja.quantum_estimate - exact.quantum_estimate) <= 1e-6);
    CHECK(std::abs(ja.epsilon_p - exact.epsilon_p) <= 1e-6);
    CHECK(std::abs(ja.leaked_mass - exact.leaked_mass) <= 1e-6);
    CHECK(std::abs(ja.clamped_mass - exact.clamped_mass) <= 1e-6);
}

TEST_CASE("error sweep: single point reproduces the plain run") {
    RunConfig cfg = generated_orthonormal(5, 2, 71, 171);
    cfg.qpe_bits = 7;
    cfg.sampling = SamplingMode::shots;
    cfg.shots = 5000;
    cfg.seed = 23;
    auto rows = error_sweep(cfg, {7}, {5000});
    REQUIRE(rows.size() == 1);
    auto direct = run_grassmann(cfg);
    CHECK(render_report(rows[0].report) == render_report(direct));
}

TEST_CASE("error sweep: p0 gap refines with bits") {
    // constructed spectrum with stable binary alignment of the phases
    auto [m, n] = subspace_pair_with_sigmas(6, 2, {std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0)}, 5);
    TempMatrixFile fm("tmp_sweep_m.txt", m);
    TempMatrixFile fn("tmp_sweep_n.txt", n);
    RunConfig cfg = file_config(fm.path, fn.path);
    auto rows = error_sweep(cfg, {4, 5, 6, 7, 8, 9, 10}, {0});
    std::vector<double> gap;
    for (const auto& r : rows) gap.push_back(r.report.p0_gap);
    // noise-banded non-increase: the signed cancellations inside p0 make the
    // raw gap dip and rebound, so the band is anchored at the coarsest bits
    for (double g : gap) CHECK(g <= 2.0 * gap.front());
    CHECK(std::min(gap[gap.size() - 1], gap[gap.size() - 2]) <= std::min(gap[0], gap[1]));
    CHECK(gap.back() < gap.front());

    // epsilon_p refinement: two extra bits never cost more than 10%
    std::vector<double> ep;
    for (const auto& r : rows) ep.push_back(r.report.epsilon_p);
    for (std::size_t i = 0; i + 2 < ep.size(); ++i) CHECK(ep[i + 2] <= 1.1 * ep[i]);
}

TEST_CASE("error sweep: sampling error scales as inverse square root of shots") {
    RunConfig cfg = generated_orthonormal(6, 3, 81, 181);
    cfg.qpe_bits = 12;
    cfg.sampling = SamplingMode::shots;
    std::vector<long long> shot_levels{100, 1000, 10000, 100000, 1000000};
    // average |p_hat - p~0| over independent seeds per level
    std::vector<double> mean_err(shot_levels.size(), 0.0);
    const int reps = 12;
    for (int rep = 0; rep < reps; ++rep) {
        cfg.seed = 1000 + rep;
        auto rows = error_sweep(cfg, {12}, shot_levels);
        for (std::size_t i = 0; i < rows.size(); ++i)
            mean_err[i] += std::abs(rows[i].report.sampled_p0 - rows[i].report.exact_p0) / reps;
    }
    // fit amplitude at fixed slope -1/2; every point within a 3x band
    double logc = 0;
    for (std::size_t i = 0; i < shot_levels.size(); ++i)
        logc += (std::log(mean_err[i]) + 0.5 * std::log(static_cast<double>(shot_levels[i])));
    logc /= shot_levels.size();
    for (std::size_t i = 0; i < shot_levels.size(); ++i) {
        const double fit = std::exp(logc - 0.5 * std::log(static_cast<double>(shot_levels[i])));
        CHECK(mean_err[i] <= 3.0 * fit);
        CHECK(mean_err[i] >= fit / 3.0);
    }
}

TEST_CASE("reports are deterministic and stable") {
    RunConfig cfg = generated_orthonormal(6, 2, 91, 191);
    cfg.qpe_bits = 8;
    cfg.sampling = SamplingMode::shots;
    cfg.shots = 20000;
    cfg.seed = 77;
    auto a = run_grassmann(cfg);
    auto b = run_grassmann(cfg);
    CHECK(render_report(a) == render_report(b));
    CHECK(a.sampled_p0 == b.sampled_p0);
    // csv stability
    auto rows = error_sweep(cfg, {4, 6}, {100, 1000});
    auto rows2 = error_sweep(cfg, {4, 6}, {100, 1000});
    CHECK(sweep_csv(rows) == sweep_csv(rows2));
    CHECK(sweep_csv(rows).substr(0, 8) == "distance");
}

TEST_CASE("constructed sigma pairs hit their prescribed spectrum") {
    std::vector<double> sig{1.0, std::sqrt(0.5), 0.5};
    auto [m, n] = subspace_pair_with_sigmas(8, 3, sig, 42);
    REQUIRE(is_orthonormal_columns(m, 1e-10));
    REQUIRE(is_orthonormal_columns(n, 1e-10));
    auto pa = principal_angles(m, n);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(pa.sigmas[i] - sig[i]) <= 1e-10);
}
