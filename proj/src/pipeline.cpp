#include "subdist/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subdist/distances.hpp"
#include "subdist/memory_tree.hpp"
#include "subdist/qsim.hpp"

namespace subdist {

std::string to_string(DistanceKind k) {
    switch (k) {
        case DistanceKind::grassmann: return "grassmann";
        case DistanceKind::ellipsoid: return "ellipsoid";
        case DistanceKind::asimov: return "asimov";
        case DistanceKind::projection: return "projection";
        case DistanceKind::chordal: return "chordal";
    }
    return "?";
}
std::string to_string(InputModel m) { return m == InputModel::blackbox ? "blackbox" : "memory"; }
std::string to_string(EvolutionMode m) {
    return m == EvolutionMode::exact ? "exact" : "jacobi_anger";
}
std::string to_string(PhaseMode m) { return m == PhaseMode::binned ? "binned" : "ideal"; }
std::string to_string(SamplingMode m) { return m == SamplingMode::shots ? "shots" : "exact"; }

DistanceKind distance_from_string(const std::string& s) {
    if (s == "grassmann") return DistanceKind::grassmann;
    if (s == "ellipsoid") return DistanceKind::ellipsoid;
    if (s == "asimov") return DistanceKind::asimov;
    if (s == "projection") return DistanceKind::projection;
    if (s == "chordal") return DistanceKind::chordal;
    throw invalid_input_error("unknown distance kind: " + s);
}
InputModel model_from_string(const std::string& s) {
    if (s == "blackbox") return InputModel::blackbox;
    if (s == "memory") return InputModel::memory;
    throw invalid_input_error("unknown input model: " + s);
}
EvolutionMode evolution_from_string(const std::string& s) {
    if (s == "exact") return EvolutionMode::exact;
    if (s == "jacobi_anger") return EvolutionMode::jacobi_anger;
    throw invalid_input_error("unknown evolution mode: " + s);
}
PhaseMode phase_mode_from_string(const std::string& s) {
    if (s == "binned") return PhaseMode::binned;
    if (s == "ideal") return PhaseMode::ideal;
    throw invalid_input_error("unknown phase mode: " + s);
}

void validate_config(const RunConfig& cfg) {
    require_input(cfg.qpe_bits >= 1 && cfg.qpe_bits <= 16, "config: qpe_bits must be in [1,16]");
    require_input(cfg.shots >= 1 || cfg.sampling == SamplingMode::exact,
                  "config: shots must be >= 1");
    require_input(cfg.eps_h > 0 && cfg.eps_h < 1, "config: eps_h must be in (0,1)");
    if (!cfg.use_generator)
        require_input(!cfg.m_path.empty() && !cfg.n_path.empty(),
                      "config: matrix paths or generator spec required");
}

// ---------------------------------------------------------------------------
// Matrix file I/O: line 1 "rows cols", then row-major decimal entries;
// '#' lines are comments.

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    require_input(in.good(), "cannot open matrix file: " + path);
    std::string line;
    std::vector<double> values;
    int rows = -1, cols = -1;
    while (std::getline(in, line)) {
        const auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::istringstream ls(line);
        if (rows < 0) {
            if (ls >> rows >> cols) {
                require_input(rows >= 1 && cols >= 1, "matrix file: bad header in " + path);
            } else {
                std::string tok;
                std::istringstream probe(line);
                require_input(!(probe >> tok), "matrix file: bad header in " + path);
            }
            continue;
        }
        double v;
        while (ls >> v) values.push_back(v);
        std::string tok;
        if (ls.clear(), ls >> tok) throw invalid_input_error("matrix file: bad token in " + path);
    }
    require_input(rows >= 1, "matrix file: missing header in " + path);
    require_input(static_cast<int>(values.size()) == rows * cols,
                  "matrix file: entry count mismatch in " + path);
    Matrix m(rows, cols);
    for (int i = 0; i < rows * cols; ++i) m.a[i] = values[i];
    require_input(all_finite(m), "matrix file: non-finite entry in " + path);
    return m;
}

void save_matrix(const std::string& path, const Matrix& m) {
    require_input(is_real(m), "save_matrix: real matrices only");
    std::ofstream out(path);
    require_input(out.good(), "cannot write matrix file: " + path);
    char buf[64];
    out << m.rows << " " << m.cols << "\n";
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j).real());
            out << buf << (j + 1 == m.cols ? "" : " ");
        }
        out << "\n";
    }
}

std::pair<Matrix, Matrix> config_inputs(const RunConfig& cfg) {
    if (cfg.use_generator) {
        const auto& g = cfg.gen;
        if (g.kind == "orthonormal")
            return {random_orthonormal(g.n, g.k, g.seed_m), random_orthonormal(g.n, g.k, g.seed_n)};
        if (g.kind == "spd")
            return {random_spd(g.n, g.kappa, g.seed_m), random_spd(g.n, g.kappa, g.seed_n)};
        throw invalid_input_error("generator kind must be orthonormal or spd");
    }
    return {load_matrix(cfg.m_path), load_matrix(cfg.n_path)};
}

// ---------------------------------------------------------------------------
// Spectral evaluation of the QPE + rotation stage. For a maximally mixed
// input the post-QPE state is exactly (1/k) sum_i |w_i><w_i| (x) |u_i><u_i|
// with w_i the phase kernel of eigenphase lambda_i/alpha_total, so the
// ancilla statistics factor over eigenvalues. This matches the dense
// register-machine route to machine precision (cross-checked in tests) while
// staying tractable at 12-bit registers.

namespace {

struct SpectralEval {
    std::vector<double> lambdas; // ascending eigenvalues of the real block
    double a_scale = 2.0;        // phase scale, power of two
    int bits = 0;
    int t = 0;
    bool binned = true;
    bool exact_phase = false;
    std::vector<std::vector<double>> masses; // per eigenvalue over bins
};

double pow2_at_least(double x) {
    double a = 2.0;
    while (a < x) a *= 2.0;
    return a;
}

std::vector<double> real_block_eigs(const BlockEncoding& be, int real_dim, Matrix* block_out) {
    Matrix blk = extract_block(be);
    Matrix k_real(real_dim, real_dim);
    for (int i = 0; i < real_dim; ++i)
        for (int j = 0; j < real_dim; ++j)
            k_real(i, j) = 0.5 * (blk(i, j).real() + blk(j, i).real()) * be.alpha;
    if (block_out) *block_out = k_real;
    return sym_eig(k_real).eigvals;
}

double cheb_scalar(const std::vector<cx>& coefs, double x, cx* out) {
    // sum_k c_k T_k(x); returns |value|, writes value.
    cx acc = coefs[0];
    double tkm1 = 1.0, tk = x;
    for (std::size_t k = 1; k < coefs.size(); ++k) {
        acc += coefs[k] * tk;
        const double tkp1 = 2.0 * x * tk - tkm1;
        tkm1 = tk;
        tk = tkp1;
    }
    *out = acc;
    return std::abs(acc);
}

SpectralEval make_spectral(const BlockEncoding& be, int real_dim, const RunConfig& cfg) {
    SpectralEval ev;
    ev.lambdas = real_block_eigs(be, real_dim, nullptr);
    for (auto& l : ev.lambdas) l = std::max(0.0, l);
    const double lmax = ev.lambdas.back();
    ev.a_scale = pow2_at_least(std::max(2.0, 2.0 * lmax));
    ev.bits = cfg.qpe_bits;
    ev.t = 1 << cfg.qpe_bits;
    ev.binned = cfg.phase_mode == PhaseMode::binned;

    ev.exact_phase = true;
    for (double lam : ev.lambdas) {
        const double ft = lam / ev.a_scale * ev.t;
        if (std::abs(ft - std::round(ft)) > 1e-6) ev.exact_phase = false;
    }
    if (!ev.binned) return ev;

    const int r = static_cast<int>(ev.lambdas.size());
    ev.masses.resize(r);
    if (cfg.evolution == EvolutionMode::exact) {
        for (int i = 0; i < r; ++i) ev.masses[i] = phase_kernel_mass(ev.lambdas[i] / ev.a_scale, ev.bits);
    } else {
        // Per-step truncated series: each controlled branch tau gets its own
        // Jacobi-Anger truncation at eps_h accuracy.
        const double step = 2.0 * M_PI / ev.a_scale;
        std::vector<std::vector<cx>> mu(r, std::vector<cx>(ev.t));
        for (int tau = 0; tau < ev.t; ++tau) {
            const double z = be.alpha * step * tau;
            const int deg = jacobi_anger_degree(z, cfg.eps_h);
            const auto coefs = jacobi_anger_coefficients(z, deg);
            for (int i = 0; i < r; ++i) {
                cx v;
                cheb_scalar(coefs, ev.lambdas[i] / be.alpha, &v);
                mu[i][tau] = v;
            }
        }
        for (int i = 0; i < r; ++i) {
            ev.masses[i].resize(ev.t);
            for (int j = 0; j < ev.t; ++j) {
                cx acc = 0;
                const double w0 = 2.0 * M_PI * j / ev.t;
                for (int tau = 0; tau < ev.t; ++tau)
                    acc += cx(std::cos(w0 * tau), std::sin(w0 * tau)) * mu[i][tau];
                ev.masses[i][j] = std::norm(acc) / (static_cast<double>(ev.t) * ev.t);
            }
        }
    }
    return ev;
}

struct AmpTable {
    std::vector<double> amp;      // rotation amplitude per bin
    std::vector<char> clamped;    // bin clamped to the valid-range boundary
    std::vector<char> leaked;     // bin outside the valid lambda range
};

struct StageResult {
    double ideal_p0 = 0;
    double exact_p0 = 0;
    double epsilon_p = 0;
    double leaked_mass = 0;
    double clamped_mass = 0;
    std::vector<EigenRow> table;
};

/// amp_of(lambda_clamped) must be the rotation amplitude in [-1, 1].
template <typename AmpFn>
StageResult evaluate_stage(const SpectralEval& ev, double lo, double hi, AmpFn amp_of) {
    const int r = static_cast<int>(ev.lambdas.size());
    StageResult out;
    AmpTable tab;
    if (ev.binned) {
        tab.amp.resize(ev.t);
        tab.clamped.assign(ev.t, 0);
        tab.leaked.assign(ev.t, 0);
        for (int j = 0; j < ev.t; ++j) {
            const double lt = static_cast<double>(j) * ev.a_scale / ev.t;
            double lc = lt;
            if (lt < lo || lt > hi) {
                tab.leaked[j] = 1;
                tab.clamped[j] = 1;
                lc = std::min(hi, std::max(lo, lt));
            }
            tab.amp[j] = amp_of(lc);
        }
    }
    double ep2 = 0;
    for (int i = 0; i < r; ++i) {
        const double lam = std::min(hi, std::max(lo, ev.lambdas[i]));
        const double xi = amp_of(lam);
        out.ideal_p0 += xi * xi / r;
        EigenRow row;
        row.lambda = ev.lambdas[i];
        row.phase = ev.lambdas[i] / ev.a_scale;
        if (ev.binned) {
            const auto& m = ev.masses[i];
            // per-eigenvalue estimate: the peak bin of the measured kernel
            int peak = 0;
            for (int j = 1; j < ev.t; ++j)
                if (m[j] > m[peak]) peak = j;
            row.lambda_binned = static_cast<double>(peak) * ev.a_scale / ev.t;
            row.peak_mass = m[peak];
            ep2 += (tab.amp[peak] - xi) * (tab.amp[peak] - xi) / r;
            double pe = 0, leak = 0, clamp_mass = 0;
            for (int j = 0; j < ev.t; ++j) {
                pe += m[j] * tab.amp[j] * tab.amp[j];
                if (tab.leaked[j]) leak += m[j];
                if (tab.clamped[j]) clamp_mass += m[j];
            }
            out.exact_p0 += pe / r;
            row.out_of_range_mass = leak;
            out.leaked_mass += leak / r;
            out.clamped_mass += clamp_mass / r;
        } else {
            row.lambda_binned = lam;
            row.peak_mass = 1.0;
        }
        out.table.push_back(row);
    }
    if (!ev.binned) out.exact_p0 = out.ideal_p0;
    out.epsilon_p = std::sqrt(ep2);
    return out;
}

void fill_common(PipelineReport& rep, const RunConfig& cfg) {
    rep.distance = cfg.distance;
    rep.model = cfg.model;
    rep.qpe_bits = cfg.qpe_bits;
    rep.shots = cfg.shots;
    rep.seed = cfg.seed;
    rep.evolution = cfg.evolution;
    rep.eps_h = cfg.eps_h;
    rep.phase_mode = cfg.phase_mode;
    rep.sampling = cfg.sampling;
}

double finish_sampling(PipelineReport& rep, const RunConfig& cfg) {
    if (cfg.sampling == SamplingMode::exact) {
        rep.sampled_p0 = rep.exact_p0;
    } else {
        rep.sampled_p0 = sample_bernoulli(rep.exact_p0, cfg.shots, cfg.seed).p_hat;
    }
    return rep.sampled_p0;
}

BlockEncoding build_gram_encoding(const RunConfig& cfg, const Matrix& m, const Matrix& n) {
    if (cfg.model == InputModel::blackbox) return gram_block_encoding(m, n);
    MemoryTree tm = build_tree(m);
    MemoryTree tn = build_tree(n);
    return gram_square_encoding(memory_gram_encoding(tm, tn));
}

BlockEncoding build_ellipsoid_encoding(const RunConfig& cfg, const Matrix& m, const Matrix& n,
                                       double kappa_m) {
    if (cfg.model == InputModel::blackbox) return ellipsoid_gram_encoding(m, n, kappa_m);
    // Memory route: Frobenius-normalized N columns pushed through the
    // tree-backed inversion oracle, then completed to a unitary and squared.
    MemoryTree tm = build_tree(m);
    MemoryTree tn = build_tree(n);
    const int nn = m.rows;
    const int d = next_pow2(nn);
    Matrix p_scaled(d, d);
    for (int j = 0; j < nn; ++j) {
        std::vector<cx> col(nn);
        for (int i = 0; i < nn; ++i) col[i] = n(i, j) / tn.frobenius;
        auto [pv, amp] = memory_inverse_apply(tm, kappa_m, col);
        (void)amp;
        for (int i = 0; i < nn; ++i) p_scaled(i, j) = pv[i];
    }
    // p_scaled = P / (kappa_m ||N||_F); complete the columns to a unitary.
    Matrix b2 = mul(adjoint(p_scaled), p_scaled);
    Matrix gap = sub(Matrix::identity(d), b2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            cx v = 0.5 * (gap(i, j) + gap(j, i));
            gap(i, j) = v;
            gap(j, i) = v;
        }
    Matrix c = sqrt_psd(gap);
    Matrix u(2 * d, 2 * d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            u(i, j) = p_scaled(i, j);
            u(d + i, j) = c(i, j);
        }
    complete_orthonormal_basis(u, d);
    BlockEncoding be_p{std::move(u), kappa_m * tn.frobenius, d, 2 * d};
    return gram_square_encoding(be_p);
}

double infer_spd_kappa(const Matrix& m) {
    auto eig = sym_eig(m);
    require_pre(eig.eigvals.front() > 0 && eig.eigvals.back() <= 1.0 + 1e-9,
                "ellipsoid: SPD spectrum must lie in (0, 1]");
    return std::max(1.0, 1.0 / eig.eigvals.front()) * (1.0 + 1e-12);
}

} // namespace

PipelineReport run_grassmann(const RunConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    auto [m, n] = config_inputs(cfg);
    require_input(is_orthonormal_columns(m) && is_orthonormal_columns(n),
                  "grassmann: inputs must have orthonormal columns");
    PipelineReport rep;
    fill_common(rep, cfg);
    rep.n = m.rows;
    rep.k = m.cols;
    rep.classical_value = grassmann_distance(m, n);
    rep.degenerate = rep.classical_value <= 1e-12;

    BlockEncoding be = build_gram_encoding(cfg, m, n);
    rep.encoding_alpha = be.alpha;
    SpectralEval ev = make_spectral(be, rep.k, cfg);
    rep.alpha_total = ev.a_scale;
    rep.exact_phase = ev.exact_phase;

    StageResult st = evaluate_stage(ev, 0.0, 1.0, [](double lam) {
        return std::acos(std::sqrt(std::min(1.0, std::max(0.0, lam)))) / (M_PI / 2.0);
    });
    rep.ideal_p0 = st.ideal_p0;
    rep.exact_p0 = st.exact_p0;
    rep.epsilon_p = st.epsilon_p;
    rep.p0_gap = std::abs(rep.exact_p0 - rep.ideal_p0);
    rep.leaked_mass = st.leaked_mass;
    rep.clamped_mass = st.clamped_mass;
    rep.eigen_table = std::move(st.table);

    const double p = finish_sampling(rep, cfg);
    rep.quantum_estimate = (M_PI / 2.0) * std::sqrt(static_cast<double>(rep.k)) * std::sqrt(p);
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

PipelineReport run_ellipsoid(const RunConfig& cfg) {
    validate_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    auto [m, n] = config_inputs(cfg);
    require_input(m.square() && n.square() && m.rows == n.rows, "ellipsoid: square SPD pair required");
    require_input(is_spd(m) && is_spd(n), "ellipsoid: inputs must be SPD");
    PipelineReport rep;
    fill_common(rep, cfg);
    rep.n = m.rows;
    rep.k = m.rows;
    rep.classical_value = ellipsoid_distance(m, n);
    rep.degenerate = rep.classical_value <= 1e-12;

    const double kappa_m = cfg.use_generator && cfg.gen.kappa > 1.0 ? cfg.gen.kappa : infer_spd_kappa(m);
    BlockEncoding be = build_ellipsoid_encoding(cfg, m, n, kappa_m);
    rep.encoding_alpha = be.alpha;
    SpectralEval ev = make_spectral(be, rep.n, cfg);
    rep.alpha_total = ev.a_scale;
    rep.exact_phase = ev.exact_phase;

    // QPE reads eigenvalues of P^T P; the per-bin singular value of P is the
    // square root, so log sigma = log(lambda)/2 feeds the rotation.
    double lam_lo = ev.lambdas.front(), lam_hi = ev.lambdas.back();
    require_pre(lam_lo > 0, "ellipsoid: singular spectrum (P not invertible)");
    const double sig_lo = std::sqrt(lam_lo), sig_hi = std::sqrt(lam_hi);
    double ls = std::log(sig_hi / sig_lo) + 1.0;
    ls = std::max({ls, std::abs(std::log(sig_hi)) + 1.0, std::abs(std::log(sig_lo)) + 1.0});
    rep.log_scale = ls;

    StageResult st = evaluate_stage(ev, lam_lo, lam_hi, [ls](double lam) {
        return 0.5 * std::log(lam) / ls;
    });
    rep.ideal_p0 = st.ideal_p0;
    rep.exact_p0 = st.exact_p0;
    rep.epsilon_p = st.epsilon_p;
    rep.p0_gap = std::abs(rep.exact_p0 - rep.ideal_p0);
    rep.leaked_mass = st.leaked_mass;
    rep.clamped_mass = st.clamped_mass;
    rep.eigen_table = std::move(st.table);

    const double p = finish_sampling(rep, cfg);
    rep.quantum_estimate = std::sqrt(static_cast<double>(rep.n) * p) * ls;
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

PipelineReport run_extension(const RunConfig& cfg) {
    validate_config(cfg);
    require_input(cfg.distance == DistanceKind::asimov || cfg.distance == DistanceKind::projection ||
                      cfg.distance == DistanceKind::chordal,
                  "run_extension: asimov, projection or chordal expected");
    const auto t0 = std::chrono::steady_clock::now();
    auto [m, n] = config_inputs(cfg);
    require_input(is_orthonormal_columns(m) && is_orthonormal_columns(n),
                  "extension: inputs must have orthonormal columns");
    PipelineReport rep;
    fill_common(rep, cfg);
    rep.n = m.rows;
    rep.k = m.cols;
    switch (cfg.distance) {
        case DistanceKind::asimov: rep.classical_value = asimov_distance(m, n); break;
        case DistanceKind::projection: rep.classical_value = projection_distance(m, n); break;
        default: rep.classical_value = chordal_distance(m, n); break;
    }
    rep.degenerate = rep.classical_value <= 1e-12;

    BlockEncoding be = build_gram_encoding(cfg, m, n);
    rep.encoding_alpha = be.alpha;

    if (cfg.distance == DistanceKind::chordal) {
        // Grassmann pipeline with the arccos rotation replaced by the bare
        // sqrt(lambda) amplitude; p estimates (sum sigma_i^2)/k.
        SpectralEval ev = make_spectral(be, rep.k, cfg);
        rep.alpha_total = ev.a_scale;
        rep.exact_phase = ev.exact_phase;
        StageResult st = evaluate_stage(ev, 0.0, 1.0, [](double lam) {
            return std::sqrt(std::min(1.0, std::max(0.0, lam)));
        });
        rep.ideal_p0 = st.ideal_p0;
        rep.exact_p0 = st.exact_p0;
        rep.epsilon_p = st.epsilon_p;
        rep.p0_gap = std::abs(rep.exact_p0 - rep.ideal_p0);
        rep.leaked_mass = st.leaked_mass;
        rep.clamped_mass = st.clamped_mass;
        rep.eigen_table = std::move(st.table);
        const double p = finish_sampling(rep, cfg);
        rep.quantum_estimate =
            std::sqrt(std::max(0.0, static_cast<double>(rep.k) * (1.0 - p)));
    } else {
        // Smallest singular value via power iteration on I - K.
        Matrix k_real;
        auto lambdas = real_block_eigs(be, rep.k, &k_real);
        for (auto& l : lambdas) l = std::max(0.0, l);
        rep.alpha_total = pow2_at_least(std::max(2.0, 2.0 * lambdas.back()));
        rep.exact_phase = false;
        const int iters = cfg.power_iters > 0 ? cfg.power_iters : power_method_auto_iters(k_real, cfg.seed);
        double lmin = power_method_min_eig(k_real, iters, cfg.seed);
        lmin = std::min(1.0, std::max(0.0, lmin));
        rep.ideal_p0 = lambdas.front();
        rep.exact_p0 = lmin;
        rep.sampled_p0 = lmin;
        rep.p0_gap = std::abs(rep.exact_p0 - rep.ideal_p0);
        for (double lam : lambdas) {
            EigenRow row;
            row.lambda = lam;
            row.phase = lam / rep.alpha_total;
            row.lambda_binned = lam;
            row.peak_mass = 1.0;
            rep.eigen_table.push_back(row);
        }
        if (cfg.distance == DistanceKind::asimov)
            rep.quantum_estimate = std::acos(std::sqrt(lmin));
        else
            rep.quantum_estimate = std::sqrt(std::max(0.0, 1.0 - lmin));
    }
    rep.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

PipelineReport run_pipeline(const RunConfig& cfg) {
    switch (cfg.distance) {
        case DistanceKind::grassmann: return run_grassmann(cfg);
        case DistanceKind::ellipsoid: return run_ellipsoid(cfg);
        default: return run_extension(cfg);
    }
}

std::vector<SweepRow> error_sweep(const RunConfig& cfg, const std::vector<int>& bits_list,
                                  const std::vector<long long>& shots_list) {
    require_input(!bits_list.empty() && !shots_list.empty(), "error_sweep: empty ranges");
    std::vector<SweepRow> rows;
    std::uint64_t cell = 0;
    for (int bits : bits_list) {
        for (long long shots : shots_list) {
            RunConfig c = cfg;
            c.qpe_bits = bits;
            c.shots = shots;
            c.seed = cfg.seed + 1000003ull * cell;
            if (shots == 0) {
                c.sampling = SamplingMode::exact;
                c.shots = 1;
            }
            SweepRow row;
            row.bits = bits;
            row.shots = shots;
            row.seed = c.seed;
            row.report = run_pipeline(c);
            rows.push_back(std::move(row));
            ++cell;
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string render_report(const PipelineReport& r, bool include_timing) {
    std::ostringstream out;
    out << "report_version 1\n";
    out << "distance " << to_string(r.distance) << "\n";
    out << "model " << to_string(r.model) << "\n";
    out << "n " << r.n << "\n";
    out << "k " << r.k << "\n";
    out << "qpe_bits " << r.qpe_bits << "\n";
    out << "shots " << r.shots << "\n";
    out << "seed " << r.seed << "\n";
    out << "evolution " << to_string(r.evolution) << "\n";
    out << "eps_h " << fmt_double(r.eps_h) << "\n";
    out << "phase_mode " << to_string(r.phase_mode) << "\n";
    out << "sampling " << to_string(r.sampling) << "\n";
    out << "classical_value " << fmt_double(r.classical_value) << "\n";
    out << "ideal_p0 " << fmt_double(r.ideal_p0) << "\n";
    out << "exact_p0 " << fmt_double(r.exact_p0) << "\n";
    out << "sampled_p0 " << fmt_double(r.sampled_p0) << "\n";
    out << "quantum_estimate " << fmt_double(r.quantum_estimate) << "\n";
    out << "abs_error " << fmt_double(std::abs(r.quantum_estimate - r.classical_value)) << "\n";
    out << "epsilon_p " << fmt_double(r.epsilon_p) << "\n";
    out << "p0_gap " << fmt_double(r.p0_gap) << "\n";
    out << "leaked_mass " << fmt_double(r.leaked_mass) << "\n";
    out << "clamped_mass " << fmt_double(r.clamped_mass) << "\n";
    out << "alpha_total " << fmt_double(r.alpha_total) << "\n";
    out << "encoding_alpha " << fmt_double(r.encoding_alpha) << "\n";
    out << "log_scale " << fmt_double(r.log_scale) << "\n";
    out << "exact_phase " << (r.exact_phase ? "true" : "false") << "\n";
    out << "degenerate " << (r.degenerate ? "true" : "false") << "\n";
    out << "estimator frequency-counting (shots scale as 1/delta^2)\n";
    out << "eigen_table index lambda phase lambda_binned peak_mass out_of_range_mass\n";
    for (std::size_t i = 0; i < r.eigen_table.size(); ++i) {
        const auto& e = r.eigen_table[i];
        out << "  " << i << " " << fmt_double(e.lambda) << " " << fmt_double(e.phase) << " "
            << fmt_double(e.lambda_binned) << " " << fmt_double(e.peak_mass) << " "
            << fmt_double(e.out_of_range_mass) << "\n";
    }
    if (include_timing) out << "timing_ms " << fmt_double(r.elapsed_ms) << "\n";
    out << "end\n";
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "distance,model,bits,shots,seed,classical,ideal_p0,exact_p0,sampled_p0,estimate,"
           "abs_error,epsilon_p,p0_gap,leaked_mass,clamped_mass,alpha_total,exact_phase\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << to_string(r.distance) << "," << to_string(r.model) << "," << row.bits << ","
            << row.shots << "," << row.seed << "," << fmt_double(r.classical_value) << ","
            << fmt_double(r.ideal_p0) << "," << fmt_double(r.exact_p0) << ","
            << fmt_double(r.sampled_p0) << "," << fmt_double(r.quantum_estimate) << ","
            << fmt_double(std::abs(r.quantum_estimate - r.classical_value)) << ","
            << fmt_double(r.epsilon_p) << "," << fmt_double(r.p0_gap) << ","
            << fmt_double(r.leaked_mass) << "," << fmt_double(r.clamped_mass) << ","
            << fmt_double(r.alpha_total) << "," << (r.exact_phase ? "true" : "false") << "\n";
    }
    return out.str();
}

} // namespace subdist
