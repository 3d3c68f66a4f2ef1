#include "subdist/qsim.hpp"

#include <algorithm>
#include <cmath>

#include "subdist/rng.hpp"

namespace subdist {

int DensityState::register_index(const std::string& name) const {
    for (std::size_t i = 0; i < registers.size(); ++i)
        if (registers[i].name == name) return static_cast<int>(i);
    throw invalid_input_error("DensityState: no register named " + name);
}

DensityState uniform_mixed_state(int k) {
    require_input(k >= 1, "uniform_mixed_state: k must be positive");
    DensityState s;
    s.registers = {{"system", k}};
    s.rho = Matrix(k, k);
    for (int i = 0; i < k; ++i) s.rho(i, i) = 1.0 / k;
    return s;
}

DensityState basis_state(const std::string& name, int dim, int index) {
    require_input(dim >= 1 && index >= 0 && index < dim, "basis_state: bad index");
    DensityState s;
    s.registers = {{name, dim}};
    s.rho = Matrix(dim, dim);
    s.rho(index, index) = 1.0;
    return s;
}

void validate_density(const DensityState& s, double tol, int psd_dim_limit) {
    int d = 1;
    for (const auto& r : s.registers) d *= r.dim;
    require_internal(d == s.rho.rows && s.rho.square(), "density: register/matrix dims differ");
    cx tr = 0;
    for (int i = 0; i < d; ++i) tr += s.rho(i, i);
    require_internal(std::abs(tr - cx(1.0, 0.0)) <= tol, "density: trace != 1");
    require_internal(is_hermitian(s.rho, tol), "density: not Hermitian");
    if (d <= psd_dim_limit) {
        auto eigs = herm_eig_values(s.rho);
        require_internal(eigs.front() >= -tol, "density: negative eigenvalue");
    }
}

DensityState qpe(const EvolutionFn& evolution, const DensityState& state, int bits,
                 double step_time) {
    require_input(bits >= 1, "qpe: bits must be >= 1");
    const int t = 1 << bits;
    const int d = state.dim();
    // dense register machine; pipelines use the spectral evaluation instead
    require_input(static_cast<long long>(t) * d <= 4096,
                  "qpe: output density matrix too large for the dense register machine");

    {
        Matrix probe = evolution(step_time);
        require_pre(probe.rows == d && probe.cols == d, "qpe: evolution dimension mismatch");
        require_pre(is_unitary(probe, 1e-6), "qpe: evolution is not unitary");
    }

    // rho_out[(j,a),(j',b)] = [M_j rho M_j'^dagger] with
    // M_j = (1/sqrt(T)) sum_tau exp(2 pi i j tau / T) U_tau.
    std::vector<Matrix> m(t, Matrix(d, d));
    {
        std::vector<Matrix> u_tau(t);
        for (int tau = 0; tau < t; ++tau) u_tau[tau] = evolution(step_time * tau);
        const double w0 = 2.0 * M_PI / t;
        for (int j = 0; j < t; ++j) {
            Matrix acc(d, d);
            for (int tau = 0; tau < t; ++tau) {
                const double ang = w0 * j * tau;
                const cx ph(std::cos(ang), std::sin(ang));
                for (std::size_t idx = 0; idx < acc.a.size(); ++idx)
                    acc.a[idx] += ph * u_tau[tau].a[idx];
            }
            m[j] = scale(acc, 1.0 / t);
        }
    }

    DensityState out;
    out.registers.reserve(state.registers.size() + 1);
    out.registers.push_back({"phase", t});
    for (const auto& r : state.registers) out.registers.push_back(r);
    out.rho = Matrix(t * d, t * d);
    std::vector<Matrix> m_rho(t);
    for (int j = 0; j < t; ++j) m_rho[j] = mul(m[j], state.rho);
    for (int j = 0; j < t; ++j) {
        for (int jp = 0; jp < t; ++jp) {
            Matrix blk = mul(m_rho[j], adjoint(m[jp]));
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) out.rho(j * d + a, jp * d + b) = blk(a, b);
        }
    }
    return out;
}

DensityState rotate_ancilla(const DensityState& state, const std::vector<double>& amps) {
    const int pidx = state.register_index("phase");
    require_input(pidx == 0, "rotate_ancilla: phase register must be first");
    const int t = state.registers[0].dim;
    require_input(static_cast<int>(amps.size()) == t, "rotate_ancilla: amplitude table size mismatch");
    const int d = state.dim();
    const int rest = d / t;

    DensityState out;
    out.registers = state.registers;
    out.registers.push_back({"ancilla", 2});
    out.rho = Matrix(2 * d, 2 * d);
    // R_j |0> = a_j|0> + b_j|1>: rho' = (R (x) ...) (rho (x) |0><0|) (...)
    std::vector<double> bv(t);
    for (int j = 0; j < t; ++j) {
        require_internal(std::abs(amps[j]) <= 1.0 + 1e-12, "rotate_ancilla: |amplitude| > 1");
        bv[j] = std::sqrt(std::max(0.0, 1.0 - amps[j] * amps[j]));
    }
    for (int gi = 0; gi < d; ++gi) {
        const int j = gi / rest;
        for (int gj = 0; gj < d; ++gj) {
            const int jp = gj / rest;
            const cx v = state.rho(gi, gj);
            if (v == cx{}) continue;
            out.rho(2 * gi + 0, 2 * gj + 0) = v * (amps[j] * amps[jp]);
            out.rho(2 * gi + 0, 2 * gj + 1) = v * (amps[j] * bv[jp]);
            out.rho(2 * gi + 1, 2 * gj + 0) = v * (bv[j] * amps[jp]);
            out.rho(2 * gi + 1, 2 * gj + 1) = v * (bv[j] * bv[jp]);
        }
    }
    return out;
}

RotationOutcome rotate_arccos(const DensityState& state, double alpha_scale) {
    const int t = state.registers[state.register_index("phase")].dim;
    std::vector<double> amps(t);
    std::vector<char> clamped(t, 0);
    for (int j = 0; j < t; ++j) {
        double lt = static_cast<double>(j) * alpha_scale / t;
        if (lt > 1.0) {
            lt = 1.0;
            clamped[j] = 1;
        }
        amps[j] = std::acos(std::sqrt(lt)) / (M_PI / 2.0);
    }
    RotationOutcome rc;
    rc.state = rotate_ancilla(state, amps);
    for (int j = 0; j < t; ++j) {
        if (!clamped[j]) continue;
        ++rc.clamped_bins;
        const int rest = state.dim() / t;
        for (int r = 0; r < rest; ++r) rc.clamped_mass += state.rho(j * rest + r, j * rest + r).real();
    }
    return rc;
}

RotationOutcome rotate_log(const DensityState& state, double alpha_scale, double log_scale,
                           double lambda_lo, double lambda_hi) {
    require_input(log_scale > 0, "rotate_log: log_scale must be positive");
    const int t = state.registers[state.register_index("phase")].dim;
    std::vector<double> amps(t);
    std::vector<char> clamped(t, 0);
    for (int j = 0; j < t; ++j) {
        double lt = static_cast<double>(j) * alpha_scale / t;
        if (lambda_hi > lambda_lo) {
            if (lt < lambda_lo || lt > lambda_hi) clamped[j] = 1;
            lt = std::min(lambda_hi, std::max(lambda_lo, lt));
        }
        double a = lt > 0 ? std::log(lt) / log_scale : -1.0;
        if (a < -1.0 || a > 1.0 || lt <= 0) {
            clamped[j] = 1;
            a = std::min(1.0, std::max(-1.0, a));
        }
        amps[j] = a;
    }
    RotationOutcome rc;
    rc.state = rotate_ancilla(state, amps);
    const int rest = state.dim() / t;
    for (int j = 0; j < t; ++j) {
        if (!clamped[j]) continue;
        ++rc.clamped_bins;
        for (int r = 0; r < rest; ++r) rc.clamped_mass += state.rho(j * rest + r, j * rest + r).real();
    }
    return rc;
}

double ancilla_zero_probability(const DensityState& state) {
    const int aidx = state.register_index("ancilla");
    require_input(aidx == static_cast<int>(state.registers.size()) - 1,
                  "ancilla_zero_probability: ancilla register must be last");
    const int adim = state.registers[aidx].dim;
    double p = 0;
    for (int g = 0; g < state.dim(); g += adim) p += state.rho(g, g).real();
    return p;
}

ShotRecord sample_bernoulli(double p, long long shots, std::uint64_t seed) {
    require_input(shots >= 1, "sample: shots must be >= 1");
    p = std::min(1.0, std::max(0.0, p));
    Rng rng(seed);
    long long zeros = 0;
    for (long long i = 0; i < shots; ++i)
        if (rng.uniform01() < p) ++zeros;
    return ShotRecord{shots, zeros, static_cast<double>(zeros) / static_cast<double>(shots), seed};
}

ShotRecord sample_ancilla(const DensityState& state, long long shots, std::uint64_t seed) {
    return sample_bernoulli(ancilla_zero_probability(state), shots, seed);
}

double power_method_min_eig(const Matrix& a, int iters, std::uint64_t seed) {
    require_input(iters > 0, "power_method_min_eig: iters must be positive");
    require_input(a.square() && is_real(a) && is_symmetric(a, 1e-8 * std::max(1.0, max_abs(a))),
                  "power_method_min_eig: symmetric input required");
    const int n = a.rows;
    Matrix b = sub(Matrix::identity(n), a);
    Rng rng(seed);
    std::vector<double> v(n);
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        v[i] = rng.gaussian();
        nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    std::vector<double> w(n);
    for (int it = 0; it < iters; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += b(i, j).real() * v[j];
            w[i] = s;
        }
        double wn = 0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (wn < 1e-280) return 1.0; // I - a annihilates the start: a acts as identity
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    double rayleigh = 0;
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += b(i, j).real() * v[j];
        rayleigh += v[i] * s;
    }
    return 1.0 - rayleigh;
}

int power_method_auto_iters(const Matrix& a, std::uint64_t seed) {
    const int n = a.rows;
    // Pilot run: residual of the dominant-eigenpair estimate of I - a serves
    // as the gap proxy the iteration count is scaled by.
    Matrix b = sub(Matrix::identity(n), a);
    Rng rng(seed ^ 0xa5a5a5a5ull);
    std::vector<double> v(n);
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        v[i] = rng.gaussian();
        nrm += v[i] * v[i];
    }
    nrm = std::sqrt(nrm);
    for (auto& x : v) x /= nrm;
    std::vector<double> w(n);
    for (int it = 0; it < 40; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += b(i, j).real() * v[j];
            w[i] = s;
        }
        double wn = 0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (wn < 1e-280) return 1;
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    double mu = 0;
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += b(i, j).real() * v[j];
        w[i] = s;
        mu += v[i] * s;
    }
    double res = 0;
    for (int i = 0; i < n; ++i) {
        const double r = w[i] - mu * v[i];
        res += r * r;
    }
    const double gap = std::max(std::sqrt(res), 5e-3);
    const int iters = static_cast<int>(std::ceil(10.0 * std::log(n + 1.0) / std::min(1.0, gap)));
    return std::min(50000, std::max(200, iters));
}

std::vector<cx> phase_kernel(double phi, int bits) {
    require_input(bits >= 1 && bits <= 24, "phase_kernel: bits out of range");
    const int t = 1 << bits;
    std::vector<cx> w(t);
    for (int j = 0; j < t; ++j) {
        double theta = static_cast<double>(j) / t - phi; // fraction of a turn
        theta -= std::floor(theta);                      // [0, 1)
        const double s = std::sin(M_PI * theta);
        if (std::abs(s) < 1e-15) {
            w[j] = 1.0;
            continue;
        }
        // geometric sum (1/T) sum_tau e^{2 pi i theta tau}
        const double mag = std::sin(M_PI * t * theta) / (t * s);
        const double ang = M_PI * theta * (t - 1);
        w[j] = mag * cx(std::cos(ang), std::sin(ang));
    }
    return w;
}

std::vector<double> phase_kernel_mass(double phi, int bits) {
    auto w = phase_kernel(phi, bits);
    std::vector<double> m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) m[i] = std::norm(w[i]);
    return m;
}

} // namespace subdist
