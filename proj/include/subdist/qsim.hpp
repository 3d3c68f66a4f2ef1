#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subdist/linalg.hpp"

namespace subdist {

struct Register {
    std::string name;
    int dim = 0;
};

/// Density matrix partitioned into named registers; rho lives on the tensor
/// product with the first register most significant.
struct DensityState {
    std::vector<Register> registers;
    Matrix rho;

    int dim() const { return rho.rows; }
    int register_index(const std::string& name) const;
};

/// rho = I/k on a single "system" register.
DensityState uniform_mixed_state(int k);

/// Pure computational-basis density state on one register.
DensityState basis_state(const std::string& name, int dim, int index);

/// Trace, Hermiticity and (for small states) positive semidefiniteness.
void validate_density(const DensityState& s, double tol = 1e-9, int psd_dim_limit = 160);

using EvolutionFn = std::function<Matrix(double)>;

/// Finite-bit phase estimation: prepends a "phase" register of dimension
/// 2^bits, applies the controlled ladder sum_tau |tau><tau| (x)
/// evolution(tau * step_time), then the exact inverse Fourier transform.
/// Bin j estimates phase phi = j/2^bits where evolution(step_time) has
/// eigenvalue exp(-2*pi*i*phi).
DensityState qpe(const EvolutionFn& evolution, const DensityState& state, int bits,
                 double step_time);

struct RotationOutcome {
    DensityState state;
    double clamped_mass = 0.0; // probability mass on clamped phase bins
    int clamped_bins = 0;
};

/// Appends a one-qubit "ancilla" rotated per phase bin j to amplitude
/// arccos(sqrt(lt))/(pi/2) on |0>, lt = j*alpha_scale/2^bits clamped to [0,1].
RotationOutcome rotate_arccos(const DensityState& state, double alpha_scale);

/// Appends the log-rotation ancilla with amplitude log(lt)/log_scale on |0>.
/// lt is first clamped into [lambda_lo, lambda_hi]; branches whose amplitude
/// still exceeds 1 in magnitude are clamped to the boundary and counted.
RotationOutcome rotate_log(const DensityState& state, double alpha_scale, double log_scale,
                           double lambda_lo = 0.0, double lambda_hi = 0.0);

/// Appends an ancilla with amplitude amps[j] on |0> controlled by the phase
/// register (building block of the named rotations).
DensityState rotate_ancilla(const DensityState& state, const std::vector<double>& amps);

/// Exact probability of |0> on the "ancilla" register.
double ancilla_zero_probability(const DensityState& state);

struct ShotRecord {
    long long shots = 0;
    long long zeros = 0;
    double p_hat = 0.0;
    std::uint64_t seed = 0;
};

/// Seeded Bernoulli draws at the exact ancilla-zero probability.
ShotRecord sample_ancilla(const DensityState& state, long long shots, std::uint64_t seed);
ShotRecord sample_bernoulli(double p, long long shots, std::uint64_t seed);

/// Minimum-eigenvalue estimate for symmetric PSD a with ||a|| <= 1, via power
/// iteration on I - a from a seeded random start.
double power_method_min_eig(const Matrix& a, int iters, std::uint64_t seed);

/// Iteration-count heuristic: a pilot run estimates the spectral gap of
/// I - a and the count grows as 10*ln(dim)/gap.
int power_method_auto_iters(const Matrix& a, std::uint64_t seed);

/// Exact QPE amplitude vector for eigenphase phi (fraction of a turn):
/// w(j) = (1/T) sum_tau exp(2 pi i (j/T - phi) tau).
std::vector<cx> phase_kernel(double phi, int bits);
/// |w(j)|^2 of the above.
std::vector<double> phase_kernel_mass(double phi, int bits);

} // namespace subdist
