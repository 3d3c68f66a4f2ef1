#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subdist/block_encoding.hpp"
#include "subdist/linalg.hpp"

namespace subdist {

enum class DistanceKind { grassmann, ellipsoid, asimov, projection, chordal };
enum class InputModel { blackbox, memory };
enum class PhaseMode { binned, ideal };
enum class SamplingMode { shots, exact };

std::string to_string(DistanceKind k);
std::string to_string(InputModel m);
std::string to_string(EvolutionMode m);
std::string to_string(PhaseMode m);
std::string to_string(SamplingMode m);
DistanceKind distance_from_string(const std::string& s);
InputModel model_from_string(const std::string& s);
EvolutionMode evolution_from_string(const std::string& s);
PhaseMode phase_mode_from_string(const std::string& s);

struct GeneratorSpec {
    std::string kind; // "orthonormal" or "spd"
    int n = 0;
    int k = 0;
    double kappa = 2.0;
    std::uint64_t seed_m = 0;
    std::uint64_t seed_n = 0;
};

struct RunConfig {
    DistanceKind distance = DistanceKind::grassmann;
    InputModel model = InputModel::blackbox;
    int qpe_bits = 8;
    long long shots = 100000;
    std::uint64_t seed = 1;
    EvolutionMode evolution = EvolutionMode::exact;
    double eps_h = 1e-8;
    PhaseMode phase_mode = PhaseMode::binned;
    SamplingMode sampling = SamplingMode::shots;
    std::string m_path, n_path; // used when use_generator is false
    bool use_generator = false;
    GeneratorSpec gen;
    int power_iters = 0; // 0 = pilot-run heuristic
};

void validate_config(const RunConfig& cfg);

struct EigenRow {
    double lambda = 0;         // eigenvalue of the physical encoded matrix
    double phase = 0;          // lambda / alpha_total
    double lambda_binned = 0;  // nearest-bin value
    double peak_mass = 0;      // kernel mass at the nearest bin
    double out_of_range_mass = 0;
};

struct PipelineReport {
    DistanceKind distance = DistanceKind::grassmann;
    InputModel model = InputModel::blackbox;
    int qpe_bits = 0;
    long long shots = 0;
    std::uint64_t seed = 0;
    EvolutionMode evolution = EvolutionMode::exact;
    double eps_h = 0;
    PhaseMode phase_mode = PhaseMode::binned;
    SamplingMode sampling = SamplingMode::shots;
    int n = 0, k = 0; // problem dimensions (k = subspace dim or SPD size)

    double classical_value = 0;   // oracle distance
    double ideal_p0 = 0;          // probability with exact phases
    double exact_p0 = 0;          // finite-bit probability, exact arithmetic
    double sampled_p0 = 0;        // frequency estimate (or exact_p0 in exact mode)
    double quantum_estimate = 0;  // distance reconstructed from sampled_p0
    double epsilon_p = 0;         // RMS rotation-amplitude error over the bins
    double p0_gap = 0;            // |exact_p0 - ideal_p0|
    double leaked_mass = 0;       // kernel mass on out-of-range bins
    double clamped_mass = 0;      // mass on clamped rotation branches
    double alpha_total = 0;       // phase scale (power of two)
    double encoding_alpha = 0;    // block-encoding subnormalization
    double log_scale = 0;         // ellipsoid rotation scale
    bool exact_phase = false;     // all phases representable at qpe_bits
    bool degenerate = false;      // zero classical distance
    std::vector<EigenRow> eigen_table;
    double elapsed_ms = 0;
};

PipelineReport run_grassmann(const RunConfig& cfg);
PipelineReport run_ellipsoid(const RunConfig& cfg);
PipelineReport run_extension(const RunConfig& cfg);
/// Dispatch on cfg.distance.
PipelineReport run_pipeline(const RunConfig& cfg);

struct SweepRow {
    int bits = 0;
    long long shots = 0;
    std::uint64_t seed = 0;
    PipelineReport report;
};

/// One row per (bits, shots) cell; cell seeds derive deterministically from
/// cfg.seed so a single-cell sweep reproduces run_pipeline exactly.
std::vector<SweepRow> error_sweep(const RunConfig& cfg, const std::vector<int>& bits_list,
                                  const std::vector<long long>& shots_list);

Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& m);

/// Stable-order key/value report; timing is excluded unless requested so the
/// rendered bytes are a pure function of (inputs, config, seed).
std::string render_report(const PipelineReport& r, bool include_timing = false);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Loads or generates the configured input pair.
std::pair<Matrix, Matrix> config_inputs(const RunConfig& cfg);

} // namespace subdist
