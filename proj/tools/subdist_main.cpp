#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subdist/pipeline.hpp"

namespace {

using namespace subdist;

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    require_input(out.good(), "cannot write output file: " + out_path);
    out << text;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
        throw invalid_input_error("bad integer list: " + s);
    }
    require_input(!out.empty(), "empty list: " + s);
    return out;
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    try {
        while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
        throw invalid_input_error("bad integer list: " + s);
    }
    require_input(!out.empty(), "empty list: " + s);
    return out;
}

int run_main(int argc, char** argv) {
    CLI::App app{"subspace-distance estimation pipelines"};
    app.require_subcommand(1);

    // shared run/sweep options
    std::string distance = "grassmann", model = "blackbox", evolution = "exact";
    std::string phase_mode = "binned";
    std::string m_path, n_path, out_path;
    std::string bits_str = "8", shots_str = "100000";
    long long shots = 100000;
    int bits = 8;
    std::uint64_t seed = 1;
    double eps_h = 1e-8;
    bool timings = false;

    auto* run = app.add_subcommand("run", "run one pipeline and print the report");
    run->add_option("--distance", distance, "grassmann|ellipsoid|asimov|projection|chordal");
    run->add_option("--model", model, "blackbox|memory");
    run->add_option("--bits", bits, "QPE register bits");
    run->add_option("--shots", shots, "measurement shots; 0 = exact-sampling mode");
    run->add_option("--seed", seed, "sampling seed");
    run->add_option("--evolution", evolution, "exact|jacobi_anger");
    run->add_option("--eps-h", eps_h, "evolution accuracy for jacobi_anger");
    run->add_option("--phase-mode", phase_mode, "binned|ideal");
    run->add_option("--m-path", m_path, "matrix file for M")->required();
    run->add_option("--n-path", n_path, "matrix file for N")->required();
    run->add_option("--out", out_path, "report file (stdout if omitted)");
    run->add_flag("--timings", timings, "append wall-clock timing to the report");

    auto* sweep = app.add_subcommand("sweep", "error sweep over bits/shots grids, CSV output");
    sweep->add_option("--distance", distance);
    sweep->add_option("--model", model);
    sweep->add_option("--bits", bits_str, "comma-separated bits list");
    sweep->add_option("--shots", shots_str, "comma-separated shots list; 0 = exact sampling");
    sweep->add_option("--seed", seed);
    sweep->add_option("--evolution", evolution);
    sweep->add_option("--eps-h", eps_h);
    sweep->add_option("--phase-mode", phase_mode);
    sweep->add_option("--m-path", m_path)->required();
    sweep->add_option("--n-path", n_path)->required();
    sweep->add_option("--out", out_path, "CSV file (stdout if omitted)");

    // gen
    int gn = 4, gk = 2;
    double gkappa = 2.0;
    std::string gkind = "orthonormal";
    auto* gen = app.add_subcommand("gen", "generate a test matrix file");
    gen->add_option("--n", gn, "rows");
    gen->add_option("--k", gk, "columns (orthonormal kind)");
    gen->add_option("--kappa", gkappa, "condition bound (spd kind)");
    gen->add_option("--seed", seed);
    gen->add_option("--kind", gkind, "orthonormal|spd");
    gen->add_option("--out", out_path, "output matrix file")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        Matrix m;
        if (gkind == "orthonormal")
            m = random_orthonormal(gn, gk, seed);
        else if (gkind == "spd")
            m = random_spd(gn, gkappa, seed);
        else
            throw invalid_input_error("gen: kind must be orthonormal or spd");
        save_matrix(out_path, m);
        return 0;
    }

    RunConfig cfg;
    cfg.distance = distance_from_string(distance);
    cfg.model = model_from_string(model);
    cfg.seed = seed;
    cfg.evolution = evolution_from_string(evolution);
    cfg.eps_h = eps_h;
    cfg.phase_mode = phase_mode_from_string(phase_mode);
    cfg.m_path = m_path;
    cfg.n_path = n_path;

    if (run->parsed()) {
        cfg.qpe_bits = bits;
        if (shots == 0) {
            cfg.sampling = SamplingMode::exact;
            cfg.shots = 1;
        } else {
            cfg.shots = shots;
        }
        PipelineReport rep = run_pipeline(cfg);
        write_or_print(out_path, render_report(rep, timings));
        return 0;
    }

    // sweep
    auto bits_list = parse_int_list(bits_str);
    auto shots_list = parse_ll_list(shots_str);
    auto rows = error_sweep(cfg, bits_list, shots_list);
    write_or_print(out_path, sweep_csv(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const subdist::invalid_input_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return subdist::invalid_input_error::exit_code;
    } catch (const subdist::precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return subdist::precondition_error::exit_code;
    } catch (const subdist::internal_error& e) {
        std::cerr << "internal invariant failure: " << e.what() << "\n";
        return subdist::internal_error::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return subdist::internal_error::exit_code;
    }
}
