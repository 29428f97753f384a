// Command-line front end: state preparation, Bell-polynomial
// optimization, expectation evaluation, measurement-error mitigation and
// full experiment runs.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qbell/harness.hpp"

namespace {

using namespace qbell;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw CLI::ValidationError("cannot write file: " + path);
    out << text;
}

void print_state(const PreparedState& ps, const std::string& out_path) {
    std::ostringstream os;
    os.precision(12);
    if (ps.circuit) {
        os << "# circuit\n" << export_circuit(*ps.circuit);
        os << "# depth " << ps.depth << "\n";
        for (const auto& [name, count] : ps.gate_counts) {
            os << "# gate " << name << " x" << count << "\n";
        }
    }
    os << "# amplitudes\n";
    for (std::uint64_t i = 0; i < ps.state.dim(); ++i) {
        const cplx a = ps.state.amplitude(i);
        if (std::abs(a) > 1e-12) {
            os << bitstring_of_index(i, ps.n) << " " << a.real() << " "
               << a.imag() << "\n";
        }
    }
    write_output(out_path, os.str());
}

void print_optimum(const OptimizationResult& r, const std::vector<std::string>& names) {
    std::cout.precision(12);
    std::cout << "value " << r.value << "\n"
              << "converged " << (r.converged ? "yes" : "no") << "\n"
              << "restarts " << r.restarts_used << "\n"
              << "seed " << r.seed << "\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        std::cout << names[i] << " theta_deg "
                  << r.angles[2 * i] * 180.0 / std::acos(-1.0) << " phi_deg "
                  << r.angles[2 * i + 1] * 180.0 / std::acos(-1.0) << "\n";
    }
    std::cout << "tied_optima " << r.tied_optima.size() << "\n";
}

std::vector<MeasurementSetting> parse_settings_file(const std::string& text) {
    // one line per setting: NAME THETA_DEG PHI_DEG
    std::vector<MeasurementSetting> settings;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string name;
        double theta_deg = 0.0, phi_deg = 0.0;
        if (!(ls >> name >> theta_deg >> phi_deg)) {
            throw CLI::ValidationError("bad settings line: " + line);
        }
        settings.push_back(MeasurementSetting::from_degrees(theta_deg, phi_deg));
    }
    return settings;
}

StateVector state_by_name(const std::string& name) {
    if (name == "bell") return prepare_bell().state;
    if (name == "dicke_gate") return prepare_dicke_gate(4, 2).state;
    if (name == "dicke_direct") return prepare_dicke_direct(4, 2).state;
    throw CLI::ValidationError("unknown state: " + name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statevector simulator and Bell-inequality benchmark harness"};
    app.require_subcommand(1);

    // ---- prepare ----------------------------------------------------
    auto* prepare = app.add_subcommand("prepare", "prepare a benchmark state");
    std::string prep_state = "bell";
    int prep_n = 4, prep_k = 2;
    std::string prep_method = "gate";
    std::string prep_out;
    prepare->add_option("--state", prep_state, "bell or dicke")
        ->check(CLI::IsMember({"bell", "dicke"}));
    prepare->add_option("--n", prep_n, "qubit count (dicke)");
    prepare->add_option("--k", prep_k, "excitation number (dicke)");
    prepare->add_option("--method", prep_method, "gate or direct")
        ->check(CLI::IsMember({"gate", "direct"}));
    prepare->add_option("--out", prep_out, "output file (default stdout)");

    // ---- optimize ---------------------------------------------------
    auto* optimize = app.add_subcommand("optimize", "maximize a Bell polynomial");
    std::string opt_target = "chsh";
    int opt_restarts = 100;
    std::uint64_t opt_seed = 0;
    optimize->add_option("target", opt_target, "chsh or dicke")
        ->check(CLI::IsMember({"chsh", "dicke"}));
    optimize->add_option("--restarts", opt_restarts, "multistart count");
    optimize->add_option("--seed", opt_seed, "optimizer seed");

    // ---- expect -----------------------------------------------------
    auto* expect = app.add_subcommand(
        "expect", "correlator expectation for a settings file");
    std::string exp_state = "bell";
    std::string exp_settings;
    bool exp_exact = false;
    long long exp_shots = 0;
    std::uint64_t exp_seed = 0;
    expect->add_option("--state", exp_state, "bell, dicke_gate or dicke_direct")
        ->check(CLI::IsMember({"bell", "dicke_gate", "dicke_direct"}));
    expect->add_option("--settings", exp_settings,
                       "file with one 'NAME THETA_DEG PHI_DEG' line per qubit")
        ->required();
    expect->add_flag("--exact", exp_exact, "exact statevector expectation");
    expect->add_option("--shots", exp_shots, "finite-shot estimate");
    expect->add_option("--seed", exp_seed, "sampling seed");

    // ---- mitigate ---------------------------------------------------
    auto* mitigate_cmd = app.add_subcommand(
        "mitigate", "invert readout confusion on a counts file");
    std::string mit_counts, mit_confusion, mit_pauli, mit_out;
    std::string mit_solver = "matrix-free";
    int mit_hamming = -1;
    mitigate_cmd->add_option("--counts", mit_counts, "counts JSON file")
        ->required();
    mitigate_cmd->add_option("--confusion", mit_confusion,
                             "confusion model file")
        ->required();
    mitigate_cmd->add_option("--pauli", mit_pauli,
                             "also report this Pauli expectation");
    mitigate_cmd->add_option("--solver", mit_solver, "direct or matrix-free")
        ->check(CLI::IsMember({"direct", "matrix-free"}));
    mitigate_cmd->add_option("--hamming", mit_hamming,
                             "subspace Hamming radius, negative = full");
    mitigate_cmd->add_option("--out", mit_out, "output file (default stdout)");

    // ---- run --------------------------------------------------------
    auto* run = app.add_subcommand("run", "run an experiment config");
    std::string run_config, run_out;
    std::string run_format = "text";
    run->add_option("config", run_config, "key = value config file")->required();
    run->add_option("--format", run_format, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));
    run->add_option("--out", run_out, "output file (default stdout)");

    // ---- suite ------------------------------------------------------
    auto* suite = app.add_subcommand("suite", "run the full benchmark bundle");
    std::uint64_t suite_seed = 0;
    std::string suite_format = "text";
    suite->add_option("--seed", suite_seed, "base seed");
    suite->add_option("--format", suite_format, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*prepare) {
            if (prep_state == "bell") {
                print_state(prepare_bell(), prep_out);
            } else if (prep_method == "gate") {
                print_state(prepare_dicke_gate(prep_n, prep_k), prep_out);
            } else {
                print_state(prepare_dicke_direct(prep_n, prep_k), prep_out);
            }
        } else if (*optimize) {
            if (opt_target == "chsh") {
                print_optimum(optimize_chsh(opt_restarts, opt_seed),
                              {"A", "A'", "B", "B'"});
            } else {
                print_optimum(optimize_dicke(opt_restarts, opt_seed),
                              {"A", "A'", "B", "B'", "C", "C'", "D", "D'"});
            }
        } else if (*expect) {
            StateVector sv = state_by_name(exp_state);
            auto settings = parse_settings_file(read_file(exp_settings));
            std::cout.precision(12);
            if (exp_exact || exp_shots <= 0) {
                std::cout << "exact "
                          << expectation_setting(sv, settings, true) << "\n";
            } else {
                NoiseSpec noise;
                noise.seed = exp_seed;
                double value = 0.0;
                std::uint64_t stream = 0;
                PauliTermExpansion terms =
                    filter_nonzero(expand_tensor(settings), sv);
                for (const PauliTerm& t : terms.terms) {
                    CountsMap c = sample_counts(sv, t.string, exp_shots, noise,
                                                stream++);
                    value +=
                        t.coeff * expectation_from_counts(c, t.string).value;
                }
                std::cout << "sampled " << value << " shots " << exp_shots
                          << " strings " << terms.terms.size() << "\n";
            }
        } else if (*mitigate_cmd) {
            CountsMap counts = CountsMap::from_text(read_file(mit_counts));
            ConfusionModel model =
                ConfusionModel::from_text(read_file(mit_confusion));
            MitigationSolver solver = mit_solver == "direct"
                                          ? MitigationSolver::DIRECT
                                          : MitigationSolver::MATRIX_FREE;
            QuasiDistribution q =
                mitigate_counts(counts, model, solver, mit_hamming);
            std::ostringstream os;
            os.precision(12);
            for (const auto& [bits, weight] : q.entries) {
                os << bits << " " << weight << "\n";
            }
            if (!mit_pauli.empty()) {
                ExpectationEstimate e = mitigated_expectation(
                    counts, model, PauliString(mit_pauli), solver, mit_hamming);
                os << "expectation " << e.value << " stderr " << e.stderr_
                   << "\n";
            }
            write_output(mit_out, os.str());
        } else if (*run) {
            ExperimentConfig cfg =
                ExperimentConfig::from_text(read_file(run_config));
            Report report = run_experiment(cfg);
            write_output(run_out,
                         emit_report(report, run_format == "csv"
                                                 ? ReportFormat::CSV
                                                 : ReportFormat::TEXT));
        } else if (*suite) {
            for (const auto& [name, report] : reproduce_paper_suite(suite_seed)) {
                std::cout << "== " << name << " ==\n"
                          << emit_report(report, suite_format == "csv"
                                                     ? ReportFormat::CSV
                                                     : ReportFormat::TEXT)
                          << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
