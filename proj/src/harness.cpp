#include "qbell/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qbell/rng.hpp"

namespace qbell {

namespace {

constexpr const char* kVersion = "qbell 0.1.0";

const std::vector<std::string> kChshNames = {"A", "Ap", "B", "Bp"};
const std::vector<std::string> kDickeNames = {"A", "Ap", "B",  "Bp",
                                              "C", "Cp", "D",  "Dp"};

struct CorrelatorSpec {
    std::string label;
    std::vector<std::string> setting_names;
    double sign;
};

std::vector<CorrelatorSpec> correlator_table(Inequality ineq) {
    if (ineq == Inequality::CHSH) {
        return {{"AB", {"A", "B"}, +1.0},
                {"AB'", {"A", "Bp"}, +1.0},
                {"A'B", {"Ap", "B"}, -1.0},
                {"A'B'", {"Ap", "Bp"}, +1.0}};
    }
    return {{"ABCD", {"A", "B", "C", "D"}, +1.0},
            {"AB'C'D'", {"A", "Bp", "Cp", "Dp"}, +1.0},
            {"A'BC'D", {"Ap", "B", "Cp", "D"}, +1.0},
            {"A'B'CD'", {"Ap", "Bp", "C", "Dp"}, -1.0}};
}

std::string to_string(StateChoice s) {
    switch (s) {
    case StateChoice::BELL: return "BELL";
    case StateChoice::DICKE_GATE: return "DICKE_GATE";
    case StateChoice::DICKE_DIRECT: return "DICKE_DIRECT";
    }
    return "?";
}
std::string to_string(Inequality i) {
    return i == Inequality::CHSH ? "CHSH" : "DICKE4";
}
std::string to_string(RunMode m) {
    return m == RunMode::EXACT ? "EXACT" : "SAMPLED";
}
std::string to_string(TermSet t) {
    return t == TermSet::FILTERED ? "FILTERED" : "FULL";
}
std::string to_string(Mitigation m) {
    return m == Mitigation::NONE ? "NONE" : "M3";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

std::map<std::string, MeasurementSetting> chsh_default_angles() {
    ChshAngles t = chsh_reference_angles();
    return {{"A", t.a}, {"Ap", t.a_prime}, {"B", t.b}, {"Bp", t.b_prime}};
}

std::map<std::string, MeasurementSetting> dicke_default_angles() {
    DickeAngles t = dicke_reference_angles();
    return {{"A", t.a},  {"Ap", t.a_prime}, {"B", t.b},  {"Bp", t.b_prime},
            {"C", t.c},  {"Cp", t.c_prime}, {"D", t.d},  {"Dp", t.d_prime}};
}

PreparedState prepare_state(const ExperimentConfig& cfg) {
    switch (cfg.state) {
    case StateChoice::BELL: return prepare_bell();
    case StateChoice::DICKE_GATE: return prepare_dicke_gate(4, 2);
    case StateChoice::DICKE_DIRECT: return prepare_dicke_direct(4, 2);
    }
    throw std::logic_error("prepare_state: unknown state");
}

StateVector ideal_target(const ExperimentConfig& cfg) {
    if (cfg.state == StateChoice::BELL) return prepare_bell().state;
    return dicke_statevector(4, 2);
}

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

std::string format_sig4(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

std::string format_full(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

ExperimentConfig ExperimentConfig::chsh_defaults() {
    ExperimentConfig cfg;
    cfg.state = StateChoice::BELL;
    cfg.inequality = Inequality::CHSH;
    cfg.angles = chsh_default_angles();
    return cfg;
}

ExperimentConfig ExperimentConfig::dicke_defaults(StateChoice prep) {
    ExperimentConfig cfg;
    cfg.state = prep;
    cfg.inequality = Inequality::DICKE4;
    cfg.angles = dicke_default_angles();
    return cfg;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> violations;
    const auto& names =
        inequality == Inequality::CHSH ? kChshNames : kDickeNames;
    for (const auto& name : names) {
        if (!angles.count(name)) {
            violations.push_back("angles." + name + ": missing setting");
        }
    }
    if (inequality == Inequality::DICKE4 && state == StateChoice::BELL) {
        violations.push_back("state: DICKE4 inequality on a BELL state");
    }
    if (inequality == Inequality::CHSH && state != StateChoice::BELL) {
        violations.push_back("state: CHSH inequality requires the BELL state");
    }
    if (shots < 1) violations.push_back("shots: must be >= 1");
    if (repetitions < 1) violations.push_back("repetitions: must be >= 1");
    if (calibration_shots < 1) {
        violations.push_back("calibration_shots: must be >= 1");
    }
    if (readout_flip_prob < 0.0 || readout_flip_prob > 1.0) {
        violations.push_back("noise.readout_flip_prob: must be in [0,1]");
    }
    if (noise.two_qubit_pauli_error_prob < 0.0 ||
        noise.two_qubit_pauli_error_prob > 1.0) {
        violations.push_back("noise.two_qubit_pauli_error_prob: must be in [0,1]");
    }
    if (!violations.empty()) {
        std::string msg = "invalid config:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw std::invalid_argument(msg);
    }
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << "state = " << to_string(state) << '\n'
        << "inequality = " << to_string(inequality) << '\n'
        << "mode = " << to_string(mode) << '\n'
        << "shots = " << shots << '\n'
        << "repetitions = " << repetitions << '\n'
        << "term_set = " << to_string(term_set) << '\n'
        << "mitigation = " << to_string(mitigation) << '\n'
        << "calibration_shots = " << calibration_shots << '\n'
        << "seed = " << seed << '\n'
        << "noise.readout_flip_prob = " << readout_flip_prob << '\n'
        << "noise.two_qubit_pauli_error_prob = "
        << noise.two_qubit_pauli_error_prob << '\n'
        << "noise.coherent_overrotation_rad = "
        << noise.coherent_overrotation_rad << '\n';
    for (const auto& [name, s] : angles) {
        out << "angles." << name << ".theta_deg = " << rad_to_deg(s.theta)
            << '\n';
        out << "angles." << name << ".phi_deg = " << rad_to_deg(s.phi) << '\n';
    }
    return out.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            auto end = s.find_last_not_of(" \t\r");
            s.erase(end == std::string::npos ? 0 : end + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }

    auto get = [&kv](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    Inequality ineq = Inequality::CHSH;
    if (const auto* v = get("inequality")) {
        if (*v == "CHSH") ineq = Inequality::CHSH;
        else if (*v == "DICKE4") ineq = Inequality::DICKE4;
        else throw std::invalid_argument("config: unknown inequality " + *v);
    }
    ExperimentConfig cfg = ineq == Inequality::CHSH
                               ? chsh_defaults()
                               : dicke_defaults();
    if (const auto* v = get("state")) {
        if (*v == "BELL") cfg.state = StateChoice::BELL;
        else if (*v == "DICKE_GATE") cfg.state = StateChoice::DICKE_GATE;
        else if (*v == "DICKE_DIRECT") cfg.state = StateChoice::DICKE_DIRECT;
        else throw std::invalid_argument("config: unknown state " + *v);
    }
    if (const auto* v = get("mode")) {
        if (*v == "EXACT") cfg.mode = RunMode::EXACT;
        else if (*v == "SAMPLED") cfg.mode = RunMode::SAMPLED;
        else throw std::invalid_argument("config: unknown mode " + *v);
    }
    if (const auto* v = get("term_set")) {
        if (*v == "FILTERED") cfg.term_set = TermSet::FILTERED;
        else if (*v == "FULL") cfg.term_set = TermSet::FULL;
        else throw std::invalid_argument("config: unknown term_set " + *v);
    }
    if (const auto* v = get("mitigation")) {
        if (*v == "NONE") cfg.mitigation = Mitigation::NONE;
        else if (*v == "M3") cfg.mitigation = Mitigation::M3;
        else throw std::invalid_argument("config: unknown mitigation " + *v);
    }
    if (const auto* v = get("shots")) cfg.shots = std::stoll(*v);
    if (const auto* v = get("repetitions")) cfg.repetitions = std::stoi(*v);
    if (const auto* v = get("calibration_shots")) {
        cfg.calibration_shots = std::stoll(*v);
    }
    if (const auto* v = get("seed")) cfg.seed = std::stoull(*v);
    if (const auto* v = get("noise.readout_flip_prob")) {
        cfg.readout_flip_prob = std::stod(*v);
    }
    if (const auto* v = get("noise.two_qubit_pauli_error_prob")) {
        cfg.noise.two_qubit_pauli_error_prob = std::stod(*v);
    }
    if (const auto* v = get("noise.coherent_overrotation_rad")) {
        cfg.noise.coherent_overrotation_rad = std::stod(*v);
    }
    for (const auto& name : (ineq == Inequality::CHSH ? kChshNames
                                                      : kDickeNames)) {
        const auto* t = get("angles." + name + ".theta_deg");
        const auto* p = get("angles." + name + ".phi_deg");
        if (t || p) {
            double theta = t ? std::stod(*t) : rad_to_deg(cfg.angles[name].theta);
            double phi = p ? std::stod(*p) : rad_to_deg(cfg.angles[name].phi);
            cfg.angles[name] = MeasurementSetting::from_degrees(theta, phi);
        }
    }
    return cfg;
}

Report run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto table = correlator_table(cfg.inequality);
    const PreparedState prepared = prepare_state(cfg);
    const StateVector ideal_state = ideal_target(cfg);
    const int n = prepared.n;

    // per-correlator term lists; filtering is decided on the ideal state
    std::vector<PauliTermExpansion> terms;
    for (const auto& spec : table) {
        std::vector<MeasurementSetting> settings;
        for (const auto& name : spec.setting_names) {
            settings.push_back(cfg.angles.at(name));
        }
        PauliTermExpansion exp = expand_tensor(settings);
        if (cfg.term_set == TermSet::FILTERED) {
            exp = filter_nonzero(exp, ideal_state);
        }
        terms.push_back(std::move(exp));
    }

    Report report;
    report.seed = cfg.seed;
    report.version = kVersion;
    report.config_hash = fnv1a(cfg.to_text());

    // ideal column from the exact target state
    std::vector<double> ideal_values;
    for (std::size_t i = 0; i < table.size(); ++i) {
        double v = 0.0;
        for (const PauliTerm& t : terms[i].terms) {
            v += t.coeff * expectation_pauli(ideal_state, t.string);
        }
        ideal_values.push_back(v);
        report.bell_ideal += table[i].sign * v;
    }

    std::vector<std::vector<double>> per_run(table.size());
    std::vector<double> bell_runs;
    std::vector<double> run_variances;

    for (int run = 0; run < cfg.repetitions; ++run) {
        std::vector<double> correlator_values(table.size(), 0.0);
        double variance = 0.0;

        if (cfg.mode == RunMode::EXACT) {
            for (std::size_t i = 0; i < table.size(); ++i) {
                for (const PauliTerm& t : terms[i].terms) {
                    correlator_values[i] +=
                        t.coeff * expectation_pauli(prepared.state, t.string);
                }
            }
        } else {
            const std::uint64_t run_seed =
                derive_seed(cfg.seed, 0x72756eULL, run);
            NoiseSpec noise = cfg.noise;
            noise.seed = run_seed;
            if (cfg.readout_flip_prob > 0.0) {
                noise.readout =
                    ConfusionModel::symmetric_flip(n, cfg.readout_flip_prob);
            }

            // union of distinct Pauli strings, measured once per run
            std::set<std::string> distinct;
            for (const auto& exp : terms) {
                for (const PauliTerm& t : exp.terms) distinct.insert(t.string.axes);
            }

            std::optional<ConfusionModel> calibration;
            if (cfg.mitigation == Mitigation::M3) {
                calibration = calibrate_confusion(
                    noise, n, cfg.calibration_shots,
                    derive_seed(run_seed, 0x63616cULL), ConfusionMode::PER_QUBIT);
            }

            std::map<std::string, ExpectationEstimate> estimates;
            std::uint64_t stream = 0;
            for (const std::string& axes : distinct) {
                PauliString basis(axes);
                CountsMap counts;
                if (noise.has_gate_noise() && prepared.circuit) {
                    counts = sample_with_gate_noise(*prepared.circuit, n,
                                                    cfg.shots, noise, basis,
                                                    stream);
                } else {
                    counts = sample_counts(prepared.state, basis, cfg.shots,
                                           noise, stream);
                }
                estimates[axes] =
                    calibration
                        ? mitigated_expectation(counts, *calibration, basis)
                        : expectation_from_counts(counts, basis);
                ++stream;
            }

            // bell-parameter weight of each string, for the combined
            // statistical error
            std::map<std::string, double> weight;
            for (std::size_t i = 0; i < table.size(); ++i) {
                for (const PauliTerm& t : terms[i].terms) {
                    const ExpectationEstimate& e = estimates.at(t.string.axes);
                    correlator_values[i] += t.coeff * e.value;
                    weight[t.string.axes] += table[i].sign * t.coeff;
                }
            }
            for (const auto& [axes, w] : weight) {
                double s = estimates.at(axes).stderr_;
                variance += w * w * s * s;
            }
        }

        double bell = 0.0;
        for (std::size_t i = 0; i < table.size(); ++i) {
            per_run[i].push_back(correlator_values[i]);
            bell += table[i].sign * correlator_values[i];
        }
        bell_runs.push_back(bell);
        run_variances.push_back(variance);
    }

    for (std::size_t i = 0; i < table.size(); ++i) {
        report.correlators.push_back({table[i].label, ideal_values[i],
                                      per_run[i], mean_of(per_run[i]),
                                      sample_stddev(per_run[i])});
    }
    report.bell_per_run = bell_runs;
    report.bell_mean = mean_of(bell_runs);
    report.bell_stddev = sample_stddev(bell_runs);
    if (cfg.mode == RunMode::SAMPLED) {
        report.bell_stat_stderr = std::sqrt(mean_of(run_variances) /
                                            static_cast<double>(cfg.repetitions));
    }
    return report;
}

std::string emit_report(const Report& r, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::CSV) {
        out << "operator_label,ideal,mean,stddev";
        for (std::size_t i = 0; i < r.bell_per_run.size(); ++i) {
            out << ",run" << (i + 1);
        }
        out << '\n';
        for (const auto& c : r.correlators) {
            out << c.label << ',' << format_full(c.ideal) << ','
                << format_full(c.mean) << ',' << format_full(c.stddev);
            for (double v : c.per_run) out << ',' << format_full(v);
            out << '\n';
        }
        out << "inequality," << format_full(r.bell_ideal) << ','
            << format_full(r.bell_mean) << ',' << format_full(r.bell_stddev);
        for (double v : r.bell_per_run) out << ',' << format_full(v);
        out << '\n';
        out << "# provenance: config_hash=" << r.config_hash
            << " seed=" << r.seed << " version=" << r.version << '\n';
        return out.str();
    }

    out << std::left << std::setw(10) << "operator" << std::right
        << std::setw(10) << "ideal" << std::setw(10) << "mean"
        << std::setw(10) << "stddev" << '\n';
    for (const auto& c : r.correlators) {
        out << std::left << std::setw(10) << c.label << std::right
            << std::setw(10) << format_sig4(c.ideal) << std::setw(10)
            << format_sig4(c.mean) << std::setw(10) << format_sig4(c.stddev)
            << '\n';
    }
    out << std::left << std::setw(10) << "inequality" << std::right
        << std::setw(10) << format_sig4(r.bell_ideal) << std::setw(10)
        << format_sig4(r.bell_mean) << std::setw(10)
        << format_sig4(r.bell_stddev) << '\n';
    out << "config_hash=" << r.config_hash << " seed=" << r.seed
        << " version=" << r.version << '\n';
    return out.str();
}

Report parse_report_csv(const std::string& csv) {
    Report r;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("operator_label,", 0) != 0) {
        throw std::invalid_argument("parse_report_csv: missing header");
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() < 4) {
            throw std::invalid_argument("parse_report_csv: short row: " + line);
        }
        std::vector<double> runs;
        for (std::size_t i = 4; i < fields.size(); ++i) {
            runs.push_back(std::stod(fields[i]));
        }
        if (fields[0] == "inequality") {
            r.bell_ideal = std::stod(fields[1]);
            r.bell_mean = std::stod(fields[2]);
            r.bell_stddev = std::stod(fields[3]);
            r.bell_per_run = runs;
        } else {
            r.correlators.push_back({fields[0], std::stod(fields[1]), runs,
                                     std::stod(fields[2]),
                                     std::stod(fields[3])});
        }
    }
    return r;
}

std::vector<std::pair<std::string, Report>> reproduce_paper_suite(
    std::uint64_t seed) {
    std::vector<std::pair<std::string, ExperimentConfig>> configs;

    auto bell_exact = ExperimentConfig::chsh_defaults();
    bell_exact.seed = seed;
    configs.emplace_back("bell_exact", bell_exact);

    auto bell_exact_full = bell_exact;
    bell_exact_full.term_set = TermSet::FULL; // all 9 strings
    configs.emplace_back("bell_exact_full_terms", bell_exact_full);

    auto dicke_gate = ExperimentConfig::dicke_defaults(StateChoice::DICKE_GATE);
    dicke_gate.seed = seed;
    configs.emplace_back("dicke_gate_exact", dicke_gate);

    auto dicke_direct =
        ExperimentConfig::dicke_defaults(StateChoice::DICKE_DIRECT);
    dicke_direct.seed = seed;
    configs.emplace_back("dicke_direct_exact", dicke_direct);

    auto dicke_full = dicke_direct;
    dicke_full.term_set = TermSet::FULL; // all 81 strings
    configs.emplace_back("dicke_direct_exact_full_terms", dicke_full);

    auto bell_sampled = bell_exact;
    bell_sampled.mode = RunMode::SAMPLED;
    configs.emplace_back("bell_sampled_noiseless", bell_sampled);

    auto dicke_sampled = dicke_direct;
    dicke_sampled.mode = RunMode::SAMPLED;
    configs.emplace_back("dicke_direct_sampled_noiseless", dicke_sampled);

    auto bell_noisy = bell_sampled;
    bell_noisy.readout_flip_prob = 0.02;
    configs.emplace_back("bell_sampled_readout_noise", bell_noisy);

    auto bell_m3 = bell_noisy;
    bell_m3.mitigation = Mitigation::M3;
    configs.emplace_back("bell_sampled_readout_noise_m3", bell_m3);

    std::vector<std::pair<std::string, Report>> reports;
    for (auto& [name, cfg] : configs) {
        reports.emplace_back(name, run_experiment(cfg));
    }
    return reports;
}

} // namespace qbell
