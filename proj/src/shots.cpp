#include "qbell/shots.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qbell/rng.hpp"
#include "json.hpp"

namespace qbell {

namespace {

const cplx I{0.0, 1.0};

// 0 = I, 1 = X, 2 = Y, 3 = Z
std::array<cplx, 4> pauli_matrix(int p) {
    switch (p) {
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -I, I, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw std::logic_error("pauli_matrix: identity has no gate");
    }
}

void apply_pauli_pair(StateVector& sv, int qa, int qb, int pa, int pb) {
    if (pa != 0) sv.apply(Gate::u1q(qa, pauli_matrix(pa)));
    if (pb != 0) sv.apply(Gate::u1q(qb, pauli_matrix(pb)));
}

std::uint64_t draw_outcome(const std::vector<double>& probs, double u) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1; // round-off tail
}

CountsMap sample_distribution(const std::vector<double>& probs, int n_qubits,
                              long long shots, std::uint64_t seed,
                              std::uint64_t stream) {
    std::vector<long long> counts(probs.size(), 0);
    for (long long s = 0; s < shots; ++s) {
        ShotRng rng(seed, stream, static_cast<std::uint64_t>(s));
        ++counts[draw_outcome(probs, rng.next_uniform())];
    }
    CountsMap out;
    out.shots = shots;
    for (std::uint64_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            out.entries[bitstring_of_index(i, n_qubits)] = counts[i];
        }
    }
    return out;
}

} // namespace

int CountsMap::n_qubits() const {
    if (entries.empty()) {
        throw std::logic_error("CountsMap: empty, qubit count unknown");
    }
    return static_cast<int>(entries.begin()->first.size());
}

std::vector<double> CountsMap::distribution() const {
    if (shots <= 0) throw std::domain_error("CountsMap: shots must be >= 1");
    const int n = n_qubits();
    std::vector<double> p(std::uint64_t{1} << n, 0.0);
    for (const auto& [bits, count] : entries) {
        p[index_of_bitstring(bits)] =
            static_cast<double>(count) / static_cast<double>(shots);
    }
    return p;
}

std::string CountsMap::to_text() const {
    nlohmann::json j;
    j["shots"] = shots;
    j["counts"] = nlohmann::json::object();
    for (const auto& [bits, count] : entries) j["counts"][bits] = count;
    return j.dump(2) + "\n";
}

CountsMap CountsMap::from_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CountsMap c;
    c.shots = j.at("shots").get<long long>();
    for (const auto& [bits, count] : j.at("counts").items()) {
        if (count.get<long long>() < 0) {
            throw std::invalid_argument("CountsMap: negative count");
        }
        c.entries[bits] = count.get<long long>();
    }
    long long total = 0;
    for (const auto& [bits, count] : c.entries) total += count;
    if (total != c.shots) {
        throw std::invalid_argument("CountsMap: counts do not sum to shots");
    }
    return c;
}

std::vector<Gate> measurement_circuit(const PauliString& p) {
    std::vector<Gate> gates;
    for (int q = 0; q < p.size(); ++q) {
        switch (p.axes[q]) {
        case 'X':
            gates.push_back(Gate::h(q));
            break;
        case 'Y':
            gates.push_back(Gate::sdg(q));
            gates.push_back(Gate::h(q));
            break;
        default:
            break;
        }
    }
    return gates;
}

CountsMap sample_counts(const StateVector& state, const PauliString& basis,
                        long long shots, const NoiseSpec& noise,
                        std::uint64_t stream) {
    if (shots < 1) throw std::domain_error("sample_counts: shots must be >= 1");
    if (basis.size() != state.n_qubits()) {
        throw std::invalid_argument("sample_counts: basis length mismatch");
    }
    StateVector sv = state;
    sv.apply(measurement_circuit(basis));
    std::vector<double> probs = sv.probabilities();
    if (noise.readout) probs = apply_readout_noise(probs, *noise.readout);
    return sample_distribution(probs, state.n_qubits(), shots, noise.seed,
                               stream);
}

ExpectationEstimate expectation_from_counts(const CountsMap& c,
                                            const PauliString& p) {
    if (c.shots < 1) {
        throw std::domain_error("expectation_from_counts: shots must be >= 1");
    }
    long long signed_sum = 0;
    for (const auto& [bits, count] : c.entries) {
        if (static_cast<int>(bits.size()) != p.size()) {
            throw std::invalid_argument(
                "expectation_from_counts: key length mismatch");
        }
        int ones = 0;
        for (char b : bits) ones += (b == '1');
        signed_sum += (ones % 2 == 0) ? count : -count;
    }
    double value =
        static_cast<double>(signed_sum) / static_cast<double>(c.shots);
    double var = std::max(0.0, 1.0 - value * value);
    return {value, std::sqrt(var / static_cast<double>(c.shots))};
}

std::vector<double> apply_readout_noise(const std::vector<double>& distribution,
                                        const ConfusionModel& confusion) {
    double mass = 0.0;
    for (double p : distribution) mass += p;
    if (std::abs(mass - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "apply_readout_noise: distribution must sum to 1");
    }
    return confusion.apply(distribution);
}

CountsMap sample_with_gate_noise(const std::vector<Gate>& circuit,
                                 int n_qubits, long long shots,
                                 const NoiseSpec& noise,
                                 const PauliString& basis,
                                 std::uint64_t stream) {
    if (shots < 1) {
        throw std::domain_error("sample_with_gate_noise: shots must be >= 1");
    }
    if (basis.size() != n_qubits) {
        throw std::invalid_argument("sample_with_gate_noise: basis mismatch");
    }

    // injection pattern -> post-readout distribution
    using Pattern = std::vector<std::pair<int, int>>; // (cnot index, pauli 1..15)
    std::map<Pattern, std::vector<double>> cache;

    auto distribution_for = [&](const Pattern& pattern) -> const std::vector<double>& {
        auto it = cache.find(pattern);
        if (it != cache.end()) return it->second;
        StateVector sv(n_qubits);
        int cnot_index = 0;
        std::size_t next = 0;
        for (const Gate& g : circuit) {
            sv.apply(g);
            if (g.kind == GateKind::CNOT) {
                if (noise.coherent_overrotation_rad != 0.0) {
                    sv.apply(Gate::rzz(g.targets[0], g.targets[1],
                                       noise.coherent_overrotation_rad));
                }
                if (next < pattern.size() && pattern[next].first == cnot_index) {
                    int p = pattern[next].second;
                    apply_pauli_pair(sv, g.targets[0], g.targets[1], p / 4,
                                     p % 4);
                    ++next;
                }
                ++cnot_index;
            }
        }
        sv.apply(measurement_circuit(basis));
        std::vector<double> probs = sv.probabilities();
        if (noise.readout) probs = apply_readout_noise(probs, *noise.readout);
        return cache.emplace(pattern, std::move(probs)).first->second;
    };

    int n_cnots = 0;
    for (const Gate& g : circuit) n_cnots += (g.kind == GateKind::CNOT);

    std::vector<long long> counts(std::uint64_t{1} << n_qubits, 0);
    for (long long s = 0; s < shots; ++s) {
        ShotRng rng(noise.seed, stream, static_cast<std::uint64_t>(s));
        Pattern pattern;
        for (int i = 0; i < n_cnots; ++i) {
            if (rng.next_uniform() < noise.two_qubit_pauli_error_prob) {
                pattern.emplace_back(
                    i, 1 + static_cast<int>(rng.next_below(15)));
            }
        }
        const std::vector<double>& probs = distribution_for(pattern);
        ++counts[draw_outcome(probs, rng.next_uniform())];
    }

    CountsMap out;
    out.shots = shots;
    for (std::uint64_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            out.entries[bitstring_of_index(i, n_qubits)] = counts[i];
        }
    }
    return out;
}

TwirledCnot::TwirledCnot(int control, int target, double coherent_error_rad)
    : control_(control), target_(target), error_rad_(coherent_error_rad) {
    if (control == target) {
        throw std::invalid_argument("TwirledCnot: control equals target");
    }
}

std::vector<Gate> TwirledCnot::frame_circuit(int frame) const {
    if (frame < 0 || frame > 15) {
        throw std::out_of_range("TwirledCnot: frame must be in 0..15");
    }
    const int pre_c = frame / 4, pre_t = frame % 4;

    // conjugate the pre-frame through the ideal CNOT (symplectic rep,
    // X = (1,0), Z = (0,1), Y = (1,1); global phase irrelevant)
    auto to_xz = [](int p) -> std::pair<int, int> {
        switch (p) {
        case 1: return {1, 0};
        case 2: return {1, 1};
        case 3: return {0, 1};
        default: return {0, 0};
        }
    };
    auto from_xz = [](int a, int b) {
        if (a == 0 && b == 0) return 0;
        if (a == 1 && b == 0) return 1;
        if (a == 1 && b == 1) return 2;
        return 3;
    };
    auto [ac, bc] = to_xz(pre_c);
    auto [at, bt] = to_xz(pre_t);
    const int post_c = from_xz(ac, bc ^ bt);
    const int post_t = from_xz(at ^ ac, bt);

    std::vector<Gate> gates;
    if (pre_c != 0) gates.push_back(Gate::u1q(control_, pauli_matrix(pre_c)));
    if (pre_t != 0) gates.push_back(Gate::u1q(target_, pauli_matrix(pre_t)));
    gates.push_back(Gate::cnot(control_, target_));
    if (error_rad_ != 0.0) {
        gates.push_back(Gate::rzz(control_, target_, error_rad_));
    }
    if (post_c != 0) gates.push_back(Gate::u1q(control_, pauli_matrix(post_c)));
    if (post_t != 0) gates.push_back(Gate::u1q(target_, pauli_matrix(post_t)));
    return gates;
}

double TwirledCnot::exact_average_expectation(
    const StateVector& state_in, const PauliString& observable) const {
    double sum = 0.0;
    for (int frame = 0; frame < 16; ++frame) {
        StateVector sv = state_in;
        sv.apply(frame_circuit(frame));
        sum += expectation_pauli(sv, observable);
    }
    return sum / 16.0;
}

double TwirledCnot::sampled_expectation(const StateVector& state_in,
                                        const PauliString& observable,
                                        int samples,
                                        std::uint64_t seed) const {
    if (samples < 1) {
        throw std::domain_error("TwirledCnot: samples must be >= 1");
    }
    auto rng = derived_rng(seed, 0x7477u);
    std::uniform_int_distribution<int> frame_dist(0, 15);
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
        StateVector sv = state_in;
        sv.apply(frame_circuit(frame_dist(rng)));
        sum += expectation_pauli(sv, observable);
    }
    return sum / samples;
}

} // namespace qbell
