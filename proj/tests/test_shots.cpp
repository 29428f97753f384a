#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qbell/prep.hpp"
#include "qbell/shots.hpp"
#include "test_util.hpp"

using namespace qbell;
using namespace qbell::test;

namespace {

StateVector bell_state() { return prepare_bell().state; }

} // namespace

TEST_CASE("measurement_circuit per axis") {
    auto z = measurement_circuit(PauliString("ZZ"));
    CHECK(z.empty());

    auto x = measurement_circuit(PauliString("X"));
    REQUIRE(x.size() == 1);
    CHECK(x[0].name() == "H");

    auto y = measurement_circuit(PauliString("Y"));
    REQUIRE(y.size() == 2);
    CHECK(y[0].name() == "SDG");
    CHECK(y[1].name() == "H");

    // the Y-basis + eigenstate (|0> + i|1>)/sqrt(2) maps to |0>
    const double r = 1.0 / std::sqrt(2.0);
    StateVector sv(1, {cplx(r, 0.0), cplx(0.0, r)});
    sv.apply(y);
    CHECK(std::abs(sv.amplitude(0) - cplx(1.0)) < 1e-12);
}

TEST_CASE("sample_counts on the Bell state in the ZZ basis") {
    NoiseSpec quiet;
    CountsMap c = sample_counts(bell_state(), PauliString("ZZ"), 10000, quiet);
    CHECK(c.shots == 10000);
    long long total = 0;
    for (const auto& [bits, count] : c.entries) {
        CHECK((bits == "00" || bits == "11"));
        total += count;
    }
    CHECK(total == 10000);
    // both outcomes occur and are roughly balanced (5 sigma)
    CHECK(std::abs(c.entries.at("00") - 5000) < 5 * 50);
}

TEST_CASE("sample_counts: |+> measured in X is deterministic") {
    const double r = 1.0 / std::sqrt(2.0);
    StateVector plus(1, {r, r});
    NoiseSpec quiet;
    CountsMap c = sample_counts(plus, PauliString("X"), 500, quiet);
    REQUIRE(c.entries.size() == 1);
    CHECK(c.entries.at("0") == 500);
}

TEST_CASE("sample_counts is deterministic in (seed, stream, shot)") {
    NoiseSpec a;
    a.seed = 99;
    CountsMap c1 = sample_counts(bell_state(), PauliString("XX"), 2000, a, 5);
    CountsMap c2 = sample_counts(bell_state(), PauliString("XX"), 2000, a, 5);
    CHECK(c1.entries == c2.entries);

    CountsMap c3 = sample_counts(bell_state(), PauliString("XX"), 2000, a, 6);
    CHECK(c1.entries != c3.entries); // distinct stream, distinct draws

    // shot streams are counter-based: a prefix of shots reproduces the
    // same per-shot outcomes
    CountsMap big = sample_counts(bell_state(), PauliString("ZZ"), 100, a, 7);
    CountsMap small = sample_counts(bell_state(), PauliString("ZZ"), 50, a, 7);
    long long big_total = 0, small_total = 0;
    for (auto& [k, v] : big.entries) big_total += v;
    for (auto& [k, v] : small.entries) small_total += v;
    CHECK(big_total == 100);
    CHECK(small_total == 50);
}

TEST_CASE("sample_counts input validation") {
    NoiseSpec quiet;
    CHECK_THROWS(sample_counts(bell_state(), PauliString("ZZ"), 0, quiet));
    CHECK_THROWS(sample_counts(bell_state(), PauliString("Z"), 10, quiet));
}

TEST_CASE("expectation_from_counts worked examples") {
    CountsMap perfect;
    perfect.entries = {{"00", 5000}, {"11", 5000}};
    perfect.shots = 10000;
    ExpectationEstimate e = expectation_from_counts(perfect, PauliString("XX"));
    CHECK(e.value == 1.0);
    CHECK(e.stderr_ == 0.0);

    CountsMap anti;
    anti.entries = {{"01", 800}};
    anti.shots = 800;
    CHECK(expectation_from_counts(anti, PauliString("ZZ")).value == -1.0);

    CountsMap biased;
    biased.entries = {{"0", 7000}, {"1", 3000}};
    biased.shots = 10000;
    ExpectationEstimate b = expectation_from_counts(biased, PauliString("Z"));
    CHECK(b.value == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(b.stderr_ ==
          doctest::Approx(std::sqrt((1 - 0.16) / 10000)).epsilon(1e-12));

    CountsMap empty;
    CHECK_THROWS(expectation_from_counts(empty, PauliString("Z")));
    CHECK_THROWS(expectation_from_counts(anti, PauliString("Z"))); // length
}

TEST_CASE("counts serialization round-trips") {
    CountsMap c;
    c.entries = {{"00", 1}, {"10", 41}};
    c.shots = 42;
    CountsMap back = CountsMap::from_text(c.to_text());
    CHECK(back.shots == 42);
    CHECK(back.entries == c.entries);

    CHECK_THROWS(CountsMap::from_text("{\"shots\": 2, \"counts\": {\"0\": 1}}"));
    CHECK_THROWS(
        CountsMap::from_text("{\"shots\": 1, \"counts\": {\"0\": -1}}"));
    CHECK_THROWS(CountsMap::from_text("not json"));
}

TEST_CASE("apply_readout_noise: identity and symmetric flips") {
    std::vector<double> p = {0.5, 0.0, 0.0, 0.5};
    auto same = apply_readout_noise(p, ConfusionModel::identity(2));
    CHECK(same == p);

    auto flipped =
        apply_readout_noise({1.0, 0.0}, ConfusionModel::symmetric_flip(1, 0.02));
    CHECK(flipped[0] == doctest::Approx(0.98).epsilon(1e-15));
    CHECK(flipped[1] == doctest::Approx(0.02).epsilon(1e-15));

    CHECK_THROWS(apply_readout_noise({0.5, 0.2}, ConfusionModel::identity(1)));
}

TEST_CASE("property: readout noise preserves mass and nonnegativity") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        std::vector<double> p(std::uint64_t{1} << n);
        double mass = 0.0;
        for (double& x : p) {
            x = u(rng);
            mass += x;
        }
        for (double& x : p) x /= mass;
        auto out =
            apply_readout_noise(p, ConfusionModel::symmetric_flip(n, u(rng) / 2));
        double out_mass = 0.0;
        for (double x : out) {
            CHECK(x >= -1e-15);
            out_mass += x;
        }
        CHECK(out_mass == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gate-noise sampler with no CNOTs equals the plain sampler") {
    // zero CNOTs means zero error draws, so the per-shot streams line up
    // with sample_counts exactly
    StateVector plus = new_zero_state(1);
    plus.apply(Gate::h(0));
    NoiseSpec noisy;
    noisy.two_qubit_pauli_error_prob = 0.3; // irrelevant without CNOTs
    noisy.seed = 7;
    CountsMap direct = sample_counts(plus, PauliString("Z"), 4000, noisy, 3);
    CountsMap traj = sample_with_gate_noise({Gate::h(0)}, 1, 4000, noisy,
                                            PauliString("Z"), 3);
    CHECK(direct.entries == traj.entries);
}

TEST_CASE("stochastic CNOT errors shrink <XX> like uniform Pauli noise") {
    // uniform non-identity two-qubit Pauli after the CNOT: 7 of the 15
    // errors commute with XX, 8 anticommute, so <XX> = 1 - (16/15) p
    const std::vector<Gate> bell = {Gate::h(0), Gate::cnot(0, 1)};
    double previous = 2.0;
    for (double p : {0.0, 0.05, 0.2}) {
        NoiseSpec noise;
        noise.two_qubit_pauli_error_prob = p;
        noise.seed = 31;
        CountsMap c = sample_with_gate_noise(bell, 2, 50000, noise,
                                             PauliString("XX"));
        ExpectationEstimate e = expectation_from_counts(c, PauliString("XX"));
        const double predicted = 1.0 - (16.0 / 15.0) * p;
        CHECK(std::abs(e.value - predicted) < 5 * std::max(e.stderr_, 1e-4));
        CHECK(e.value < previous);
        previous = e.value;
    }
}

TEST_CASE("coherent over-rotation dephases the control qubit") {
    // after H, CNOT, CNOT the state is |+0>; the RZZ(eps) error after
    // the second CNOT leaves the relative phase e^{i eps} between |00>
    // and |10>, so <XZ> = cos(eps). (The RZZ after the first CNOT acts
    // on the even-parity Bell state and is only a global phase.)
    const std::vector<Gate> circuit = {Gate::h(0), Gate::cnot(0, 1),
                                       Gate::cnot(0, 1)};
    const double eps = 0.3;
    NoiseSpec noise;
    noise.coherent_overrotation_rad = eps;
    noise.seed = 17;
    CountsMap cxz = sample_with_gate_noise(circuit, 2, 50000, noise,
                                           PauliString("XZ"));
    ExpectationEstimate exz = expectation_from_counts(cxz, PauliString("XZ"));
    CHECK(std::abs(exz.value - std::cos(eps)) < 5 * exz.stderr_);
    CHECK(exz.value < 1.0);

    // on the Bell state itself the over-rotation is invisible in ZZ
    NoiseSpec bell_noise = noise;
    CountsMap czz = sample_with_gate_noise({Gate::h(0), Gate::cnot(0, 1)}, 2,
                                           5000, bell_noise, PauliString("ZZ"));
    CHECK(expectation_from_counts(czz, PauliString("ZZ")).value == 1.0);
}

TEST_CASE("property: noiseless sampling is statistically sound") {
    // 30 independent seeds; the estimate must sit within 5 standard
    // errors of the exact expectation every time (prob ~1 each)
    StateVector bell = bell_state();
    const PauliString obs("XX");
    const double exact = expectation_pauli(bell, obs);
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        NoiseSpec quiet;
        quiet.seed = seed;
        CountsMap c = sample_counts(bell, obs, 4000, quiet);
        ExpectationEstimate e = expectation_from_counts(c, obs);
        if (std::abs(e.value - exact) <= 5 * std::max(e.stderr_, 1e-3)) {
            ++within;
        }
    }
    CHECK(within >= 29);
}

TEST_CASE("TwirledCnot: zero error reproduces the ideal gate in every frame") {
    TwirledCnot tw(0, 1, 0.0);
    std::mt19937_64 rng(41);
    for (int frame = 0; frame < 16; ++frame) {
        StateVector in = random_state(2, rng);
        StateVector ideal = in;
        ideal.apply(Gate::cnot(0, 1));
        StateVector framed = in;
        framed.apply(tw.frame_circuit(frame));
        CHECK(fidelity(framed, ideal) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("TwirledCnot: 16-frame average matches the analytic Pauli channel") {
    // twirling RZZ(eps) after a CNOT yields the channel
    //   rho -> cos^2(eps/2) U rho U+  +  sin^2(eps/2) ZZ U rho U+ ZZ
    const double eps = 0.23;
    TwirledCnot tw(0, 1, eps);
    std::mt19937_64 rng(42);
    const std::vector<std::string> observables = {"XX", "ZZ", "XY", "YZ",
                                                  "ZX", "YY"};
    for (int trial = 0; trial < 10; ++trial) {
        StateVector in = random_state(2, rng);
        StateVector ideal = in;
        ideal.apply(Gate::cnot(0, 1));
        StateVector flipped = ideal;
        flipped.apply(Gate::u1q(0, {cplx(1.0), cplx(0.0), cplx(0.0),
                                    cplx(-1.0)}));
        flipped.apply(Gate::u1q(1, {cplx(1.0), cplx(0.0), cplx(0.0),
                                    cplx(-1.0)}));
        const double c2 = std::cos(eps / 2) * std::cos(eps / 2);
        const double s2 = std::sin(eps / 2) * std::sin(eps / 2);
        for (const std::string& obs : observables) {
            PauliString p(obs);
            const double analytic = c2 * expectation_pauli(ideal, p) +
                                    s2 * expectation_pauli(flipped, p);
            CHECK(tw.exact_average_expectation(in, p) ==
                  doctest::Approx(analytic).epsilon(1e-10));
        }
    }
}

TEST_CASE("TwirledCnot: sampled average converges to the exact average") {
    const double eps = 0.3;
    TwirledCnot tw(0, 1, eps);
    StateVector in = new_zero_state(2);
    in.apply(Gate::h(0));
    const PauliString obs("XX");
    const double exact = tw.exact_average_expectation(in, obs);
    const double sampled = tw.sampled_expectation(in, obs, 4000, 5);
    // frame average has bounded spread; 4000 draws pins the mean tightly
    CHECK(std::abs(sampled - exact) < 0.05);
    CHECK(tw.sampled_expectation(in, obs, 4000, 5) == sampled); // per-seed
                                                                // determinism
    CHECK_THROWS(tw.frame_circuit(16));
    CHECK_THROWS(tw.sampled_expectation(in, obs, 0, 1));
    CHECK_THROWS(TwirledCnot(1, 1, 0.1));
}
