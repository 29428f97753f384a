#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "doctest.h"
#include "qbell/bellpoly.hpp"
#include "qbell/observables.hpp"
#include "qbell/prep.hpp"
#include "test_util.hpp"

using namespace qbell;
using namespace qbell::test;

TEST_CASE("bloch_from_angles on axis-aligned settings") {
    BlochVector x = bloch_from_angles(MeasurementSetting(std::numbers::pi / 2, 0));
    CHECK(x.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(x.z == doctest::Approx(0.0).epsilon(1e-12));

    BlochVector z = bloch_from_angles(MeasurementSetting(0.0, 1.23));
    CHECK(z.z == doctest::Approx(1.0).epsilon(1e-12));

    BlochVector y =
        bloch_from_angles(MeasurementSetting(std::numbers::pi / 2,
                                             std::numbers::pi / 2));
    CHECK(y.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: Bloch vectors are unit norm") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        CHECK(bloch_from_angles(random_setting(rng)).norm() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("MeasurementSetting normalization preserves the Bloch direction") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> wild(-15.0, 15.0);
    for (int i = 0; i < 100; ++i) {
        const double t = wild(rng), p = wild(rng);
        MeasurementSetting s(t, p);
        CHECK(s.theta >= 0.0);
        CHECK(s.theta <= std::numbers::pi + 1e-12);
        CHECK(s.phi >= 0.0);
        CHECK(s.phi < 2 * std::numbers::pi + 1e-12);
        // raw direction computed without normalization
        BlochVector raw{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p),
                        std::cos(t)};
        BlochVector norm = bloch_from_angles(s);
        CHECK(norm.x == doctest::Approx(raw.x).epsilon(1e-9));
        CHECK(norm.y == doctest::Approx(raw.y).epsilon(1e-9));
        CHECK(norm.z == doctest::Approx(raw.z).epsilon(1e-9));
    }
}

TEST_CASE("from_degrees converts and normalizes") {
    MeasurementSetting s = MeasurementSetting::from_degrees(90.0, 180.0);
    CHECK(s.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(s.phi == doctest::Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("expand_tensor enumerates 3^m terms with product coefficients") {
    std::mt19937_64 rng(13);
    auto s1 = random_setting(rng);
    auto s2 = random_setting(rng);
    PauliTermExpansion two = expand_tensor(std::vector<MeasurementSetting>{s1, s2});
    CHECK(two.terms.size() == 9);

    BlochVector b1 = bloch_from_angles(s1);
    BlochVector b2 = bloch_from_angles(s2);
    bool found_xx = false;
    for (const PauliTerm& t : two.terms) {
        if (t.string.axes == "XX") {
            found_xx = true;
            CHECK(t.coeff == doctest::Approx(b1.x * b2.x).epsilon(1e-12));
        }
        if (t.string.axes == "YZ") {
            CHECK(t.coeff == doctest::Approx(b1.y * b2.z).epsilon(1e-12));
        }
    }
    CHECK(found_xx);

    PauliTermExpansion four = expand_tensor(
        std::vector<MeasurementSetting>{s1, s2, s1, s2});
    CHECK(four.terms.size() == 81);
}

TEST_CASE("expansion reproduces the dense operator on random states") {
    // sum of coeff * <P> must equal the expectation of the Kronecker
    // product of Bloch operators
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 3);
        std::vector<MeasurementSetting> settings;
        for (int q = 0; q < m; ++q) settings.push_back(random_setting(rng));
        StateVector sv = random_state(m, rng);

        Matrix op = bloch_operator_matrix(bloch_from_angles(settings[0]));
        for (int q = 1; q < m; ++q) {
            op = kron(op, bloch_operator_matrix(bloch_from_angles(settings[q])));
        }
        const cplx want = matrix_expectation(sv, op);
        CHECK(std::abs(want.imag()) < 1e-12);

        double got = 0.0;
        for (const PauliTerm& t : expand_tensor(settings).terms) {
            got += t.coeff * expectation_pauli(sv, t.string);
        }
        CHECK(got == doctest::Approx(want.real()).epsilon(1e-10));
    }
}

TEST_CASE("filter_nonzero on the Bell state keeps exactly XX, YY, ZZ") {
    StateVector bell = prepare_bell().state;
    // X-basis tensor X-basis so every coefficient is comparable
    std::vector<MeasurementSetting> settings = {
        MeasurementSetting(std::numbers::pi / 3, 0.7),
        MeasurementSetting(std::numbers::pi / 4, 1.9)};
    PauliTermExpansion filtered =
        filter_nonzero(expand_tensor(settings), bell);
    std::set<std::string> survivors;
    for (const PauliTerm& t : filtered.terms) survivors.insert(t.string.axes);
    CHECK(survivors == std::set<std::string>{"XX", "YY", "ZZ"});
}

TEST_CASE("filter_nonzero on Dicke(4,2) matches the golden survivor list") {
    StateVector d42 = dicke_statevector(4, 2);
    std::vector<MeasurementSetting> settings(
        4, MeasurementSetting(std::numbers::pi / 3, 0.7));
    PauliTermExpansion filtered =
        filter_nonzero(expand_tensor(settings), d42);

    std::set<std::string> survivors;
    for (const PauliTerm& t : filtered.terms) survivors.insert(t.string.axes);
    CHECK(survivors.size() == 21);

    std::ifstream golden(std::string(QBELL_TEST_DATA_DIR) +
                         "/dicke42_nonzero_strings.txt");
    REQUIRE(golden.good());
    std::set<std::string> expected;
    std::string line;
    while (std::getline(golden, line)) {
        if (!line.empty()) expected.insert(line);
    }
    CHECK(survivors == expected);

    // every survivor really has a nonzero expectation, every dropped
    // string a zero one (soundness against the exact expectation)
    for (const PauliTerm& t : expand_tensor(settings).terms) {
        const double e = expectation_pauli(d42, t.string);
        if (survivors.count(t.string.axes)) {
            CHECK(std::abs(e) > 1e-10);
        } else {
            CHECK(std::abs(e) <= 1e-10);
        }
    }
}

TEST_CASE("filter_nonzero with a huge tolerance removes everything") {
    StateVector bell = prepare_bell().state;
    std::vector<MeasurementSetting> settings = {
        MeasurementSetting(1.0, 0.5), MeasurementSetting(0.4, 2.2)};
    CHECK(filter_nonzero(expand_tensor(settings), bell, 2.0).terms.empty());
}

TEST_CASE("expectation_setting: filtered equals unfiltered") {
    std::mt19937_64 rng(15);
    StateVector d42 = dicke_statevector(4, 2);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<MeasurementSetting> settings;
        for (int q = 0; q < 4; ++q) settings.push_back(random_setting(rng));
        const double full = expectation_setting(d42, settings, false);
        const double filt = expectation_setting(d42, settings, true);
        CHECK(filt == doctest::Approx(full).epsilon(1e-10));
    }
}

TEST_CASE("expectation_setting reproduces published correlator values") {
    StateVector bell = prepare_bell().state;
    ChshAngles chsh = chsh_reference_angles();
    CHECK(expectation_setting(bell, {chsh.a, chsh.b}, true) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));

    StateVector d42 = dicke_statevector(4, 2);
    DickeAngles da = dicke_reference_angles();
    CHECK(expectation_setting(d42, {da.a, da.b, da.c, da.d}, true) ==
          doctest::Approx(0.800).epsilon(2e-3));
}

TEST_CASE("expectation_setting validates arity") {
    StateVector bell = prepare_bell().state;
    CHECK_THROWS(expectation_setting(bell, {MeasurementSetting(1, 1)}, true));
}
