#include "doctest.h"

#include "convspec/measure.hpp"
#include "test_util.hpp"

using namespace convspec;
using testutil::random_coefficient;
using testutil::random_element;
using testutil::random_measure;
using testutil::random_selfadjoint_measure;
using testutil::spec_zoo;

TEST_CASE("delta at the identity is a two-sided convolution unit") {
    for (const GroupSpec& spec : spec_zoo()) {
        Measure e = Measure::delta(identity(spec));
        for (int i = 0; i < 10; ++i) {
            Measure m = random_measure(spec);
            CHECK(convolve(e, m) == m);
            CHECK(convolve(m, e) == m);
        }
    }
}

TEST_CASE("convolution is associative and distributes over addition") {
    for (const GroupSpec& spec : spec_zoo()) {
        for (int i = 0; i < 15; ++i) {
            Measure a = random_measure(spec);
            Measure b = random_measure(spec);
            Measure c = random_measure(spec);
            CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
            CHECK(convolve(a, b + c) == convolve(a, b) + convolve(a, c));
            CHECK(convolve(a + b, c) == convolve(a, c) + convolve(b, c));
            ComplexRational s = random_coefficient();
            CHECK(convolve(scale(s, a), b) == scale(s, convolve(a, b)));
        }
    }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
    for (const GroupSpec& spec : spec_zoo()) {
        for (int i = 0; i < 15; ++i) {
            Measure a = random_measure(spec);
            Measure b = random_measure(spec);
            CHECK(adjoint(adjoint(a)) == a);
            CHECK(adjoint(convolve(a, b)) == convolve(adjoint(b), adjoint(a)));
            CHECK(adjoint(a + b) == adjoint(a) + adjoint(b));
            ComplexRational s = random_coefficient();
            CHECK(adjoint(scale(s, a)) == scale(s.conj(), adjoint(a)));
            CHECK(is_selfadjoint(a + adjoint(a)));
            CHECK(is_selfadjoint(convolve(a, adjoint(a))));
        }
    }
}

TEST_CASE("exact L1 norm is submultiplicative under convolution") {
    for (const GroupSpec& spec : spec_zoo()) {
        for (int i = 0; i < 15; ++i) {
            Measure a = testutil::random_rational_measure(spec);
            Measure b = testutil::random_rational_measure(spec);
            auto na = norm_l1_exact(a);
            auto nb = norm_l1_exact(b);
            auto nab = norm_l1_exact(convolve(a, b));
            REQUIRE(na.has_value());
            REQUIRE(nb.has_value());
            REQUIRE(nab.has_value());
            CHECK(*nab <= *na * *nb);
            CHECK(norm_l1_double(a) == doctest::Approx(na->get_d()).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm of an adjoint and of a sum behave as expected") {
    for (const GroupSpec& spec : spec_zoo()) {
        Measure a = testutil::random_rational_measure(spec);
        Measure b = testutil::random_rational_measure(spec);
        CHECK(norm_l1_exact(adjoint(a)) == norm_l1_exact(a));
        auto lhs = norm_l1_exact(a + b);
        REQUIRE(lhs.has_value());
        CHECK(*lhs <= *norm_l1_exact(a) + *norm_l1_exact(b));
    }
}

TEST_CASE("central measures are exactly the conjugation-invariant ones") {
    GroupSpec s3 = GroupSpec::symmetric(3);
    CHECK(is_central(Measure::delta(identity(s3))));
    CHECK_FALSE(is_central(Measure::delta(parse_element(s3, "a"))));
    Measure e2 = conjugacy_class_indicator(parse_element(s3, "a"));
    Measure e3 = conjugacy_class_indicator(parse_element(s3, "a b"));
    CHECK(e2.support_size() == 3);
    CHECK(e3.support_size() == 2);
    CHECK(is_central(e2));
    CHECK(is_central(e3));
    CHECK(is_central(convolve(e2, e3)));

    GroupSpec prod = GroupSpec::direct_product(s3, GroupSpec::int_lattice(1));
    Measure lifted = conjugacy_class_indicator(parse_element(prod, "(a|3)"));
    CHECK(lifted.support_size() == 3);
    CHECK(is_central(lifted));
    for (int i = 0; i < 10; ++i) {
        Measure m = random_measure(prod);
        Measure sym = Measure::zero(prod);
        for (const auto& [x, c] : m.coeffs()) {
            for (const GroupElement& y : enumerate_group(s3)) {
                GroupElement g = make_pair_element(prod, y, identity(GroupSpec::int_lattice(1)));
                sym.add_to(conjugate(g, x), c);
            }
        }
        CHECK(is_central(sym));
    }
}

TEST_CASE("central measures commute with everything") {
    GroupSpec prod =
        GroupSpec::direct_product(GroupSpec::symmetric(3), GroupSpec::int_lattice(1));
    Measure e2 = conjugacy_class_indicator(parse_element(prod, "(a|0)"));
    for (int i = 0; i < 10; ++i) {
        Measure m = random_measure(prod);
        CHECK(convolve(e2, m) == convolve(m, e2));
    }
}

TEST_CASE("convolution powers track moments at the identity") {
    for (const GroupSpec& spec : spec_zoo()) {
        Measure m = random_measure(spec, 3, 2);
        Measure acc = Measure::delta(identity(spec));
        for (int n = 0; n <= 4; ++n) {
            CHECK(convolution_power(m, n) == acc);
            CHECK(moment_at_identity(m, n) == acc.at(identity(spec)));
            acc = convolve(m, acc);
        }
    }
}

TEST_CASE("apply agrees with convolution") {
    for (const GroupSpec& spec : spec_zoo()) {
        Measure m = random_measure(spec);
        Measure f = random_measure(spec);
        CHECK(apply(m, f) == convolve(m, f));
    }
}

TEST_CASE("indicator and accessors") {
    GroupSpec z = GroupSpec::int_lattice(1);
    Measure walk = Measure::indicator(
        z, {make_lattice_element(z, {1}), make_lattice_element(z, {-1})});
    CHECK(walk.support_size() == 2);
    CHECK(walk.at(make_lattice_element(z, {1})) == ComplexRational(1));
    CHECK(walk.at(make_lattice_element(z, {5})).is_zero());
    CHECK(is_selfadjoint(walk));
    CHECK(is_central(walk));
    Measure zero = Measure::zero(z);
    CHECK(zero.is_zero());
    CHECK(norm_l1_exact(zero) == mpq_class(0));

    Measure m = Measure::delta(make_lattice_element(z, {2}), ComplexRational(mpq_class(1, 2)));
    m.add_to(make_lattice_element(z, {2}), ComplexRational(mpq_class(-1, 2)));
    CHECK(m.is_zero());
    CHECK(m.support_size() == 0);
}

TEST_CASE("mixed-spec operations are rejected") {
    GroupSpec z = GroupSpec::int_lattice(1);
    GroupSpec c2 = GroupSpec::cyclic(2);
    Measure a = Measure::delta(identity(z));
    Measure b = Measure::delta(identity(c2));
    CHECK_THROWS_AS(convolve(a, b), SpecMismatchError);
    CHECK_THROWS_AS(a + b, SpecMismatchError);
}

TEST_CASE("support caps stop runaway convolutions") {
    GroupSpec f2 = GroupSpec::free_group(2);
    Measure adj = Measure::indicator(f2, ball(f2, generators(f2), 1));
    Measure big = adj;
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 10; ++i) big = convolve(big, adj, 200);
        }(),
        CapExceededError);
    CHECK_THROWS_AS(conjugacy_class_indicator(parse_element(f2, "a"), 50), CapExceededError);
}
