#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "convspec/fourier.hpp"
#include "convspec/spectral.hpp"
#include "test_util.hpp"

using namespace convspec;

namespace {

constexpr double kPi = 3.14159265358979323846;

Measure z_walk() {
    GroupSpec z = GroupSpec::int_lattice(1);
    return Measure::indicator(z, {make_lattice_element(z, {1}), make_lattice_element(z, {-1})});
}

DualPoint random_dual(const DualStructure& dual) {
    DualPoint xi;
    for (long long m : dual.moduli) {
        if (m == 0) {
            xi.angles.push_back(2.0 * kPi * testutil::pick(0, 999) / 1000.0);
        } else {
            xi.angles.push_back(2.0 * kPi *
                                static_cast<double>(testutil::pick(0, static_cast<int>(m) - 1)) /
                                static_cast<double>(m));
        }
    }
    return xi;
}

}  // namespace

TEST_CASE("dual slot moduli follow the constructor tree") {
    CHECK(dual_structure(GroupSpec::int_lattice(1)).moduli == std::vector<long long>{0});
    CHECK(dual_structure(GroupSpec::int_lattice(2)).moduli == std::vector<long long>{0, 0});
    CHECK(dual_structure(GroupSpec::cyclic(6)).moduli == std::vector<long long>{6});
    GroupSpec c2z = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1));
    CHECK(dual_structure(c2z).moduli == std::vector<long long>{2, 0});
    CHECK(dual_structure(c2z).torus_dimensions() == 1);
    CHECK_FALSE(dual_structure(c2z).finite());
    CHECK(dual_structure(GroupSpec::cyclic(6)).finite());
    CHECK(dual_structure(GroupSpec::int_lattice(2)).torus_dimensions() == 2);

    CHECK_THROWS_AS(dual_structure(GroupSpec::symmetric(3)), SpecMismatchError);
    CHECK_THROWS_AS(dual_structure(GroupSpec::free_group(2)), SpecMismatchError);
    GroupSpec sdz = GroupSpec::semidirect(
        GroupSpec::symmetric(3), GroupSpec::int_lattice(1),
        ActionSpec::conjugation_by(parse_element(GroupSpec::symmetric(3), "a")));
    CHECK_THROWS_AS(dual_structure(sdz), SpecMismatchError);
}

TEST_CASE("residue tuples map to torus angles") {
    GroupSpec g = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3));
    DualStructure dual = dual_structure(g);
    DualPoint xi = dual_point_from_residues(dual, {1, 2});
    REQUIRE(xi.angles.size() == 2);
    CHECK(xi.angles[0] == doctest::Approx(kPi));
    CHECK(xi.angles[1] == doctest::Approx(4.0 * kPi / 3.0));
    // Negative residues reduce into range.
    CHECK(dual_point_from_residues(dual, {-1, -1}).angles[0] == doctest::Approx(kPi));
    CHECK(dual_point_from_residues(dual, {-1, -1}).angles[1] ==
          doctest::Approx(4.0 * kPi / 3.0));

    CHECK_THROWS_AS(dual_point_from_residues(dual, {1}), ValidationError);
    DualStructure mixed = dual_structure(
        GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1)));
    CHECK_THROWS_AS(dual_point_from_residues(mixed, {1, 3}), ValidationError);
    CHECK(dual_point_from_residues(mixed, {1, 0}).angles[1] == 0.0);
}

TEST_CASE("finite duals enumerate in odometer order") {
    GroupSpec g = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3));
    DualStructure dual = dual_structure(g);
    std::vector<std::vector<long long>> all = enumerate_finite_duals(dual);
    REQUIRE(all.size() == 6);
    CHECK(all.front() == std::vector<long long>{0, 0});
    CHECK(all[1] == std::vector<long long>{0, 1});
    CHECK(all.back() == std::vector<long long>{1, 2});
    CHECK_THROWS_AS(enumerate_finite_duals(dual, 5), CapExceededError);

    DualStructure mixed = dual_structure(
        GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1)));
    CHECK_THROWS_AS(enumerate_finite_duals(mixed), ValidationError);
}

TEST_CASE("the walk symbol is twice the cosine") {
    Measure walk = z_walk();
    DualStructure dual = dual_structure(walk.spec());
    for (double theta : {0.0, 0.3, 1.1, kPi / 2.0, 2.0, kPi}) {
        DualPoint xi{{theta}};
        std::complex<double> v = symbol_eval(walk, xi);
        CHECK(v.real() == doctest::Approx(2.0 * std::cos(theta)));
        CHECK(v.imag() == doctest::Approx(0.0));
    }
    Measure unit = Measure::delta(identity(walk.spec()));
    for (int i = 0; i < 5; ++i) {
        std::complex<double> v = symbol_eval(unit, random_dual(dual));
        CHECK(std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-14);
    }
    CHECK_THROWS_AS(symbol_eval(walk, DualPoint{{0.1, 0.2}}), ValidationError);
}

TEST_CASE("convolution multiplies symbols pointwise") {
    std::vector<GroupSpec> specs = {
        GroupSpec::int_lattice(1), GroupSpec::int_lattice(2), GroupSpec::cyclic(6),
        GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1))};
    for (const GroupSpec& spec : specs) {
        DualStructure dual = dual_structure(spec);
        for (int trial = 0; trial < 10; ++trial) {
            Measure a = testutil::random_measure(spec, 4, 3);
            Measure b = testutil::random_measure(spec, 4, 3);
            Measure ab = convolve(a, b);
            for (int p = 0; p < 4; ++p) {
                DualPoint xi = random_dual(dual);
                std::complex<double> lhs = symbol_eval(ab, xi);
                std::complex<double> rhs = symbol_eval(a, xi) * symbol_eval(b, xi);
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
    }
}

TEST_CASE("finite symbols reproduce the dense eigenvalues") {
    struct Setup {
        GroupSpec spec;
        std::vector<std::string> support;
    };
    std::vector<Setup> setups = {
        {GroupSpec::cyclic(4), {"1", "3"}},
        {GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3)),
         {"(1|0)", "(0|1)", "(0|2)"}},
    };
    for (const Setup& s : setups) {
        std::vector<GroupElement> elems;
        for (const std::string& lit : s.support) elems.push_back(parse_element(s.spec, lit));
        Measure mu = Measure::indicator(s.spec, elems);
        REQUIRE(is_selfadjoint(mu));

        std::vector<double> via_dual;
        DualStructure dual = dual_structure(s.spec);
        for (const auto& residues : enumerate_finite_duals(dual)) {
            std::complex<double> v = symbol_eval(mu, dual_point_from_residues(dual, residues));
            CHECK(std::abs(v.imag()) < 1e-12);
            via_dual.push_back(v.real());
        }
        std::sort(via_dual.begin(), via_dual.end());

        std::size_t order = enumerate_group(s.spec, 1000).size();
        TruncatedOperator op = build_truncation(mu, static_cast<int>(order));
        REQUIRE(op.size() == order);
        EigenDecomposition eig = eigendecompose(op);
        REQUIRE(via_dual.size() == eig.eigenvalues.size());
        for (std::size_t i = 0; i < via_dual.size(); ++i) {
            CHECK(std::abs(via_dual[i] - eig.eigenvalues[i]) < 1e-8);
        }
    }
}

TEST_CASE("directional derivatives of the symbol match the weighted measure") {
    Measure walk = z_walk();
    CharacterSpace space = character_space(walk.spec());
    REQUIRE(space.basis.size() == 1);
    const RealCharacter& phi = space.basis[0];
    DualStructure dual = dual_structure(walk.spec());

    for (int trial = 0; trial < 12; ++trial) {
        DualPoint xi = random_dual(dual);
        DerivativeReport rep = derivative_identity_check(walk, phi, xi);
        CHECK(rep.order_confirmed);
        CHECK(rep.target.real() == doctest::Approx(-2.0 * std::sin(xi.angles[0])));
        CHECK(rep.target.imag() == doctest::Approx(0.0));
        REQUIRE(!rep.rows.empty());
    }

    Measure unit = Measure::delta(identity(walk.spec()));
    DerivativeReport flat = derivative_identity_check(unit, phi, DualPoint{{0.4}});
    CHECK(flat.order_confirmed);
    CHECK(std::abs(flat.target) < 1e-15);

    CHECK_THROWS_AS(derivative_identity_check(walk, phi, DualPoint{{0.1}}, {0.1, -0.2}),
                    ValidationError);
}

TEST_CASE("character directions live on the torus slots") {
    GroupSpec c2z = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1));
    DualStructure dual = dual_structure(c2z);
    CharacterSpace space = character_space(c2z);
    REQUIRE(space.basis.size() == 1);
    std::vector<double> dir = character_direction(dual, space.basis[0]);
    REQUIRE(dir.size() == 2);
    CHECK(dir[0] == 0.0);
    CHECK(dir[1] != 0.0);

    GroupSpec z2 = GroupSpec::int_lattice(2);
    DualStructure dual2 = dual_structure(z2);
    CharacterSpace space2 = character_space(z2);
    REQUIRE(space2.basis.size() == 2);
    std::vector<double> d0 = character_direction(dual2, space2.basis[0]);
    std::vector<double> d1 = character_direction(dual2, space2.basis[1]);
    CHECK(d0 != d1);
    CHECK((d0[0] != 0.0 || d0[1] != 0.0));
    CHECK((d1[0] != 0.0 || d1[1] != 0.0));

    CHECK_THROWS_AS(character_direction(dual, space2.basis[0]), SpecMismatchError);
}

TEST_CASE("finite groups get an exact point-spectrum scan") {
    GroupSpec c4 = GroupSpec::cyclic(4);
    Measure mu = Measure::indicator(
        c4, {make_cyclic_element(c4, 1), make_cyclic_element(c4, 3)});
    ScanFindings f = point_spectrum_scan(mu);
    CHECK(f.exact);
    CHECK(f.note == "exact: symbol evaluated at all 4 dual characters");
    REQUIRE(f.values.size() == 3);
    CHECK(f.values[0].value.real() == doctest::Approx(-2.0));
    CHECK(f.values[0].multiplicity == 1);
    CHECK(f.values[1].value.real() == doctest::Approx(0.0));
    CHECK(f.values[1].multiplicity == 2);
    CHECK(f.values[2].value.real() == doctest::Approx(2.0));
    CHECK(f.values[2].multiplicity == 1);
    long long total = 0;
    for (const PointSpectrumValue& v : f.values) {
        CHECK(v.exact);
        total += v.multiplicity;
    }
    CHECK(total == 4);
}

TEST_CASE("smooth symbols produce no flat patches on the grid") {
    ScanFindings f = point_spectrum_scan(z_walk());
    CHECK_FALSE(f.exact);
    CHECK(f.values.empty());
    CHECK(f.note == "heuristic: no flat patches on a 4096-point grid per dimension");
}

TEST_CASE("torsion-only measures are flat along the whole torus") {
    GroupSpec c2z = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1));
    Measure mu = Measure::delta(parse_element(c2z, "(1|0)"));
    ScanFindings f = point_spectrum_scan(mu);
    CHECK_FALSE(f.exact);
    REQUIRE(f.values.size() == 2);
    CHECK(f.values[0].value.real() == doctest::Approx(-1.0));
    CHECK(f.values[1].value.real() == doctest::Approx(1.0));
    CHECK(f.values[0].multiplicity == 4096);
    CHECK(f.values[1].multiplicity == 4096);
}

TEST_CASE("two-dimensional grids are scanned jointly") {
    GroupSpec z2 = GroupSpec::int_lattice(2);
    Measure unit = Measure::delta(identity(z2));
    ScanOptions opts;
    opts.grid = 32;
    ScanFindings f = point_spectrum_scan(unit, opts);
    CHECK_FALSE(f.exact);
    REQUIRE(f.values.size() == 1);
    CHECK(std::abs(f.values[0].value - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(f.values[0].multiplicity == 32 * 32);
}

TEST_CASE("scan guards its grid parameters") {
    GroupSpec z3 = GroupSpec::int_lattice(3);
    std::vector<GroupElement> gens = generators(z3);
    std::vector<GroupElement> sym;
    for (const GroupElement& g : gens) {
        sym.push_back(g);
        sym.push_back(inverse(g));
    }
    Measure walk3 = Measure::indicator(z3, sym);
    CHECK_THROWS_AS(point_spectrum_scan(walk3), ValidationError);

    ScanOptions tiny;
    tiny.grid = 4;
    CHECK_THROWS_AS(point_spectrum_scan(z_walk(), tiny), ValidationError);
}

TEST_CASE("the dual constraint report checks each hypothesis exactly") {
    GroupSpec c2z = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1));
    Measure m0 = Measure::indicator(
        c2z, {parse_element(c2z, "(0|1)"), parse_element(c2z, "(0|-1)")});
    Measure torsion = Measure::delta(parse_element(c2z, "(1|0)"));

    DualSpectrumReport good = dual_spectrum_report(m0, torsion);
    CHECK(good.m0_selfadjoint);
    CHECK(good.m1_selfadjoint);
    CHECK(good.torsion_hypothesis);
    CHECK(good.hypotheses_pass);
    CHECK(good.nonzero_directions == std::vector<std::size_t>{0});
    CHECK(good.constraint_available);
    CHECK(good.failures.empty());
    CHECK(good.conclusion.find("annihilated") != std::string::npos);

    // Main part supported in the torsion subgroup: every direction vanishes.
    DualSpectrumReport flat = dual_spectrum_report(torsion, torsion);
    CHECK(flat.hypotheses_pass);
    CHECK(flat.nonzero_directions.empty());
    CHECK_FALSE(flat.constraint_available);
    CHECK(flat.conclusion.find("vanishes") != std::string::npos);

    Measure wide = Measure::indicator(
        c2z, {parse_element(c2z, "(0|2)"), parse_element(c2z, "(0|-2)")});
    DualSpectrumReport bad = dual_spectrum_report(m0, wide);
    CHECK_FALSE(bad.torsion_hypothesis);
    CHECK_FALSE(bad.hypotheses_pass);
    CHECK_FALSE(bad.constraint_available);
    CHECK(!bad.failures.empty());
    CHECK(bad.failures[0].find("torsion") != std::string::npos);
    CHECK(bad.conclusion.find("hypotheses not verified") != std::string::npos);

    Measure skew = Measure::delta(parse_element(c2z, "(0|1)"));
    DualSpectrumReport notsa = dual_spectrum_report(skew, torsion);
    CHECK_FALSE(notsa.m0_selfadjoint);
    CHECK_FALSE(notsa.hypotheses_pass);

    GroupSpec z = GroupSpec::int_lattice(1);
    CHECK_THROWS_AS(dual_spectrum_report(m0, Measure::delta(identity(z))), SpecMismatchError);
    GroupSpec s3 = GroupSpec::symmetric(3);
    Measure on_s3 = Measure::delta(identity(s3));
    CHECK_THROWS_AS(dual_spectrum_report(on_s3, on_s3), SpecMismatchError);
}
