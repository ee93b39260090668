#pragma once

#include <random>
#include <vector>

#include "convspec/character.hpp"
#include "convspec/group.hpp"
#include "convspec/measure.hpp"
#include "convspec/serialize.hpp"

namespace testutil {

using namespace convspec;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240817);
    return gen;
}

inline long long pick(long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    return d(rng());
}

// One spec per constructor, plus the composites the library is built around.
inline const std::vector<GroupSpec>& spec_zoo() {
    static const std::vector<GroupSpec> zoo = [] {
        GroupSpec z = GroupSpec::int_lattice(1);
        GroupSpec z2 = GroupSpec::int_lattice(2);
        GroupSpec c2 = GroupSpec::cyclic(2);
        GroupSpec c6 = GroupSpec::cyclic(6);
        GroupSpec s3 = GroupSpec::symmetric(3);
        GroupSpec f2 = GroupSpec::free_group(2);
        std::vector<GroupSpec> specs;
        specs.push_back(z);
        specs.push_back(z2);
        specs.push_back(c2);
        specs.push_back(c6);
        specs.push_back(s3);
        specs.push_back(f2);
        specs.push_back(GroupSpec::direct_product(c2, z));
        specs.push_back(GroupSpec::direct_product(s3, z));
        specs.push_back(GroupSpec::semidirect(s3, z,
                                              ActionSpec::conjugation_by(parse_element(s3, "a"))));
        specs.push_back(GroupSpec::semidirect(
            f2, z,
            ActionSpec::generator_images({{parse_element(f2, "b"), parse_element(f2, "a")}})));
        specs.push_back(GroupSpec::wreath_lite(c2, 3, z, {{1, 2, 0}}));
        return specs;
    }();
    return zoo;
}

// Random word in the generators and their inverses; identity is possible.
inline GroupElement random_element(const GroupSpec& spec, int max_length = 4) {
    std::vector<GroupElement> gens = generators(spec);
    GroupElement x = identity(spec);
    if (gens.empty()) return x;
    long long len = pick(0, max_length);
    for (long long i = 0; i < len; ++i) {
        const GroupElement& g = gens[static_cast<std::size_t>(pick(0, static_cast<long long>(gens.size()) - 1))];
        x = multiply(x, pick(0, 1) == 0 ? g : inverse(g));
    }
    return x;
}

// Unit-modulus coefficients with exact rational parts, so adjoints and norms
// stay in the rationals.
inline ComplexRational random_unit_coefficient() {
    static const std::vector<ComplexRational> units = [] {
        std::vector<ComplexRational> u;
        u.emplace_back(mpq_class(1), mpq_class(0));
        u.emplace_back(mpq_class(-1), mpq_class(0));
        u.emplace_back(mpq_class(0), mpq_class(1));
        u.emplace_back(mpq_class(0), mpq_class(-1));
        u.emplace_back(mpq_class(3, 5), mpq_class(4, 5));
        u.emplace_back(mpq_class(3, 5), mpq_class(-4, 5));
        u.emplace_back(mpq_class(5, 13), mpq_class(12, 13));
        u.emplace_back(mpq_class(5, 13), mpq_class(-12, 13));
        return u;
    }();
    return units[static_cast<std::size_t>(pick(0, static_cast<long long>(units.size()) - 1))];
}

inline ComplexRational random_coefficient() {
    ComplexRational unit = random_unit_coefficient();
    mpq_class scale(static_cast<long>(pick(1, 3)), static_cast<long>(pick(1, 3)));
    scale.canonicalize();
    return ComplexRational(unit.re * scale, unit.im * scale);
}

inline Measure random_measure(const GroupSpec& spec, int max_support = 4, int max_length = 3) {
    Measure m = Measure::zero(spec);
    long long n = pick(0, max_support);
    for (long long i = 0; i < n; ++i) {
        m.add_to(random_element(spec, max_length), random_coefficient());
    }
    return m;
}

inline Measure random_selfadjoint_measure(const GroupSpec& spec, int max_support = 3,
                                          int max_length = 3) {
    Measure m = random_measure(spec, max_support, max_length);
    return m + adjoint(m);
}

// Rational real coefficients keep every L1 norm exactly computable, also
// after convolutions merge terms.
inline Measure random_rational_measure(const GroupSpec& spec, int max_support = 4,
                                       int max_length = 3) {
    Measure m = Measure::zero(spec);
    long long n = pick(0, max_support);
    for (long long i = 0; i < n; ++i) {
        mpq_class q(static_cast<long>(pick(-4, 4)), static_cast<long>(pick(1, 4)));
        q.canonicalize();
        m.add_to(random_element(spec, max_length), ComplexRational(q));
    }
    return m;
}

}  // namespace testutil
