#include "convspec/semidirect.hpp"

#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "convspec/serialize.hpp"

namespace convspec {

namespace {

using FiberCoeffs = std::map<GroupElement, ComplexRational, ElementLess>;
using FiberDecomp = std::map<GroupElement, FiberCoeffs, ElementLess>;

// Splits a measure on a semidirect product into one fiber measure per base
// element appearing in the support.
FiberDecomp decompose_by_base(const Measure& mu) {
    FiberDecomp out;
    for (const auto& [x, c] : mu.coeffs()) {
        out[x.pair_right()][x.pair_left()] = c;
    }
    return out;
}

// Convolution of two fiber measures with the first twisted action slot:
// accumulates a(n1) b(n2) at m = n1 tau_{g1}(n2). The base element g1 is
// the one attached to the left factor.
FiberCoeffs twisted_product(const GroupSpec& xspec, const FiberCoeffs& a,
                            const GroupElement& g1, const FiberCoeffs& b) {
    FiberCoeffs out;
    for (const auto& [n1, c1] : a) {
        for (const auto& [n2, c2] : b) {
            GroupElement m = multiply(n1, apply_action(xspec, g1, n2));
            auto it = out.find(m);
            if (it == out.end()) {
                out.emplace(std::move(m), c1 * c2);
            } else {
                it->second += c1 * c2;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    }
    return out;
}

bool commutation_condition_raw(const Measure& a0) {
    const GroupSpec& xspec = a0.spec();
    FiberDecomp fibers = decompose_by_base(a0);
    for (auto it1 = fibers.begin(); it1 != fibers.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != fibers.end(); ++it2) {
            const auto& [g1, a_g1] = *it1;
            const auto& [g2, a_g2] = *it2;
            FiberCoeffs lhs = twisted_product(xspec, a_g1, g1, a_g2);
            FiberCoeffs rhs = twisted_product(xspec, a_g2, g2, a_g1);
            if (lhs.size() != rhs.size()) return false;
            auto lit = lhs.begin();
            auto rit = rhs.begin();
            for (; lit != lhs.end(); ++lit, ++rit) {
                if (compare(lit->first, rit->first) != 0) return false;
                if (!(lit->second == rit->second)) return false;
            }
        }
    }
    return true;
}

using FiberSet = std::set<GroupElement, ElementLess>;

// Structural well-formedness of the data: specs line up, the base elements
// are distinct, families align with g0, and no family repeats an element.
void validate_structure(const SymmetricSetData& data) {
    if (data.xspec.kind() != GroupKind::Semidirect) {
        throw SpecMismatchError("symmetric set data requires a semidirect product group");
    }
    if (data.families.size() != data.g0.size()) {
        std::ostringstream os;
        os << "symmetric set data has " << data.g0.size() << " base elements but "
           << data.families.size() << " fiber families";
        throw ValidationError(os.str());
    }
    const GroupSpec& base = data.xspec.base();
    const GroupSpec& fiber = data.xspec.fiber();
    std::set<GroupElement, ElementLess> seen;
    for (const GroupElement& g : data.g0) {
        if (!g.spec.same_as(base)) {
            throw SpecMismatchError("g0 element does not live in the base group");
        }
        if (!seen.insert(g).second) {
            throw ValidationError("g0 repeats the element " + format_element(g));
        }
    }
    for (std::size_t i = 0; i < data.families.size(); ++i) {
        FiberSet fam;
        for (const GroupElement& n : data.families[i]) {
            if (!n.spec.same_as(fiber)) {
                throw SpecMismatchError("fiber family element does not live in the fiber group");
            }
            if (!fam.insert(n).second) {
                throw ValidationError("fiber family over " + format_element(data.g0[i]) +
                                      " repeats the element " + format_element(n));
            }
        }
    }
}

struct IndexedFamilies {
    std::map<GroupElement, FiberSet, ElementLess> by_base;
};

IndexedFamilies index_families(const SymmetricSetData& data) {
    IndexedFamilies out;
    for (std::size_t i = 0; i < data.g0.size(); ++i) {
        FiberSet fam(data.families[i].begin(), data.families[i].end());
        out.by_base.emplace(data.g0[i], std::move(fam));
    }
    return out;
}

// First base element whose inverse is not in g0, if any.
std::optional<GroupElement> symmetry_witness(const IndexedFamilies& idx) {
    for (const auto& [g, fam] : idx.by_base) {
        (void)fam;
        if (idx.by_base.find(inverse(g)) == idx.by_base.end()) return g;
    }
    return std::nullopt;
}

// First (g, n) with n in the symmetric difference of tau_g(N_{-g}) and
// N_g^{-1}, if any. A base element with no inverse entry is treated as
// carrying an empty family.
std::optional<std::pair<GroupElement, GroupElement>> tau_witness(const GroupSpec& xspec,
                                                                const IndexedFamilies& idx) {
    for (const auto& [g, fam] : idx.by_base) {
        FiberSet inv_fam;
        for (const GroupElement& n : fam) inv_fam.insert(inverse(n));
        FiberSet image;
        auto opp = idx.by_base.find(inverse(g));
        if (opp != idx.by_base.end()) {
            for (const GroupElement& n : opp->second) {
                image.insert(apply_action(xspec, g, n));
            }
        }
        for (const GroupElement& n : image) {
            if (inv_fam.find(n) == inv_fam.end()) return std::make_pair(g, n);
        }
        for (const GroupElement& n : inv_fam) {
            if (image.find(n) == image.end()) return std::make_pair(g, n);
        }
    }
    return std::nullopt;
}

using CountMap = std::map<GroupElement, long long, ElementLess>;

CountMap factorization_counts(const GroupSpec& xspec, const FiberSet& left,
                              const GroupElement& g1, const FiberSet& right) {
    CountMap out;
    for (const GroupElement& n1 : left) {
        for (const GroupElement& n2 : right) {
            ++out[multiply(n1, apply_action(xspec, g1, n2))];
        }
    }
    return out;
}

// First (g1, g2, m) violating the factorization-count symmetry, if any.
std::optional<std::tuple<GroupElement, GroupElement, GroupElement>> counting_witness(
    const GroupSpec& xspec, const IndexedFamilies& idx) {
    for (auto it1 = idx.by_base.begin(); it1 != idx.by_base.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != idx.by_base.end(); ++it2) {
            CountMap lhs = factorization_counts(xspec, it1->second, it1->first, it2->second);
            CountMap rhs = factorization_counts(xspec, it2->second, it2->first, it1->second);
            auto lit = lhs.begin();
            auto rit = rhs.begin();
            while (lit != lhs.end() || rit != rhs.end()) {
                if (rit == rhs.end()) return std::make_tuple(it1->first, it2->first, lit->first);
                if (lit == lhs.end()) return std::make_tuple(it1->first, it2->first, rit->first);
                int cmp = compare(lit->first, rit->first);
                if (cmp < 0) return std::make_tuple(it1->first, it2->first, lit->first);
                if (cmp > 0) return std::make_tuple(it1->first, it2->first, rit->first);
                if (lit->second != rit->second) {
                    return std::make_tuple(it1->first, it2->first, lit->first);
                }
                ++lit;
                ++rit;
            }
        }
    }
    return std::nullopt;
}

Tristate torsion_support(const Measure& mu, std::string* witness) {
    bool unknown = false;
    for (const auto& [x, c] : mu.coeffs()) {
        (void)c;
        Tristate t = in_compact_part(x);
        if (t == Tristate::False) {
            if (witness) *witness = format_element(x);
            return Tristate::False;
        }
        if (t == Tristate::Unknown) {
            if (witness && witness->empty()) *witness = format_element(x);
            unknown = true;
        }
    }
    return unknown ? Tristate::Unknown : Tristate::True;
}

}  // namespace

bool semidirect_commutation_check(const Measure& a0) {
    if (a0.spec().kind() != GroupKind::Semidirect) {
        throw SpecMismatchError("commutation check requires a measure on a semidirect product");
    }
    if (!is_selfadjoint(a0)) {
        throw ValidationError("commutation check requires a self-adjoint measure");
    }
    return commutation_condition_raw(a0);
}

bool pair_count_check(const SymmetricSetData& data) {
    validate_structure(data);
    IndexedFamilies idx = index_families(data);
    if (auto g = symmetry_witness(idx)) {
        throw ValidationError("g0 is not symmetric: the inverse of " + format_element(*g) +
                              " is missing");
    }
    if (auto w = tau_witness(data.xspec, idx)) {
        throw ValidationError("fiber families are not action-compatible: witness (" +
                              format_element(w->first) + ", " + format_element(w->second) + ")");
    }
    return !counting_witness(data.xspec, idx).has_value();
}

SymmetricSetDiagnostics symmetric_set_validate(const SymmetricSetData& data) {
    validate_structure(data);
    IndexedFamilies idx = index_families(data);
    SymmetricSetDiagnostics diag;

    auto sym = symmetry_witness(idx);
    diag.g0_symmetric = !sym.has_value();
    auto tau = tau_witness(data.xspec, idx);
    diag.tau_compatible = !tau.has_value();
    auto cnt = counting_witness(data.xspec, idx);
    diag.counting_condition = !cnt.has_value();

    bool unknown = false;
    bool found_noncompact = false;
    for (const GroupElement& g : data.g0) {
        Tristate t = in_compact_part(g);
        if (t == Tristate::False) {
            found_noncompact = true;
            break;
        }
        if (t == Tristate::Unknown) unknown = true;
    }
    diag.noncompact_reach =
        found_noncompact ? Tristate::True : (unknown ? Tristate::Unknown : Tristate::False);

    diag.all_pass = diag.g0_symmetric && diag.tau_compatible && diag.counting_condition &&
                    diag.noncompact_reach == Tristate::True;

    if (sym) {
        diag.failure = "g0 is not symmetric: the inverse of " + format_element(*sym) +
                       " is missing";
    } else if (tau) {
        diag.failure = "fiber families are not action-compatible: witness (" +
                       format_element(tau->first) + ", " + format_element(tau->second) + ")";
    } else if (cnt) {
        diag.failure = "factorization counts differ for bases (" +
                       format_element(std::get<0>(*cnt)) + ", " + format_element(std::get<1>(*cnt)) +
                       ") at " + format_element(std::get<2>(*cnt));
    } else if (diag.noncompact_reach == Tristate::False) {
        diag.failure = "every g0 element has finite order, so the set stays in the torsion part";
    } else if (diag.noncompact_reach == Tristate::Unknown) {
        diag.failure = "could not decide whether some g0 element has infinite order";
    }
    return diag;
}

Measure symmetric_set_indicator(const SymmetricSetData& data) {
    validate_structure(data);
    IndexedFamilies idx = index_families(data);
    if (auto g = symmetry_witness(idx)) {
        throw ValidationError("cannot build the indicator: g0 is not symmetric, the inverse of " +
                              format_element(*g) + " is missing");
    }
    if (auto w = tau_witness(data.xspec, idx)) {
        throw ValidationError("cannot build the indicator: witness (" + format_element(w->first) +
                              ", " + format_element(w->second) +
                              ") violates action-compatibility");
    }
    Measure out = Measure::zero(data.xspec);
    for (std::size_t i = 0; i < data.g0.size(); ++i) {
        for (const GroupElement& n : data.families[i]) {
            out.set(make_pair_element(data.xspec, n, data.g0[i]), ComplexRational(1));
        }
    }
    return out;
}

AcComponentReport ac_component_report(const Measure& a0, const Measure& a1, AcRoute route) {
    if (!a0.spec().same_as(a1.spec())) {
        throw SpecMismatchError("the two measures must live on the same group");
    }
    if (route == AcRoute::Semidirect && a0.spec().kind() != GroupKind::Semidirect) {
        throw SpecMismatchError("the commutation route requires a semidirect product group");
    }

    AcComponentReport rep;
    rep.route = route;
    rep.a0_selfadjoint = is_selfadjoint(a0);
    rep.a1_selfadjoint = is_selfadjoint(a1);
    if (!rep.a0_selfadjoint) rep.failures.push_back("a0 is not self-adjoint");
    if (!rep.a1_selfadjoint) rep.failures.push_back("a1 is not self-adjoint");

    bool structural = false;
    if (route == AcRoute::Semidirect) {
        rep.commutation_condition = commutation_condition_raw(a0);
        if (!rep.commutation_condition) {
            rep.failures.push_back("a0 fails the twisted commutation condition");
        }
        Measure left = convolve(a1, a0);
        Measure right = convolve(a0, a1);
        rep.a1_commutes_with_a0 = (left == right);
        if (!rep.a1_commutes_with_a0) rep.failures.push_back("a1 does not commute with a0");
        structural = rep.commutation_condition && rep.a1_commutes_with_a0;
    } else {
        rep.a0_central = is_central(a0);
        if (!rep.a0_central) rep.failures.push_back("a0 is not central");
        structural = rep.a0_central;
    }

    std::string witness;
    rep.a1_torsion_supported = torsion_support(a1, &witness);
    if (rep.a1_torsion_supported == Tristate::False) {
        rep.failures.push_back("supp(a1) leaves the torsion-generated part: witness " + witness);
    } else if (rep.a1_torsion_supported == Tristate::Unknown) {
        rep.failures.push_back("membership of " + witness +
                               " in the torsion-generated part is undecided");
    }

    rep.hypotheses_pass = rep.a0_selfadjoint && rep.a1_selfadjoint && structural &&
                          rep.a1_torsion_supported == Tristate::True;

    CharacterSpace space = character_space(a0.spec());
    for (std::size_t i = 0; i < space.basis.size(); ++i) {
        if (!multiply_by_character(space.basis[i], 1, a0).is_zero()) {
            rep.nonzero_directions.push_back(i);
        }
    }
    rep.ac_component_guaranteed = rep.hypotheses_pass && !rep.nonzero_directions.empty();
    if (rep.hypotheses_pass && rep.nonzero_directions.empty()) {
        rep.failures.push_back("every basis character annihilates a0");
    }
    return rep;
}

}  // namespace convspec
