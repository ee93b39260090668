#pragma once

#include <string>
#include <vector>

#include "convspec/character.hpp"
#include "convspec/group.hpp"
#include "convspec/measure.hpp"

namespace convspec {

// Data for a symmetric generating set of a semidirect product: a finite
// symmetric subset g0 of the base plus one finite fiber family per base
// element, defining S as the union of N_g x {g}.
struct SymmetricSetData {
    GroupSpec xspec;  // the semidirect product group
    std::vector<GroupElement> g0;
    std::vector<std::vector<GroupElement>> families;  // aligned with g0
};

// Exact verification of the weighted commutation condition on a semidirect
// product: for all base elements g1, g2 and every fiber element m,
//   sum over {m = n1 tau_{g1}(n2)} of a0(n1,g1) a0(n2,g2)
//   equals
//   sum over {m = n1 tau_{g2}(n2)} of a0(n1,g2) a0(n2,g1).
// Only the finitely many pairs with both fibers meeting supp(a0) can
// contribute; outside them both sides vanish. Requires a0 self-adjoint on a
// semidirect spec.
bool semidirect_commutation_check(const Measure& a0);

// Counting form of the same condition for indicator data: the number of
// factorizations m = n1 tau_{g1}(n2) over N_{g1} x N_{g2} is symmetric in
// (g1, g2) for every m. Requires the data invariants (validated; throws).
bool pair_count_check(const SymmetricSetData& data);

struct SymmetricSetDiagnostics {
    bool g0_symmetric = false;      // g0 = -g0
    bool tau_compatible = false;    // tau_g(N_{-g}) = N_g^{-1} for each g
    bool counting_condition = false;
    // Some g0 element lies outside the torsion part of the base.
    Tristate noncompact_reach = Tristate::Unknown;
    bool all_pass = false;  // the three checks plus noncompact_reach == True
    std::string failure;    // first violated condition with its witness
};

SymmetricSetDiagnostics symmetric_set_validate(const SymmetricSetData& data);

// chi_S for S = union of N_g x {g}. Throws when the symmetry invariants
// (g0 = -g0, tau_g(N_{-g}) = N_g^{-1}) fail, naming a witness; the
// resulting measure is always self-adjoint.
Measure symmetric_set_indicator(const SymmetricSetData& data);

// Which set of hypotheses an absolute-continuity report verifies: the
// semidirect commutation route or the central-measure route. They are
// genuinely different (the central route does not need a1 to commute with
// a0), so the caller picks one explicitly.
enum class AcRoute { Semidirect, Central };

struct AcComponentReport {
    AcRoute route = AcRoute::Semidirect;
    bool a0_selfadjoint = false;
    bool a1_selfadjoint = false;
    bool commutation_condition = false;  // semidirect route
    bool a1_commutes_with_a0 = false;    // semidirect route
    bool a0_central = false;             // central route
    Tristate a1_torsion_supported = Tristate::Unknown;
    bool hypotheses_pass = false;
    // Indices of basis characters with (Phi a0) != 0.
    std::vector<std::size_t> nonzero_directions;
    bool ac_component_guaranteed = false;
    std::vector<std::string> failures;
};

// Verifies the hypotheses of the selected route exactly and flags a
// guaranteed nontrivial absolutely continuous component when they pass and
// some basis character does not annihilate a0.
AcComponentReport ac_component_report(const Measure& a0, const Measure& a1, AcRoute route);

}  // namespace convspec
