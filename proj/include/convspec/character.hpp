#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "convspec/group.hpp"
#include "convspec/measure.hpp"
#include "convspec/rational.hpp"

namespace convspec {

// Rational-valued morphism of the group into the reals, represented by one
// weight per free direction of the constructor tree (lattice coordinates,
// free-group letters via exponent sums; finite constructors contribute
// nothing; semidirect products expose only the base directions, so every
// character factors through the projection onto the base).
class RealCharacter {
  public:
    RealCharacter(GroupSpec spec, std::vector<mpq_class> weights);

    const GroupSpec& spec() const { return spec_; }
    const std::vector<mpq_class>& weights() const { return weights_; }
    bool is_zero() const;

  private:
    GroupSpec spec_;
    std::vector<mpq_class> weights_;
};

struct CharacterSpace {
    GroupSpec spec;
    std::vector<RealCharacter> basis;

    std::size_t dimension() const { return basis.size(); }
};

// Number of free directions the constructor exposes (= dim of the space of
// characters representable here).
std::size_t free_direction_count(const GroupSpec& spec);

// Basis of coordinate characters, one per free direction, in constructor
// tree pre-order.
CharacterSpace character_space(const GroupSpec& spec);

mpq_class evaluate(const RealCharacter& phi, const GroupElement& x);

// (Phi^k mu)(x) = Phi(x)^k mu(x); k >= 1.
Measure multiply_by_character(const RealCharacter& phi, int k, const Measure& mu);

// (Phi mu) * mu == mu * (Phi mu); requires mu self-adjoint.
bool is_semi_adapted(const RealCharacter& phi, const Measure& mu);
// Semi-adapted and (Phi mu) * (Phi^2 mu) == (Phi^2 mu) * (Phi mu).
bool is_adapted(const RealCharacter& phi, const Measure& mu);

// -i (Phi mu): the measure of the commutator of the operator with the
// character; self-adjoint whenever mu is.
Measure commutator_measure(const RealCharacter& phi, const Measure& mu);
// -(Phi^2 mu).
Measure double_commutator_measure(const RealCharacter& phi, const Measure& mu);

// Phi(mu * f) == (Phi mu) * f + mu * (Phi f), exact; holds universally, so
// a failure indicates an implementation bug.
bool derivation_identity_check(const RealCharacter& phi, const Measure& mu, const Measure& f);

struct AcCriterionResult {
    bool applicable = false;
    mpq_class constant;      // value of Phi^2 on the support when applicable
    std::string conclusion;  // consequence or reason for non-applicability
};

// Applicable iff Phi^2 is a single nonzero value on supp(mu); requires mu
// self-adjoint and adapted. When applicable the spectrum is purely
// absolutely continuous apart from a possible eigenvalue at zero.
AcCriterionResult purely_ac_criterion(const RealCharacter& phi, const Measure& mu);

struct KernelChainReport {
    ComplexRational lambda;                 // eigenvalue of f, exact
    std::vector<bool> annihilated;          // per character: (Phi mu) * f == 0
    bool all_annihilated = true;
};

// Checks mu * f == lambda f exactly (error if f is not an eigenvector),
// then verifies (Phi mu) * f == 0 for each supplied character.
KernelChainReport kernel_chain_witness(const Measure& mu, const Measure& f,
                                       const std::vector<RealCharacter>& phis);

}  // namespace convspec
