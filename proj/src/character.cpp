#include "convspec/character.hpp"

namespace convspec {

std::size_t free_direction_count(const GroupSpec& spec) {
    switch (spec.kind()) {
        case GroupKind::IntLattice:
            return static_cast<std::size_t>(spec.lattice_dim());
        case GroupKind::Cyclic:
        case GroupKind::Symmetric:
            return 0;
        case GroupKind::FreeGroup:
            return static_cast<std::size_t>(spec.free_rank());
        case GroupKind::DirectProduct:
            return free_direction_count(spec.left()) + free_direction_count(spec.right());
        case GroupKind::Semidirect:
            return free_direction_count(spec.base());
    }
    return 0;
}

RealCharacter::RealCharacter(GroupSpec spec, std::vector<mpq_class> weights)
    : spec_(std::move(spec)), weights_(std::move(weights)) {
    std::size_t want = free_direction_count(spec_);
    if (weights_.size() != want)
        throw ValidationError("character needs " + std::to_string(want) + " weights, got " +
                              std::to_string(weights_.size()));
    for (auto& w : weights_) w.canonicalize();
}

bool RealCharacter::is_zero() const {
    for (const auto& w : weights_)
        if (w != 0) return false;
    return true;
}

CharacterSpace character_space(const GroupSpec& spec) {
    CharacterSpace cs;
    cs.spec = spec;
    std::size_t d = free_direction_count(spec);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<mpq_class> w(d, mpq_class(0));
        w[i] = 1;
        cs.basis.emplace_back(spec, std::move(w));
    }
    return cs;
}

namespace {

// Accumulates the character value; `off` walks the weight vector in the
// same pre-order as free_direction_count.
void eval_rec(const std::vector<mpq_class>& w, std::size_t off, const GroupElement& x,
              mpq_class& acc) {
    switch (x.spec.kind()) {
        case GroupKind::IntLattice: {
            const auto& c = x.coords();
            for (std::size_t i = 0; i < c.size(); ++i)
                acc += w[off + i] * mpq_class(static_cast<long>(c[i]));
            break;
        }
        case GroupKind::Cyclic:
        case GroupKind::Symmetric:
            break;
        case GroupKind::FreeGroup: {
            for (const auto& [letter, exp] : x.word())
                acc += w[off + static_cast<std::size_t>(letter)] *
                       mpq_class(static_cast<long>(exp));
            break;
        }
        case GroupKind::DirectProduct:
            eval_rec(w, off, x.pair_left(), acc);
            eval_rec(w, off + free_direction_count(x.spec.left()), x.pair_right(), acc);
            break;
        case GroupKind::Semidirect:
            eval_rec(w, off, x.pair_right(), acc);
            break;
    }
}

}  // namespace

mpq_class evaluate(const RealCharacter& phi, const GroupElement& x) {
    if (!phi.spec().same_as(x.spec))
        throw SpecMismatchError("character evaluated on an element of a different group");
    mpq_class acc = 0;
    eval_rec(phi.weights(), 0, x, acc);
    acc.canonicalize();
    return acc;
}

Measure multiply_by_character(const RealCharacter& phi, int k, const Measure& mu) {
    if (k < 1) throw ValidationError("multiply_by_character needs k >= 1");
    Measure out(mu.spec());
    for (const auto& [x, c] : mu.coeffs()) {
        mpq_class v = evaluate(phi, x);
        mpq_class p = 1;
        for (int i = 0; i < k; ++i) p *= v;
        out.set(x, ComplexRational(p) * c);
    }
    return out;
}

bool is_semi_adapted(const RealCharacter& phi, const Measure& mu) {
    if (!is_selfadjoint(mu))
        throw ValidationError("semi-adapted test requires a self-adjoint measure");
    Measure pm = multiply_by_character(phi, 1, mu);
    return convolve(pm, mu) == convolve(mu, pm);
}

bool is_adapted(const RealCharacter& phi, const Measure& mu) {
    if (!is_semi_adapted(phi, mu)) return false;
    Measure pm = multiply_by_character(phi, 1, mu);
    Measure ppm = multiply_by_character(phi, 2, mu);
    return convolve(pm, ppm) == convolve(ppm, pm);
}

Measure commutator_measure(const RealCharacter& phi, const Measure& mu) {
    return scale(ComplexRational(mpq_class(0), mpq_class(-1)),
                 multiply_by_character(phi, 1, mu));
}

Measure double_commutator_measure(const RealCharacter& phi, const Measure& mu) {
    return -multiply_by_character(phi, 2, mu);
}

bool derivation_identity_check(const RealCharacter& phi, const Measure& mu, const Measure& f) {
    Measure lhs = multiply_by_character(phi, 1, convolve(mu, f));
    Measure rhs = convolve(multiply_by_character(phi, 1, mu), f) +
                  convolve(mu, multiply_by_character(phi, 1, f));
    return lhs == rhs;
}

AcCriterionResult purely_ac_criterion(const RealCharacter& phi, const Measure& mu) {
    if (!is_adapted(phi, mu))
        throw ValidationError("criterion requires an adapted character for the measure");
    AcCriterionResult r;
    bool first = true;
    bool constant = true;
    for (const auto& [x, c] : mu.coeffs()) {
        mpq_class v = evaluate(phi, x);
        mpq_class v2 = v * v;
        if (first) {
            r.constant = v2;
            first = false;
        } else if (v2 != r.constant) {
            constant = false;
            break;
        }
    }
    if (first) {
        r.applicable = false;
        r.conclusion = "not applicable: the measure is zero";
    } else if (!constant) {
        r.applicable = false;
        r.conclusion = "not applicable: the squared character is not constant on the support";
    } else if (r.constant == 0) {
        r.applicable = false;
        r.conclusion = "not applicable: the squared character vanishes on the support";
    } else {
        r.applicable = true;
        r.conclusion =
            "spectrum is purely absolutely continuous apart from a possible eigenvalue at zero; "
            "the zero eigenspace coincides with the kernel of the commutator operator";
    }
    return r;
}

KernelChainReport kernel_chain_witness(const Measure& mu, const Measure& f,
                                       const std::vector<RealCharacter>& phis) {
    if (f.is_zero()) throw ValidationError("kernel chain witness: f must be nonzero");
    if (!mu.spec().same_as(f.spec()))
        throw SpecMismatchError("kernel chain witness: measures on different groups");
    Measure g = convolve(mu, f);
    const auto& [x0, f0] = *f.coeffs().begin();
    ComplexRational lambda = g.at(x0) / f0;
    if (!(g == scale(lambda, f)))
        throw ValidationError("kernel chain witness: f is not an exact eigenvector");
    KernelChainReport rep;
    rep.lambda = lambda;
    for (const auto& phi : phis) {
        bool zero = convolve(multiply_by_character(phi, 1, mu), f).is_zero();
        rep.annihilated.push_back(zero);
        if (!zero) rep.all_annihilated = false;
    }
    return rep;
}

}  // namespace convspec
