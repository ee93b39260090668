#pragma once

#include <complex>
#include <string>
#include <vector>

#include "convspec/character.hpp"
#include "convspec/group.hpp"
#include "convspec/measure.hpp"

namespace convspec {

// Dual description of an abelian constructor: one slot per lattice
// coordinate (modulus 0, dual parameter an angle on the torus) and one per
// cyclic factor (modulus n, dual parameter a residue character). Slot order
// matches abelian_coordinates.
struct DualStructure {
    GroupSpec spec;
    std::vector<long long> moduli;

    std::size_t torus_dimensions() const;
    bool finite() const;  // no torus slots
};

// Throws for constructors that are not built from IntLattice, Cyclic, and
// DirectProduct.
DualStructure dual_structure(const GroupSpec& spec);

// One angle per slot; a cyclic slot with residue k out of n carries the
// angle 2 pi k / n. The pairing is <x, xi> = exp(i sum_s coord_s angle_s).
struct DualPoint {
    std::vector<double> angles;
};

DualPoint dual_point_from_residues(const DualStructure& dual,
                                   const std::vector<long long>& residues);

// All residue tuples of a finite dual (every slot cyclic), odometer order.
std::vector<std::vector<long long>> enumerate_finite_duals(const DualStructure& dual,
                                                           std::size_t cap = kDefaultBallCap);

// m(xi) = sum_x mu(x) conj(<x, xi>), a finite sum in double precision.
std::complex<double> symbol_eval(const Measure& mu, const DualPoint& xi);

// Direction vector of the one-parameter dual subgroup attached to a real
// character: the character weights on torus slots, zero on cyclic slots.
std::vector<double> character_direction(const DualStructure& dual, const RealCharacter& phi);

struct DerivativeRow {
    double h = 0.0;
    std::complex<double> fd;  // central difference of the symbol at step h
    double err = 0.0;         // |fd - target|
};

struct DerivativeReport {
    std::complex<double> target;  // -i times the symbol of (Phi mu) at xi
    std::vector<DerivativeRow> rows;
    double slope = 0.0;  // least-squares slope of log err against log h
    bool order_confirmed = false;
};

// Central finite differences of t -> m(xi + t phi) at t = 0 against the
// exact directional derivative computed upstream from Phi mu. Second-order
// convergence (slope >= 1.9) confirms the identity; errors already at
// rounding level (< 1e-12 throughout) count as confirmed too.
DerivativeReport derivative_identity_check(const Measure& mu, const RealCharacter& phi,
                                           const DualPoint& xi,
                                           std::vector<double> h_schedule = {});

struct ScanOptions {
    std::size_t grid = 4096;  // samples per torus dimension
    int flat_window = 8;      // consecutive samples that constitute a patch
    double flat_tol = 1e-12;
    std::size_t dual_cap = kDefaultBallCap;  // finite dual enumeration limit
};

struct PointSpectrumValue {
    std::complex<double> value;
    // Exact scans: number of dual characters taking this symbol value.
    // Grid scans: number of samples covered by flat patches at this value.
    long long multiplicity = 0;
    bool exact = false;
};

struct ScanFindings {
    bool exact = false;
    std::vector<PointSpectrumValue> values;
    std::string note;
};

// Candidate point spectrum of the multiplication operator by the symbol.
// Finite duals are enumerated exactly; torus directions (at most two) are
// grid-sampled and only constant patches are reported, as a heuristic.
ScanFindings point_spectrum_scan(const Measure& mu, const ScanOptions& opts = {});

struct DualSpectrumReport {
    bool m0_selfadjoint = false;
    bool m1_selfadjoint = false;
    bool torsion_hypothesis = false;  // supp(m1) inside the torsion part
    bool hypotheses_pass = false;
    std::vector<std::size_t> nonzero_directions;  // basis phi with Phi m0 != 0
    bool constraint_available = false;
    std::string conclusion;
    std::vector<std::string> failures;
};

// Exact hypothesis check for the point-spectrum constraint on a sum of two
// measures on an abelian group: when the perturbation is torsion-supported
// and both parts are self-adjoint, every point eigenvector of the sum is
// annihilated by the directional derivative of the main symbol along every
// dual direction, so nonvanishing directions constrain the point spectrum.
DualSpectrumReport dual_spectrum_report(const Measure& m0, const Measure& m1);

}  // namespace convspec
