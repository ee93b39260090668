#include "convspec/runner.hpp"

namespace convspec {

// Raw JSON text rather than built objects so `convspec examples --write`
// emits files a user can edit and re-run unchanged.
const std::vector<BundledExample>& bundled_examples() {
    static const std::vector<BundledExample> examples = {
        {"identity_walk",
         "point mass at the identity of Z: flat symbol, no usable direction",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "IntLattice", "dim": 1},
  "measures": {
    "unit": [{"element": "0"}]
  },
  "characters": "auto",
  "tasks": [
    {"type": "check", "name": "unit_checks", "measure": "unit",
     "required": ["selfadjoint", "central"]},
    {"type": "spectrum", "name": "unit_spectrum", "measure": "unit"},
    {"type": "fourier", "name": "unit_fourier", "measure": "unit", "dual_points": 8}
  ],
  "parameters": {"grid": 512},
  "output": {"directory": "out/identity_walk"}
})json"},
        {"subgroup_eigenvector",
         "C2 x Z with a point mass on the torsion generator and the subgroup "
         "indicator it fixes",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "DirectProduct",
            "left": {"constructor": "Cyclic", "n": 2},
            "right": {"constructor": "IntLattice", "dim": 1}},
  "measures": {
    "mu": [{"element": "(1|0)"}],
    "chi_y": {"indicator": ["(0|0)", "(1|0)"]}
  },
  "characters": "auto",
  "tasks": [
    {"type": "check", "name": "fixed_vector", "measure": "mu", "eigenvector": "chi_y",
     "required": ["selfadjoint", "eigenvector_annihilated"]},
    {"type": "spectrum", "name": "mu_spectrum", "measure": "mu"},
    {"type": "fourier", "name": "mu_fourier", "measure": "mu", "dual_points": 8}
  ],
  "parameters": {"grid": 512},
  "output": {"directory": "out/subgroup_eigenvector"}
})json"},
        {"class_sums",
         "S3 x Z walk built from transpositions at steps -1 and 1, compared "
         "against the conjugacy class sums",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "DirectProduct",
            "left": {"constructor": "Symmetric", "n": 3},
            "right": {"constructor": "IntLattice", "dim": 1}},
  "measures": {
    "walk": {"indicator": ["(a|-1)", "(b|-1)", "(a b a|-1)",
                            "(a|1)", "(b|1)", "(a b a|1)"]},
    "e2_here": {"conjugacy_class_indicator": "(a|0)"},
    "e3_here": {"conjugacy_class_indicator": "(a b|0)"}
  },
  "characters": "auto",
  "tasks": [
    {"type": "check", "name": "walk_checks", "measure": "walk",
     "required": ["selfadjoint", "central", "semi_adapted", "adapted", "purely_ac"]},
    {"type": "check", "name": "e2_checks", "measure": "e2_here",
     "required": ["selfadjoint", "central"]},
    {"type": "check", "name": "e3_checks", "measure": "e3_here",
     "required": ["selfadjoint", "central"]},
    {"type": "semidirect", "name": "central_route", "measure": "walk",
     "perturbation": "e2_here", "route": "central",
     "required": ["central", "hypotheses", "ac_component"]},
    {"type": "spectrum", "name": "walk_spectrum", "measure": "walk"},
    {"type": "report", "name": "summary"}
  ],
  "output": {"directory": "out/class_sums"}
})json"},
        {"s3_semidirect_z",
         "S3 twisted by the shift conjugation on Z, driven by the four-element "
         "symmetric set over steps -1 and 1",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "Semidirect",
            "fiber": {"constructor": "Symmetric", "n": 3},
            "base": {"constructor": "IntLattice", "dim": 1},
            "action": {"kind": "conjugation_by", "element": "a"}},
  "measures": {
    "chi_s": {"indicator": ["(a|-1)", "(a b a|-1)", "(a|1)", "(b|1)"]}
  },
  "characters": "auto",
  "symmetric_set": {
    "G0": ["-1", "1"],
    "families": {"-1": ["a", "a b a"], "1": ["a", "b"]}
  },
  "tasks": [
    {"type": "check", "name": "chi_checks", "measure": "chi_s",
     "required": ["selfadjoint", "semi_adapted", "adapted", "purely_ac"]},
    {"type": "semidirect", "name": "commutation_route", "measure": "chi_s",
     "route": "commutation",
     "required": ["set_valid", "commutation", "pair_counts", "hypotheses", "ac_component"]},
    {"type": "spectrum", "name": "chi_spectrum", "measure": "chi_s"},
    {"type": "moments", "name": "chi_moments", "measure": "chi_s", "nmax": 6},
    {"type": "report", "name": "summary"}
  ],
  "output": {"directory": "out/s3_semidirect_z"}
})json"},
        {"wreath_shift",
         "three C2 coordinates cycled by Z, with the all-ones fiber element at "
         "steps -1 and 1",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "WreathLite",
            "factor": {"constructor": "Cyclic", "n": 2},
            "copies": 3,
            "base": {"constructor": "IntLattice", "dim": 1},
            "permutations": [[1, 2, 0]]},
  "measures": {
    "chi_s": {"indicator": ["((1|(1|1))|-1)", "((1|(1|1))|1)"]}
  },
  "characters": "auto",
  "symmetric_set": {
    "G0": ["-1", "1"],
    "families": {"-1": ["(1|(1|1))"], "1": ["(1|(1|1))"]}
  },
  "tasks": [
    {"type": "check", "name": "chi_checks", "measure": "chi_s",
     "required": ["selfadjoint", "semi_adapted", "adapted", "purely_ac"]},
    {"type": "semidirect", "name": "commutation_route", "measure": "chi_s",
     "route": "commutation",
     "required": ["set_valid", "commutation", "pair_counts", "hypotheses", "ac_component"]},
    {"type": "spectrum", "name": "chi_spectrum", "measure": "chi_s"}
  ],
  "output": {"directory": "out/wreath_shift"}
})json"},
        {"free_pair_swap",
         "free group on two letters with the swap action of Z, all four "
         "generator directions at steps -1 and 1",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "Semidirect",
            "fiber": {"constructor": "FreeGroup", "rank": 2},
            "base": {"constructor": "IntLattice", "dim": 1},
            "action": {"kind": "generator_images", "images": [["b", "a"]]}},
  "measures": {
    "chi_s": {"indicator": ["(a|-1)", "(a^-1|-1)", "(b|-1)", "(b^-1|-1)",
                             "(a|1)", "(a^-1|1)", "(b|1)", "(b^-1|1)"]}
  },
  "characters": "auto",
  "symmetric_set": {
    "G0": ["-1", "1"],
    "families": {"-1": ["a", "a^-1", "b", "b^-1"],
                 "1": ["a", "a^-1", "b", "b^-1"]}
  },
  "tasks": [
    {"type": "check", "name": "chi_checks", "measure": "chi_s",
     "required": ["selfadjoint", "semi_adapted", "adapted", "purely_ac"]},
    {"type": "semidirect", "name": "commutation_route", "measure": "chi_s",
     "route": "commutation",
     "required": ["set_valid", "commutation", "pair_counts", "hypotheses", "ac_component"]},
    {"type": "spectrum", "name": "chi_spectrum", "measure": "chi_s",
     "radii": [1, 2, 3]}
  ],
  "parameters": {"radii": [1, 2, 3]},
  "output": {"directory": "out/free_pair_swap"}
})json"},
        {"z_free_walk",
         "simple walk on Z: every exact certificate available, tridiagonal "
         "truncations, arcsine-shaped symbol",
         R"json({
  "schema": "convspec-config/1",
  "group": {"constructor": "IntLattice", "dim": 1},
  "measures": {
    "walk": {"indicator": ["-1", "1"]}
  },
  "characters": "auto",
  "tasks": [
    {"type": "check", "name": "walk_checks", "measure": "walk",
     "required": ["selfadjoint", "central", "semi_adapted", "adapted", "purely_ac"]},
    {"type": "spectrum", "name": "walk_spectrum", "measure": "walk"},
    {"type": "moments", "name": "walk_moments", "measure": "walk", "nmax": 8},
    {"type": "fourier", "name": "walk_fourier", "measure": "walk", "dual_points": 12},
    {"type": "report", "name": "summary"}
  ],
  "output": {"directory": "out/z_free_walk"}
})json"},
    };
    return examples;
}

}  // namespace convspec
