#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "convspec/character.hpp"
#include "convspec/group.hpp"
#include "convspec/measure.hpp"
#include "convspec/semidirect.hpp"
#include "convspec/spectral.hpp"

namespace convspec {

// One batch job step. Which fields matter depends on the type:
//   check       measure, optional eigenvector, required
//   spectrum    measure, optional radii override
//   moments     measure, optional radii/nmax override
//   fourier     measure, optional perturbation, dual_points, scan, required
//   semidirect  measure (a0; defaults to the symmetric-set indicator),
//               optional perturbation (a1), route, required
//   report      no fields; prints a summary of everything so far
struct TaskSpec {
    std::string type;
    std::string name;
    std::string measure;
    std::string perturbation;
    std::string eigenvector;
    std::string route;  // "commutation", "central", or empty for automatic
    std::vector<std::string> required;
    std::vector<int> radii;
    int nmax = -1;
    int dual_points = 20;
    bool scan = true;
};

struct Parameters {
    std::vector<int> radii = {4, 6, 8};
    std::size_t ball_cap = kDefaultBallCap;
    std::size_t support_cap = kDefaultSupportCap;
    std::size_t dense_cap = kDefaultDenseCap;
    double cluster_tol = kDefaultClusterTol;
    double kernel_tol = 0.0;  // <= 0 selects the per-measure default
    std::size_t grid = 4096;
    std::uint64_t seed = 20240817;
};

struct OutputSpec {
    std::string directory = "out";
    bool json = true;
    bool csv = true;
};

struct AnalysisConfig {
    GroupSpec group;
    // Name -> measure, insertion order preserved for deterministic reports.
    std::vector<std::pair<std::string, Measure>> measures;
    bool characters_auto = true;
    std::vector<RealCharacter> characters;
    std::optional<SymmetricSetData> symmetric_set;
    std::vector<TaskSpec> tasks;
    Parameters parameters;
    OutputSpec output;
    std::string source_text;  // raw config text, hashed into provenance

    const Measure* find_measure(const std::string& name) const;
};

// Parses and validates a JSON config. Throws ParseError for malformed JSON
// or element literals and ValidationError for structural problems; messages
// carry the offending field path.
AnalysisConfig parse_config_text(const std::string& text);
AnalysisConfig parse_config_file(const std::string& path);

}  // namespace convspec
