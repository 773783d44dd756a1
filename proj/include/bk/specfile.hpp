#pragma once
// Line-oriented spec files: "key: value" pairs, '#' comments, bracketed
// integer lists.  One format feeds three consumers — potential expansion,
// normal-form input, and the radial CP^1 models — so every field is
// optional here and each to_*() accessor enforces its own requirements.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bk/bergman.hpp"
#include "bk/models.hpp"

namespace bk {

// Parse failure with the 1-based source line; what() reads "line N: msg".
class SpecParseError : public std::runtime_error {
public:
    SpecParseError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_ = 0;
};

struct SpecFileData {
    // potential section
    std::optional<int> n, dz, dc, dp;
    std::vector<Perturbation> perts;
    std::vector<std::pair<std::string, std::string>> conjugates;
    // normal-form section
    std::optional<std::string> potential;  // "fubini_study" or "jet"
    std::optional<int> up_to;
    // radial model section
    std::optional<std::string> model;  // "fubini_study" or "perturbed"
    std::optional<Q> epsilon;
    std::optional<int> min_nodes;

    // Validated PotentialSpec with the conjugation involution resolved from
    // the declared symbol names.  Throws std::invalid_argument when n, dz or
    // dc is missing or the data fails the potential-spec invariants.
    PotentialSpec to_potential_spec() const;

    // Radial profile for the CP^1 models; requires a model section.
    RadialMetricSpec to_radial_spec() const;

    // Potential jet for normalization: either the Fubini-Study expansion or
    // the declared perturbation terms over |z|^2.  Terms with numeric
    // coefficients need no symbol ring; any named coefficient requires dc.
    BiSeries bochner_input() const;
    int bochner_up_to() const;          // up_to, defaulting to dz
    std::vector<int> bochner_perm() const;  // involution over symbolic terms
    std::vector<std::string> bochner_names() const;
};

SpecFileData parse_spec_text(const std::string& text);
SpecFileData parse_spec_file(const std::string& path);

}  // namespace bk
