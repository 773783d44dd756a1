#pragma once
// Deterministic report rendering.  JSON output nests rows under their
// (S, T) key; CSV output is flat with one header line.  Rational values
// are always decimal "p/q" strings — floats appear only in the numeric
// CP^1 tables.

#include <optional>
#include <string>
#include <vector>

#include "bk/bergman.hpp"
#include "bk/bochner.hpp"

namespace bk {

// Display form of a symbol monomial: "1", "c1", "a^2*b".
std::string monomial_str(const MI& e, const std::vector<std::string>& names);

// Full K_m coefficient table keyed (S, T, mu exponent, c-monomial) plus the
// per-key convergence verdicts.  Unstable keys stay in the table, flagged.
// cross_check, when present, records the combinatorial-pipeline comparison.
std::string bergman_report_json(const PotentialSpec& spec, const BiSeries& Km,
                                const ConvergenceReport& rep,
                                std::optional<bool> cross_check);
std::string bergman_report_csv(const PotentialSpec& spec, const BiSeries& Km,
                               const ConvergenceReport& rep);

// Normal-form document: coordinate change, gauge series, normalized
// potential, and any residual gauge violations (none on success).
std::string bochner_report_json(const NormalForm& nf,
                                const std::vector<GaugeViolation>& violations,
                                const std::vector<std::string>& names, int up_to);
std::string bochner_report_csv(const NormalForm& nf,
                               const std::vector<GaugeViolation>& violations,
                               const std::vector<std::string>& names);

// One CP^1 comparison row; `exact` rows came from the rational pipeline and
// print "0" rather than a float.  ratio is max_error relative to the
// previous row, absent for the first row or after an exact zero.
struct Cp1Row {
    int m = 0;
    double max_error = 0.0;
    std::optional<double> ratio;
    double quad_error = 0.0;
    bool exact = false;
};
std::string cp1_table_csv(const std::vector<Cp1Row>& rows);
std::string cp1_table_json(const std::string& profile, const std::vector<Cp1Row>& rows);

}  // namespace bk
