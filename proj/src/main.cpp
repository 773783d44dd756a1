// Command-line driver.  Exit codes are a stable contract: 0 success,
// 1 verification failure (an identity or convergence check that ran and
// failed, or a quadrature that did not converge), 2 input error (bad
// flags, unparsable or invalid spec files, degenerate jets).
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bk/combinatorics.hpp"
#include "bk/models.hpp"
#include "bk/report.hpp"
#include "bk/specfile.hpp"

namespace {

using namespace bk;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

// The full identity suite.  The composition family is enumerated here
// rather than through the library sweep so the per-identity counters stay
// separate and the sign-flip hook (a self-test of the failure path) has a
// place to act.
int run_verify_identities(int max_order, bool inject) {
    if (max_order < 1) throw std::invalid_argument("--max-order must be positive");
    long total = 0, bad = 0;
    std::string first;
    auto note = [&](const std::string& d) {
        if (first.empty()) first = d;
    };

    long comp_inst = 0, mm_alt = 0, mm_log = 0;
    for (int len = 1; len <= 3; ++len)
        for (const MI& L : enumerate_indices(len, max_order)) {
            if (order(L) < 1) continue;
            ++comp_inst;
            Q alt_closed = alternating_comp_identity_closed(L);
            if (inject) alt_closed = -alt_closed;
            if (alternating_comp_identity_brute(L) != alt_closed) {
                ++mm_alt;
                note("alternating composition identity at L = " + mi_str(L));
            }
            if (log_comp_identity_brute(L) != log_comp_identity_closed(L)) {
                ++mm_log;
                note("log composition identity at L = " + mi_str(L));
            }
        }
    std::cout << "alternating composition    " << comp_inst << " instances, " << mm_alt
              << " mismatches\n";
    std::cout << "log composition            " << comp_inst << " instances, " << mm_log
              << " mismatches\n";
    total += 2 * comp_inst;
    bad += mm_alt + mm_log;

    IdentitySweepResult sel = sweep_selector_identities(3, max_order, 3, 4);
    std::cout << "selector falling+harmonic  " << sel.checked / 2 << " instances each, "
              << sel.mismatches << " mismatches\n";
    total += sel.checked;
    bad += sel.mismatches;
    if (sel.mismatches) note(sel.first_mismatch);

    long f_inst = 0, f_mm = 0;
    for (int p = 0; p <= 5; ++p)
        for (int q = 0; q <= 5; ++q) {
            const auto a = factorial_expand(p, q);
            for (int s = 0; s <= p + q + 2; ++s) {
                ++f_inst;
                Q rhs = 0;
                for (int i = 0; i < static_cast<int>(a.size()); ++i)
                    rhs += a[i] * qfalling(s, q - i);
                if (rhs != qfalling(s + p, q)) {
                    ++f_mm;
                    note("factorial expansion at p = " + std::to_string(p) +
                         ", q = " + std::to_string(q) + ", s = " + std::to_string(s));
                }
            }
        }
    std::cout << "factorial expansion        " << f_inst << " instances, " << f_mm
              << " mismatches\n";
    total += f_inst;
    bad += f_mm;

    long fm_inst = 0, fm_mm = 0;
    for (int len = 1; len <= 2; ++len)
        for (const MI& P : enumerate_indices(len, 2 * len))
            for (const MI& Qm : enumerate_indices(len, 2 * len)) {
                const auto multi = factorial_expand_multi(P, Qm);
                for (const MI& S : enumerate_indices(len, 4)) {
                    ++fm_inst;
                    Q rhs = 0;
                    for (const auto& [I, v] : multi) rhs += v * mi_falling(S, mi_sub(Qm, I));
                    if (rhs != mi_falling(mi_add(S, P), Qm)) {
                        ++fm_mm;
                        note("multivariable factorial expansion at P = " + mi_str(P) +
                             ", Q = " + mi_str(Qm) + ", S = " + mi_str(S));
                    }
                }
            }
    std::cout << "factorial expansion (multi) " << fm_inst << " instances, " << fm_mm
              << " mismatches\n";
    total += fm_inst;
    bad += fm_mm;

    if (bad) std::cout << "first counterexample: " << first << "\n";
    std::cout << "total: " << total << " checks, " << bad << " mismatches\n";
    return bad ? 1 : 0;
}

int run_bergman_expand(const std::string& file, std::optional<int> odz, std::optional<int> odc,
                       std::optional<int> odp, const std::string& format, bool cross,
                       const std::string& out) {
    SpecFileData sf = parse_spec_file(file);
    if (odz) sf.dz = *odz;
    if (odc) sf.dc = *odc;
    if (odp) sf.dp = *odp;
    PotentialSpec spec = sf.to_potential_spec();
    ConvergenceReport rep = convergence_report(spec);
    BiSeries Km = bergman_potential(spec);
    std::optional<bool> cc;
    if (cross) {
        cc = bergman_potential_combinatorial(spec) == Km;
        if (format == "csv") std::cerr << "cross-check: " << (*cc ? "equal" : "unequal") << "\n";
    }
    emit(format == "json" ? bergman_report_json(spec, Km, rep, cc)
                          : bergman_report_csv(spec, Km, rep),
         out);
    return rep.pass && rep.stable && cc.value_or(true) ? 0 : 1;
}

int run_bochner(const std::string& file, const std::string& format, const std::string& out) {
    SpecFileData sf = parse_spec_file(file);
    BiSeries K = sf.bochner_input();
    const int up_to = sf.bochner_up_to();
    const auto perm = sf.bochner_perm();
    NormalForm nf = perm.empty() ? normalize(K, up_to) : normalize(K, up_to, perm);
    const auto violations = verify_gauge(nf.normalized_potential, up_to);
    emit(format == "json" ? bochner_report_json(nf, violations, sf.bochner_names(), up_to)
                          : bochner_report_csv(nf, violations, sf.bochner_names()),
         out);
    return violations.empty() ? 0 : 1;
}

std::vector<int> parse_m_list(const std::string& s) {
    std::vector<int> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string item =
            comma == std::string::npos ? s.substr(pos) : s.substr(pos, comma - pos);
        if (item.empty()) throw std::invalid_argument("empty entry in --m-list");
        size_t used = 0;
        int m = 0;
        try {
            m = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid --m-list entry: '" + item + "'");
        }
        if (used != item.size())
            throw std::invalid_argument("invalid --m-list entry: '" + item + "'");
        out.push_back(m);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("--m-list is empty");
    return out;
}

int run_cp1(const std::string& file, const std::string& mlist, const std::string& format,
            const std::string& out) {
    const std::vector<int> ms = parse_m_list(mlist);
    SpecFileData sf = parse_spec_file(file);
    const RadialMetricSpec rs = sf.to_radial_spec();
    std::vector<Cp1Row> rows;
    double prev = -1.0;
    for (int m : ms) {
        Cp1Row row;
        row.m = m;
        if (rs.profile == "fubini_study") {
            const FsBergmanRecord rec = cp1_fs_bergman(m);
            double mx = 0.0;
            for (const Q& d : rec.metric_deviation) mx = std::max(mx, std::abs(d.get_d()));
            row.max_error = mx;
            row.quad_error = 0.0;
            row.exact = true;
        } else {
            const PerturbedBergmanRecord rec = cp1_perturbed_bergman(rs, m);
            row.max_error = rec.max_metric_error;
            row.quad_error = rec.quadrature_rel_error;
        }
        if (prev > 0.0) row.ratio = row.max_error / prev;
        prev = row.max_error;
        rows.push_back(row);
    }
    emit(format == "csv" ? cp1_table_csv(rows) : cp1_table_json(rs.profile, rows), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-order verification of the Bergman-kernel expansion"};
    app.require_subcommand(1);

    auto* vi = app.add_subcommand("verify-identities", "run the combinatorial identity suite");
    int max_order = 6;
    bool inject = false;
    vi->add_option("--max-order", max_order, "total-order cap for swept indices (default 6)");
    vi->add_flag("--inject-sign-flip", inject)->group("");  // self-test of the failure path

    std::string be_file, be_format = "json", be_out;
    std::optional<int> odz, odc, odp;
    bool cross = false;
    auto* be = app.add_subcommand("bergman-expand",
                                  "expand K_m for a potential spec and report convergence");
    be->add_option("spec", be_file, "potential spec file")->required();
    be->add_option("--dz", odz, "override the z-degree truncation");
    be->add_option("--dc", odc, "override the coefficient-degree truncation");
    be->add_option("--dp", odp, "override the section-index order");
    be->add_option("--format", be_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    be->add_flag("--cross-check", cross, "compare against the combinatorial pipeline");
    be->add_option("--out", be_out, "write the report to FILE instead of stdout");

    std::string bo_file, bo_format = "json", bo_out;
    auto* bo = app.add_subcommand("bochner", "normalize a potential jet");
    bo->add_option("spec", bo_file, "jet spec file")->required();
    bo->add_option("--format", bo_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    bo->add_option("--out", bo_out, "write the report to FILE instead of stdout");

    std::string cp_file, cp_mlist, cp_format = "json", cp_out;
    auto* cp = app.add_subcommand("cp1", "CP^1 model comparison table");
    cp->add_option("spec", cp_file, "radial model spec file")->required();
    cp->add_option("--m-list", cp_mlist, "comma-separated section orders")->required();
    cp->add_option("--format", cp_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cp->add_option("--out", cp_out, "write the table to FILE instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (vi->parsed()) return run_verify_identities(max_order, inject);
        if (be->parsed())
            return run_bergman_expand(be_file, odz, odc, odp, be_format, cross, be_out);
        if (bo->parsed()) return run_bochner(bo_file, bo_format, bo_out);
        if (cp->parsed()) return run_cp1(cp_file, cp_mlist, cp_format, cp_out);
    } catch (const SpecParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
