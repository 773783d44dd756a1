#include "bk/report.hpp"

#include <cstdio>
#include <json.hpp>

namespace bk {

namespace {

using ojson = nlohmann::ordered_json;

std::string sym_name(size_t i, const std::vector<std::string>& names) {
    return i < names.size() && !names[i].empty() ? names[i] : "c" + std::to_string(i + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// RFC-4180 quoting; only needed for fields that may contain commas.
std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ojson mi_json(const MI& a) {
    ojson out = ojson::array();
    for (int v : a) out.push_back(v);
    return out;
}

ojson term_rows_json(const MGraded& v, const std::vector<std::string>& names) {
    ojson rows = ojson::array();
    for (const auto& [mu, poly] : v.t)
        for (const auto& [e, c] : poly.t)
            rows.push_back({{"mu", mu},
                            {"monomial", monomial_str(e, names)},
                            {"value", c.get_str()}});
    return rows;
}

ojson series_rows_json(const BiSeries& a, const std::vector<std::string>& names) {
    ojson rows = ojson::array();
    for (const auto& [key, v] : a.t)
        for (const auto& [mu, poly] : v.t)
            for (const auto& [e, c] : poly.t)
                rows.push_back({{"S", mi_json(key.first)},
                                {"T", mi_json(key.second)},
                                {"mu", mu},
                                {"monomial", monomial_str(e, names)},
                                {"value", c.get_str()}});
    return rows;
}

void series_rows_csv(std::string& out, const BiSeries& a, const std::string& section,
                     const std::string& component, const std::vector<std::string>& names) {
    for (const auto& [key, v] : a.t)
        for (const auto& [mu, poly] : v.t)
            for (const auto& [e, c] : poly.t)
                out += section + "," + component + "," + mi_str(key.first) + "," +
                       mi_str(key.second) + "," + std::to_string(mu) + "," +
                       csv_escape(monomial_str(e, names)) + "," + csv_escape(c.get_str()) +
                       "\n";
}

}  // namespace

std::string monomial_str(const MI& e, const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += sym_name(i, names);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

std::string bergman_report_json(const PotentialSpec& spec, const BiSeries& Km,
                                const ConvergenceReport& rep,
                                std::optional<bool> cross_check) {
    const auto names = spec.symbol_names();
    ojson j;
    ojson perts = ojson::array();
    for (size_t i = 0; i < spec.perts.size(); ++i) {
        ojson p = {{"P", mi_json(spec.perts[i].P)},
                   {"Q", mi_json(spec.perts[i].Q)},
                   {"symbol", names[i]}};
        if (spec.perts[i].value) p["value"] = spec.perts[i].value->get_str();
        perts.push_back(std::move(p));
    }
    j["spec"] = {{"n", spec.n},
                 {"dz", spec.dz},
                 {"dc", spec.dc},
                 {"dp", spec.effective_dp()},
                 {"perturbations", std::move(perts)}};
    j["pass"] = rep.pass;
    j["stable"] = rep.stable;
    if (cross_check) j["cross_check"] = *cross_check ? "equal" : "unequal";
    ojson keys = ojson::array();
    for (const KeyVerdict& kv : rep.keys) {
        ojson entry;
        entry["S"] = mi_json(kv.S);
        entry["T"] = mi_json(kv.T);
        entry["terms"] = term_rows_json(bs_coeff(Km, kv.S, kv.T), names);
        entry["verdict"] = {{"positive_ok", kv.positive_ok},
                            {"mu0_ok", kv.mu0_ok},
                            {"stable", kv.stable},
                            {"residue_exp", kv.residue_exp},
                            {"residue", cp_str(kv.residue, names)}};
        keys.push_back(std::move(entry));
    }
    j["keys"] = std::move(keys);
    return j.dump(2) + "\n";
}

std::string bergman_report_csv(const PotentialSpec& spec, const BiSeries& Km,
                               const ConvergenceReport& rep) {
    const auto names = spec.symbol_names();
    std::string out = "S,T,mu,monomial,value,positive_ok,mu0_ok,stable\n";
    for (const KeyVerdict& kv : rep.keys) {
        const std::string flags = std::string(kv.positive_ok ? "true" : "false") + "," +
                                  (kv.mu0_ok ? "true" : "false") + "," +
                                  (kv.stable ? "true" : "false");
        const std::string st = mi_str(kv.S) + "," + mi_str(kv.T) + ",";
        const MGraded v = bs_coeff(Km, kv.S, kv.T);
        bool any = false;
        for (const auto& [mu, poly] : v.t)
            for (const auto& [e, c] : poly.t) {
                out += st + std::to_string(mu) + "," + csv_escape(monomial_str(e, names)) +
                       "," + csv_escape(c.get_str()) + "," + flags + "\n";
                any = true;
            }
        if (!any) out += st + ",,," + flags + "\n";
    }
    return out;
}

std::string bochner_report_json(const NormalForm& nf,
                                const std::vector<GaugeViolation>& violations,
                                const std::vector<std::string>& names, int up_to) {
    ojson j;
    j["n"] = nf.normalized_potential.n;
    j["up_to"] = up_to;
    j["pass"] = violations.empty();
    ojson change = ojson::array();
    for (const BiSeries& comp : nf.coordinate_change)
        change.push_back(series_rows_json(comp, names));
    j["coordinate_change"] = std::move(change);
    j["gauge"] = series_rows_json(nf.gauge, names);
    j["normalized_potential"] = series_rows_json(nf.normalized_potential, names);
    ojson viol = ojson::array();
    for (const GaugeViolation& gv : violations)
        viol.push_back({{"S", mi_json(gv.S)},
                        {"T", mi_json(gv.T)},
                        {"terms", term_rows_json(gv.value, names)}});
    j["violations"] = std::move(viol);
    return j.dump(2) + "\n";
}

std::string bochner_report_csv(const NormalForm& nf,
                               const std::vector<GaugeViolation>& violations,
                               const std::vector<std::string>& names) {
    std::string out = "section,component,S,T,mu,monomial,value\n";
    for (size_t i = 0; i < nf.coordinate_change.size(); ++i)
        series_rows_csv(out, nf.coordinate_change[i], "change", std::to_string(i), names);
    series_rows_csv(out, nf.gauge, "gauge", "", names);
    series_rows_csv(out, nf.normalized_potential, "normalized", "", names);
    for (const GaugeViolation& gv : violations)
        for (const auto& [mu, poly] : gv.value.t)
            for (const auto& [e, c] : poly.t)
                out += "violation,," + mi_str(gv.S) + "," + mi_str(gv.T) + "," +
                       std::to_string(mu) + "," + csv_escape(monomial_str(e, names)) + "," +
                       csv_escape(c.get_str()) + "\n";
    return out;
}

std::string cp1_table_csv(const std::vector<Cp1Row>& rows) {
    std::string out = "m,max_error,ratio,quad_error\n";
    for (const Cp1Row& r : rows) {
        out += std::to_string(r.m) + ",";
        out += (r.exact && r.max_error == 0.0 ? "0" : fmt(r.max_error)) + ",";
        if (r.ratio) out += fmt(*r.ratio);
        out += ",";
        out += (r.exact ? "0" : fmt(r.quad_error)) + "\n";
    }
    return out;
}

std::string cp1_table_json(const std::string& profile, const std::vector<Cp1Row>& rows) {
    ojson j;
    j["profile"] = profile;
    ojson arr = ojson::array();
    for (const Cp1Row& r : rows) {
        ojson row = {{"m", r.m}, {"max_error", r.max_error}};
        row["ratio"] = r.ratio ? ojson(*r.ratio) : ojson(nullptr);
        row["quad_error"] = r.quad_error;
        row["exact"] = r.exact;
        arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    return j.dump(2) + "\n";
}

}  // namespace bk
