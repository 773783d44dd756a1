#include "bk/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace bk {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

int parse_int(int line, const std::string& s, const std::string& what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw SpecParseError(line, "invalid integer for " + what + ": '" + s + "'");
    return v;
}

// "p" or "p/q" in base 10; always canonicalized (the mpq string
// constructor does not reduce and accepts a zero denominator).
Q parse_rational(int line, const std::string& s, const std::string& what) {
    Q v;
    try {
        v = Q(s);
    } catch (const std::invalid_argument&) {
        throw SpecParseError(line, "invalid rational for " + what + ": '" + s + "'");
    }
    if (v.get_den() == 0)
        throw SpecParseError(line, "zero denominator for " + what + ": '" + s + "'");
    v.canonicalize();
    return v;
}

MI parse_index(int line, const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw SpecParseError(line, "expected a bracketed index list, got '" + s + "'");
    MI out;
    std::string body = s.substr(1, s.size() - 2);
    if (trim(body).empty()) throw SpecParseError(line, "empty index list");
    size_t pos = 0;
    while (pos <= body.size()) {
        size_t comma = body.find(',', pos);
        std::string item = trim(comma == std::string::npos ? body.substr(pos)
                                                           : body.substr(pos, comma - pos));
        out.push_back(parse_int(line, item, "index entry"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw SpecParseError(line, "empty index list");
    return out;
}

Perturbation parse_perturbation(int line, const std::string& value) {
    std::istringstream is(value);
    std::string tok;
    std::optional<MI> P, Qi;
    std::optional<std::string> c;
    while (is >> tok) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos)
            throw SpecParseError(line, "malformed perturbation token '" + tok +
                                           "' (expected P=[...], Q=[...] or c=...)");
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "P") {
            if (P) throw SpecParseError(line, "duplicate P in perturbation");
            P = parse_index(line, val);
        } else if (key == "Q") {
            if (Qi) throw SpecParseError(line, "duplicate Q in perturbation");
            Qi = parse_index(line, val);
        } else if (key == "c") {
            if (c) throw SpecParseError(line, "duplicate c in perturbation");
            c = val;
        } else {
            throw SpecParseError(line, "unknown perturbation field '" + key + "'");
        }
    }
    if (!P || !Qi) throw SpecParseError(line, "perturbation needs both P and Q");
    Perturbation out{*P, *Qi, "", std::nullopt};
    if (c) {
        if (is_identifier(*c))
            out.name = *c;
        else
            out.value = parse_rational(line, *c, "coefficient");
    }
    return out;
}

// Conjugation involution over the declared symbol names.
std::vector<int> involution_from(
    const std::vector<std::string>& names,
    const std::vector<std::pair<std::string, std::string>>& conj) {
    std::vector<int> perm(names.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto lookup = [&](const std::string& s) {
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end())
            throw std::invalid_argument("conjugate declaration names unknown symbol '" + s + "'");
        return static_cast<int>(it - names.begin());
    };
    for (const auto& [a, b] : conj) {
        int ia = lookup(a), ib = lookup(b);
        if (perm[ia] != ia || perm[ib] != ib)
            throw std::invalid_argument("symbol '" + (perm[ia] != ia ? a : b) +
                                        "' appears in two conjugate declarations");
        perm[ia] = ib;
        perm[ib] = ia;
    }
    return perm;
}

std::vector<std::string> pert_names(const std::vector<Perturbation>& perts) {
    std::vector<std::string> names;
    for (size_t i = 0; i < perts.size(); ++i)
        names.push_back(perts[i].name.empty() ? "c" + std::to_string(i + 1) : perts[i].name);
    return names;
}

bool all_numeric(const std::vector<Perturbation>& perts) {
    return std::all_of(perts.begin(), perts.end(),
                       [](const Perturbation& p) { return p.value.has_value(); });
}

}  // namespace

SpecParseError::SpecParseError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

SpecFileData parse_spec_text(const std::string& text) {
    SpecFileData out;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    auto set_int = [&](std::optional<int>& slot, const std::string& key, const std::string& val) {
        if (slot) throw SpecParseError(lineno, "duplicate key '" + key + "'");
        slot = parse_int(lineno, val, key);
    };
    while (std::getline(is, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw SpecParseError(lineno, "expected 'key: value', got '" + line + "'");
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (val.empty()) throw SpecParseError(lineno, "missing value for key '" + key + "'");
        if (key == "n") {
            set_int(out.n, key, val);
        } else if (key == "dz") {
            set_int(out.dz, key, val);
        } else if (key == "dc") {
            set_int(out.dc, key, val);
        } else if (key == "dp") {
            set_int(out.dp, key, val);
        } else if (key == "up_to") {
            set_int(out.up_to, key, val);
        } else if (key == "min_nodes") {
            set_int(out.min_nodes, key, val);
        } else if (key == "epsilon") {
            if (out.epsilon) throw SpecParseError(lineno, "duplicate key 'epsilon'");
            out.epsilon = parse_rational(lineno, val, "epsilon");
        } else if (key == "model") {
            if (out.model) throw SpecParseError(lineno, "duplicate key 'model'");
            if (val != "fubini_study" && val != "perturbed")
                throw SpecParseError(lineno, "unknown model '" + val + "'");
            out.model = val;
        } else if (key == "potential") {
            if (out.potential) throw SpecParseError(lineno, "duplicate key 'potential'");
            if (val != "fubini_study" && val != "jet")
                throw SpecParseError(lineno, "unknown potential '" + val + "'");
            out.potential = val;
        } else if (key == "perturbation") {
            out.perts.push_back(parse_perturbation(lineno, val));
        } else if (key == "conjugate") {
            std::istringstream cs(val);
            std::string a, b, extra;
            if (!(cs >> a >> b) || (cs >> extra))
                throw SpecParseError(lineno, "conjugate needs exactly two symbol names");
            if (!is_identifier(a) || !is_identifier(b))
                throw SpecParseError(lineno, "conjugate needs symbol names, got '" + val + "'");
            out.conjugates.emplace_back(a, b);
        } else {
            throw SpecParseError(lineno, "unknown key '" + key + "'");
        }
    }
    return out;
}

SpecFileData parse_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_spec_text(buf.str());
}

PotentialSpec SpecFileData::to_potential_spec() const {
    auto require = [](const std::optional<int>& v, const char* key) {
        if (!v) throw std::invalid_argument(std::string("spec file has no ") + key + " key");
        return *v;
    };
    PotentialSpec out;
    out.n = require(n, "n");
    out.dz = require(dz, "dz");
    out.dc = require(dc, "dc");
    out.dp = dp.value_or(-1);
    out.perts = perts;
    if (!conjugates.empty())
        out.sym_perm = involution_from(out.symbol_names(), conjugates);
    validate(out);
    return out;
}

RadialMetricSpec SpecFileData::to_radial_spec() const {
    if (!model) throw std::invalid_argument("spec file has no model key");
    RadialMetricSpec rs;
    rs.profile = *model;
    rs.epsilon = epsilon ? epsilon->get_d() : 0.0;
    rs.min_nodes = min_nodes.value_or(64);
    return rs;
}

BiSeries SpecFileData::bochner_input() const {
    if (!n) throw std::invalid_argument("spec file has no n key");
    if (!dz) throw std::invalid_argument("spec file has no dz key");
    const int N = *n, Dz = *dz;
    auto zz = [&](int r, int dcv) {
        BiSeries K = bs_zero(N, r, Dz, dcv);
        for (int i = 0; i < N; ++i)
            bs_add_term(K, mi_unit(N, i), mi_unit(N, i), mg_one(r, dcv));
        return K;
    };
    if (potential.value_or("jet") == "fubini_study") return bs_log1p(zz(0, 0));
    for (const Perturbation& p : perts)
        if (static_cast<int>(p.P.size()) != N || static_cast<int>(p.Q.size()) != N)
            throw std::invalid_argument("perturbation index length differs from n");
    if (all_numeric(perts)) {
        BiSeries K = zz(0, 0);
        for (const Perturbation& p : perts) bs_add_term(K, p.P, p.Q, mg_const(0, 0, *p.value));
        return K;
    }
    if (!dc) throw std::invalid_argument("named coefficients require a dc key");
    const int r = static_cast<int>(perts.size());
    BiSeries K = zz(r, *dc);
    for (size_t i = 0; i < perts.size(); ++i) {
        const Perturbation& p = perts[i];
        MGraded coef = p.value ? mg_const(r, *dc, *p.value)
                               : mg_term(0, cp_symbol(r, *dc, static_cast<int>(i)));
        bs_add_term(K, p.P, p.Q, coef);
    }
    return K;
}

int SpecFileData::bochner_up_to() const {
    if (!dz) throw std::invalid_argument("spec file has no dz key");
    int u = up_to.value_or(*dz);
    if (u > *dz) throw std::invalid_argument("up_to exceeds the jet degree dz");
    return u;
}

std::vector<int> SpecFileData::bochner_perm() const {
    if (all_numeric(perts) || potential.value_or("jet") == "fubini_study") return {};
    return involution_from(pert_names(perts), conjugates);
}

std::vector<std::string> SpecFileData::bochner_names() const {
    if (all_numeric(perts) || potential.value_or("jet") == "fubini_study") return {};
    return pert_names(perts);
}

}  // namespace bk
