// Spec-file parsing (line-numbered diagnostics, canonical rationals) and
// deterministic report rendering for all three consumers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bk/specfile.hpp"

#include <json.hpp>

#include "bk/report.hpp"

using namespace bk;

TEST_CASE("a potential spec file parses and validates") {
    const std::string text =
        "# mixed-term example\n"
        "n: 1\n"
        "dz: 6\n"
        "dc: 3\n"
        "perturbation: P=[2] Q=[2] c=c1\n"
        "perturbation: P=[3] Q=[2] c=a\n"
        "perturbation: P=[2] Q=[3] c=b   # conjugate pair\n"
        "conjugate: a b\n";
    SpecFileData sf = parse_spec_text(text);
    CHECK(sf.n == 1);
    CHECK(sf.dz == 6);
    CHECK(sf.dc == 3);
    CHECK(!sf.dp.has_value());
    REQUIRE(sf.perts.size() == 3);
    CHECK(sf.perts[1].P == MI{3});
    CHECK(sf.perts[1].name == "a");
    CHECK(!sf.perts[1].value.has_value());
    REQUIRE(sf.conjugates.size() == 1);

    PotentialSpec spec = sf.to_potential_spec();
    CHECK(spec.dp == -1);
    CHECK(spec.effective_dp() == 6 + 3 * 5);
    CHECK(spec.sym_perm == std::vector<int>{0, 2, 1});
    CHECK(spec.symbol_names() == std::vector<std::string>{"c1", "a", "b"});
}

TEST_CASE("rational coefficients are canonicalized") {
    SpecFileData sf = parse_spec_text(
        "n: 1\ndz: 4\ndc: 2\n"
        "perturbation: P=[2] Q=[2] c=6/8\n"
        "epsilon: 2/4\n");
    REQUIRE(sf.perts.size() == 1);
    REQUIRE(sf.perts[0].value.has_value());
    CHECK(*sf.perts[0].value == Q(3, 4));
    CHECK(sf.perts[0].value->get_str() == "3/4");
    CHECK(*sf.epsilon == Q(1, 2));

    CHECK_THROWS_WITH_AS(parse_spec_text("epsilon: 1/0\n"),
                         "line 1: zero denominator for epsilon: '1/0'", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("epsilon: half\n"),
                         "line 1: invalid rational for epsilon: 'half'", SpecParseError);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_spec_text("n: 1\nno colon here\n"),
                         "line 2: expected 'key: value', got 'no colon here'",
                         SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("n: 1\nshape: round\n"),
                         "line 2: unknown key 'shape'", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("dz: six\n"),
                         "line 1: invalid integer for dz: 'six'", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("dz: 4\ndz: 6\n"), "line 2: duplicate key 'dz'",
                         SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("dz:\n"), "line 1: missing value for key 'dz'",
                         SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("perturbation: P=[] Q=[2]\n"),
                         "line 1: empty index list", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("perturbation: Q=[2]\n"),
                         "line 1: perturbation needs both P and Q", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("perturbation: P=[2] Q=[2] x=1\n"),
                         "line 1: unknown perturbation field 'x'", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("perturbation: P=(2) Q=[2]\n"),
                         "line 1: expected a bracketed index list, got '(2)'",
                         SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("model: torus\n"),
                         "line 1: unknown model 'torus'", SpecParseError);
    CHECK_THROWS_WITH_AS(parse_spec_text("conjugate: a\n"),
                         "line 1: conjugate needs exactly two symbol names", SpecParseError);
    // the carried line number is exposed for tooling
    try {
        parse_spec_text("n: 1\n\nbad line\n");
        CHECK(false);
    } catch (const SpecParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("accessor-level requirements throw without line numbers") {
    CHECK_THROWS_WITH_AS(parse_spec_text("dz: 4\ndc: 2\n").to_potential_spec(),
                         "spec file has no n key", std::invalid_argument);
    // validation of the assembled spec still applies: p >= 2
    CHECK_THROWS_AS(parse_spec_text("n: 1\ndz: 4\ndc: 2\nperturbation: P=[1] Q=[2]\n")
                        .to_potential_spec(),
                    std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_spec_text("n: 1\ndz: 4\ndc: 2\nperturbation: P=[2] Q=[2] c=a\nconjugate: a z\n")
            .to_potential_spec(),
        "conjugate declaration names unknown symbol 'z'", std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_spec_text("n: 1\n").to_radial_spec(),
                         "spec file has no model key", std::invalid_argument);
}

TEST_CASE("bochner input assembly") {
    // Fubini-Study: log(1 + |z|^2) expanded to dz
    SpecFileData fs = parse_spec_text("n: 1\ndz: 6\npotential: fubini_study\n");
    BiSeries Kfs = fs.bochner_input();
    BiSeries zz = bs_zero(1, 0, 6, 0);
    bs_add_term(zz, MI{1}, MI{1}, mg_one(0, 0));
    CHECK(Kfs == bs_log1p(zz));
    CHECK(fs.bochner_up_to() == 6);
    CHECK(fs.bochner_perm().empty());

    // numeric jet: no symbol ring
    SpecFileData nj = parse_spec_text(
        "n: 1\ndz: 4\n"
        "perturbation: P=[2] Q=[1] c=1/2\n"
        "perturbation: P=[1] Q=[2] c=1/2\n");
    BiSeries Kn = nj.bochner_input();
    CHECK(Kn.r == 0);
    CHECK(bs_coeff(Kn, MI{2}, MI{1}) == mg_const(0, 0, Q(1, 2)));
    CHECK(bs_coeff(Kn, MI{1}, MI{1}) == mg_one(0, 0));
    CHECK(bs_is_real(Kn, identity_perm(0)));

    // symbolic jet: named coefficients demand dc, conjugates become the perm
    SpecFileData sj = parse_spec_text(
        "n: 1\ndz: 4\ndc: 2\nup_to: 3\n"
        "perturbation: P=[2] Q=[1] c=a\n"
        "perturbation: P=[1] Q=[2] c=b\n"
        "conjugate: a b\n");
    BiSeries Ks = sj.bochner_input();
    CHECK(Ks.r == 2);
    CHECK(bs_coeff(Ks, MI{2}, MI{1}) == mg_term(0, cp_symbol(2, 2, 0)));
    CHECK(sj.bochner_perm() == std::vector<int>{1, 0});
    CHECK(sj.bochner_names() == std::vector<std::string>{"a", "b"});
    CHECK(sj.bochner_up_to() == 3);
    CHECK(bs_is_real(Ks, sj.bochner_perm()));

    CHECK_THROWS_WITH_AS(
        parse_spec_text("n: 1\ndz: 4\nperturbation: P=[2] Q=[1] c=a\n").bochner_input(),
        "named coefficients require a dc key", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_spec_text("n: 2\ndz: 4\nperturbation: P=[2] Q=[1] c=1\n").bochner_input(),
        "perturbation index length differs from n", std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_spec_text("n: 1\ndz: 4\nup_to: 6\n").bochner_up_to(),
                         "up_to exceeds the jet degree dz", std::invalid_argument);
}

TEST_CASE("radial spec mapping") {
    SpecFileData sf = parse_spec_text("model: perturbed\nepsilon: 1/10\nmin_nodes: 128\n");
    RadialMetricSpec rs = sf.to_radial_spec();
    CHECK(rs.profile == "perturbed");
    CHECK(rs.epsilon == doctest::Approx(0.1));
    CHECK(rs.min_nodes == 128);
    RadialMetricSpec fs = parse_spec_text("model: fubini_study\n").to_radial_spec();
    CHECK(fs.epsilon == 0.0);
    CHECK(fs.min_nodes == 64);
}

TEST_CASE("monomial and cp1 table rendering") {
    CHECK(monomial_str(MI{}, {}) == "1");
    CHECK(monomial_str(MI{0, 0}, {"a", "b"}) == "1");
    CHECK(monomial_str(MI{1, 0}, {"a", "b"}) == "a");
    CHECK(monomial_str(MI{2, 1}, {"a", "b"}) == "a^2*b");
    CHECK(monomial_str(MI{0, 3}, {}) == "c2^3");

    std::vector<Cp1Row> rows;
    rows.push_back({1, 0.0, std::nullopt, 0.0, true});
    rows.push_back({2, 0.0, std::nullopt, 0.0, true});
    CHECK(cp1_table_csv(rows) ==
          "m,max_error,ratio,quad_error\n"
          "1,0,,0\n"
          "2,0,,0\n");

    std::vector<Cp1Row> prows;
    prows.push_back({16, 1.5e-3, std::nullopt, 2.0e-16, false});
    prows.push_back({32, 4.5e-4, 0.3, 3.0e-16, false});
    const std::string csv = cp1_table_csv(prows);
    CHECK(csv.find("16,1.500000000000e-03,,2.000000000000e-16\n") != std::string::npos);
    CHECK(csv.find("32,4.500000000000e-04,3.000000000000e-01,3.000000000000e-16\n") !=
          std::string::npos);

    nlohmann::json j = nlohmann::json::parse(cp1_table_json("fubini_study", rows));
    CHECK(j["profile"] == "fubini_study");
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["ratio"].is_null());
    CHECK(j["rows"][0]["exact"] == true);
}

TEST_CASE("bergman report renders deterministically") {
    PotentialSpec spec = parse_spec_text(
                             "n: 1\ndz: 4\ndc: 1\n"
                             "perturbation: P=[2] Q=[2] c=c1\n")
                             .to_potential_spec();
    BiSeries Km = bergman_potential(spec);
    ConvergenceReport rep = convergence_report(spec);
    REQUIRE(rep.pass);

    const std::string js = bergman_report_json(spec, Km, rep, std::nullopt);
    CHECK(js == bergman_report_json(spec, Km, rep, std::nullopt));  // byte-stable
    nlohmann::json j = nlohmann::json::parse(js);
    CHECK(j["pass"] == true);
    CHECK(j["stable"] == true);
    CHECK(j["spec"]["dp"] == 4 + 1 * 4);
    CHECK(!j.contains("cross_check"));
    CHECK(j["keys"].size() == rep.keys.size());
    bool found = false;
    for (const auto& key : j["keys"])
        if (key["S"] == nlohmann::json::array({1}) && key["T"] == nlohmann::json::array({1})) {
            found = true;
            CHECK(key["verdict"]["mu0_ok"] == true);
            REQUIRE(key["terms"].size() >= 1);
            CHECK(key["terms"][0]["mu"] == 0);
            CHECK(key["terms"][0]["monomial"] == "1");
            CHECK(key["terms"][0]["value"] == "1");
        }
    CHECK(found);
    nlohmann::json jc =
        nlohmann::json::parse(bergman_report_json(spec, Km, rep, std::optional<bool>(true)));
    CHECK(jc["cross_check"] == "equal");

    const std::string csv = bergman_report_csv(spec, Km, rep);
    CHECK(csv.substr(0, csv.find('\n')) == "S,T,mu,monomial,value,positive_ok,mu0_ok,stable");
    CHECK(csv.find("[1],[1],0,1,1,true,true,true") != std::string::npos);
    CHECK(csv.find("[2],[2],0,c1,1,true,true,true") != std::string::npos);
    // rationals render as p/q strings, never floats
    CHECK(csv.find('.') == std::string::npos);
}

TEST_CASE("bochner report renders the numeric cubic example") {
    SpecFileData sf = parse_spec_text(
        "n: 1\ndz: 4\n"
        "perturbation: P=[2] Q=[1] c=1/2\n"
        "perturbation: P=[1] Q=[2] c=1/2\n");
    NormalForm nf = normalize(sf.bochner_input(), sf.bochner_up_to());
    auto violations = verify_gauge(nf.normalized_potential, sf.bochner_up_to());
    CHECK(violations.empty());

    const std::string js = bochner_report_json(nf, violations, sf.bochner_names(), 4);
    CHECK(js == bochner_report_json(nf, violations, sf.bochner_names(), 4));
    nlohmann::json j = nlohmann::json::parse(js);
    CHECK(j["pass"] == true);
    CHECK(j["n"] == 1);
    CHECK(j["violations"].empty());
    REQUIRE(j["coordinate_change"].size() == 1);
    bool quad = false;
    for (const auto& row : j["coordinate_change"][0])
        if (row["S"] == nlohmann::json::array({2})) {
            quad = true;
            CHECK(row["value"] == "-1/2");
        }
    CHECK(quad);

    const std::string csv = bochner_report_csv(nf, violations, sf.bochner_names());
    CHECK(csv.substr(0, csv.find('\n')) == "section,component,S,T,mu,monomial,value");
    CHECK(csv.find("normalized,,[1],[1],0,1,1") != std::string::npos);
    CHECK(csv.find("change,0,[1],[0],0,1,1") != std::string::npos);
}
