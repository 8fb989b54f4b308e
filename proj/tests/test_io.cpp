#include <pseudoadd/io.hpp>

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace pseudoadd;

TEST_CASE("content spec JSON round trip") {
    ContentSpec hc = preset("hc");
    json j = spec_to_json(hc);
    CHECK(j["k"].get<double>() == hc.k());
    CHECK(j["phi"].get<std::string>() == "(1 - 2^(1 - q)) / ln(2)");
    CHECK(j["q_max"].is_null());

    ContentSpec back = spec_from_json(j);
    CHECK(back.k() == hc.k());
    CHECK(back.phi_at(2.0) == hc.phi_at(2.0));
    CHECK(back.alpha_at(0.3) == hc.alpha_at(0.3));
    CHECK(!back.q_max());

    ContentSpec suyari = preset("suyari");
    ContentSpec suyari_back = spec_from_json(spec_to_json(suyari));
    CHECK(suyari_back.q_max() == 2.0);

    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"phi": "1-q"})")), IoError);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"k": "1", "phi": "1-q", "alpha": "q-1"})")),
                    IoError);
    CHECK_THROWS_AS(parse_json("{not json", "spec"), IoError);
    // structure is fine but the expression is not: a validation error
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"k": 1, "phi": "1-", "alpha": "q-1"})")),
                    ParseError);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"k": -2, "phi": "1-q", "alpha": "q-1"})")),
                    DomainError);
}

TEST_CASE("distribution sources") {
    Distribution a = distribution_from_text(R"({"p": [0.5, 0.25, 0.25]})", "test");
    CHECK(a.size() == 3);
    CHECK(a[0] == 0.5);

    Distribution b = distribution_from_text("p\n0.5\n0.25\n0.25\n", "test");
    CHECK(b.size() == 3);
    CHECK(b[2] == 0.25);

    Distribution c = distribution_from_inline("0.5,0.5");
    CHECK(c.size() == 2);

    CHECK_THROWS_AS(distribution_from_text("", "test"), IoError);
    CHECK_THROWS_AS(distribution_from_text("x\n1\n", "test"), IoError);
    CHECK_THROWS_AS(distribution_from_text("p\nabc\n", "test"), IoError);
    CHECK_THROWS_AS(distribution_from_text(R"({"p": "no"})", "test"), IoError);
    CHECK_THROWS_AS(distribution_from_inline("0.5,oops"), IoError);
    CHECK_THROWS_AS(distribution_from_inline("0.5,0.4"), DomainError);  // sums to 0.9

    Observable obs = observable_from_text("x\n1.5\n2.5\n", "test");
    CHECK(obs.values.size() == 2);
    CHECK(obs.values[1] == 2.5);
}

TEST_CASE("sample CSV round trips bit-exactly") {
    SampleTable table = make_sample_table(
        preset("hc"), {{0.5, 1.0 - 1e-7, 1.0 + 1e-7, 1.5, 2.0}}, {{0.9, 0.5, 0.25}});

    std::ostringstream first;
    write_samples_csv(first, table);

    std::istringstream in(first.str());
    SampleTable parsed = read_samples_csv(in);
    REQUIRE(parsed.size() == table.size());

    auto original_rows = table.rows();
    auto parsed_rows = parsed.rows();
    for (std::size_t i = 0; i < original_rows.size(); ++i) {
        CHECK(parsed_rows[i].q == original_rows[i].q);
        CHECK(parsed_rows[i].p == original_rows[i].p);
        CHECK(parsed_rows[i].I == original_rows[i].I);
    }

    std::ostringstream second;
    write_samples_csv(second, parsed);
    CHECK(first.str() == second.str());
}

TEST_CASE("sample CSV rejects malformed input") {
    std::istringstream bad_header("a,b,c\n1,0.5,2\n");
    CHECK_THROWS_AS(read_samples_csv(bad_header), IoError);
    std::istringstream missing_field("q,p,I\n1,0.5\n");
    CHECK_THROWS_AS(read_samples_csv(missing_field), IoError);
    std::istringstream junk("q,p,I\n1,0.5,zz\n");
    CHECK_THROWS_AS(read_samples_csv(junk), IoError);
    std::istringstream out_of_range("q,p,I\n1,2.5,1\n");
    CHECK_THROWS_AS(read_samples_csv(out_of_range), DomainError);
}

TEST_CASE("recovery CSV shape") {
    SampleTable table = make_sample_table(
        preset("hc"), {{0.5, 1.0 - 1e-7, 1.0 + 1e-7, 1.5, 2.0}}, {{0.9, 0.5, 0.25}});
    RecoveryResult result = recover(table);

    std::ostringstream out;
    write_recovery_csv(out, result);
    std::string text = out.str();
    CHECK(text.rfind("# k_hat=", 0) == 0);
    CHECK(text.find("q,phi_hat,alpha_hat,residual\n") != std::string::npos);

    json j = recovery_to_json(result);
    CHECK(j["k_hat"].get<double>() == result.k_hat);
    CHECK(j["rows"].size() == result.rows.size());
    CHECK(!j["rows"][0]["flagged"].get<bool>());
}

TEST_CASE("axiom report JSON has the stable shape") {
    AxiomReport report = verify(preset("hc"));
    json j = report_to_json(report);
    CHECK(j["verdict"] == "pass");
    REQUIRE(j["checks"].size() == 8);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("id"));
        CHECK(c.contains("status"));
        CHECK(c.contains("max_residual"));
        CHECK(c.contains("witness"));
    }
    CHECK(j["checks"][0]["id"] == "T0");
    CHECK(j["checks"][0]["witness"].is_null());

    // a failing check always shows where
    ContentSpec bad(1.0, Expr::parse("1 - q"), Expr::parse("1 - q"));
    json jb = report_to_json(verify(bad));
    CHECK(jb["verdict"] == "fail");
    bool saw_fail = false;
    for (const auto& c : jb["checks"]) {
        if (c["status"] == "fail") {
            saw_fail = true;
            CHECK(c["witness"].is_object());
            CHECK(c["witness"].contains("q"));
        }
    }
    CHECK(saw_fail);

    // determinism down to the serialized bytes
    CHECK(report_to_json(verify(preset("hc"))).dump() == j.dump());
}

TEST_CASE("grid JSON overrides") {
    ContentSpec suyari = preset("suyari");
    GridSpec defaults = GridSpec::defaults_for(suyari);
    GridSpec overridden =
        grid_from_json(json::parse(R"({"q_points": [0.5, 1.5], "p_points": [0.25, 0.5, 1.0]})"),
                       defaults);
    CHECK(overridden.q_points == std::vector<double>{0.5, 1.5});
    CHECK(overridden.p_points.size() == 3);

    GridSpec partial = grid_from_json(json::parse(R"({"q_points": [0.5]})"), defaults);
    CHECK(partial.q_points.size() == 1);
    CHECK(partial.p_points == defaults.p_points);

    CHECK_THROWS_AS(grid_from_json(json::parse("[1,2]"), defaults), IoError);
}
