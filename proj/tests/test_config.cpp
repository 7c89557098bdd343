#include <radpair/config.hpp>

#include <doctest.h>

using namespace radpair;

TEST_CASE("defaults: rates 1e4, field 47 uT, phi 0") {
    RadicalPairConfig c = parse_config(R"({"radical_a": {}, "radical_b": {}})");
    CHECK(c.rates.ks_per_s == 1e4);
    CHECK(c.rates.kt_per_s == 1e4);
    CHECK(c.field.b_uT == 47.0);
    CHECK(c.field.theta_rad == 0.0);
    CHECK(c.field.phi_rad == 0.0);
    CHECK(c.joint_dim() == 4);  // zero nuclei on both radicals is valid
}

TEST_CASE("preset hyperfine values are the exact literals") {
    RadicalPairConfig c = preset("fad-trp-3-3");
    CHECK(c.radical_a.dim() == 36);
    CHECK(c.radical_b.dim() == 24);
    const auto& n5 = c.radical_a.nuclei[0];
    CHECK(n5.label == "N5");
    CHECK(n5.hyperfine == HyperfineTensor{-0.0989, -0.0989, 1.7569});
    const auto& h6 = c.radical_a.nuclei[2];
    CHECK(h6.hyperfine == HyperfineTensor{-0.5304, -0.4336, -0.1976});
    const auto& n1 = c.radical_b.nuclei[0];
    CHECK(n1.hyperfine == HyperfineTensor{0.0, 0.0, 1.0812});

    RadicalPairConfig c11 = preset("fad-trp-1-1");
    CHECK(c11.radical_a.nuclei.size() == 1);
    CHECK(c11.radical_b.nuclei.size() == 1);
    CHECK(c11.radical_a.nuclei[0].label == "N5");
    CHECK(c11.radical_b.nuclei[0].label == "N1");

    CHECK_THROWS_AS(preset("no-such"), ConfigError);
}

TEST_CASE("round-trip identity parse(serialize(c)) == c") {
    for (const auto& [name, c] : builtin_presets()) {
        CAPTURE(name);
        CHECK(parse_config(serialize_config(c)) == c);
        CHECK(config_digest(c) == config_digest(parse_config(serialize_config(c))));
    }
    RadicalPairConfig e = equal_tensor_config(2, 0.08, 0.08, 1.0812);
    e.field.theta_rad = 0.7;
    e.field.phi_rad = 1.3;
    CHECK(parse_config(serialize_config(e)) == e);
}

TEST_CASE("label-based default spins") {
    CHECK(default_spin_for_label("N5") == 1.0);
    CHECK(default_spin_for_label("H1") == 0.5);
    CHECK_THROWS_AS(default_spin_for_label("C13"), ConfigError);
    RadicalPairConfig c = parse_config(
        R"({"radical_a": {"nuclei": [{"label": "N5"}]},
            "radical_b": {"nuclei": [{"label": "H1"}]}})");
    CHECK(c.radical_a.nuclei[0].spin == 1.0);
    CHECK(c.radical_b.nuclei[0].spin == 0.5);
    // explicit spin wins over the label heuristic
    RadicalPairConfig o = parse_config(
        R"({"radical_a": {"nuclei": [{"label": "N5", "spin": 0.5}]}, "radical_b": {}})");
    CHECK(o.radical_a.nuclei[0].spin == 0.5);
}

TEST_CASE("validation errors name the violated invariant") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"radical_a": {}})"),
                         doctest::Contains("radical_a and radical_b"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"radical_a": {"nuclei": [{"label": "N1", "spin": 0.4}]},
                         "radical_b": {}})"),
        doctest::Contains("2*spin"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"radical_a": {}, "radical_b": {},
                         "rates": {"ks_per_s": 0.0}})"),
        doctest::Contains("rates"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"radical_a": {}, "radical_b": {},
                         "field": {"theta_rad": 4.0}})"),
        doctest::Contains("theta"), ConfigError);
}

TEST_CASE("parse errors carry a line number") {
    try {
        parse_config("{\n  \"radical_a\": {},\n  oops\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("dimension caps reject oversized systems without crashing") {
    // nine spin-1 nuclei: 2 * 3^9 > 256 per-radical cap
    RadicalPairConfig c;
    for (int i = 0; i < 9; ++i) {
        c.radical_a.nuclei.push_back({"N" + std::to_string(i), 1.0, {}});
    }
    CHECK_THROWS_WITH_AS(validate_config(c), doctest::Contains("cap"), ConfigError);
    // joint cap: two radicals of dim 128 each -> 16384 > 4096, both under 256
    RadicalPairConfig j;
    for (int i = 0; i < 6; ++i) {
        j.radical_a.nuclei.push_back({"H" + std::to_string(i), 0.5, {}});
        j.radical_b.nuclei.push_back({"H" + std::to_string(i), 0.5, {}});
    }
    CHECK_THROWS_WITH_AS(validate_config(j), doctest::Contains("joint"), ConfigError);
}

TEST_CASE("digest is stable and sensitive") {
    RadicalPairConfig a = preset("fad-trp-1-1"), b = a;
    CHECK(config_digest(a) == config_digest(b));
    CHECK(config_digest(a).size() == 16);
    b.field.theta_rad = 0.1;
    CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("equal-tensor builder") {
    RadicalPairConfig c = equal_tensor_config(3, 0.08, 0.08, 1.0812);
    CHECK(c.radical_a.nuclei.size() == 3);
    CHECK(c.radical_a.dim() == 16);
    CHECK(c.radical_b.dim() == 16);
    for (const auto& n : c.radical_b.nuclei) {
        CHECK(n.spin == 0.5);
        CHECK(n.hyperfine == HyperfineTensor{0.08, 0.08, 1.0812});
    }
}
