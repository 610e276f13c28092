#include <doctest.h>

#include <cmath>
#include <string>

#include "spinrelax/config.hpp"
#include "spinrelax/errors.hpp"
#include "spinrelax/io.hpp"
#include "spinrelax/report.hpp"

using namespace spinrelax;
using doctest::Approx;

#ifndef TEST_FIXTURES_DIR
#error "TEST_FIXTURES_DIR must be defined by the build"
#endif

static std::string fixture(const std::string& name) {
    return std::string(TEST_FIXTURES_DIR) + "/" + name;
}

TEST_CASE("relaxation CSV loads, converts, and sorts") {
    auto ds = io::load_relaxation_csv(fixture("relax_good_t1.csv"), RelaxationQuantity::T1);
    CHECK(ds.quantity == RelaxationQuantity::T1);
    REQUIRE(ds.points.size() == 6);
    CHECK(ds.warnings.empty());
    CHECK(ds.points.front().temperature_K == 160.0);
    CHECK(ds.points.back().temperature_K == 260.0);
    // times arrive in microseconds and are stored in seconds
    CHECK(ds.points.front().time_s == Approx(1052.5e-6).epsilon(1e-14));
    CHECK(ds.points.front().sigma_s == Approx(52.6e-6).epsilon(1e-14));
    for (size_t i = 1; i < ds.points.size(); ++i)
        CHECK(ds.points[i].temperature_K >= ds.points[i - 1].temperature_K);
}

TEST_CASE("relaxation CSV defaults missing uncertainties to 5 percent") {
    auto ds = io::load_relaxation_csv(fixture("relax_missing_sigma.csv"), RelaxationQuantity::T1);
    REQUIRE(ds.points.size() == 3);
    REQUIRE_FALSE(ds.warnings.empty());
    CHECK(ds.warnings.front().find("sigma") != std::string::npos);
    for (const auto& pt : ds.points) CHECK(pt.sigma_s == Approx(0.05 * pt.time_s).epsilon(1e-14));
}

TEST_CASE("relaxation CSV diagnostics carry file and row") {
    try {
        io::load_relaxation_csv(fixture("relax_bad_number.csv"), RelaxationQuantity::T1);
        FAIL("expected InputError");
    } catch (const InputError& err) {
        std::string msg = err.what();
        CHECK(msg.find("relax_bad_number.csv") != std::string::npos);
        CHECK(msg.find("row 3") != std::string::npos);  // file row, counting the header
        CHECK(msg.find("abc") != std::string::npos);
    }

    CHECK_THROWS_AS(io::load_relaxation_csv(fixture("relax_bad_header.csv"),
                                            RelaxationQuantity::T1),
                    InputError);
    CHECK_THROWS_AS(io::load_relaxation_csv(fixture("does_not_exist.csv"),
                                            RelaxationQuantity::T1),
                    InputError);
}

TEST_CASE("echo CSV loads and rejects duplicate delays") {
    auto trace = io::load_echo_csv(fixture("echo_good.csv"));
    REQUIRE(trace.points.size() == 7);
    CHECK(trace.points.front().tau_s == Approx(0.5e-6).epsilon(1e-14));
    CHECK(trace.points.back().tau_s == Approx(12e-6).epsilon(1e-14));

    CHECK_THROWS_AS(io::load_echo_csv(fixture("echo_dup_tau.csv")), InputError);
}

TEST_CASE("model configuration parses channels") {
    auto doc = config::ConfigDocument::load(fixture("htoluene.json"));
    CHECK(doc.field_T == 0.34);
    REQUIRE(doc.channels.size() == 2);
    CHECK(doc.orbach.has_value());
    CHECK(doc.orbach->prefactor_per_s == 5e5);
    CHECK(doc.orbach->delta_meV() == Approx(60.0).epsilon(1e-12));
    REQUIRE(doc.diffusion_channels.size() == 1);

    const auto& diff = doc.channels[doc.diffusion_channels[0]];
    CHECK(diff.is_diffusion());
    CHECK(diff.label() == "diffusion_1H");
    CHECK(diff.diffusion().species.label == "1H");
    CHECK(diff.diffusion().closest_approach_m == Approx(0.35e-9).epsilon(1e-14));
    CHECK(diff.diffusion().field_T == 0.34);
}

TEST_CASE("configuration diagnostics name the offending key path") {
    CHECK_THROWS_AS(config::ConfigDocument::load(fixture("bad_syntax.json")), InputError);

    try {
        config::ConfigDocument::load(fixture("bad_species.json"));
        FAIL("expected InputError");
    } catch (const InputError& err) {
        std::string msg = err.what();
        CHECK(msg.find("3He") != std::string::npos);
    }

    try {
        config::ConfigDocument::load(fixture("bad_missing_key.json"));
        FAIL("expected InputError");
    } catch (const InputError& err) {
        std::string msg = err.what();
        CHECK(msg.find("closest_approach_nm") != std::string::npos);
        CHECK(msg.find("/channels/0") != std::string::npos);
    }
}

TEST_CASE("configuration parses mixtures and the regime section") {
    auto doc = config::ConfigDocument::load(fixture("cs2_mixture.json"));
    REQUIRE(doc.mixture.size() == 2);
    CHECK(doc.mixture[0].label == "CS2");
    CHECK(doc.mixture[1].nuclei_per_molecule.at("35Cl") == 2.0);
    REQUIRE(doc.regime.has_value());
    CHECK(doc.regime->species_label == "35Cl");
    CHECK(doc.regime->closest_approach_m == Approx(0.35e-9).epsilon(1e-14));
    CHECK_FALSE(doc.regime->spins_per_m3.has_value());
}

TEST_CASE("canonical number text matches the JSON rendering") {
    CHECK(report::num_text(0.1) == "0.1");
    CHECK(report::num_text(60.0) == "60.0");
    CHECK(report::num_text(1.0881674572052142) == "1.0881674572052142");
    CHECK(report::num_text(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(report::num_text(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(report::num_text(std::nan("")) == "nan");

    // The JSON node for a finite value prints the identical text.
    CHECK(report::num_node(0.1).dump() == "0.1");
    CHECK(report::num_node(std::numeric_limits<double>::infinity()).dump() == "\"inf\"");
}

TEST_CASE("tsv builder emits a commented header and width-checked rows") {
    report::TsvBuilder tsv({"temperature_K", "t2_us"});
    tsv.add_row({report::num_node(170.0), report::num_node(1.0881674572052142)});
    std::string text = tsv.str();
    CHECK(text.rfind("#", 0) == 0);
    CHECK(text.find("temperature_K\tt2_us") != std::string::npos);
    CHECK(text.find("170.0\t1.0881674572052142") != std::string::npos);

    CHECK_THROWS_AS(tsv.add_row({report::num_node(1.0)}), InputError);
}

TEST_CASE("human rendering walks the document") {
    report::ordered_json doc;
    doc["command"] = "predict";
    doc["total"]["t2_us"] = report::num_node(1.5);
    doc["temps"] = report::ordered_json::array({200.0, 300.0});
    std::string text = report::render_human(doc);
    CHECK(text.find("command: predict") != std::string::npos);
    CHECK(text.find("total:") != std::string::npos);
    CHECK(text.find("t2_us: 1.5") != std::string::npos);
    CHECK(text.find("temps: 200.0, 300.0") != std::string::npos);
}

TEST_CASE("text files round-trip bytes") {
    std::string path = std::string(TEST_WORK_DIR) + "/roundtrip.txt";
    std::string content = "line one\nline two\n";
    io::write_text_file(path, content);
    CHECK(io::read_text_file(path) == content);
    CHECK_THROWS_AS(io::read_text_file(std::string(TEST_WORK_DIR) + "/missing.txt"), InputError);
}
