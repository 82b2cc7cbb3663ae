#include <gtest/gtest.h>

#include "symdyn/io.hpp"

using namespace symdyn;
using io::json;

namespace {

ShiftSpace golden() { return ShiftSpace::sft({"0", "1"}, {{"1", "1"}}); }

ShiftSpace even() {
    Graph g;
    g.alphabet = {"0", "1"};
    g.states = {"a", "b"};
    g.edges = {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
    return ShiftSpace::sofic(g);
}

std::string roundtrip(const json& j) { return io::dump(io::parse_text(io::dump(j))); }

}  // namespace

TEST(IoShift, RoundTripAllKinds) {
    std::vector<ShiftSpace> xs = {ShiftSpace::edge_shift({{1, 1}, {1, 0}}), ShiftSpace::edge_shift({{2}}, {"a", "b"}),
                                  golden(), even()};
    for (const auto& x : xs) {
        json j = io::to_json(x);
        ShiftSpace y = io::shift_of(io::parse_text(io::dump(j)));
        EXPECT_EQ(io::dump(io::to_json(y)), io::dump(j));
        EXPECT_TRUE(language_equal(x, y));
    }
}

TEST(IoShift, FileFormats) {
    auto x = io::shift_of(io::parse_text(R"({"kind":"edge_shift","matrix":[[1,1],[1,0]]})"));
    EXPECT_EQ(x.alphabet().size(), 3u);
    auto s = io::shift_of(io::parse_text(R"({"kind":"sft","alphabet":["0","1"],"forbidden":[["1","1"]]})"));
    EXPECT_TRUE(language_equal(s, golden()));
    auto e = io::shift_of(io::parse_text(
        R"({"kind":"sofic","states":["a","b"],"edges":[{"from":"a","to":"a","label":"1"},
            {"from":"a","to":"b","label":"0"},{"from":"b","to":"a","label":"0"}]})"));
    EXPECT_TRUE(language_equal(e, even()));
}

TEST(IoShift, Rejections) {
    try {
        io::parse_text("{\n  \"kind\": \"sft\",\n  \"alphabet\": [\"0\" \"1\"]\n}", "f.json");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("f.json:3:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(io::shift_of(io::parse_text(R"({"kind":"tree"})")), ParseError);
    EXPECT_THROW(io::shift_of(io::parse_text(R"({"kind":"edge_shift","matrix":[[1,1]]})")), ParseError);
    EXPECT_THROW(io::shift_of(io::parse_text(R"({"kind":"sft","alphabet":["0","0"],"forbidden":[]})")), ParseError);
    EXPECT_THROW(io::shift_of(io::parse_text(
                     R"({"kind":"sofic","states":["a"],"edges":[{"from":"a","to":"z","label":"0"}]})")),
                 ParseError);
    EXPECT_THROW(io::shift_of(io::parse_text(R"({"kind":"sft","alphabet":["0"],"forbidden":[["1"]]})")), ParseError);
}

TEST(IoCode, RoundTripAndPartialTable) {
    ShiftSpace x = golden();
    BlockMap c = BlockMap::from_function(x, 1, 0, [](const Word& w) { return w[0] == w[1] ? "s" : "d"; });
    json j = io::to_json(c);
    BlockMap d = io::code_of(io::parse_text(io::dump(j)), x);
    EXPECT_EQ(d.table, c.table);
    EXPECT_EQ(io::dump(io::to_json(d)), io::dump(j));

    json partial = j;
    partial["table"].erase(0);
    try {
        io::code_of(partial, x);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("misses 1 window"), std::string::npos);
    }
    json bad = j;
    bad["table"][0]["window"] = json::array({"0"});
    EXPECT_THROW(io::code_of(bad, x), ParseError);
}

TEST(IoEntropy, RoundTripAndFormat) {
    EntropyValue h = entropy(golden());
    json j = io::to_json(h);
    EXPECT_EQ(j["poly"], json::parse("[-1,-1,1]"));
    EXPECT_TRUE(j["interval"][0].is_string());
    EXPECT_NE(j["interval"][0].get<std::string>().find('/'), std::string::npos);
    EntropyValue g = io::entropy_of(io::parse_text(io::dump(j)));
    EXPECT_EQ(compare(g, h), 0);
    EXPECT_EQ(roundtrip(io::to_json(g)), io::dump(j));

    EXPECT_EQ(io::dump(io::to_json(entropy(ShiftSpace::edge_shift({{2}})))),
              io::dump(io::to_json(io::entropy_of(json::parse(R"({"poly":[-2,1],"interval":["2","2"]})")))));
    // interval missing the root, or holding two roots
    EXPECT_THROW(io::entropy_of(json::parse(R"({"poly":[-1,-1,1],"interval":["5/2","3"]})")), ParseError);
    EXPECT_THROW(io::entropy_of(json::parse(R"({"poly":[-1,0,1],"interval":["-2","2"]})")), ParseError);
}

TEST(IoCensus, RoundTrip) {
    PeriodicCensus c = q_census(ShiftSpace::edge_shift({{2}}), 3);
    json j = io::to_json(c);
    EXPECT_EQ(j, json::parse(R"({"horizon":3,"q":{"1":2,"2":2,"3":6}})"));
    PeriodicCensus d = io::census_of(j);
    EXPECT_EQ(d.q, c.q);
    EXPECT_THROW(io::census_of(json::parse(R"({"horizon":2,"q":{"1":2}})")), ParseError);
}

TEST(IoDecomposition, RoundTripCertifies) {
    ShiftSpace X = ShiftSpace::edge_shift({{2}});
    ShiftSpace Y = ShiftSpace::sft({"0"}, {});
    BlockMap phi = BlockMap::from_function(X, 0, 0, [](const Word&) { return "0"; });
    DecompositionReport r = decompose_dense(phi, Y, entropy(Y), Rational(1, 10));
    json j = io::to_json(r);
    DecompositionReport s = io::decomposition_of(io::parse_text(io::dump(j)));
    EXPECT_EQ(io::dump(io::to_json(s)), io::dump(j));
    DecompositionReport t = s;
    certify(t, phi);
    EXPECT_EQ(t.certificates, r.certificates);
}

TEST(IoTarget, Forms) {
    auto exact = io::target_of(json::parse(R"({"poly":[-2,0,1],"interval":["1","2"]})"), false);
    EXPECT_EQ(exact.form, "exact");
    auto lp = io::target_of(json::parse(R"({"log_power":{"r":"1/2","n":2}})"), false);
    EXPECT_EQ(compare(*lp.target.exact, *exact.target.exact), 0);
    auto nats = io::target_of(json::parse(R"({"nats":"1/5"})"), true);
    EXPECT_FALSE(nats.target.exact);
    EXPECT_THROW(io::target_of(json::parse(R"({"nats":"1/5"})"), false), InexactTarget);

    auto ap = io::target_of(json::parse(R"({"approx":0.4812118,"tol":"1/1000"})"), false);
    ASSERT_TRUE(ap.realization);
    EXPECT_EQ(compare(*ap.target.exact, entropy(golden())), 0);
    EXPECT_THROW(io::target_of(json::parse(R"({"approx":0.1234567,"tol":"1/1000000"})"), false), InexactTarget);
    EXPECT_THROW(io::target_of(json::parse(R"({"tol":"1/2"})"), false), ParseError);
}
