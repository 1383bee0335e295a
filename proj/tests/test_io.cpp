#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <regex>

#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace ropacity;
using Catch::Matchers::ContainsSubstring;
using fixtures::fig1;

namespace {

std::string write(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
    auto path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

std::size_t count(const std::string& text, const std::regex& re) {
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                  std::sregex_iterator()));
}

const std::regex kNode(R"(^  "[^"]*"( \[[^\]]*\])?;$)", std::regex::multiline);
const std::regex kEdge(R"(^  "[^"]*" -> "[^"]*" \[label="[^"]*"\];$)", std::regex::multiline);

const char* kMinimal = R"({
  "states": ["p", "q"],
  "inputs": ["x"],
  "outputs": ["a"],
  "observable": ["a"],
  "initial": ["p"],
  "edges": [["p", "x", "a", "q"]]
})";

}  // namespace

TEST_CASE("the bundled model file loads") {
    auto m = fig1();
    CHECK(m.edges.size() == 17);
    CHECK(m.initial == StateSet{"0"});
    CHECK(m.secret == StateSet{"3"});
    CHECK(m.alphabet.observable == SymbolSet{"a", "d1", "d2"});
    CHECK_FALSE(m.comment.empty());
    CHECK(m.edges.contains({"2", "x2", "d1", "3"}));
}

TEST_CASE("save then load is the identity") {
    auto dir = fixtures::scratch("roundtrip");
    std::mt19937 rng(5);
    gen::ModelShape shape;
    shape.spontaneous_moves = true;
    for (int i = 0; i < 40; ++i) {
        auto m = gen::model(rng, shape);
        if (i % 3 == 0) m.nonsecret = StateSet{*m.states.begin()};
        if (i % 4 == 0) m.marked = m.secret;
        auto path = (dir / "m.odes").string();
        save_model(m, path);
        CHECK(load_model(path) == m);
    }
    auto f = fig1();
    save_model(f, (dir / "fig1.odes").string());
    CHECK(load_model((dir / "fig1.odes").string()) == f);
}

TEST_CASE("model parse errors carry a location") {
    auto dir = fixtures::scratch("parse");

    SECTION("duplicate state") {
        auto path = write(dir, "dup.odes", R"({"states": ["p", "q", "p"], "inputs": ["x"], "outputs": ["a"],
            "observable": [], "initial": ["p"], "edges": []})");
        CHECK_THROWS_AS(load_model(path), ParseError);
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("field 'states[2]'") &&
                                                ContainsSubstring("duplicate state 'p'"));
    }
    SECTION("malformed JSON reports line and column") {
        auto path = write(dir, "bad.odes", "{\n  \"states\": [\"p\",\n  ]\n}\n");
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("bad.odes:3:"));
    }
    SECTION("unknown key") {
        auto path = write(dir, "extra.odes", R"({"states": [], "colour": 1})");
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("field 'colour': unknown key"));
    }
    SECTION("missing key") {
        auto path = write(dir, "missing.odes", R"({"states": ["p"]})");
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("field 'inputs': missing required key"));
    }
    SECTION("edge with the wrong arity") {
        auto path = write(dir, "arity.odes", R"({"states": ["p"], "inputs": ["x"], "outputs": ["a"],
            "observable": [], "initial": ["p"], "edges": [["p", "x", "p"]]})");
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("field 'edges[0]': expected 4 elements"));
    }
    SECTION("wrong type") {
        auto path = write(dir, "type.odes", R"({"states": ["p", 3]})");
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("field 'states[1]': expected a string"));
    }
    SECTION("unsupported epsilon mode") {
        std::string text = kMinimal;
        text.insert(1, R"("epsilon_output": "some", )");
        auto path = write(dir, "eps.odes", text);
        CHECK_THROWS_WITH(load_model(path), ContainsSubstring("epsilon_output"));
    }
    SECTION("missing file") {
        CHECK_THROWS_WITH(load_model((dir / "absent.odes").string()), ContainsSubstring("cannot open"));
    }
}

TEST_CASE("invalid models are rejected with every diagnostic") {
    auto dir = fixtures::scratch("invalid");
    auto path = write(dir, "bad.odes", R"({"states": ["p"], "inputs": ["x"], "outputs": ["a"],
        "observable": ["a"], "initial": [], "edges": [["p", "x", "a", "z"]]})");
    CHECK_THROWS_WITH(load_model(path), ContainsSubstring("invalid model") &&
                                            ContainsSubstring("initial state set is empty; unknown target state 'z'"));
}

TEST_CASE("epsilon_output all adds silent copies") {
    std::string text = kMinimal;
    text.insert(1, R"("epsilon_output": "all", )");
    auto m = parse_model(text);
    CHECK(m.edges == std::set<Edge>{{"p", "x", "a", "q"}, {"p", "x", "~", "q"}});
}

TEST_CASE("automaton files round-trip and are validated") {
    auto dir = fixtures::scratch("nfa");
    auto a = fixtures::nfa({"s0", "s1"}, {"a", "b"}, {"s0"}, {"s1"}, {{"s0", "a", "s1"}, {"s1", "b", "s1"}});
    save_language_spec({a}, (dir / "spec.json").string());
    CHECK(load_language_spec((dir / "spec.json").string()).nfa == a);

    auto bad = write(dir, "bad.json", R"({"states": ["s"], "events": ["a"], "initial": ["s"],
        "marked": [], "transitions": [["s", "c", "s"]]})");
    CHECK_THROWS_WITH(load_language_spec(bad), ContainsSubstring("invalid automaton"));
}

TEST_CASE("verdict reports serialize in a fixed key order") {
    auto v = verify_rcso(fig1(), StateSet{"3"});
    auto text = to_json(v).dump();
    CHECK(text ==
          R"({"property":"rcso","opaque":false,"method":"observer","witness":{"inputs":["x1","x1","x2"],)"
          R"("observation":["d1","d2","a"],"estimate":["3"],"labels":[["x1","d1"],["x1","d2"],["x2","a"]]}})");

    auto bounded = oracle_verify_rcso(fig1(), StateSet{"1"}, 2);
    auto j = to_json(bounded);
    CHECK(j["method"] == "oracle-bounded");
    CHECK(j["bound"] == 2);
}

TEST_CASE("observer JSON uses subset names") {
    auto j = to_json(build_rcso_observer(fig1()));
    CHECK(j["initial"] == "{0}");
    CHECK(j["states"].size() == 5);
    CHECK(j["transitions"].size() == 18);
    CHECK(j["transitions"][0] == Json::array({"{0}", "x1", "d1", "{1,3}"}));
}

TEST_CASE("DOT export of a model") {
    auto m = fig1();
    auto dot = to_dot(m);
    CHECK(count(dot, kNode) == 4);
    CHECK(count(dot, kEdge) == m.edges.size());
    CHECK_THAT(dot, ContainsSubstring(R"("0" -> "1" [label="x1/d1"];)"));
    CHECK_THAT(dot, ContainsSubstring(R"("3" -> "3" [label="x2/~"];)"));
    CHECK_THAT(dot, ContainsSubstring(R"("3" [fillcolor=lightgrey, style="filled"];)"));
    CHECK_THAT(dot, ContainsSubstring(R"("0" [style="bold"];)"));
    CHECK(dot == to_dot(fig1()));
}

TEST_CASE("DOT export marks only marked states with double circles") {
    auto m = fig1();
    CHECK(count(to_dot(m), std::regex(R"(^  "[^"]*" \[[^\]]*doublecircle)", std::regex::multiline)) == 0);
    m.marked = {"2"};
    auto dot = to_dot(m);
    CHECK_THAT(dot, ContainsSubstring(R"("2" [shape=doublecircle];)"));
}

TEST_CASE("DOT export of automata and observers") {
    auto m = fig1();
    auto passive = determinize(build_passive_nfa(m), m.alphabet.observable).automaton;
    auto dot = to_dot(passive);
    CHECK(count(dot, kNode) == 4);
    CHECK(count(dot, kEdge) == 10);
    CHECK_THAT(dot, ContainsSubstring(R"("{0}" -> "{1,2,3}" [label="d2"];)"));

    auto obs = build_rcso_observer(m);
    auto odot = to_dot(obs, m.secret);
    CHECK(count(odot, kNode) == 5);
    CHECK(count(odot, kEdge) == 18);
    CHECK_THAT(odot, ContainsSubstring(R"x("{2,3}" -> "{3}" [label="(x2,a)"];)x"));
    CHECK_THAT(odot, ContainsSubstring(R"("{3}" [fillcolor=lightgrey, style="filled"];)"));

    auto dir = fixtures::scratch("dot");
    export_dot(obs, (dir / "obs.dot").string());
    std::ifstream in(dir / "obs.dot");
    std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(written == to_dot(obs));
}

TEST_CASE("DOT identifiers are escaped") {
    auto m = fixtures::make({"a\"b"}, {"x"}, {"o"}, {"o"}, {"a\"b"}, {{"a\"b", "x", "o", "a\"b"}});
    CHECK_THAT(to_dot(m), ContainsSubstring(R"("a\"b" -> "a\"b")"));
}
