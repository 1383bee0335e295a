#include <catch_amalgamated.hpp>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

using namespace ropacity;
using fixtures::fig1;

TEST_CASE("active intruder exposes {2} with one input") {
    auto v = verify_rcso(fig1(), StateSet{"2"});
    CHECK_FALSE(v.opaque);
    CHECK(v.method == Method::observer);
    REQUIRE(v.witness);
    CHECK(v.witness->inputs == Word{"x2"});
    CHECK(v.witness->labels == LabelWord{{"x2", "d2"}});
    CHECK(v.witness->estimate == StateSet{"2"});
}

TEST_CASE("active intruder exposes {3} after x1 x1 x2") {
    auto v = verify_rcso(fig1(), StateSet{"3"});
    CHECK_FALSE(v.opaque);
    REQUIRE(v.witness);
    CHECK(v.witness->inputs == Word{"x1", "x1", "x2"});
    CHECK(v.witness->observation == Word{"d1", "d2", "a"});
    CHECK(v.witness->estimate == StateSet{"3"});
    CHECK(oracle::estimate(fig1(), v.witness->labels) == StateSet{"3"});
}

TEST_CASE("the model's own secret set is used by default") {
    auto v = verify_rcso(fig1());
    CHECK_FALSE(v.opaque);
    CHECK(v.witness->estimate == StateSet{"3"});
}

TEST_CASE("empty secret is opaque; the full state set is rejected") {
    CHECK(verify_rcso(fig1(), StateSet{}).opaque);
    CHECK(verify_cso_passive(fig1(), StateSet{}).opaque);
    CHECK_THROWS_WITH(verify_rcso(fig1(), StateSet{"0", "1", "2", "3"}),
                      "secret set must be strict subset of the states");
    CHECK_THROWS_WITH(verify_cso_passive(fig1(), StateSet{"0", "1", "2", "3"}),
                      "secret set must be strict subset of the states");
    CHECK_THROWS_WITH(verify_rcso(fig1(), StateSet{"7"}), "unknown secret state '7'");
}

TEST_CASE("passive intruder verdicts on the example") {
    CHECK(verify_cso_passive(fig1(), StateSet{"3"}).opaque);
    CHECK(verify_cso_passive(fig1(), StateSet{"2"}).opaque);
    auto v = verify_cso_passive(fig1(), StateSet{"1", "3"});
    CHECK_FALSE(v.opaque);
    REQUIRE(v.witness);
    CHECK(v.witness->observation == Word{"d1"});
    CHECK(v.witness->estimate == StateSet{"1", "3"});
}

TEST_CASE("explicit non-secret sets") {
    auto m = fig1();
    // Only state 1 counts as a cover: {2,3} alone already exposes.
    auto v = verify_rcso(m, StateSet{"3"}, StateSet{"1"});
    CHECK_FALSE(v.opaque);
    CHECK(v.witness->estimate == StateSet{"2", "3"});
    CHECK(v.witness->labels.size() == 2);
    CHECK(verify_rcso(m, StateSet{"3"}, StateSet{"0", "1", "2"}).opaque ==
          verify_rcso(m, StateSet{"3"}).opaque);
    CHECK_THROWS_WITH(secret_sets(m, {"3"}, StateSet{"9"}), "unknown nonsecret state '9'");
}

TEST_CASE("bounded brute-force check on the example") {
    auto v3 = oracle_verify_rcso(fig1(), StateSet{"3"}, 3);
    CHECK_FALSE(v3.opaque);
    CHECK(v3.method == Method::oracle_bounded);
    CHECK(v3.bound == std::size_t{3});
    CHECK(v3.witness->inputs == Word{"x1", "x1", "x2"});
    CHECK(v3.witness->labels == verify_rcso(fig1(), StateSet{"3"}).witness->labels);

    auto v2 = oracle_verify_rcso(fig1(), StateSet{"2"}, 1);
    CHECK_FALSE(v2.opaque);
    CHECK(v2.witness->inputs == Word{"x2"});

    CHECK(oracle_verify_rcso(fig1(), StateSet{"3"}, 2).opaque);
    CHECK_THROWS_WITH(oracle_verify_rcso(fig1(), StateSet{"3"}, 0), "oracle bound must be at least 1");
}

TEST_CASE("observer verdict agrees with brute force within the bound") {
    std::mt19937 rng(71);
    gen::ModelShape shape;
    shape.spontaneous_moves = true;
    int exposed = 0;
    for (int i = 0; i < 120; ++i) {
        auto m = gen::model(rng, shape);
        auto exact = verify_rcso(m);
        exposed += !exact.opaque;
        CHECK(opaque_within(exact, 5) == oracle_verify_rcso(m, secret_sets(m), 5).opaque);
        CHECK(opaque_within(exact, 4) == oracle::rcso_opaque_upto(m, m.secret, 4));
    }
    CHECK(exposed > 10);
}

TEST_CASE("witnesses replay and are shortest") {
    std::mt19937 rng(73);
    for (int i = 0; i < 100; ++i) {
        auto m = gen::model(rng);
        auto v = verify_rcso(m);
        if (v.opaque) continue;
        const auto& w = *v.witness;
        auto e = oracle::estimate(m, w.labels);
        CHECK_FALSE(e.empty());
        CHECK(detail::is_subset(e, m.secret));
        CHECK(e == w.estimate);
        CHECK(label_inputs(w.labels) == w.inputs);
        CHECK(label_observation(w.labels) == w.observation);
        if (!w.labels.empty()) CHECK(oracle::rcso_opaque_upto(m, m.secret, w.labels.size() - 1));
    }
}

TEST_CASE("shrinking the secret keeps opacity") {
    std::mt19937 rng(79);
    for (int i = 0; i < 80; ++i) {
        auto m = gen::model(rng);
        if (!verify_rcso(m).opaque) continue;
        for (const auto& q : m.secret) {
            auto smaller = m.secret;
            smaller.erase(q);
            CHECK(verify_rcso(m, smaller).opaque);
        }
    }
}

TEST_CASE("passive check agrees with a brute-force observation search") {
    std::mt19937 rng(83);
    for (int i = 0; i < 60; ++i) {
        auto m = gen::model(rng);
        auto v = verify_cso_passive(m, secret_sets(m));
        // Observation words up to length 4, estimates by direct path search with inputs ignored.
        bool brute_opaque = true;
        std::function<void(const StateSet&, int)> walk = [&](const StateSet& current, int depth) {
            if (!current.empty() && detail::is_subset(current, m.secret)) brute_opaque = false;
            if (depth == 4) return;
            for (const auto& d : m.alphabet.observable) {
                StateSet next;
                for (const auto& e : m.edges)
                    if (current.count(e.from) && e.output == d) next.insert(e.to);
                // close under steps whose output the intruder cannot see
                bool grew = true;
                while (grew) {
                    grew = false;
                    for (const auto& e : m.edges)
                        if (next.count(e.from) && !m.alphabet.observable.count(e.output) && !is_silent(e.output) &&
                            next.insert(e.to).second)
                            grew = true;
                }
                if (!next.empty()) walk(next, depth + 1);
            }
        };
        StateSet start = m.initial;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& e : m.edges)
                if (start.count(e.from) && !m.alphabet.observable.count(e.output) && !is_silent(e.output) &&
                    start.insert(e.to).second)
                    grew = true;
        }
        walk(start, 0);
        if (v.opaque) CHECK(brute_opaque);
        if (!brute_opaque) CHECK_FALSE(v.opaque);
    }
}

TEST_CASE("per-initial-state formulation as a diagnostic") {
    auto sets = secret_sets(fig1(), {"3"});
    CHECK(oracle_verify_rcso_per_initial(fig1(), sets, 3).opaque == oracle_verify_rcso(fig1(), sets, 3).opaque);

    // Two initial states answering x differently: the pooled estimate after (x,a) is {s}, but
    // for every input word some initial state keeps a non-secret state possible.
    auto m = fixtures::make({"i", "j", "s", "n"}, {"x"}, {"a", "b"}, {"a", "b"}, {"i", "j"},
                            {{"i", "x", "a", "s"}, {"j", "x", "b", "n"}});
    auto split = secret_sets(m, {"s"});
    CHECK_FALSE(oracle_verify_rcso(m, split, 2).opaque);
    auto per = oracle_verify_rcso_per_initial(m, split, 2);
    CHECK(per.opaque);
    CHECK(per.property == "rcso-per-initial");
}
