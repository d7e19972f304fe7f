#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "castleworks/word.hpp"

#include <map>
#include <random>
#include <set>

using namespace castleworks;
using nlohmann::json;

namespace {

WordPtr word_from_spec(const json& stages) {
    std::vector<std::tuple<long long, long long, std::string>> spec;
    for (const auto& st : stages)
        spec.emplace_back(st.at(0).get<long long>(), st.at(1).get<long long>(),
                          st.at(2).get<std::string>());
    return make_toeplitz(spec);
}

std::map<std::string, WordPtr> oracle_words(const json& j) {
    std::map<std::string, WordPtr> out;
    for (const auto& [name, spec] : j.at("word_specs").items())
        out[name] = word_from_spec(spec);
    return out;
}

}  // namespace

TEST_CASE("toeplitz windows match the stage-filling oracle") {
    json j = load_expected("words_expected.json");
    auto words = oracle_words(j);
    REQUIRE(words.size() == 5);

    const Word& pd = *words.at("pd");
    const json& w0 = j.at("pd_window_0_15");
    for (int n = 0; n < 16; ++n) CHECK(pd.eval(zint(n)) == w0.at(n).get<std::string>());
    const json& wm = j.at("pd_window_m8_8");
    for (int n = -8; n <= 8; ++n) CHECK(pd.eval(zint(n)) == wm.at(n + 8).get<std::string>());

    // the helper constructor and the explicit stage list agree everywhere
    WordPtr pd2 = make_period_doubling(15);
    for (int n = -4096; n <= 4096; ++n) CHECK(pd2->z_eval(n) == pd.z_eval(n));
}

TEST_CASE("incomplete toeplitz specs report the uncovered position nearest zero") {
    json j = load_expected("words_expected.json");
    for (const auto& [name, expected] : j.at("incomplete").items()) {
        json stages = name == "pd_truncated"
                          ? json::parse(R"([[2,0,"0"],[4,1,"1"],[8,3,"0"],[16,7,"1"]])")
                          : json::parse(R"([[2,1,"1"],[4,0,"0"]])");
        try {
            word_from_spec(stages);
            FAIL("spec ", name, " should have been rejected");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrKind::config);
            std::string want = "position " + std::to_string(expected.get<long long>()) + " ";
            CHECK_MESSAGE(std::string(e.what()).find(want) != std::string::npos, e.what());
        }
    }
    // non-dividing periods are a config error too
    CHECK_THROWS_AS(make_toeplitz({{2, 0, "a"}, {3, 1, "b"}}), Error);
}

TEST_CASE("periodic words and two-stage toeplitz tilings") {
    WordPtr w = make_periodic("01");
    CHECK(w->eval(zint(5)) == "1");
    CHECK(w->eval(zint(0)) == "0");
    CHECK(w->eval(zint(-1)) == "1");

    WordPtr ab = make_toeplitz({{2, 0, "a"}, {2, 1, "b"}});
    WordPtr ab2 = make_periodic(std::vector<std::string>{"a", "b"});
    for (int n = -50; n <= 50; ++n) CHECK(ab->eval(zint(n)) == ab2->eval(zint(n)));
}

TEST_CASE("mirror is an involution and flips the axis") {
    json j = load_expected("words_expected.json");
    auto words = oracle_words(j);
    for (const auto& [name, w] : words) {
        CAPTURE(name);
        WordPtr m = mirror(w);
        CHECK(m->eval(zint(5)) == w->eval(zint(-5)));
        WordPtr mm = mirror(m);
        CHECK(mm == w);  // collapsed, not rewrapped
        for (int n = -1000; n <= 1000; ++n) CHECK(mm->z_eval(n) == w->z_eval(n));
    }
    WordPtr p = mirror(make_periodic("01"));
    CHECK(p->eval(zint(0)) == "0");
    CHECK(p->eval(zint(-1)) == "1");
}

TEST_CASE("amplified word formulas match the oracle spot table") {
    json j = load_expected("amplified_expected.json");
    WordPtr pd = make_period_doubling(15);
    WordPtr wh = amplify(pd);
    CHECK(wh->group->kind == GroupDesc::Kind::dihedral);
    for (const auto& row : j.at("formula_spot")) {
        long long n = row.at(0).get<long long>();
        int r = row.at(1).get<int>();
        CHECK(wh->eval(dih(n, r)) == row.at(2).get<std::string>());
    }
    // wh(s^n) = w(n), wh(s^n t) = w(-n)
    for (int n = -100; n <= 100; ++n) {
        CHECK(wh->eval_unchecked(dih(n, 0)) == pd->z_eval(n));
        CHECK(wh->eval_unchecked(dih(n, 1)) == pd->z_eval(-n));
    }
    CHECK(wh->eval(dih(0, 1)) == pd->eval(zint(0)));
    CHECK(wh->eval(dih(3, 1)) == pd->eval(zint(-3)));
    CHECK_THROWS_AS(amplify(wh), Error);  // only Z-words amplify
}

TEST_CASE("the reflection fixes the amplified word") {
    json j = load_expected("amplified_expected.json");
    REQUIRE(j.at("t_stabilizes").get<bool>());
    WordPtr wh = amplify(make_period_doubling(15));
    WordPtr tw = shift(dih(0, 1), wh);
    Ball ball = group_ball(*wh->group, 1000);
    for (const Elem& g : ball.elems) CHECK(tw->eval_unchecked(g) == wh->eval_unchecked(g));
    CHECK(agreement_radius(*tw, *wh, ball) == 1000);
}

TEST_CASE("shift is a left action") {
    WordPtr pd = make_period_doubling(15);
    WordPtr wh = amplify(pd);
    GroupPtr D = wh->group;

    CHECK(shift(group_identity(*D), wh) == wh);

    Ball b4 = group_ball(*D, 4);
    Ball b6 = group_ball(*D, 6);
    std::mt19937 rng(20260822);
    std::uniform_int_distribution<std::size_t> pick(0, b4.elems.size() - 1);
    for (int trial = 0; trial < 25; ++trial) {
        Elem g = b4.elems[pick(rng)], h = b4.elems[pick(rng)];
        WordPtr lhs = shift(g, shift(h, wh));
        WordPtr rhs = shift(group_mul(*D, g, h), wh);
        for (const Elem& x : b6.elems)
            CHECK(lhs->eval_unchecked(x) == rhs->eval_unchecked(x));
    }

    // over Z: composition adds, and shifting by the period is invisible
    std::uniform_int_distribution<long long> zpick(-4, 4);
    for (int trial = 0; trial < 25; ++trial) {
        long long a = zpick(rng), b = zpick(rng);
        WordPtr lhs = shift(zint(a), shift(zint(b), pd));
        for (long long n = -64; n <= 64; ++n) CHECK(lhs->z_eval(n) == pd->z_eval(n - a - b));
    }
    WordPtr alt = make_periodic("01");
    for (long long n = -6; n <= 6; ++n) {
        WordPtr sh = shift(zint(n), alt);
        bool same = true;
        for (long long x = -20; x <= 20; ++x) same = same && sh->z_eval(x) == alt->z_eval(x);
        CHECK(same == (n % 2 == 0));
    }

    CHECK_THROWS_AS(shift(dih(1, 1), pd), Error);  // group mismatch
}

TEST_CASE("product words relabel by the finite coordinate") {
    WordPtr wh = amplify(make_period_doubling(15));
    GroupPtr F = make_z2();
    WordPtr x0 = product_word(wh, F);

    CHECK(x0->alphabet.symbols == std::vector<std::string>{"0", "a_e", "a_u"});
    CHECK(x0->alphabet.symbols.size() == F->table.size() + 1);

    GroupPtr G = x0->group;
    Ball db = group_ball(*wh->group, 6);
    for (const Elem& g : db.elems) {
        bool one = wh->eval(g) == "1";
        for (int s = 0; s < 2; ++s) {
            Elem gs = Elem::pair(g, Elem::of_index(s));
            std::string want = one ? "a_" + F->names[static_cast<std::size_t>(s)] : "0";
            CHECK(x0->eval(gs) == want);
            // alphabet separation: coordinate s only ever shows {0, a_s}
            CHECK((x0->eval(gs) == "0" || x0->eval(gs) == "a_" + F->names[s]));
        }
    }

    // ((e,t) . x)_s = x_{t^-1 s}: shifting by the finite coordinate permutes
    // the relabeled copies
    Elem eu = Elem::pair(dih(0, 0), Elem::of_index(1));
    WordPtr moved = shift(eu, x0);
    for (const Elem& g : db.elems)
        for (int s = 0; s < 2; ++s) {
            Elem gs = Elem::pair(g, Elem::of_index(s));
            // u^-1 s in Z2 is 1-s
            std::string want = wh->eval(g) == "1" ? "a_" + F->names[static_cast<std::size_t>(1 - s)] : "0";
            CHECK(moved->eval(gs) == want);
        }

    CHECK_THROWS_AS(product_word(make_periodic("ab"), F), Error);  // non-binary inner
}

TEST_CASE("factor language sizes and reflection pairing") {
    GroupPtr Z = make_integers();
    WordPtr abc = make_periodic("abc");
    Ball win = group_ball(*Z, 10);

    auto L2 = factor_language(abc, 2, win.elems);
    CHECK(L2.size() == 3);  // period many patterns at any radius
    auto L0 = factor_language(abc, 0, win.elems);
    CHECK(L0.size() == 3);  // radius 0: the symbols that occur
    std::set<std::string> seen;
    for (const auto& p : L0) {
        REQUIRE(p.cells.size() == 1);
        seen.insert(p.cells[0].second);
    }
    CHECK(seen == std::set<std::string>{"a", "b", "c"});

    auto L4 = factor_language(make_periodic("01"), 4, group_ball(*Z, 12).elems);
    CHECK(L4.size() == 2);

    // window must contain the ball
    CHECK_THROWS_AS(factor_language(abc, 4, group_ball(*Z, 2).elems), Error);

    // amplified words: the pattern at g.t is the reflection of the pattern at g
    WordPtr wh = amplify(make_period_doubling(15));
    GroupPtr D = wh->group;
    Ball b3 = group_ball(*D, 3);
    Ball b2 = group_ball(*D, 2);
    Elem t = dih(0, 1);
    for (const Elem& g : group_ball(*D, 5).elems) {
        CylinderPattern at_gt = pattern_at(*wh, group_mul(*D, g, t), b2);
        CylinderPattern at_g = pattern_at(*wh, g, b3);
        for (const auto& [h, sym] : at_gt.cells) {
            Elem th = group_mul(*D, t, h);
            const std::string* found = nullptr;
            for (const auto& [x, s] : at_g.cells)
                if (x == th) found = &s;
            REQUIRE(found != nullptr);
            CHECK(*found == sym);
        }
    }
}

TEST_CASE("toeplitz regularity: every position lies in a monochrome residue class") {
    json j = load_expected("words_expected.json");
    auto words = oracle_words(j);
    for (const auto& [name, w] : words) {
        CAPTURE(name);
        for (long long n = -100; n <= 100; ++n) {
            long long p = 0;
            for (const Stage& st : w->stages)
                if (detail::floor_mod(n, st.period) == st.residue) {
                    p = st.period;
                    break;
                }
            REQUIRE(p > 0);
            int sym = w->z_eval(n);
            long long lo = n - ((n + 1000) / p) * p;  // least class member >= -1000
            for (long long m = lo; m <= 1000; m += p) CHECK(w->z_eval(m) == sym);
        }
    }
}

TEST_CASE("agreement radius reads off the word metric") {
    GroupPtr Z = make_integers();
    Ball b = group_ball(*Z, 16);
    WordPtr pd = make_period_doubling(15);
    CHECK(agreement_radius(*pd, *pd, b) == 16);
    // pd and its mirror agree exactly on [-2, 2]
    CHECK(pd->z_eval(3) != pd->z_eval(-3));
    CHECK(agreement_radius(*pd, *mirror(pd), b) == 2);

    WordPtr x = make_periodic("01");
    WordPtr y = make_periodic("0111");  // agrees with x on [-1,1], differs at +-2
    CHECK(agreement_radius(*x, *y, b) == 1);
    CHECK(agreement_radius(*x, *make_periodic("10"), b) == -1);
}

TEST_CASE("pattern construction validates cells and symbols") {
    Alphabet a = make_alphabet({"0", "1"});
    CHECK_THROWS_AS(make_pattern({{zint(0), "0"}, {zint(0), "1"}}, a), Error);
    CHECK_THROWS_AS(make_pattern({{zint(0), "x"}}, a), Error);
    CylinderPattern p = make_pattern({{zint(1), "1"}, {zint(0), "0"}}, a);
    CHECK(p.cells[0].first == zint(0));  // sorted canonically

    WordPtr pd = make_period_doubling(15);
    CHECK_THROWS_AS(pd->eval(dih(1, 1)), Error);           // wrong group
    CHECK_THROWS_AS(make_alphabet({"a", "a"}), Error);     // duplicate symbol
    CHECK_THROWS_AS(make_alphabet({}), Error);             // empty
}
