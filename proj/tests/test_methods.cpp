#include <doctest.h>

#include <random>

#include "mill/methods.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace mill;
using mill::testing::T;
using mill::testing::load_fixture;
using mill::testing::obs;

namespace {

const Observation& row(const KnowledgeBase& kb, ObservationId id) { return *kb.find(id); }

Conjecture conj(const char* cause, const char* effect, MethodId m = MethodId::MA) {
    return Conjecture{.cause = T(cause), .effect = T(effect), .method = m, .support = {1}};
}

// Literal reading of the difference canon, used to cross-check apply_md.
bool difference_applies(const Observation& a, const Observation& b, const std::optional<Category>& scope) {
    for (const auto* big : {&a, &b}) {
        const auto* small = big == &a ? &b : &a;
        const auto bc = restrict(big->causes(), scope), be = restrict(big->effects(), scope);
        const auto sc = restrict(small->causes(), scope), se = restrict(small->effects(), scope);
        for (const auto& x : bc) {
            for (const auto& y : be) {
                auto bc2 = bc, be2 = be;
                bc2.erase(x);
                be2.erase(y);
                if (!sc.contains(x) && !se.contains(y) && bc2 == sc && be2 == se) return true;
            }
        }
    }
    return false;
}

}  // namespace

TEST_CASE("agreement") {
    const auto grimm = load_fixture("grimm.kb");
    SUBCASE("grimm 1 and 2 under consonants") {
        auto c = apply_ma(row(grimm, 1), row(grimm, 2), Category("c"));
        REQUIRE(c);
        CHECK(c->cause == T("c:t"));
        CHECK(c->effect == T("c:ð"));
        CHECK(c->method == MethodId::MA);
        CHECK(c->support == std::vector<ObservationId>{1, 2});
    }
    SUBCASE("morphemes") {
        auto book = obs(1, {"book", "let"}, {"'book'", "diminutive"});
        auto leaf = obs(2, {"leaf", "let"}, {"'leaf'", "diminutive"});
        auto c = apply_ma(book, leaf, std::nullopt);
        REQUIRE(c);
        CHECK(c->cause == T("let"));
        CHECK(c->effect == T("diminutive"));
    }
    SUBCASE("identical observations share too much") {
        auto a = obs(1, {"x", "y"}, {"p", "q"});
        auto b = obs(2, {"x", "y"}, {"p", "q"});
        CHECK_FALSE(apply_ma(a, b, std::nullopt));
    }
    SUBCASE("shared vowels do not block consonants") {
        // Unrestricted, obs 1 and 5 share u on the cause side but nothing on the effect side.
        CHECK_FALSE(apply_ma(row(grimm, 1), row(grimm, 5), std::nullopt));
        CHECK_FALSE(apply_ma(row(grimm, 1), row(grimm, 5), Category("c")));
        CHECK(apply_ma(row(grimm, 3), row(grimm, 4), Category("c")));
    }
}

TEST_CASE("difference") {
    SUBCASE("morphemes") {
        auto with_let = obs(1, {"book", "let"}, {"'book'", "diminutive"});
        auto plain = obs(4, {"book"}, {"'book'"});
        for (auto c : {apply_md(with_let, plain, std::nullopt), apply_md(plain, with_let, std::nullopt)}) {
            REQUIRE(c);
            CHECK(c->cause == T("let"));
            CHECK(c->effect == T("diminutive"));
            CHECK(c->support == std::vector<ObservationId>{1, 4});
        }
    }
    SUBCASE("grimm 1 and 2") {
        const auto grimm = load_fixture("grimm.kb");
        CHECK_FALSE(apply_md(row(grimm, 1), row(grimm, 2), Category("c")));
    }
    SUBCASE("identical observations") {
        auto a = obs(1, {"x"}, {"p"});
        auto b = obs(2, {"x"}, {"p"});
        CHECK_FALSE(apply_md(a, b, std::nullopt));
    }
    SUBCASE("extras must sit in the same observation") {
        auto a = obs(1, {"x", "y"}, {"p"});
        auto b = obs(2, {"x"}, {"p", "q"});
        CHECK_FALSE(apply_md(a, b, std::nullopt));
    }
}

TEST_CASE("difference never fires on the 28 grimm pairs") {
    const auto grimm = load_fixture("grimm.kb");
    const auto& rows = grimm.observations();
    int pairs = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            ++pairs;
            CHECK_FALSE(difference_applies(rows[i], rows[j], Category("c")));
            CHECK_FALSE(apply_md(rows[i], rows[j], Category("c")));
            CHECK(difference_applies(rows[i], rows[j], std::nullopt) ==
                  apply_md(rows[i], rows[j], std::nullopt).has_value());
        }
    }
    CHECK(pairs == 28);
}

TEST_CASE("residues") {
    SUBCASE("deciphering obs 3") {
        const auto kb = load_fixture("decipher.kb");
        const std::vector<KnownCausation> knowns{{T("mizë"), T("zbwb")}};
        auto c = apply_mr(row(kb, 3), knowns, std::nullopt);
        REQUIRE(c);
        CHECK(c->cause == T("pinte"));
        CHECK(c->effect == T("šth"));
        CHECK(c->support == std::vector<ObservationId>{3});
        CHECK(c->premises == knowns);
    }
    SUBCASE("morphemes") {
        auto o = obs(5, {"book", "let", "s"}, {"'book'", "diminutive", "plural"});
        const std::vector<KnownCausation> knowns{{T("book"), T("'book'")}, {T("s"), T("plural")}};
        auto c = apply_mr(o, knowns, std::nullopt);
        REQUIRE(c);
        CHECK(c->cause == T("let"));
        CHECK(c->effect == T("diminutive"));
        CHECK(c->premises.size() == 2);
    }
    SUBCASE("degenerate singleton") {
        auto c = apply_mr(obs(1, {"A"}, {"a"}), {}, std::nullopt);
        REQUIRE(c);
        CHECK(c->cause == T("A"));
        CHECK(c->effect == T("a"));
        CHECK(c->premises.empty());
    }
    SUBCASE("compound residue is not applicable") {
        CHECK_FALSE(apply_mr(obs(1, {"A", "B"}, {"a", "b"}), {}, std::nullopt));
        CHECK_FALSE(apply_mr(obs(1, {"A"}, {"a", "b"}), {}, std::nullopt));
    }
    SUBCASE("a known applies only when both ends are present") {
        const std::vector<KnownCausation> knowns{{T("s"), T("plural")}};
        CHECK_FALSE(apply_mr(obs(3, {"let", "s"}, {"diminutive"}), knowns, std::nullopt));
    }
}

TEST_CASE("concomitant variation") {
    auto u = obs(1, {"conduct", "accent(u)"}, {"gr-meaning(verb)"});
    auto o = obs(2, {"conduct", "accent(o)"}, {"gr-meaning(name)"});
    SUBCASE("conduct") {
        auto c = apply_mcv(u, o, std::nullopt);
        REQUIRE(c);
        CHECK(c->cause == T("accent"));
        CHECK(c->effect == T("gr-meaning"));
        CHECK(c->parametric());
        CHECK(c->parametric_pairs == std::vector<ArgumentPair>{{"u", "verb"}, {"o", "name"}});
        CHECK(apply_mcv(o, u, std::nullopt) == c);
    }
    SUBCASE("identical observations") { CHECK_FALSE(apply_mcv(u, obs(2, {"conduct", "accent(u)"}, {"gr-meaning(verb)"}), std::nullopt)); }
    SUBCASE("two varying arguments") {
        auto a = obs(1, {"accent(u)", "stress(x)"}, {"m(verb)"});
        auto b = obs(2, {"accent(o)", "stress(y)"}, {"m(name)"});
        CHECK_FALSE(apply_mcv(a, b, std::nullopt));
    }
    SUBCASE("functor must match") {
        auto a = obs(1, {"accent(u)"}, {"m(verb)"});
        auto b = obs(2, {"stress(o)"}, {"m(name)"});
        CHECK_FALSE(apply_mcv(a, b, std::nullopt));
    }
}

TEST_CASE("strict elimination") {
    const auto grimm = load_fixture("grimm.kb");
    const auto exception = load_fixture("grimm_exception.kb");
    CHECK(em_strict(grimm, conj("c:t", "c:ð")) == EmStatus::passed());
    CHECK(em_strict(exception, conj("c:t", "c:ð")) == EmStatus::failed(9));
    CHECK(em_strict(grimm, conj("c:z", "c:ð")) == EmStatus::passed());
    // p occurs in obs 3-6 and f with it each time.
    CHECK(em_strict(grimm, conj("c:p", "c:f")) == EmStatus::passed());
    CHECK(em_strict(grimm, conj("c:s", "c:t")) == EmStatus::failed(2));
}

TEST_CASE("parametric elimination") {
    auto kb = load_fixture("mcv.kb");
    auto c = apply_mcv(row(kb, 1), row(kb, 2), std::nullopt);
    REQUIRE(c);
    CHECK(em_parametric(kb, *c) == EmStatus::passed());
    kb.append(obs(3, {"record", "accent(u)"}, {"gr-meaning(name)"}));
    CHECK(em_parametric(kb, *c) == EmStatus::failed(3));
    kb = load_fixture("mcv.kb");
    kb.append(obs(3, {"record", "accent(i)"}, {"other"}));
    CHECK(em_parametric(kb, *c) == EmStatus::failed(3));
}

TEST_CASE("conflict check") {
    const std::vector<Conjecture> recorded{conj("t", "ð")};
    CHECK_FALSE(conflict_check(recorded, conj("t", "ð", MethodId::MD)));
    auto clash = conflict_check(recorded, conj("t", "t"));
    REQUIRE(clash);
    CHECK(clash->effect == T("ð"));
    CHECK(conflict_check(recorded, conj("d", "ð")));
    CHECK_FALSE(conflict_check({}, conj("t", "ð")));
    Conjecture pattern{.cause = T("t"), .effect = T("x"), .method = MethodId::MCV, .support = {1, 2}};
    CHECK_FALSE(conflict_check(recorded, pattern));
}

TEST_CASE("score") {
    auto c = conj("a", "b");
    CHECK(score(c) == 2);
    c.corroborations.push_back({MethodId::MD, {1, 4}});
    CHECK(score(c) == 5);
    c.corroborations.push_back({MethodId::MD, {3, 4}});
    CHECK(score(c) == 5);
    CHECK(score(conj("a", "b", MethodId::MR)) == 1);
    CHECK(score(conj("a", "b", MethodId::MD)) == 3);
    CHECK(method_weight(MethodId::MCV) == 2);
}

TEST_CASE("canon properties on random observations") {
    std::mt19937 rng(20260419);
    for (int round = 0; round < 400; ++round) {
        const auto sample = mill::testing::random_kb(rng);
        const auto& kb = sample.kb;
        const auto& rows = kb.observations();
        const Scope scope = Scope::both(sample.scope);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                const auto& a = rows[i];
                const auto& b = rows[j];
                CHECK(apply_ma(a, b, scope) == apply_ma(b, a, scope));
                CHECK(apply_md(a, b, scope) == apply_md(b, a, scope));
                CHECK(apply_mcv(a, b, scope) == apply_mcv(b, a, scope));
                CHECK(apply_ma(a, b, scope) == apply_ma(a, b, scope));

                if (auto c = apply_ma(a, b, scope)) {
                    const auto ca = restrict(a.causes(), scope.cause), cb = restrict(b.causes(), scope.cause);
                    const auto ea = restrict(a.effects(), scope.effect), eb = restrict(b.effects(), scope.effect);
                    CHECK((ca.contains(c->cause) && cb.contains(c->cause)));
                    CHECK((ea.contains(c->effect) && eb.contains(c->effect)));
                    int shared_causes = 0, shared_effects = 0;
                    for (const auto& t : ca) shared_causes += cb.contains(t);
                    for (const auto& t : ea) shared_effects += eb.contains(t);
                    CHECK(shared_causes == 1);
                    CHECK(shared_effects == 1);
                }
                if (auto c = apply_mcv(a, b, scope)) {
                    CHECK(c->parametric_pairs.size() == 2);
                    CHECK(c->parametric_pairs[0] != c->parametric_pairs[1]);
                }
            }
            if (auto c = apply_mr(rows[i], kb.knowns(), scope)) {
                TermSet causes{c->cause}, effects{c->effect};
                for (const auto& k : c->premises) {
                    causes.insert(k.cause);
                    effects.insert(k.effect);
                }
                CHECK(causes == restrict(rows[i].causes(), scope.cause));
                CHECK(effects == restrict(rows[i].effects(), scope.effect));
            }
            for (const auto& t : rows[i].causes()) {
                for (const auto& e : rows[i].effects()) {
                    const auto c = Conjecture{.cause = t, .effect = e, .support = {rows[i].id()}};
                    const auto status = em_strict(kb, c);
                    bool universal = true;
                    for (const auto& o : rows) universal = universal && (!o.causes().contains(t) || o.effects().contains(e));
                    CHECK(status.ok() == universal);
                }
            }
        }
    }
}
