#include "mill/methods.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace mill {

std::string_view to_string(MethodId m) {
    switch (m) {
        case MethodId::MA: return "MA";
        case MethodId::MD: return "MD";
        case MethodId::MR: return "MR";
        case MethodId::MCV: return "MCV";
    }
    return "?";
}

std::optional<MethodId> parse_method(std::string_view s) {
    for (auto m : all_methods) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

std::string_view to_string(EmStatus::Kind k) {
    switch (k) {
        case EmStatus::Kind::passed: return "passed";
        case EmStatus::Kind::exempt: return "exempt";
        case EmStatus::Kind::failed: return "failed";
    }
    return "?";
}

namespace {

TermSet intersect(const TermSet& a, const TermSet& b) {
    TermSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

TermSet difference(const TermSet& a, const TermSet& b) {
    TermSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

struct Restricted {
    TermSet causes;
    TermSet effects;
};

Restricted restricted(const Observation& o, const Scope& scope) {
    return {restrict(o.causes(), scope.cause), restrict(o.effects(), scope.effect)};
}

std::vector<ObservationId> ascending(ObservationId a, ObservationId b) {
    return a < b ? std::vector{a, b} : std::vector{b, a};
}

// The single term by which `larger` exceeds `smaller`, when smaller is a strict
// subset of larger with exactly one extra element.
std::optional<Term> single_extra(const TermSet& larger, const TermSet& smaller) {
    if (larger.size() != smaller.size() + 1) return std::nullopt;
    if (!std::includes(larger.begin(), larger.end(), smaller.begin(), smaller.end())) return std::nullopt;
    return *difference(larger, smaller).begin();
}

// The varying functor pair between two sides: each side has exactly one term
// the other lacks, both carry arguments, and they share functor and category.
std::optional<std::pair<Term, Term>> single_variation(const TermSet& a, const TermSet& b) {
    auto only_a = difference(a, b);
    auto only_b = difference(b, a);
    if (only_a.size() != 1 || only_b.size() != 1) return std::nullopt;
    const Term& x = *only_a.begin();
    const Term& y = *only_b.begin();
    if (!x.has_argument() || !y.has_argument()) return std::nullopt;
    if (x.pattern() != y.pattern()) return std::nullopt;
    return std::pair{x, y};
}

}  // namespace

std::optional<Conjecture> apply_ma(const Observation& o1, const Observation& o2, const Scope& scope) {
    const auto r1 = restricted(o1, scope);
    const auto r2 = restricted(o2, scope);
    auto causes = intersect(r1.causes, r2.causes);
    auto effects = intersect(r1.effects, r2.effects);
    if (causes.size() != 1 || effects.size() != 1) return std::nullopt;
    Conjecture c{.cause = *causes.begin(), .effect = *effects.begin(), .method = MethodId::MA};
    c.support = ascending(o1.id(), o2.id());
    return c;
}

std::optional<Conjecture> apply_md(const Observation& o1, const Observation& o2, const Scope& scope) {
    const auto r1 = restricted(o1, scope);
    const auto r2 = restricted(o2, scope);
    const bool first_larger = r1.causes.size() > r2.causes.size();
    const auto& big = first_larger ? r1 : r2;
    const auto& small = first_larger ? r2 : r1;
    auto cause = single_extra(big.causes, small.causes);
    auto effect = single_extra(big.effects, small.effects);
    if (!cause || !effect) return std::nullopt;
    Conjecture c{.cause = *cause, .effect = *effect, .method = MethodId::MD};
    c.support = first_larger ? std::vector{o1.id(), o2.id()} : std::vector{o2.id(), o1.id()};
    return c;
}

std::optional<Conjecture> apply_mr(const Observation& obs, std::span<const KnownCausation> knowns,
                                   const Scope& scope) {
    auto [causes, effects] = restricted(obs, scope);
    std::vector<KnownCausation> used;
    TermSet matched_causes;
    TermSet matched_effects;
    for (const auto& k : knowns) {
        if (!causes.contains(k.cause) || !effects.contains(k.effect)) continue;
        if (matched_causes.contains(k.cause) && matched_effects.contains(k.effect)) continue;
        matched_causes.insert(k.cause);
        matched_effects.insert(k.effect);
        used.push_back(k);
    }
    auto residue_causes = difference(causes, matched_causes);
    auto residue_effects = difference(effects, matched_effects);
    if (residue_causes.size() != 1 || residue_effects.size() != 1) return std::nullopt;
    Conjecture c{.cause = *residue_causes.begin(), .effect = *residue_effects.begin(), .method = MethodId::MR};
    c.support = {obs.id()};
    c.premises = std::move(used);
    return c;
}

std::optional<Conjecture> apply_mcv(const Observation& o1, const Observation& o2, const Scope& scope) {
    const auto r1 = restricted(o1, scope);
    const auto r2 = restricted(o2, scope);
    auto cause = single_variation(r1.causes, r2.causes);
    auto effect = single_variation(r1.effects, r2.effects);
    if (!cause || !effect) return std::nullopt;
    Conjecture c{.cause = cause->first.pattern(), .effect = effect->first.pattern(), .method = MethodId::MCV};
    ArgumentPair p1{*cause->first.argument(), *effect->first.argument()};
    ArgumentPair p2{*cause->second.argument(), *effect->second.argument()};
    if (o1.id() < o2.id()) {
        c.parametric_pairs = {std::move(p1), std::move(p2)};
    } else {
        c.parametric_pairs = {std::move(p2), std::move(p1)};
    }
    c.support = ascending(o1.id(), o2.id());
    return c;
}

std::optional<Conjecture> apply_ma(const Observation& o1, const Observation& o2,
                                   const std::optional<Category>& constraint) {
    return apply_ma(o1, o2, Scope::both(constraint));
}

std::optional<Conjecture> apply_md(const Observation& o1, const Observation& o2,
                                   const std::optional<Category>& constraint) {
    return apply_md(o1, o2, Scope::both(constraint));
}

std::optional<Conjecture> apply_mr(const Observation& obs, std::span<const KnownCausation> knowns,
                                   const std::optional<Category>& constraint) {
    return apply_mr(obs, knowns, Scope::both(constraint));
}

std::optional<Conjecture> apply_mcv(const Observation& o1, const Observation& o2,
                                    const std::optional<Category>& constraint) {
    return apply_mcv(o1, o2, Scope::both(constraint));
}

EmStatus em_strict(const KnowledgeBase& kb, const Conjecture& c) {
    for (const auto& obs : kb.observations()) {
        if (obs.causes().contains(c.cause) && !obs.effects().contains(c.effect)) {
            return EmStatus::failed(obs.id());
        }
    }
    return EmStatus::passed();
}

EmStatus em_parametric(const KnowledgeBase& kb, const Conjecture& c) {
    auto paired_effect = [&](const std::string& cause_arg) -> const std::string* {
        for (const auto& [x, y] : c.parametric_pairs) {
            if (x == cause_arg) return &y;
        }
        return nullptr;
    };
    for (const auto& obs : kb.observations()) {
        for (const auto& t : obs.causes()) {
            if (!t.has_argument() || t.pattern() != c.cause) continue;
            const std::string* want = paired_effect(*t.argument());
            const bool found = std::any_of(obs.effects().begin(), obs.effects().end(), [&](const Term& e) {
                return e.has_argument() && e.pattern() == c.effect && (!want || *e.argument() == *want);
            });
            if (!found) return EmStatus::failed(obs.id());
        }
    }
    return EmStatus::passed();
}

std::optional<Conjecture> conflict_check(std::span<const Conjecture> recorded, const Conjecture& c) {
    for (const auto& r : recorded) {
        if (r.parametric() != c.parametric()) continue;
        if (r.cause == c.cause && r.effect != c.effect) return r;
        if (r.effect == c.effect && r.cause != c.cause) return r;
    }
    return std::nullopt;
}

int method_weight(MethodId m) {
    switch (m) {
        case MethodId::MD: return 3;
        case MethodId::MA: return 2;
        case MethodId::MCV: return 2;
        case MethodId::MR: return 1;
    }
    return 0;
}

int score(const Conjecture& c) {
    std::set<MethodId> methods{c.method};
    for (const auto& k : c.corroborations) methods.insert(k.method);
    int total = 0;
    for (auto m : methods) total += method_weight(m);
    return total;
}

}  // namespace mill
