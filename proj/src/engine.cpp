#include "mill/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace mill {

std::string_view to_string(EmPolicy p) {
    switch (p) {
        case EmPolicy::strict_all: return "strict-all";
        case EmPolicy::strict_nonresidue: return "strict-nonresidue";
        case EmPolicy::conflict_only: return "conflict-only";
    }
    return "?";
}

std::string_view to_string(Mode m) { return m == Mode::goal ? "goal" : "saturate"; }

std::optional<EmPolicy> parse_em_policy(std::string_view s) {
    for (auto p : {EmPolicy::strict_all, EmPolicy::strict_nonresidue, EmPolicy::conflict_only}) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "goal") return Mode::goal;
    if (s == "saturate") return Mode::saturate;
    return std::nullopt;
}

std::string_view to_string(TraceEvent::Kind k) {
    switch (k) {
        case TraceEvent::Kind::accepted: return "accepted";
        case TraceEvent::Kind::rejected_em: return "rejected-em";
        case TraceEvent::Kind::rejected_conflict: return "rejected-conflict";
        case TraceEvent::Kind::depth_exceeded: return "depth-exceeded";
        case TraceEvent::Kind::cycle_skipped: return "cycle-skipped";
    }
    return "?";
}

void EngineConfig::validate() const {
    std::set<MethodId> seen(method_order.begin(), method_order.end());
    if (seen.size() != method_order.size()) throw ConfigError("method order must list each method exactly once");
    if (max_depth <= 0) throw ConfigError("max depth must be positive");
}

bool EngineConfig::em_applies(MethodId m) const {
    switch (em_policy) {
        case EmPolicy::strict_all: return true;
        case EmPolicy::strict_nonresidue: return m != MethodId::MR;
        case EmPolicy::conflict_only: return false;
    }
    return true;
}

std::array<MethodId, 4> parse_method_order(std::string_view s) {
    std::array<MethodId, 4> out{};
    std::size_t n = 0;
    std::string item;
    std::istringstream in{std::string(s)};
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        auto m = parse_method(item);
        if (!m) throw ConfigError("unknown method '" + item + "' in method order");
        if (n == out.size()) throw ConfigError("method order lists more than four methods");
        out[n++] = *m;
    }
    if (n != out.size()) throw ConfigError("method order must list all four methods");
    EngineConfig{.method_order = out}.validate();
    return out;
}

std::string BoundValue::str() const {
    if (!parametric) return term.str();
    return (term.category() ? term.category()->name() + ":" : std::string()) + term.functor() + "(*)";
}

const Conjecture* ConjectureStore::find_pair(const Conjecture& c) const {
    for (const auto& item : items_) {
        if (item.same_pair(c)) return &item;
    }
    return nullptr;
}

const Conjecture* ConjectureStore::find_by(Side side, const Term& t) const {
    for (const auto& item : items_) {
        if (item.parametric()) continue;
        if ((side == Side::cause ? item.cause : item.effect) == t) return &item;
    }
    return nullptr;
}

bool ConjectureStore::accept(Conjecture c) {
    if (find_pair(c) || conflict_check(items_, c)) return false;
    items_.push_back(std::move(c));
    return true;
}

namespace {

Side opposite(Side s) { return s == Side::cause ? Side::effect : Side::cause; }

const Term& term_on(const Conjecture& c, Side s) { return s == Side::cause ? c.cause : c.effect; }

const TermPattern& pattern_on(const Atom& a, Side s) { return s == Side::cause ? a.cause : a.effect; }

const std::optional<Category>& scope_on(const Scope& scope, Side s) {
    return s == Side::cause ? scope.cause : scope.effect;
}

Scope scope_of(const Atom& a) { return Scope{a.cause.scope_category(), a.effect.scope_category()}; }

Scope scope_of(const Conjecture& c) { return Scope{c.cause.category(), c.effect.category()}; }

std::optional<Conjecture> apply_pairwise(MethodId m, const Observation& a, const Observation& b, const Scope& scope) {
    switch (m) {
        case MethodId::MA: return apply_ma(a, b, scope);
        case MethodId::MD: return apply_md(a, b, scope);
        case MethodId::MCV: return apply_mcv(a, b, scope);
        case MethodId::MR: break;
    }
    return std::nullopt;
}

ObservationId first_support(const Conjecture& c) { return *std::min_element(c.support.begin(), c.support.end()); }

void sort_for_output(std::vector<Conjecture>& cs) {
    std::stable_sort(cs.begin(), cs.end(), [](const Conjecture& a, const Conjecture& b) {
        const auto ka = first_support(a);
        const auto kb = first_support(b);
        if (ka != kb) return ka < kb;
        return a.cause < b.cause;
    });
}

EmStatus elimination(const KnowledgeBase& kb, const EngineConfig& cfg, const Conjecture& c) {
    if (!cfg.em_applies(c.method)) return EmStatus::exempt();
    return c.parametric() ? em_parametric(kb, c) : em_strict(kb, c);
}

bool bind(Binding& b, const std::string& name, BoundValue v) {
    auto [it, inserted] = b.emplace(name, v);
    return inserted || it->second == v;
}

bool bind_side(const TermPattern& p, const Term& t, Binding& b) {
    switch (p.kind) {
        case TermPattern::Kind::constant:
            return *p.constant == t;
        case TermPattern::Kind::variable:
            if (p.category && t.category() != p.category) return false;
            return bind(b, p.variable, BoundValue{t, false});
        case TermPattern::Kind::functor:
            if (!t.has_argument() || t.functor() != p.functor) return false;
            if (p.category && t.category() != p.category) return false;
            return bind(b, p.variable, BoundValue{Term(*t.argument()), false});
    }
    return false;
}

bool bind_pattern(const TermPattern& p, const Term& pattern, Binding& b) {
    if (p.category && pattern.category() != p.category) return false;
    return bind(b, p.variable, BoundValue{pattern, true});
}

// Replaces variables bound to plain terms by constants.
Atom substitute(const Atom& atom, const Binding& b) {
    auto subst = [&](const TermPattern& p) -> TermPattern {
        if (p.kind == TermPattern::Kind::constant) return p;
        auto it = b.find(p.variable);
        if (it == b.end() || it->second.parametric) return p;
        const Term& v = it->second.term;
        if (p.kind == TermPattern::Kind::variable) return TermPattern::make_constant(v);
        if (v.category() || v.has_argument()) return p;
        return TermPattern::make_constant(Term(p.functor, v.functor(), p.category));
    };
    return Atom{subst(atom.cause), subst(atom.effect)};
}

class Engine {
public:
    Engine(const KnowledgeBase& kb, const EngineConfig& cfg, ConjectureStore& store, std::vector<TraceEvent>* trace)
        : kb_(kb), cfg_(cfg), store_(store), trace_(trace) {}

    std::vector<Conjecture> find(const Atom& atom, int depth) {
        if (depth > cfg_.max_depth) {
            const Side dir = atom.effect.ground() ? Side::effect : Side::cause;
            TraceEvent e{.kind = TraceEvent::Kind::depth_exceeded, .depth = depth};
            if (pattern_on(atom, dir).ground()) e.goal = pattern_on(atom, dir).constant;
            e.goal_side = dir;
            record(std::move(e));
            return {};
        }
        if (!atom.effect.ground() && !atom.cause.ground()) return saturate_into(atom);

        const Side dir = atom.effect.ground() ? Side::effect : Side::cause;
        const Term& target = *pattern_on(atom, dir).constant;
        const Scope scope = scope_of(atom);

        if (const auto* known = store_.find_by(dir, target)) {
            if (match_conjecture(atom, *known).empty()) return {};
            return {*known};
        }
        if (scope_on(scope, dir) && target.category() != scope_on(scope, dir)) return {};

        path_.emplace_back(dir, target);
        auto result = search(atom, dir, target, scope, depth);
        path_.pop_back();
        return result;
    }

    std::vector<Conjecture> saturate_into(const Atom& atom) {
        const Scope scope = scope_of(atom);
        const auto& obs = kb_.observations();
        for (auto m : cfg_.method_order) {
            if (m == MethodId::MR) {
                for (const auto& o : obs) {
                    if (auto c = apply_mr(o, kb_.knowns(), scope); c && matches(atom, *c)) vet(std::move(*c), 0);
                }
                continue;
            }
            for (std::size_t i = 0; i < obs.size(); ++i) {
                for (std::size_t j = i + 1; j < obs.size(); ++j) {
                    if (auto c = apply_pairwise(m, obs[i], obs[j], scope); c && matches(atom, *c)) {
                        vet(std::move(*c), 0);
                    }
                }
            }
        }
        std::vector<Conjecture> out;
        for (const auto& c : store_.conjectures()) {
            if (matches(atom, c)) out.push_back(c);
        }
        sort_for_output(out);
        return out;
    }

private:
    static bool matches(const Atom& atom, const Conjecture& c) { return !match_conjecture(atom, c).empty(); }

    void record(TraceEvent e) {
        if (trace_) trace_->push_back(std::move(e));
    }

    std::optional<Conjecture> vet(Conjecture c, int depth) {
        const EmStatus em = elimination(kb_, cfg_, c);
        if (!em.ok()) {
            record({.kind = TraceEvent::Kind::rejected_em, .depth = depth, .method = c.method, .cause = c.cause,
                    .effect = c.effect, .parametric = c.parametric(), .support = c.support,
                    .counterexample = em.counterexample});
            return std::nullopt;
        }
        if (auto other = conflict_check(store_.conjectures(), c)) {
            record({.kind = TraceEvent::Kind::rejected_conflict, .depth = depth, .method = c.method,
                    .cause = c.cause, .effect = c.effect, .parametric = c.parametric(), .support = c.support,
                    .conflict_cause = other->cause, .conflict_effect = other->effect});
            return std::nullopt;
        }
        if (const auto* existing = store_.find_pair(c)) return *existing;
        c.em = em;
        c.score = score(c);
        record({.kind = TraceEvent::Kind::accepted, .depth = depth, .method = c.method, .cause = c.cause,
                .effect = c.effect, .parametric = c.parametric(), .support = c.support});
        store_.accept(c);
        return c;
    }

    bool on_path(Side side, const Term& t) const {
        return std::find(path_.begin(), path_.end(), std::pair{side, t}) != path_.end();
    }

    std::vector<Conjecture> search(const Atom& atom, Side dir, const Term& target, const Scope& scope, int depth) {
        const auto& obs = kb_.observations();
        std::vector<std::size_t> candidates;
        for (std::size_t p = 0; p < obs.size(); ++p) {
            if (obs[p].side(dir).contains(target)) candidates.push_back(p);
        }

        for (auto m : cfg_.method_order) {
            if (m == MethodId::MR) {
                for (auto p : candidates) {
                    if (auto c = residue(atom, dir, target, scope, obs[p], depth)) return {*c};
                }
                continue;
            }
            std::set<std::pair<std::size_t, std::size_t>> tried;
            for (auto p : candidates) {
                // Later observations first, then earlier ones, both ascending.
                std::vector<std::size_t> partners;
                for (std::size_t q = p + 1; q < obs.size(); ++q) partners.push_back(q);
                for (std::size_t q = 0; q < p; ++q) partners.push_back(q);
                for (auto q : partners) {
                    if (!tried.emplace(std::min(p, q), std::max(p, q)).second) continue;
                    auto c = apply_pairwise(m, obs[p], obs[q], scope);
                    if (!c || !matches(atom, *c)) continue;
                    if (auto accepted = vet(std::move(*c), depth)) return {*accepted};
                }
            }
        }
        return {};
    }

    // Explains the sibling term `s` of `dir` within `obs`: a known causation
    // first, then the store, then a recursive subgoal.
    std::optional<Conjecture> explain_sibling(Side dir, const Term& s, const TermSet& other_side, const Scope& scope,
                                              int depth, std::vector<KnownCausation>& premises) {
        const Side across = opposite(dir);
        for (const auto& k : kb_.knowns()) {
            const Term& own = dir == Side::effect ? k.effect : k.cause;
            const Term& far = dir == Side::effect ? k.cause : k.effect;
            if (own == s && other_side.contains(far)) {
                premises.push_back(k);
                return std::nullopt;
            }
        }
        if (const auto* stored = store_.find_by(dir, s)) {
            if (other_side.contains(term_on(*stored, across))) return *stored;
            return std::nullopt;
        }
        if (on_path(dir, s)) {
            record({.kind = TraceEvent::Kind::cycle_skipped, .depth = depth + 1, .goal = s, .goal_side = dir});
            return std::nullopt;
        }
        if (depth + 1 > cfg_.max_depth) {
            record({.kind = TraceEvent::Kind::depth_exceeded, .depth = depth + 1, .goal = s, .goal_side = dir});
            return std::nullopt;
        }
        Atom sub = dir == Side::effect
                       ? Atom{TermPattern::make_variable("_", scope.cause), TermPattern::make_constant(s)}
                       : Atom{TermPattern::make_constant(s), TermPattern::make_variable("_", scope.effect)};
        auto found = find(sub, depth + 1);
        if (found.empty() || !other_side.contains(term_on(found.front(), across))) return std::nullopt;
        return found.front();
    }

    std::optional<Conjecture> residue(const Atom& atom, Side dir, const Term& target, const Scope& scope,
                                      const Observation& obs, int depth) {
        const TermSet own = restrict(obs.side(dir), scope_on(scope, dir));
        const TermSet other_side = restrict(obs.side(opposite(dir)), scope_on(scope, opposite(dir)));
        if (!own.contains(target)) return std::nullopt;

        std::vector<KnownCausation> premises;
        std::vector<Conjecture> proofs;
        for (const auto& s : own) {
            if (s == target) continue;
            const auto before = premises.size();
            auto proof = explain_sibling(dir, s, other_side, scope, depth, premises);
            if (proof) {
                proofs.push_back(std::move(*proof));
            } else if (premises.size() == before) {
                return std::nullopt;  // an unexplained sibling leaves a compound residue
            }
        }

        std::vector<KnownCausation> knowns = premises;
        for (const auto& p : proofs) knowns.push_back({p.cause, p.effect});
        auto c = apply_mr(obs, knowns, scope);
        if (!c || term_on(*c, dir) != target || !matches(atom, *c)) return std::nullopt;

        std::vector<KnownCausation> kept;
        for (const auto& used : c->premises) {
            auto it = std::find_if(proofs.begin(), proofs.end(),
                                   [&](const Conjecture& p) { return p.cause == used.cause && p.effect == used.effect; });
            if (it != proofs.end()) {
                c->sub_proofs.push_back(*it);
            } else {
                kept.push_back(used);
            }
        }
        c->premises = std::move(kept);
        return vet(std::move(*c), depth);
    }

    const KnowledgeBase& kb_;
    const EngineConfig& cfg_;
    ConjectureStore& store_;
    std::vector<TraceEvent>* trace_;
    std::vector<std::pair<Side, Term>> path_;
};

void corroborate_tree(const KnowledgeBase& kb, Conjecture& c, const EngineConfig& cfg) {
    for (auto& sub : c.sub_proofs) corroborate_tree(kb, sub, cfg);
    c = corroborate(kb, std::move(c), cfg);
}

class Solver {
public:
    Solver(const KnowledgeBase& kb, const EngineConfig& cfg)
        : kb_(kb), cfg_(cfg), engine_(kb, cfg, store_, &trace_) {}

    SolutionSet run(const Query& q) {
        SolutionSet out;
        out.bindings = eval(q, {Binding{}});
        for (auto& c : used_) corroborate_tree(kb_, c, cfg_);
        out.conjectures = std::move(used_);
        out.trace = std::move(trace_);
        return out;
    }

private:
    std::vector<Binding> eval(const Query& q, const std::vector<Binding>& inputs) {
        switch (q.kind) {
            case Query::Kind::atom: {
                std::vector<Binding> out;
                for (const auto& b : inputs) {
                    for (auto& r : solve_atom(*q.atom, b)) append_unique(out, std::move(r));
                }
                return out;
            }
            case Query::Kind::conjunction: {
                std::vector<Binding> current = inputs;
                for (const auto& child : q.children) {
                    if (current.empty()) break;
                    current = eval(child, current);
                }
                return current;
            }
            case Query::Kind::disjunction: {
                std::vector<Binding> out;
                for (const auto& child : q.children) {
                    for (auto& r : eval(child, inputs)) append_unique(out, std::move(r));
                }
                return out;
            }
        }
        return {};
    }

    std::vector<Binding> solve_atom(const Atom& atom, const Binding& base) {
        const Atom ground = substitute(atom, base);
        const bool goal_directed = cfg_.mode == Mode::goal && (ground.cause.ground() || ground.effect.ground());
        auto found = goal_directed ? engine_.find(ground, 0) : engine_.saturate_into(ground);

        std::vector<Binding> out;
        for (const auto& c : found) {
            auto bindings = match_conjecture(atom, c, base);
            if (bindings.empty()) continue;
            if (std::none_of(used_.begin(), used_.end(), [&](const Conjecture& u) { return u.same_pair(c); })) {
                used_.push_back(c);
            }
            for (auto& b : bindings) {
                for (const auto* p : {&atom.cause, &atom.effect}) {
                    if (p->kind != TermPattern::Kind::constant && !b.contains(p->variable)) {
                        throw UnboundResult("variable " + p->variable + " left unbound by " + atom.str());
                    }
                }
                append_unique(out, std::move(b));
            }
        }
        return out;
    }

    static void append_unique(std::vector<Binding>& out, Binding b) {
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
    }

    const KnowledgeBase& kb_;
    const EngineConfig& cfg_;
    ConjectureStore store_;
    std::vector<TraceEvent> trace_;
    Engine engine_;
    std::vector<Conjecture> used_;
};

}  // namespace

std::vector<Binding> match_conjecture(const Atom& atom, const Conjecture& c, const Binding& base) {
    if (!c.parametric()) {
        Binding b = base;
        if (bind_side(atom.cause, c.cause, b) && bind_side(atom.effect, c.effect, b)) return {b};
        return {};
    }
    if (atom.cause.kind == TermPattern::Kind::variable && atom.effect.kind == TermPattern::Kind::variable) {
        Binding b = base;
        if (bind_pattern(atom.cause, c.cause, b) && bind_pattern(atom.effect, c.effect, b)) return {b};
        return {};
    }
    std::vector<Binding> out;
    for (const auto& [x, y] : c.parametric_pairs) {
        Binding b = base;
        const Term cause(c.cause.functor(), x, c.cause.category());
        const Term effect(c.effect.functor(), y, c.effect.category());
        if (bind_side(atom.cause, cause, b) && bind_side(atom.effect, effect, b) &&
            std::find(out.begin(), out.end(), b) == out.end()) {
            out.push_back(std::move(b));
        }
    }
    return out;
}

std::vector<Conjecture> find_causation(const KnowledgeBase& kb, const Atom& pattern, ConjectureStore& store,
                                       int depth, const EngineConfig& cfg, std::vector<TraceEvent>* trace) {
    cfg.validate();
    Engine engine(kb, cfg, store, trace);
    return engine.find(pattern, depth);
}

SolutionSet saturate(const KnowledgeBase& kb, const Atom& pattern, const EngineConfig& cfg) {
    cfg.validate();
    ConjectureStore store;
    SolutionSet out;
    Engine engine(kb, cfg, store, &out.trace);
    out.conjectures = engine.saturate_into(pattern);
    for (auto& c : out.conjectures) {
        corroborate_tree(kb, c, cfg);
        for (auto& b : match_conjecture(pattern, c)) {
            if (std::find(out.bindings.begin(), out.bindings.end(), b) == out.bindings.end()) {
                out.bindings.push_back(std::move(b));
            }
        }
    }
    return out;
}

Conjecture corroborate(const KnowledgeBase& kb, Conjecture c, const EngineConfig& cfg) {
    const Scope scope = scope_of(c);
    const auto& obs = kb.observations();
    auto acceptable = [&](const std::optional<Conjecture>& cand) {
        return cand && cand->same_pair(c) && elimination(kb, cfg, *cand).ok();
    };
    c.corroborations.clear();
    for (auto m : cfg.method_order) {
        if (m == c.method) continue;
        std::optional<Corroboration> hit;
        if (m == MethodId::MR) {
            for (const auto& o : obs) {
                auto cand = apply_mr(o, kb.knowns(), scope);
                if (acceptable(cand) && !cand->premises.empty()) {
                    hit = Corroboration{m, cand->support};
                    break;
                }
            }
        } else {
            for (std::size_t i = 0; i < obs.size() && !hit; ++i) {
                for (std::size_t j = i + 1; j < obs.size(); ++j) {
                    auto cand = apply_pairwise(m, obs[i], obs[j], scope);
                    if (acceptable(cand)) {
                        hit = Corroboration{m, cand->support};
                        break;
                    }
                }
            }
        }
        if (hit) c.corroborations.push_back(std::move(*hit));
    }
    c.score = score(c);
    return c;
}

SolutionSet solve(const KnowledgeBase& kb, const Query& query, const EngineConfig& cfg) {
    cfg.validate();
    Solver solver(kb, cfg);
    return solver.run(query);
}

}  // namespace mill
