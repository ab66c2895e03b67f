#include "mill/query.hpp"

namespace mill {

bool is_variable_name(const std::string& name) {
    return !name.empty() && name.front() >= 'A' && name.front() <= 'Z';
}

TermPattern TermPattern::make_constant(Term t) {
    TermPattern p;
    p.kind = Kind::constant;
    p.constant = std::move(t);
    return p;
}

TermPattern TermPattern::make_variable(std::string name, std::optional<Category> category) {
    TermPattern p;
    p.kind = Kind::variable;
    p.variable = std::move(name);
    p.category = std::move(category);
    return p;
}

TermPattern TermPattern::make_functor(std::string functor, std::string arg_variable,
                                      std::optional<Category> category) {
    TermPattern p;
    p.kind = Kind::functor;
    p.functor = std::move(functor);
    p.variable = std::move(arg_variable);
    p.category = std::move(category);
    return p;
}

std::optional<Category> TermPattern::scope_category() const {
    return kind == Kind::constant ? constant->category() : category;
}

std::string TermPattern::str() const {
    switch (kind) {
        case Kind::constant:
            return constant->str();
        case Kind::variable:
            return (category ? category->name() + ":" : std::string()) + variable;
        case Kind::functor:
            return (category ? category->name() + ":" : std::string()) + functor + "(" + variable + ")";
    }
    return {};
}

std::string Atom::str() const { return "causation(" + cause.str() + ", " + effect.str() + ")"; }

Query Query::make_atom(Atom a) {
    Query q;
    q.kind = Kind::atom;
    q.atom = std::move(a);
    return q;
}

Query Query::make_and(std::vector<Query> children) {
    Query q;
    q.kind = Kind::conjunction;
    q.children = std::move(children);
    return q;
}

Query Query::make_or(std::vector<Query> children) {
    Query q;
    q.kind = Kind::disjunction;
    q.children = std::move(children);
    return q;
}

std::set<std::string> Query::variables() const {
    std::set<std::string> out;
    if (kind == Kind::atom) {
        for (const auto* p : {&atom->cause, &atom->effect}) {
            if (p->kind != TermPattern::Kind::constant) out.insert(p->variable);
        }
        return out;
    }
    for (const auto& child : children) out.merge(child.variables());
    return out;
}

}  // namespace mill
