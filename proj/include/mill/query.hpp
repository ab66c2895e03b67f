#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mill/kb.hpp"

namespace mill {

/// One argument of a `causation` atom: a constant term, a (possibly
/// category-constrained) variable, or a functor pattern `f(X)` whose argument
/// is a variable.
struct TermPattern {
    enum class Kind { constant, variable, functor };

    Kind kind = Kind::constant;
    std::optional<Term> constant;     // constant
    std::string variable;             // variable name, or the argument variable of a functor pattern
    std::optional<Category> category; // variable / functor
    std::string functor;              // functor

    static TermPattern make_constant(Term t);
    static TermPattern make_variable(std::string name, std::optional<Category> category = std::nullopt);
    static TermPattern make_functor(std::string functor, std::string arg_variable,
                                    std::optional<Category> category = std::nullopt);

    bool ground() const noexcept { return kind == Kind::constant; }
    std::optional<Category> scope_category() const;
    std::string str() const;

    friend bool operator==(const TermPattern&, const TermPattern&) = default;
};

struct Atom {
    TermPattern cause;
    TermPattern effect;

    std::string str() const;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Boolean combination of atoms using conjunction and disjunction only.
struct Query {
    enum class Kind { atom, conjunction, disjunction };

    Kind kind = Kind::atom;
    std::optional<Atom> atom;
    std::vector<Query> children;

    static Query make_atom(Atom a);
    static Query make_and(std::vector<Query> children);
    static Query make_or(std::vector<Query> children);

    /// Variables occurring anywhere in the query.
    std::set<std::string> variables() const;

    friend bool operator==(const Query&, const Query&) = default;
};

/// True iff the name denotes a variable (leading uppercase ASCII letter).
bool is_variable_name(const std::string& name);

}  // namespace mill
