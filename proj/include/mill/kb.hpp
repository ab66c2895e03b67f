#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mill/error.hpp"

namespace mill {

/// True iff `s` may be used as a category name, functor or argument: non-empty,
/// valid UTF-8, and free of whitespace and the characters `:` `,` `(` `)` `#`.
/// The two-character sequence `=>` is also rejected.
bool is_valid_atom(std::string_view s);

/// A category tag such as `c` or `v`. Categories are open: any valid atom is a
/// category name.
class Category {
public:
    explicit Category(std::string name);

    const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Category&, const Category&) = default;
    friend auto operator<=>(const Category&, const Category&) = default;

private:
    std::string name_;
};

/// A circumstance or phenomenon symbol. `argument` is set for one-argument
/// functor terms such as `accent(u)`, which model a varying phenomenon.
/// Comparison is exact byte equality on all three parts.
class Term {
public:
    explicit Term(std::string functor, std::optional<std::string> argument = std::nullopt,
                  std::optional<Category> category = std::nullopt);

    const std::optional<Category>& category() const noexcept { return category_; }
    const std::string& functor() const noexcept { return functor_; }
    const std::optional<std::string>& argument() const noexcept { return argument_; }
    bool has_argument() const noexcept { return argument_.has_value(); }

    /// The same functor and category with the argument dropped.
    Term pattern() const { return Term(functor_, std::nullopt, category_); }

    /// Canonical text: `[cat:]functor[(argument)]`.
    std::string str() const;

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    std::optional<Category> category_;
    std::string functor_;
    std::optional<std::string> argument_;
};

/// Parses the canonical text form produced by Term::str(). Throws InvalidTerm.
Term parse_term(std::string_view text);

using TermSet = std::set<Term>;

enum class Side { cause, effect };

using ObservationId = int;

class Observation {
public:
    ObservationId id() const noexcept { return id_; }
    const TermSet& causes() const noexcept { return causes_; }
    const TermSet& effects() const noexcept { return effects_; }
    const TermSet& side(Side s) const noexcept { return s == Side::cause ? causes_ : effects_; }

    friend bool operator==(const Observation&, const Observation&) = default;

private:
    friend Observation make_observation(ObservationId, std::span<const Term>, std::span<const Term>);
    Observation(ObservationId id, TermSet causes, TermSet effects)
        : id_(id), causes_(std::move(causes)), effects_(std::move(effects)) {}

    ObservationId id_;
    TermSet causes_;
    TermSet effects_;
};

/// Builds an observation with set semantics on both sides (duplicates and
/// order are irrelevant). Throws InvalidId when id <= 0 and EmptySide when
/// either list is empty.
Observation make_observation(ObservationId id, std::span<const Term> causes, std::span<const Term> effects);

inline Observation make_observation(ObservationId id, std::initializer_list<Term> causes,
                                    std::initializer_list<Term> effects) {
    return make_observation(id, std::span<const Term>(causes.begin(), causes.size()),
                            std::span<const Term>(effects.begin(), effects.size()));
}

/// A causation established before discovery starts (a premise for residues).
/// Identity mappings are legal.
struct KnownCausation {
    Term cause;
    Term effect;

    friend bool operator==(const KnownCausation&, const KnownCausation&) = default;
};

/// Ordered observations plus prior known causations. The observation order is
/// the scan order used by the engine.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    const std::vector<Observation>& observations() const noexcept { return observations_; }
    const std::vector<KnownCausation>& knowns() const noexcept { return knowns_; }
    std::size_t size() const noexcept { return observations_.size(); }
    bool empty() const noexcept { return observations_.empty(); }

    /// Position of the observation with the given id, if present.
    std::optional<std::size_t> position_of(ObservationId id) const;
    const Observation* find(ObservationId id) const;

    /// Appends in place. Throws DuplicateId.
    void append(Observation obs);
    void add_known(KnownCausation known) { knowns_.push_back(std::move(known)); }

    friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
        return a.observations_ == b.observations_ && a.knowns_ == b.knowns_;
    }

private:
    std::vector<Observation> observations_;
    std::vector<KnownCausation> knowns_;
    std::map<ObservationId, std::size_t> index_;
};

/// Returns a copy of `kb` with `obs` appended. Throws DuplicateId.
KnowledgeBase add_observation(const KnowledgeBase& kb, Observation obs);

/// Ids, in KB order, of observations whose chosen side contains `t`.
std::vector<ObservationId> occurrences(const KnowledgeBase& kb, const Term& t, Side side);

/// The subset of `terms` tagged with `constraint`; identity when no constraint.
TermSet restrict(const TermSet& terms, const std::optional<Category>& constraint);

}  // namespace mill
