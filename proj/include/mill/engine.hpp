#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mill/kb.hpp"
#include "mill/methods.hpp"
#include "mill/query.hpp"

namespace mill {

/// Which conjectures must survive the Elimination Method.
///  - strict_all: every method's conjectures need universal co-occurrence.
///  - strict_nonresidue: MR residues are exempt, the rest are strict.
///  - conflict_only: nothing is checked; only the functional conflict check applies.
enum class EmPolicy { strict_all, strict_nonresidue, conflict_only };

/// goal: atoms with a ground side are solved by goal-directed search.
/// saturate: every atom is answered by exhaustive saturation.
enum class Mode { goal, saturate };

std::string_view to_string(EmPolicy p);
std::string_view to_string(Mode m);
std::optional<EmPolicy> parse_em_policy(std::string_view s);
std::optional<Mode> parse_mode(std::string_view s);

struct EngineConfig {
    EmPolicy em_policy = EmPolicy::strict_nonresidue;
    std::array<MethodId, 4> method_order = all_methods;
    int max_depth = 8;
    Mode mode = Mode::goal;

    /// Throws ConfigError unless method_order is a permutation and max_depth > 0.
    void validate() const;

    /// Whether conjectures of `m` are subject to the Elimination Method.
    bool em_applies(MethodId m) const;
};

/// Parses a comma-separated method list such as "MA,MD,MCV,MR". Throws ConfigError.
std::array<MethodId, 4> parse_method_order(std::string_view s);

/// Value bound to a query variable: a term, or a functor pattern when the
/// variable was answered by a concomitant-variation conjecture.
struct BoundValue {
    Term term;
    bool parametric = false;

    std::string str() const;

    friend bool operator==(const BoundValue&, const BoundValue&) = default;
    friend auto operator<=>(const BoundValue&, const BoundValue&) = default;
};

using Binding = std::map<std::string, BoundValue>;

/// One step of the explanation trace that is not already captured by an
/// accepted conjecture's own provenance.
struct TraceEvent {
    enum class Kind { accepted, rejected_em, rejected_conflict, depth_exceeded, cycle_skipped };

    Kind kind = Kind::accepted;
    int depth = 0;
    std::optional<MethodId> method{};
    std::optional<Term> cause{};
    std::optional<Term> effect{};
    bool parametric = false;
    std::vector<ObservationId> support{};
    std::optional<ObservationId> counterexample{};  // rejected_em
    std::optional<Term> conflict_cause{};           // rejected_conflict
    std::optional<Term> conflict_effect{};
    std::optional<Term> goal{};                     // depth_exceeded / cycle_skipped
    Side goal_side = Side::effect;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

std::string_view to_string(TraceEvent::Kind k);

/// Accepted conjectures, in acceptance order. Every insertion keeps the store
/// free of functional conflicts.
class ConjectureStore {
public:
    const std::vector<Conjecture>& conjectures() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }

    const Conjecture* find_pair(const Conjecture& c) const;
    /// The non-parametric conjecture whose `side` term equals `t`.
    const Conjecture* find_by(Side side, const Term& t) const;

    /// Appends `c`; returns false (and leaves the store unchanged) if it would
    /// conflict with or duplicate an existing entry.
    bool accept(Conjecture c);

private:
    std::vector<Conjecture> items_;
};

struct SolutionSet {
    std::vector<Binding> bindings;
    std::vector<Conjecture> conjectures;
    std::vector<TraceEvent> trace;
};

/// Goal-directed search for conjectures matching `pattern`, at least one side
/// of which should be ground (otherwise this saturates). Methods are tried in
/// cfg.method_order; residues recurse on sibling terms to obtain what they
/// subtract. Accepted conjectures are added to `store`.
std::vector<Conjecture> find_causation(const KnowledgeBase& kb, const Atom& pattern, ConjectureStore& store,
                                       int depth, const EngineConfig& cfg, std::vector<TraceEvent>* trace = nullptr);

/// Exhaustive application of every method over every observation pair (and
/// every single observation for MR, using the KB's known causations) under the
/// pattern's category constraints. Results are corroborated and ordered by
/// first supporting observation id, then cause.
SolutionSet saturate(const KnowledgeBase& kb, const Atom& pattern, const EngineConfig& cfg);

/// Searches the whole KB for applications of other methods that re-derive the
/// same pair and recomputes the score. A residue corroborates only if it
/// subtracts at least one known causation.
Conjecture corroborate(const KnowledgeBase& kb, Conjecture c, const EngineConfig& cfg);

/// Evaluates a query; conjunctions share one conjecture store left to right.
SolutionSet solve(const KnowledgeBase& kb, const Query& query, const EngineConfig& cfg);

/// Bindings under which `atom` is answered by `c`, extending `base`.
std::vector<Binding> match_conjecture(const Atom& atom, const Conjecture& c, const Binding& base = {});

}  // namespace mill
