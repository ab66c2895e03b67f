#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mill/kb.hpp"

namespace mill {

/// Mill's four canons.
enum class MethodId { MA, MD, MR, MCV };

inline constexpr std::array<MethodId, 4> all_methods{MethodId::MA, MethodId::MD, MethodId::MCV, MethodId::MR};

std::string_view to_string(MethodId m);
std::optional<MethodId> parse_method(std::string_view s);

/// Category constraints applied to each side before a canon is tested.
struct Scope {
    std::optional<Category> cause;
    std::optional<Category> effect;

    static Scope both(const std::optional<Category>& c) { return Scope{c, c}; }

    friend bool operator==(const Scope&, const Scope&) = default;
};

/// Outcome of the Elimination Method for one conjecture.
struct EmStatus {
    enum class Kind { passed, exempt, failed };

    Kind kind = Kind::passed;
    std::optional<ObservationId> counterexample;  // set iff failed

    static EmStatus passed() { return {Kind::passed, std::nullopt}; }
    static EmStatus exempt() { return {Kind::exempt, std::nullopt}; }
    static EmStatus failed(ObservationId id) { return {Kind::failed, id}; }

    bool ok() const noexcept { return kind != Kind::failed; }

    friend bool operator==(const EmStatus&, const EmStatus&) = default;
};

std::string_view to_string(EmStatus::Kind k);

struct Corroboration {
    MethodId method;
    std::vector<ObservationId> support;

    friend bool operator==(const Corroboration&, const Corroboration&) = default;
};

/// Argument pair (cause argument, effect argument) witnessed by a concomitant
/// variation.
using ArgumentPair = std::pair<std::string, std::string>;

/// A conjectured causal correspondence with its provenance.
///
/// For MCV conjectures `cause` and `effect` are functor patterns (terms
/// without an argument) and `parametric_pairs` holds the witnessed argument
/// pairs. For MR conjectures `premises` lists the known causations that were
/// subtracted and `sub_proofs` the discovered conjectures that were subtracted.
struct Conjecture {
    Term cause;
    Term effect;
    MethodId method = MethodId::MA;
    std::vector<ObservationId> support{};
    std::vector<Conjecture> sub_proofs{};
    std::vector<KnownCausation> premises{};
    std::vector<ArgumentPair> parametric_pairs{};
    std::vector<Corroboration> corroborations{};
    EmStatus em{};
    int score = 0;

    bool parametric() const noexcept { return method == MethodId::MCV; }
    bool same_pair(const Conjecture& other) const {
        return parametric() == other.parametric() && cause == other.cause && effect == other.effect;
    }

    friend bool operator==(const Conjecture&, const Conjecture&) = default;
};

/// Agreement: the two observations share exactly one cause and exactly one effect.
std::optional<Conjecture> apply_ma(const Observation& o1, const Observation& o2, const Scope& scope);
std::optional<Conjecture> apply_ma(const Observation& o1, const Observation& o2,
                                   const std::optional<Category>& constraint);

/// Difference: one observation extends the other by exactly one cause and
/// exactly one effect. Support is [larger, smaller].
std::optional<Conjecture> apply_md(const Observation& o1, const Observation& o2, const Scope& scope);
std::optional<Conjecture> apply_md(const Observation& o1, const Observation& o2,
                                   const std::optional<Category>& constraint);

/// Residues: subtract every known (c => e) with c among the causes and e among
/// the effects; applicable iff exactly one cause and one effect remain. The
/// knowns actually used are recorded in `premises`.
std::optional<Conjecture> apply_mr(const Observation& obs, std::span<const KnownCausation> knowns,
                                   const Scope& scope);
std::optional<Conjecture> apply_mr(const Observation& obs, std::span<const KnownCausation> knowns,
                                   const std::optional<Category>& constraint);

/// Concomitant variations: both sides are identical except for one functor
/// term whose argument varies. Pairs are listed in ascending observation id.
std::optional<Conjecture> apply_mcv(const Observation& o1, const Observation& o2, const Scope& scope);
std::optional<Conjecture> apply_mcv(const Observation& o1, const Observation& o2,
                                    const std::optional<Category>& constraint);

/// Universal co-occurrence: the first observation (KB order) containing the
/// cause without the effect is the counterexample.
EmStatus em_strict(const KnowledgeBase& kb, const Conjecture& c);

/// Elimination check for a parametric conjecture: wherever a cause instance
/// f(x) occurs, an effect instance g(y) must occur, with y fixed by the
/// witnessed pairs when x is one of them.
EmStatus em_parametric(const KnowledgeBase& kb, const Conjecture& c);

/// Functional causation: returns the first recorded conjecture sharing the
/// cause with a different effect or the effect with a different cause.
/// Parametric and non-parametric conjectures are never compared.
std::optional<Conjecture> conflict_check(std::span<const Conjecture> recorded, const Conjecture& c);

/// Plausibility weight of a single method: MD 3, MA 2, MCV 2, MR 1.
int method_weight(MethodId m);

/// Sum of weights over the conjecture's method and its corroborating methods,
/// each method counted once.
int score(const Conjecture& c);

}  // namespace mill
