#include "mill/kb.hpp"

#include <algorithm>

namespace mill {

namespace {

// Length of the UTF-8 sequence starting at s[i], or 0 if it is malformed.
std::size_t utf8_length(std::string_view s, std::size_t i) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    if (lead < 0x80) return 1;
    if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) len = 4;
    else return 0;
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 0;
    }
    return len;
}

bool is_reserved_ascii(char c) {
    switch (c) {
        case ':': case ',': case '(': case ')': case '#':
        case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
            return true;
        default:
            return false;
    }
}

}  // namespace

bool is_valid_atom(std::string_view s) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size();) {
        const std::size_t len = utf8_length(s, i);
        if (len == 0) return false;
        if (len == 1) {
            if (is_reserved_ascii(s[i]) || static_cast<unsigned char>(s[i]) < 0x20) return false;
            if (s[i] == '=' && i + 1 < s.size() && s[i + 1] == '>') return false;
        }
        i += len;
    }
    return true;
}

Category::Category(std::string name) : name_(std::move(name)) {
    if (!is_valid_atom(name_)) throw InvalidTerm("invalid category name '" + name_ + "'");
}

Term::Term(std::string functor, std::optional<std::string> argument, std::optional<Category> category)
    : category_(std::move(category)), functor_(std::move(functor)), argument_(std::move(argument)) {
    if (!is_valid_atom(functor_)) throw InvalidTerm("invalid functor '" + functor_ + "'");
    if (argument_ && !is_valid_atom(*argument_)) throw InvalidTerm("invalid argument '" + *argument_ + "'");
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    // Untagged terms sort before tagged ones; plain symbols before functor terms.
    if (auto c = a.category_ <=> b.category_; c != 0) return c;
    if (auto c = a.functor_.compare(b.functor_) <=> 0; c != 0) return c;
    return a.argument_ <=> b.argument_;
}

std::string Term::str() const {
    std::string out;
    if (category_) out += category_->name() + ":";
    out += functor_;
    if (argument_) out += "(" + *argument_ + ")";
    return out;
}

Term parse_term(std::string_view text) {
    std::optional<Category> category;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        category = Category(std::string(text.substr(0, colon)));
        text.remove_prefix(colon + 1);
    }
    std::optional<std::string> argument;
    if (auto open = text.find('('); open != std::string_view::npos) {
        if (text.back() != ')') throw InvalidTerm("unterminated argument in '" + std::string(text) + "'");
        argument = std::string(text.substr(open + 1, text.size() - open - 2));
        text = text.substr(0, open);
    }
    return Term(std::string(text), std::move(argument), std::move(category));
}

Observation make_observation(ObservationId id, std::span<const Term> causes, std::span<const Term> effects) {
    if (id <= 0) throw InvalidId("observation id must be positive, got " + std::to_string(id));
    TermSet cause_set(causes.begin(), causes.end());
    TermSet effect_set(effects.begin(), effects.end());
    if (cause_set.empty()) throw EmptySide("observation " + std::to_string(id) + " has an empty cause-set");
    if (effect_set.empty()) throw EmptySide("observation " + std::to_string(id) + " has an empty effect-set");
    return Observation(id, std::move(cause_set), std::move(effect_set));
}

std::optional<std::size_t> KnowledgeBase::position_of(ObservationId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const Observation* KnowledgeBase::find(ObservationId id) const {
    auto pos = position_of(id);
    return pos ? &observations_[*pos] : nullptr;
}

void KnowledgeBase::append(Observation obs) {
    const auto id = obs.id();
    if (!index_.emplace(id, observations_.size()).second) {
        throw DuplicateId("duplicate observation id " + std::to_string(id));
    }
    observations_.push_back(std::move(obs));
}

KnowledgeBase add_observation(const KnowledgeBase& kb, Observation obs) {
    KnowledgeBase out = kb;
    out.append(std::move(obs));
    return out;
}

std::vector<ObservationId> occurrences(const KnowledgeBase& kb, const Term& t, Side side) {
    std::vector<ObservationId> ids;
    for (const auto& obs : kb.observations()) {
        if (obs.side(side).contains(t)) ids.push_back(obs.id());
    }
    return ids;
}

TermSet restrict(const TermSet& terms, const std::optional<Category>& constraint) {
    if (!constraint) return terms;
    TermSet out;
    std::copy_if(terms.begin(), terms.end(), std::inserter(out, out.end()),
                 [&](const Term& t) { return t.category() == constraint; });
    return out;
}

}  // namespace mill
