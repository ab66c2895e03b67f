#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mill/frontend.hpp"
#include "mill/kb.hpp"

namespace mill::testing {

inline std::string fixture_path(const std::string& name) { return std::string(MILL_DATA_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline KnowledgeBase load_fixture(const std::string& name) { return parse_kb(read_fixture(name)); }

/// Shorthand for parse_term: T("c:p"), T("accent(u)").
inline Term T(const std::string& text) { return parse_term(text); }

inline std::vector<Term> terms(std::initializer_list<const char*> texts) {
    std::vector<Term> out;
    for (const auto* t : texts) out.push_back(parse_term(t));
    return out;
}

inline Observation obs(ObservationId id, std::initializer_list<const char*> causes,
                       std::initializer_list<const char*> effects) {
    auto c = terms(causes);
    auto e = terms(effects);
    return make_observation(id, c, e);
}

}  // namespace mill::testing
