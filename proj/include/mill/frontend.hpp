#pragma once

#include <string>
#include <string_view>

#include "mill/kb.hpp"
#include "mill/query.hpp"

namespace mill {

/// Parses the knowledge-base line format:
///
///     # comment
///     obs <id> : <item>, <item> => <item>, <item>
///     known : <item> => <item>
///     item := [<category> ':'] <atom> ['(' <atom> ')']
///
/// Blank lines and `#` comments are ignored; `\n` and `\r\n` line endings are
/// accepted. Errors carry the line (and, for syntax errors, the column).
KnowledgeBase parse_kb(std::string_view text);

/// Canonical text: observations in KB order, then known causations, one per
/// line, items in term order, `\n` line endings.
std::string render_kb(const KnowledgeBase& kb);

/// Parses `causation(<pattern>, <pattern>)` atoms joined by `&` (or `∧`) and
/// `|`, with parentheses; `&` binds tighter. `causality` is accepted as a
/// synonym, as are a leading `?-` and a trailing `.`.
Query parse_query(std::string_view text);

/// Canonical query text accepted by parse_query.
std::string render_query(const Query& q);

}  // namespace mill
