#include "mill/frontend.hpp"

#include <charconv>
#include <optional>
#include <vector>

namespace mill {

namespace {

enum class Tok { name, colon, comma, lparen, rparen, arrow, amp, bar, end };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

// Splits `text` into tokens. `query` switches the reserved set: the KB format
// reserves `=>`, the query language `&`, `|` and `∧`. `#` starts a comment in
// the KB format only.
class Lexer {
public:
    Lexer(std::string_view text, int line, bool query) : text_(text), line_(line), query_(query) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (at_end()) break;
            const SourcePos pos = here();
            const char c = text_[i_];
            if (c == '\n') {
                advance(1);
                ++line_;
                column_ = 1;
                continue;
            }
            if (!query_ && c == '#') {
                while (!at_end() && text_[i_] != '\n') advance(1);
                continue;
            }
            if (auto simple = punctuation(); simple) {
                out.push_back({simple->first, std::string(text_.substr(i_, simple->second)), pos});
                advance(simple->second, simple->first == Tok::arrow ? 2 : 1);
                continue;
            }
            std::string name;
            while (!at_end() && !is_space(text_[i_]) && !punctuation() && !(!query_ && text_[i_] == '#')) {
                const std::size_t len = sequence_length();
                const auto b = static_cast<unsigned char>(text_[i_]);
                if (len == 1 && b < 0x20) throw ParseError("control character in symbol", here());
                name.append(text_.substr(i_, len));
                advance(len);
            }
            out.push_back({Tok::name, std::move(name), pos});
        }
        out.push_back({Tok::end, "", here()});
        return out;
    }

private:
    bool at_end() const { return i_ >= text_.size(); }
    SourcePos here() const { return {line_, column_}; }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

    void skip_space() {
        while (!at_end() && is_space(text_[i_])) advance(1);
    }

    void advance(std::size_t bytes, int columns = 1) {
        i_ += bytes;
        column_ += columns;
    }

    // Byte length of the UTF-8 sequence at the cursor; throws on malformed input.
    std::size_t sequence_length() const {
        const auto lead = static_cast<unsigned char>(text_[i_]);
        std::size_t len = 0;
        if (lead < 0x80) return 1;
        if ((lead & 0xE0) == 0xC0 && lead >= 0xC2) len = 2;
        else if ((lead & 0xF0) == 0xE0) len = 3;
        else if ((lead & 0xF8) == 0xF0 && lead <= 0xF4) len = 4;
        else throw ParseError("invalid UTF-8", here());
        if (i_ + len > text_.size()) throw ParseError("truncated UTF-8 sequence", here());
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(text_[i_ + k]) & 0xC0) != 0x80) throw ParseError("invalid UTF-8", here());
        }
        return len;
    }

    std::optional<std::pair<Tok, std::size_t>> punctuation() const {
        switch (text_[i_]) {
            case ':': return std::pair{Tok::colon, std::size_t{1}};
            case ',': return std::pair{Tok::comma, std::size_t{1}};
            case '(': return std::pair{Tok::lparen, std::size_t{1}};
            case ')': return std::pair{Tok::rparen, std::size_t{1}};
            default: break;
        }
        if (query_) {
            if (text_[i_] == '&') return std::pair{Tok::amp, std::size_t{1}};
            if (text_[i_] == '|') return std::pair{Tok::bar, std::size_t{1}};
            if (text_.substr(i_, 3) == "∧") return std::pair{Tok::amp, std::size_t{3}};
        } else if (text_.substr(i_, 2) == "=>") {
            return std::pair{Tok::arrow, std::size_t{2}};
        }
        return std::nullopt;
    }

    std::string_view text_;
    std::size_t i_ = 0;
    int line_;
    int column_ = 1;
    bool query_;
};

class TokenCursor {
public:
    explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek() const { return tokens_[i_]; }
    bool at(Tok k) const { return peek().kind == k; }
    Token take() { return tokens_[i_ < tokens_.size() - 1 ? i_++ : i_]; }

    Token expect(Tok k, const char* what) {
        if (!at(k)) throw ParseError(std::string("expected ") + what + describe(peek()), peek().pos);
        return take();
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::end) return ", found end of input";
        return ", found '" + t.text + "'";
    }

private:
    std::vector<Token> tokens_;
    std::size_t i_ = 0;
};

Term parse_item(TokenCursor& in) {
    const Token first = in.expect(Tok::name, "a symbol");
    std::optional<Category> category;
    std::string functor = first.text;
    if (in.at(Tok::colon)) {
        in.take();
        category = Category(first.text);
        functor = in.expect(Tok::name, "a symbol after ':'").text;
    }
    std::optional<std::string> argument;
    if (in.at(Tok::lparen)) {
        in.take();
        argument = in.expect(Tok::name, "an argument").text;
        in.expect(Tok::rparen, "')'");
    }
    try {
        return Term(std::move(functor), std::move(argument), std::move(category));
    } catch (const InvalidTerm& e) {
        throw ParseError(e.message(), first.pos);
    }
}

std::vector<Term> parse_items(TokenCursor& in) {
    std::vector<Term> items;
    if (in.at(Tok::arrow) || in.at(Tok::end)) return items;
    items.push_back(parse_item(in));
    while (in.at(Tok::comma)) {
        in.take();
        items.push_back(parse_item(in));
    }
    return items;
}

void parse_line(std::string_view line, int number, KnowledgeBase& kb) {
    TokenCursor in(Lexer(line, number, false).run());
    if (in.at(Tok::end)) return;
    const Token head = in.expect(Tok::name, "'obs' or 'known'");
    if (head.text == "obs") {
        const Token id_tok = in.expect(Tok::name, "an observation number");
        long long id = 0;
        const auto* first = id_tok.text.data();
        const auto* last = first + id_tok.text.size();
        auto [ptr, ec] = std::from_chars(first, last, id);
        if (ec != std::errc() || ptr != last) {
            throw ParseError("observation number must be an integer, found '" + id_tok.text + "'", id_tok.pos);
        }
        if (id <= 0 || id > 2147483647LL) {
            throw InvalidId("observation id must be a positive integer, got " + id_tok.text, id_tok.pos);
        }
        in.expect(Tok::colon, "':' after the observation number");
        auto causes = parse_items(in);
        const Token arrow = in.expect(Tok::arrow, "',' or '=>'");
        auto effects = parse_items(in);
        const Token end = in.expect(Tok::end, "',' or end of line");
        if (causes.empty()) throw EmptySide("observation " + id_tok.text + " has an empty cause-set", arrow.pos);
        if (effects.empty()) throw EmptySide("observation " + id_tok.text + " has an empty effect-set", end.pos);
        try {
            kb.append(make_observation(static_cast<ObservationId>(id), causes, effects));
        } catch (const DuplicateId& e) {
            throw DuplicateId(e.message(), head.pos);
        }
        return;
    }
    if (head.text == "known") {
        in.expect(Tok::colon, "':' after 'known'");
        Term cause = parse_item(in);
        in.expect(Tok::arrow, "'=>'");
        Term effect = parse_item(in);
        in.expect(Tok::end, "end of line");
        kb.add_known({std::move(cause), std::move(effect)});
        return;
    }
    throw ParseError("expected 'obs' or 'known', found '" + head.text + "'", head.pos);
}

std::string join_terms(const TermSet& terms) {
    std::string out;
    for (const auto& t : terms) {
        if (!out.empty()) out += ", ";
        out += t.str();
    }
    return out;
}

class QueryParser {
public:
    explicit QueryParser(std::vector<Token> tokens) : in_(std::move(tokens)) {}

    Query parse() {
        Query q = disjunction();
        in_.expect(Tok::end, "'&', '|' or end of query");
        return q;
    }

private:
    Query disjunction() {
        std::vector<Query> parts{conjunction()};
        while (in_.at(Tok::bar)) {
            in_.take();
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? std::move(parts.front()) : Query::make_or(std::move(parts));
    }

    Query conjunction() {
        std::vector<Query> parts{primary()};
        while (in_.at(Tok::amp)) {
            in_.take();
            parts.push_back(primary());
        }
        return parts.size() == 1 ? std::move(parts.front()) : Query::make_and(std::move(parts));
    }

    Query primary() {
        if (in_.at(Tok::lparen)) {
            in_.take();
            Query inner = disjunction();
            in_.expect(Tok::rparen, "')'");
            return inner;
        }
        return Query::make_atom(atom());
    }

    Atom atom() {
        const Token head = in_.expect(Tok::name, "'causation(' or '('");
        if (head.text != "causation" && head.text != "causality") {
            throw ParseError("unknown predicate '" + head.text + "'", head.pos);
        }
        in_.expect(Tok::lparen, "'(' after the predicate");
        std::vector<TermPattern> args;
        if (!in_.at(Tok::rparen)) {
            args.push_back(pattern());
            while (in_.at(Tok::comma)) {
                in_.take();
                args.push_back(pattern());
            }
        }
        in_.expect(Tok::rparen, "',' or ')'");
        if (args.size() != 2) {
            throw ArityError(head.text + " takes exactly two arguments, got " + std::to_string(args.size()),
                             head.pos);
        }
        return Atom{std::move(args[0]), std::move(args[1])};
    }

    TermPattern pattern() {
        const Token first = in_.expect(Tok::name, "a term or variable");
        std::optional<Category> category;
        Token name = first;
        try {
            if (in_.at(Tok::colon)) {
                in_.take();
                category = Category(first.text);
                name = in_.expect(Tok::name, "a term or variable after ':'");
            }
            if (is_variable_name(name.text)) {
                if (in_.at(Tok::lparen)) throw ParseError("a variable cannot take an argument", in_.peek().pos);
                return TermPattern::make_variable(name.text, std::move(category));
            }
            if (in_.at(Tok::lparen)) {
                in_.take();
                const Token arg = in_.expect(Tok::name, "an argument");
                in_.expect(Tok::rparen, "')'");
                if (is_variable_name(arg.text)) {
                    Term(name.text);  // validates the functor
                    return TermPattern::make_functor(name.text, arg.text, std::move(category));
                }
                return TermPattern::make_constant(Term(name.text, arg.text, std::move(category)));
            }
            return TermPattern::make_constant(Term(name.text, std::nullopt, std::move(category)));
        } catch (const InvalidTerm& e) {
            throw ParseError(e.message(), first.pos);
        }
    }

    TokenCursor in_;
};

std::string render_node(const Query& q, bool nested) {
    if (q.kind == Query::Kind::atom) return q.atom->str();
    const char* sep = q.kind == Query::Kind::conjunction ? " & " : " | ";
    std::string out;
    for (const auto& child : q.children) {
        if (!out.empty()) out += sep;
        out += render_node(child, true);
    }
    return nested ? "(" + out + ")" : out;
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
    KnowledgeBase kb;
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    int number = 0;
    while (!text.empty() || number == 0) {
        ++number;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        parse_line(line, number, kb);
        if (nl == std::string_view::npos) break;
    }
    return kb;
}

std::string render_kb(const KnowledgeBase& kb) {
    std::string out;
    for (const auto& obs : kb.observations()) {
        out += "obs " + std::to_string(obs.id()) + " : " + join_terms(obs.causes()) + " => " +
               join_terms(obs.effects()) + "\n";
    }
    for (const auto& k : kb.knowns()) {
        out += "known : " + k.cause.str() + " => " + k.effect.str() + "\n";
    }
    return out;
}

Query parse_query(std::string_view text) {
    // Offsets are kept so that positions refer to the original text.
    std::string buffer(text);
    auto first = buffer.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && buffer.compare(first, 2, "?-") == 0) {
        buffer[first] = ' ';
        buffer[first + 1] = ' ';
    }
    auto last = buffer.find_last_not_of(" \t\r\n");
    if (last != std::string::npos && buffer[last] == '.') {
        auto before = buffer.find_last_not_of(" \t\r\n", last == 0 ? 0 : last - 1);
        if (last > 0 && before != std::string::npos && buffer[before] == ')') buffer[last] = ' ';
    }
    return QueryParser(Lexer(buffer, 1, true).run()).parse();
}

std::string render_query(const Query& q) { return render_node(q, false); }

}  // namespace mill
