#include "hetsynth/speclang.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace hetsynth {
namespace {

enum class Tok {
    Ident, Number, True, False,
    LParen, RParen,
    Not, And, Or, Implies, Iff,
    Eq, Ne, Lt, Le, Gt, Ge,
    Plus, Prime, Colon, Ellipsis,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t number = 0;
    int column = 1;
};

const char* describe(Tok t)
{
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::True: return "TRUE";
    case Tok::False: return "FALSE";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Implies: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Prime: return "'''";
    case Tok::Colon: return "':'";
    case Tok::Ellipsis: return "'...'";
    case Tok::End: return "end of line";
    }
    return "?";
}

std::vector<Token> lex_line(std::string_view s, int line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto syntax = [&](const std::string& msg, std::size_t col) {
        throw SpecError(SpecError::Kind::Syntax, msg, line, static_cast<int>(col) + 1);
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token t;
        t.column = static_cast<int>(i) + 1;
        auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            t.text = std::string(s.substr(i, j - i));
            if (t.text == "TRUE" || t.text == "true") {
                t.kind = Tok::True;
            } else if (t.text == "FALSE" || t.text == "false") {
                t.kind = Tok::False;
            } else {
                t.kind = Tok::Ident;
            }
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            t.kind = Tok::Number;
            t.text = std::string(s.substr(i, j - i));
            auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, t.number);
            if (ec != std::errc{}) syntax("number out of range", i);
            i = j;
        } else if (starts("<->")) {
            t.kind = Tok::Iff;
            i += 3;
        } else if (starts("->")) {
            t.kind = Tok::Implies;
            i += 2;
        } else if (starts("...")) {
            t.kind = Tok::Ellipsis;
            i += 3;
        } else if (starts("!=")) {
            t.kind = Tok::Ne;
            i += 2;
        } else if (starts("<=")) {
            t.kind = Tok::Le;
            i += 2;
        } else if (starts(">=")) {
            t.kind = Tok::Ge;
            i += 2;
        } else {
            switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '!': t.kind = Tok::Not; break;
            case '&': t.kind = Tok::And; break;
            case '|': t.kind = Tok::Or; break;
            case '=': t.kind = Tok::Eq; break;
            case '<': t.kind = Tok::Lt; break;
            case '>': t.kind = Tok::Gt; break;
            case '+': t.kind = Tok::Plus; break;
            case '\'': t.kind = Tok::Prime; break;
            case ':': t.kind = Tok::Colon; break;
            default: syntax(std::string("unexpected character '") + c + "'", i);
            }
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.column = static_cast<int>(s.size()) + 1;
    out.push_back(end);
    return out;
}

enum class Section { None, Input, Output, EnvInit, SysInit, EnvTrans, SysTrans, EnvLiveness, SysLiveness };

struct SourceLine {
    Section section;
    int number;
    std::string text;
};

class FormulaParser {
public:
    FormulaParser(const Gr1Spec& spec, Section section, std::vector<Token> toks, int line)
        : spec_(spec), section_(section), toks_(std::move(toks)), line_(line)
    {
    }

    Formula parse()
    {
        Formula f = parse_iff();
        if (peek().kind != Tok::End) fail("unexpected " + std::string(describe(peek().kind)));
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(Tok k)
    {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg, SpecError::Kind kind = SpecError::Kind::Syntax) const
    {
        throw SpecError(kind, msg, line_, peek().column);
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& msg, SpecError::Kind kind) const
    {
        throw SpecError(kind, msg, line_, t.column);
    }

    Formula parse_iff()
    {
        Formula f = parse_implies();
        while (accept(Tok::Iff)) f = Formula::iff(f, parse_implies());
        return f;
    }

    Formula parse_implies()
    {
        Formula f = parse_or();
        if (accept(Tok::Implies)) return Formula::implies(f, parse_implies());
        return f;
    }

    Formula parse_or()
    {
        Formula f = parse_and();
        while (accept(Tok::Or)) f = Formula::disj(f, parse_and());
        return f;
    }

    Formula parse_and()
    {
        Formula f = parse_unary();
        while (accept(Tok::And)) f = Formula::conj(f, parse_unary());
        return f;
    }

    Formula parse_unary()
    {
        if (accept(Tok::Not)) return Formula::negate(parse_unary());
        return parse_primary();
    }

    Formula parse_primary()
    {
        if (accept(Tok::LParen)) {
            Formula f = parse_iff();
            if (!accept(Tok::RParen)) fail("expected ')'");
            return f;
        }
        if (accept(Tok::True)) return Formula::constant(true);
        if (accept(Tok::False)) return Formula::constant(false);

        const Token& start = peek();
        if (start.kind != Tok::Ident && start.kind != Tok::Number) {
            fail("expected a formula, found " + std::string(describe(start.kind)));
        }
        Term lhs = parse_term();
        std::optional<CmpOp> op = comparison();
        if (!op) {
            if (lhs.vars.size() != 1 || lhs.constant != 0) {
                fail_at(start, "arithmetic term used as a proposition", SpecError::Kind::TypeMismatch);
            }
            const VarDecl* d = spec_.find(lhs.vars.front().name);
            if (!d->is_boolean) {
                fail_at(start, "integer variable '" + d->name + "' used as a proposition",
                        SpecError::Kind::TypeMismatch);
            }
            return Formula::var(lhs.vars.front().name, lhs.vars.front().primed);
        }
        const Token& rhs_start = peek();
        Term rhs = parse_term();
        check_domain(lhs, rhs, rhs_start);
        check_domain(rhs, lhs, start);
        return Formula::compare(std::move(lhs), *op, std::move(rhs));
    }

    std::optional<CmpOp> comparison()
    {
        switch (peek().kind) {
        case Tok::Eq: ++pos_; return CmpOp::Eq;
        case Tok::Ne: ++pos_; return CmpOp::Ne;
        case Tok::Lt: ++pos_; return CmpOp::Lt;
        case Tok::Le: ++pos_; return CmpOp::Le;
        case Tok::Gt: ++pos_; return CmpOp::Gt;
        case Tok::Ge: ++pos_; return CmpOp::Ge;
        default: return std::nullopt;
        }
    }

    Term parse_term()
    {
        Term t;
        do {
            const Token& tok = peek();
            if (tok.kind == Tok::Number) {
                advance();
                t.constant += tok.number;
            } else if (tok.kind == Tok::Ident) {
                advance();
                const bool primed = accept(Tok::Prime);
                if (peek().kind == Tok::Prime) fail("next-step markers cannot be nested");
                check_var(tok, primed);
                t.vars.push_back(VarRef{tok.text, primed});
            } else {
                fail("expected a variable or number, found " + std::string(describe(tok.kind)));
            }
        } while (accept(Tok::Plus));
        return t;
    }

    void check_var(const Token& tok, bool primed) const
    {
        const VarDecl* d = spec_.find(tok.text);
        if (d == nullptr) {
            fail_at(tok, "undeclared variable '" + tok.text + "'", SpecError::Kind::UndeclaredVariable);
        }
        if (!primed) return;
        const bool ok = section_ == Section::SysTrans ||
                        (section_ == Section::EnvTrans && d->owner == VarOwner::Input);
        if (!ok) {
            const std::string where = section_ == Section::EnvTrans ? "primed output in ENV_TRANS"
                                                                    : "primed variable outside *_TRANS";
            fail_at(tok, where + " ('" + tok.text + "')", SpecError::Kind::ForbiddenPrime);
        }
    }

    void check_domain(const Term& var_side, const Term& const_side, const Token& at) const
    {
        if (var_side.vars.size() != 1 || var_side.constant != 0 || !const_side.vars.empty()) return;
        const VarDecl* d = spec_.find(var_side.vars.front().name);
        if (const_side.constant > d->max_value) {
            fail_at(at,
                    "constant " + std::to_string(const_side.constant) + " outside domain of '" + d->name +
                        "' (0.." + std::to_string(d->max_value) + ")",
                    SpecError::Kind::ConstantOutOfDomain);
        }
    }

    const Gr1Spec& spec_;
    Section section_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
};

std::optional<Section> section_from_header(std::string_view h)
{
    if (h == "INPUT") return Section::Input;
    if (h == "OUTPUT") return Section::Output;
    if (h == "ENV_INIT") return Section::EnvInit;
    if (h == "SYS_INIT") return Section::SysInit;
    if (h == "ENV_TRANS") return Section::EnvTrans;
    if (h == "SYS_TRANS") return Section::SysTrans;
    if (h == "ENV_LIVENESS") return Section::EnvLiveness;
    if (h == "SYS_LIVENESS") return Section::SysLiveness;
    return std::nullopt;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

VarDecl parse_declaration(std::string_view text, VarOwner owner, int line)
{
    const auto toks = lex_line(text, line);
    auto bad = [&](const Token& t, const std::string& msg) {
        throw SpecError(SpecError::Kind::InvalidDeclaration, msg, line, t.column);
    };
    if (toks[0].kind != Tok::Ident) bad(toks[0], "expected a variable name");
    if (toks[1].kind == Tok::End) return VarDecl::boolean(toks[0].text, owner);
    if (toks[1].kind != Tok::Colon) bad(toks[1], "expected ':' or end of declaration");
    if (toks.size() != 6 || toks[2].kind != Tok::Number || toks[3].kind != Tok::Ellipsis ||
        toks[4].kind != Tok::Number) {
        bad(toks[2], "expected integer range '0...max'");
    }
    if (toks[2].number != 0) bad(toks[2], "integer ranges must start at 0");
    if (toks[4].number > 1'000'000) bad(toks[4], "integer range too large");
    return VarDecl::integer(toks[0].text, static_cast<int>(toks[4].number), owner);
}

}  // namespace

Gr1Spec parse_spec(std::string_view text)
{
    Gr1Spec spec;
    std::vector<SourceLine> formula_lines;
    std::set<std::string, std::less<>> names;
    Section section = Section::None;

    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++number;

        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        const std::string_view line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) break;
            continue;
        }
        const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw SpecError(SpecError::Kind::Syntax, "unterminated section header", number, indent);
            }
            auto s = section_from_header(trim(line.substr(1, line.size() - 2)));
            if (!s) {
                throw SpecError(SpecError::Kind::Syntax, "unknown section '" + std::string(line) + "'", number,
                                indent);
            }
            section = *s;
        } else if (section == Section::None) {
            throw SpecError(SpecError::Kind::Syntax, "content before the first section header", number, indent);
        } else if (section == Section::Input || section == Section::Output) {
            VarDecl d = parse_declaration(raw, section == Section::Input ? VarOwner::Input : VarOwner::Output,
                                          number);
            if (!names.insert(d.name).second) {
                throw SpecError(SpecError::Kind::DuplicateVariable, "variable '" + d.name + "' declared twice",
                                number, indent);
            }
            spec.variables.push_back(std::move(d));
        } else {
            formula_lines.push_back(SourceLine{section, number, std::string(raw)});
        }
        if (end == text.size()) break;
    }

    for (const auto& l : formula_lines) {
        FormulaParser p(spec, l.section, lex_line(l.text, l.number), l.number);
        Formula f = p.parse();
        switch (l.section) {
        case Section::EnvInit: spec.env_init.push_back(std::move(f)); break;
        case Section::SysInit: spec.sys_init.push_back(std::move(f)); break;
        case Section::EnvTrans: spec.env_trans.push_back(std::move(f)); break;
        case Section::SysTrans: spec.sys_trans.push_back(std::move(f)); break;
        case Section::EnvLiveness: spec.env_liveness.push_back(std::move(f)); break;
        case Section::SysLiveness: spec.sys_liveness.push_back(std::move(f)); break;
        default: break;
        }
    }
    return validate_spec(std::move(spec));
}

}  // namespace hetsynth
