#include "hetsynth/speclang.hpp"

#include <cassert>
#include <set>
#include <sstream>
#include <utility>

namespace hetsynth {

VarDecl VarDecl::boolean(std::string name, VarOwner owner)
{
    return VarDecl{std::move(name), true, 1, owner};
}

VarDecl VarDecl::integer(std::string name, int max_value, VarOwner owner)
{
    return VarDecl{std::move(name), false, max_value, owner};
}

Term Term::of(std::string name, bool primed)
{
    Term t;
    t.vars.push_back(VarRef{std::move(name), primed});
    return t;
}

Term Term::value(std::int64_t c)
{
    Term t;
    t.constant = c;
    return t;
}

Term Term::operator+(std::int64_t c) const
{
    Term t = *this;
    t.constant += c;
    return t;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
    FormulaKind kind = FormulaKind::Const;
    bool value = true;
    VarRef var;
    Term lhs, rhs;
    CmpOp op = CmpOp::Eq;
    std::vector<Formula> children;
    bool primed = false;
};

namespace {

bool term_primed(const Term& t)
{
    for (const auto& r : t.vars) {
        if (r.primed) return true;
    }
    return false;
}

}  // namespace

Formula::Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Formula::Formula() : Formula(constant(true)) {}

Formula Formula::constant(bool value)
{
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::Const;
    n->value = value;
    return Formula(std::move(n));
}

Formula Formula::var(std::string name, bool primed)
{
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::BoolVar;
    n->var = VarRef{std::move(name), primed};
    n->primed = primed;
    return Formula(std::move(n));
}

Formula Formula::compare(Term lhs, CmpOp op, Term rhs)
{
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::Compare;
    n->primed = term_primed(lhs) || term_primed(rhs);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->op = op;
    return Formula(std::move(n));
}

Formula Formula::negate(Formula f)
{
    auto n = std::make_shared<Node>();
    n->kind = FormulaKind::Not;
    n->primed = f.has_primed();
    n->children.push_back(std::move(f));
    return Formula(std::move(n));
}

std::shared_ptr<const Formula::Node> Formula::binary(FormulaKind kind, Formula a, Formula b)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->primed = a.has_primed() || b.has_primed();
    n->children.push_back(std::move(a));
    n->children.push_back(std::move(b));
    return n;
}

Formula Formula::conj(Formula a, Formula b)
{
    return Formula(binary(FormulaKind::And, std::move(a), std::move(b)));
}

Formula Formula::disj(Formula a, Formula b)
{
    return Formula(binary(FormulaKind::Or, std::move(a), std::move(b)));
}

Formula Formula::implies(Formula a, Formula b)
{
    return Formula(binary(FormulaKind::Implies, std::move(a), std::move(b)));
}

Formula Formula::iff(Formula a, Formula b)
{
    return Formula(binary(FormulaKind::Iff, std::move(a), std::move(b)));
}

FormulaKind Formula::kind() const { return node_->kind; }
bool Formula::value() const { return node_->value; }
const VarRef& Formula::var_ref() const { return node_->var; }
const Term& Formula::lhs() const { return node_->lhs; }
const Term& Formula::rhs() const { return node_->rhs; }
CmpOp Formula::op() const { return node_->op; }
bool Formula::has_primed() const { return node_->primed; }

const Formula& Formula::child(std::size_t i) const
{
    assert(i < node_->children.size());
    return node_->children[i];
}

bool Formula::operator==(const Formula& other) const
{
    if (node_ == other.node_) return true;
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case FormulaKind::Const:
        return a.value == b.value;
    case FormulaKind::BoolVar:
        return a.var == b.var;
    case FormulaKind::Compare:
        return a.op == b.op && a.lhs == b.lhs && a.rhs == b.rhs;
    default:
        return a.children == b.children;
    }
}

Formula operator!(const Formula& f) { return Formula::negate(f); }
Formula operator&(const Formula& a, const Formula& b) { return Formula::conj(a, b); }
Formula operator|(const Formula& a, const Formula& b) { return Formula::disj(a, b); }

Formula var_equals(std::string name, std::int64_t value, bool primed)
{
    return Formula::compare(Term::of(std::move(name), primed), CmpOp::Eq, Term::value(value));
}

Formula conjunction(const std::vector<Formula>& fs)
{
    if (fs.empty()) return Formula::constant(true);
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = acc & fs[i];
    return acc;
}

// ---------------------------------------------------------------------------
// Gr1Spec

const VarDecl* Gr1Spec::find(std::string_view name) const
{
    for (const auto& v : variables) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

std::optional<std::size_t> Gr1Spec::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == name) return i;
    }
    return std::nullopt;
}

SpecError::SpecError(Kind kind, std::string message, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message
                                  : message),
      kind_(kind), line_(line), column_(column)
{
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(FormulaKind k)
{
    switch (k) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    case FormulaKind::Not: return 5;
    default: return 6;
    }
}

const char* op_text(CmpOp op)
{
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

void print_term(std::ostream& os, const Term& t)
{
    bool first = true;
    for (const auto& r : t.vars) {
        if (!first) os << " + ";
        os << r.name << (r.primed ? "'" : "");
        first = false;
    }
    if (first) {
        os << t.constant;
    } else if (t.constant != 0) {
        os << " + " << t.constant;
    }
}

void print_node(std::ostream& os, const Formula& f, int min_prec)
{
    const int p = precedence(f.kind());
    const bool paren = p < min_prec;
    if (paren) os << '(';
    switch (f.kind()) {
    case FormulaKind::Const:
        os << (f.value() ? "TRUE" : "FALSE");
        break;
    case FormulaKind::BoolVar:
        os << f.var_ref().name << (f.var_ref().primed ? "'" : "");
        break;
    case FormulaKind::Compare:
        print_term(os, f.lhs());
        os << ' ' << op_text(f.op()) << ' ';
        print_term(os, f.rhs());
        break;
    case FormulaKind::Not: {
        os << '!';
        const Formula& c = f.child(0);
        // comparisons are parenthesized for readability only
        print_node(os, c, c.kind() == FormulaKind::Compare ? 7 : 5);
        break;
    }
    case FormulaKind::And:
        print_node(os, f.child(0), 4);
        os << " & ";
        print_node(os, f.child(1), 5);
        break;
    case FormulaKind::Or:
        print_node(os, f.child(0), 3);
        os << " | ";
        print_node(os, f.child(1), 4);
        break;
    case FormulaKind::Implies:
        print_node(os, f.child(0), 3);
        os << " -> ";
        print_node(os, f.child(1), 2);
        break;
    case FormulaKind::Iff:
        print_node(os, f.child(0), 1);
        os << " <-> ";
        print_node(os, f.child(1), 2);
        break;
    }
    if (paren) os << ')';
}

}  // namespace

std::string print_formula(const Formula& f)
{
    std::ostringstream os;
    print_node(os, f, 0);
    return os.str();
}

std::string print_spec(const Gr1Spec& spec)
{
    std::ostringstream os;
    auto decls = [&](const char* header, VarOwner owner) {
        os << header << '\n';
        for (const auto& v : spec.variables) {
            if (v.owner != owner) continue;
            os << v.name;
            if (!v.is_boolean) os << ": 0..." << v.max_value;
            os << '\n';
        }
        os << '\n';
    };
    auto section = [&](const char* header, const std::vector<Formula>& fs) {
        os << header << '\n';
        for (const auto& f : fs) os << print_formula(f) << '\n';
        os << '\n';
    };
    decls("[INPUT]", VarOwner::Input);
    decls("[OUTPUT]", VarOwner::Output);
    section("[ENV_INIT]", spec.env_init);
    section("[SYS_INIT]", spec.sys_init);
    section("[ENV_TRANS]", spec.env_trans);
    section("[SYS_TRANS]", spec.sys_trans);
    section("[ENV_LIVENESS]", spec.env_liveness);
    section("[SYS_LIVENESS]", spec.sys_liveness);
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

int lookup(const Valuation& v, const std::string& name)
{
    auto it = v.find(name);
    if (it == v.end()) throw EvalError("no value for variable '" + name + "'");
    return it->second;
}

std::int64_t eval_term(const Term& t, const Valuation& now, const Valuation* next)
{
    std::int64_t sum = t.constant;
    for (const auto& r : t.vars) {
        if (r.primed) {
            if (next == nullptr) throw EvalError("primed variable '" + r.name + "' needs a next valuation");
            sum += lookup(*next, r.name);
        } else {
            sum += lookup(now, r.name);
        }
    }
    return sum;
}

bool compare(std::int64_t a, CmpOp op, std::int64_t b)
{
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    }
    return false;
}

}  // namespace

bool eval_formula(const Formula& f, const Valuation& now, const Valuation* next)
{
    switch (f.kind()) {
    case FormulaKind::Const:
        return f.value();
    case FormulaKind::BoolVar: {
        const VarRef& r = f.var_ref();
        if (r.primed) {
            if (next == nullptr) throw EvalError("primed variable '" + r.name + "' needs a next valuation");
            return lookup(*next, r.name) != 0;
        }
        return lookup(now, r.name) != 0;
    }
    case FormulaKind::Compare:
        return compare(eval_term(f.lhs(), now, next), f.op(), eval_term(f.rhs(), now, next));
    case FormulaKind::Not:
        return !eval_formula(f.child(0), now, next);
    case FormulaKind::And:
        return eval_formula(f.child(0), now, next) && eval_formula(f.child(1), now, next);
    case FormulaKind::Or:
        return eval_formula(f.child(0), now, next) || eval_formula(f.child(1), now, next);
    case FormulaKind::Implies:
        return !eval_formula(f.child(0), now, next) || eval_formula(f.child(1), now, next);
    case FormulaKind::Iff:
        return eval_formula(f.child(0), now, next) == eval_formula(f.child(1), now, next);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

enum class Section { EnvInit, SysInit, EnvTrans, SysTrans, EnvLiveness, SysLiveness };

const char* section_name(Section s)
{
    switch (s) {
    case Section::EnvInit: return "ENV_INIT";
    case Section::SysInit: return "SYS_INIT";
    case Section::EnvTrans: return "ENV_TRANS";
    case Section::SysTrans: return "SYS_TRANS";
    case Section::EnvLiveness: return "ENV_LIVENESS";
    case Section::SysLiveness: return "SYS_LIVENESS";
    }
    return "?";
}

void check_term(const Gr1Spec& spec, const Term& t, Section section)
{
    for (const auto& r : t.vars) {
        const VarDecl* d = spec.find(r.name);
        if (d == nullptr) {
            throw SpecError(SpecError::Kind::UndeclaredVariable, "undeclared variable '" + r.name + "'");
        }
        if (!r.primed) continue;
        const bool allowed = section == Section::SysTrans ||
                             (section == Section::EnvTrans && d->owner == VarOwner::Input);
        if (!allowed) {
            throw SpecError(SpecError::Kind::ForbiddenPrime,
                            "primed variable '" + r.name + "' not allowed in " + section_name(section));
        }
    }
}

void check_domain(const Gr1Spec& spec, const Term& var_side, const Term& const_side)
{
    if (var_side.vars.size() != 1 || var_side.constant != 0 || !const_side.vars.empty()) return;
    const VarDecl* d = spec.find(var_side.vars.front().name);
    if (d == nullptr) return;
    if (const_side.constant < 0 || const_side.constant > d->max_value) {
        throw SpecError(SpecError::Kind::ConstantOutOfDomain,
                        "constant " + std::to_string(const_side.constant) + " outside domain of '" + d->name +
                            "' (0.." + std::to_string(d->max_value) + ")");
    }
}

void check_formula(const Gr1Spec& spec, const Formula& f, Section section)
{
    switch (f.kind()) {
    case FormulaKind::Const:
        return;
    case FormulaKind::BoolVar: {
        Term t;
        t.vars.push_back(f.var_ref());
        check_term(spec, t, section);
        if (!spec.find(f.var_ref().name)->is_boolean) {
            throw SpecError(SpecError::Kind::TypeMismatch,
                            "integer variable '" + f.var_ref().name + "' used as a proposition");
        }
        return;
    }
    case FormulaKind::Compare:
        check_term(spec, f.lhs(), section);
        check_term(spec, f.rhs(), section);
        check_domain(spec, f.lhs(), f.rhs());
        check_domain(spec, f.rhs(), f.lhs());
        return;
    case FormulaKind::Not:
        check_formula(spec, f.child(0), section);
        return;
    default:
        check_formula(spec, f.child(0), section);
        check_formula(spec, f.child(1), section);
        return;
    }
}

}  // namespace

Gr1Spec validate_spec(Gr1Spec spec)
{
    std::set<std::string, std::less<>> seen;
    for (const auto& v : spec.variables) {
        if (v.name.empty()) throw SpecError(SpecError::Kind::InvalidDeclaration, "empty variable name");
        if (!seen.insert(v.name).second) {
            throw SpecError(SpecError::Kind::DuplicateVariable, "variable '" + v.name + "' declared twice");
        }
        if (v.max_value < 0 || (v.is_boolean && v.max_value != 1)) {
            throw SpecError(SpecError::Kind::InvalidDeclaration, "bad domain for '" + v.name + "'");
        }
    }
    auto all = [&](const std::vector<Formula>& fs, Section s) {
        for (const auto& f : fs) check_formula(spec, f, s);
    };
    all(spec.env_init, Section::EnvInit);
    all(spec.sys_init, Section::SysInit);
    all(spec.env_trans, Section::EnvTrans);
    all(spec.sys_trans, Section::SysTrans);
    all(spec.env_liveness, Section::EnvLiveness);
    all(spec.sys_liveness, Section::SysLiveness);
    if (spec.env_liveness.empty()) spec.env_liveness.push_back(Formula::constant(true));
    if (spec.sys_liveness.empty()) spec.sys_liveness.push_back(Formula::constant(true));
    return spec;
}

// ---------------------------------------------------------------------------
// Patrol

std::string position_var(std::string_view agent) { return "pos_" + std::string(agent); }
std::string heading_var(std::string_view agent) { return "heading_" + std::string(agent); }
std::string scout_var(std::string_view agent) { return "scout_" + std::string(agent); }

ObjectiveFragment patrol(std::string_view agent, int a, int b)
{
    const std::string pos = position_var(agent);
    ObjectiveFragment frag;
    if (a == b) {
        frag.liveness.push_back(var_equals(pos, a));
        return frag;
    }
    const std::string scout = scout_var(agent);
    const Formula scout_now = Formula::var(scout);
    const Formula scout_next = Formula::var(scout, true);
    const Formula at_a = var_equals(pos, a);
    const Formula at_b = var_equals(pos, b);
    const Formula at_a_next = var_equals(pos, a, true);
    const Formula at_b_next = var_equals(pos, b, true);

    frag.init.push_back(!scout_now);
    frag.liveness.push_back(at_a & !scout_now);
    frag.liveness.push_back(at_b & scout_now);
    frag.safety.push_back(Formula::implies(at_a & !scout_now, scout_next & !at_a_next));
    frag.safety.push_back(Formula::implies(at_b & scout_now, (!scout_next) & (!at_b_next)));
    frag.safety.push_back(!(at_a_next & scout_next));
    frag.safety.push_back(!(at_b_next & !scout_next));
    return frag;
}

}  // namespace hetsynth
