#include "compiled_formula.hpp"

#include <stdexcept>

namespace hetsynth::detail {
namespace {

std::uint32_t var_index(const std::vector<VarDecl>& vars, const std::string& name)
{
    for (std::uint32_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name) return i;
    }
    throw SpecError(SpecError::Kind::UndeclaredVariable, "undeclared variable '" + name + "'");
}

bool holds(std::int64_t diff, CmpOp op)
{
    switch (op) {
    case CmpOp::Eq: return diff == 0;
    case CmpOp::Ne: return diff != 0;
    case CmpOp::Lt: return diff < 0;
    case CmpOp::Le: return diff <= 0;
    case CmpOp::Gt: return diff > 0;
    case CmpOp::Ge: return diff >= 0;
    }
    return false;
}

Tri tri_not(Tri t)
{
    if (t == Tri::Unknown) return t;
    return t == Tri::True ? Tri::False : Tri::True;
}

Tri tri_and(Tri x, Tri y)
{
    if (x == Tri::False || y == Tri::False) return Tri::False;
    if (x == Tri::True && y == Tri::True) return Tri::True;
    return Tri::Unknown;
}

Tri tri_or(Tri x, Tri y) { return tri_not(tri_and(tri_not(x), tri_not(y))); }

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, const std::vector<VarDecl>& vars)
{
    root_ = compile(f, vars);
}

std::uint32_t CompiledFormula::compile(const Formula& f, const std::vector<VarDecl>& vars)
{
    Node n;
    n.kind = f.kind();
    n.primed = f.has_primed();
    switch (f.kind()) {
    case FormulaKind::Const:
        n.value = f.value();
        break;
    case FormulaKind::BoolVar:
        n.var = var_index(vars, f.var_ref().name);
        break;
    case FormulaKind::Compare:
        n.op = f.op();
        n.a = static_cast<std::uint32_t>(refs_.size());
        for (const auto& r : f.lhs().vars) refs_.push_back(Ref{var_index(vars, r.name), r.primed});
        n.b = static_cast<std::uint32_t>(refs_.size());
        for (const auto& r : f.rhs().vars) refs_.push_back(Ref{var_index(vars, r.name), r.primed});
        n.c = static_cast<std::uint32_t>(refs_.size());
        n.constant = f.lhs().constant - f.rhs().constant;
        break;
    case FormulaKind::Not:
        n.a = compile(f.child(0), vars);
        break;
    default:
        n.a = compile(f.child(0), vars);
        n.b = compile(f.child(1), vars);
        break;
    }
    nodes_.push_back(n);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

bool CompiledFormula::eval(std::span<const int> now, std::span<const int> next) const
{
    return eval_node(root_, now, next);
}

Tri CompiledFormula::eval_now(std::span<const int> now) const { return tri_node(root_, now); }

bool CompiledFormula::eval_node(std::uint32_t i, std::span<const int> now, std::span<const int> next) const
{
    const Node& n = nodes_[i];
    switch (n.kind) {
    case FormulaKind::Const:
        return n.value;
    case FormulaKind::BoolVar:
        return (n.primed ? next[n.var] : now[n.var]) != 0;
    case FormulaKind::Compare: {
        std::int64_t diff = n.constant;
        for (std::uint32_t k = n.a; k < n.b; ++k) diff += refs_[k].primed ? next[refs_[k].var] : now[refs_[k].var];
        for (std::uint32_t k = n.b; k < n.c; ++k) diff -= refs_[k].primed ? next[refs_[k].var] : now[refs_[k].var];
        return holds(diff, n.op);
    }
    case FormulaKind::Not:
        return !eval_node(n.a, now, next);
    case FormulaKind::And:
        return eval_node(n.a, now, next) && eval_node(n.b, now, next);
    case FormulaKind::Or:
        return eval_node(n.a, now, next) || eval_node(n.b, now, next);
    case FormulaKind::Implies:
        return !eval_node(n.a, now, next) || eval_node(n.b, now, next);
    case FormulaKind::Iff:
        return eval_node(n.a, now, next) == eval_node(n.b, now, next);
    }
    return false;
}

Tri CompiledFormula::tri_node(std::uint32_t i, std::span<const int> now) const
{
    const Node& n = nodes_[i];
    if (n.kind == FormulaKind::Const) return n.value ? Tri::True : Tri::False;
    if (n.kind == FormulaKind::BoolVar || n.kind == FormulaKind::Compare) {
        if (n.primed) return Tri::Unknown;
        return eval_node(i, now, {}) ? Tri::True : Tri::False;
    }
    switch (n.kind) {
    case FormulaKind::Not:
        return tri_not(tri_node(n.a, now));
    case FormulaKind::And: {
        const Tri x = tri_node(n.a, now);
        if (x == Tri::False) return x;
        return tri_and(x, tri_node(n.b, now));
    }
    case FormulaKind::Or: {
        const Tri x = tri_node(n.a, now);
        if (x == Tri::True) return x;
        return tri_or(x, tri_node(n.b, now));
    }
    case FormulaKind::Implies: {
        const Tri x = tri_not(tri_node(n.a, now));
        if (x == Tri::True) return x;
        return tri_or(x, tri_node(n.b, now));
    }
    case FormulaKind::Iff: {
        const Tri x = tri_node(n.a, now);
        const Tri y = tri_node(n.b, now);
        if (x == Tri::Unknown || y == Tri::Unknown) return Tri::Unknown;
        return x == y ? Tri::True : Tri::False;
    }
    default:
        return Tri::Unknown;
    }
}

}  // namespace hetsynth::detail
