#pragma once

// GR(1) specifications in a sectioned, slugs-like infix text format.
//
// A specification declares input (environment) and output (system) variables,
// each either boolean or an integer range 0..max, followed by six formula
// sections. The temporal operators are implied by the section a formula lives
// in: *_INIT formulas hold initially, *_TRANS formulas hold at every step
// (primed variables refer to the next step), *_LIVENESS formulas must hold
// infinitely often.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetsynth {

enum class VarOwner { Input, Output };

struct VarDecl {
    std::string name;
    bool is_boolean = true;
    int max_value = 1;  // inclusive upper bound; 1 for booleans
    VarOwner owner = VarOwner::Output;

    static VarDecl boolean(std::string name, VarOwner owner);
    static VarDecl integer(std::string name, int max_value, VarOwner owner);

    int domain_size() const { return max_value + 1; }
    bool operator==(const VarDecl&) const = default;
};

struct VarRef {
    std::string name;
    bool primed = false;
    auto operator<=>(const VarRef&) const = default;
};

/// Linear term: sum of variable references plus a constant.
struct Term {
    std::vector<VarRef> vars;
    std::int64_t constant = 0;

    static Term of(std::string name, bool primed = false);
    static Term value(std::int64_t c);
    Term operator+(std::int64_t c) const;

    bool operator==(const Term&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class FormulaKind { Const, BoolVar, Compare, Not, And, Or, Implies, Iff };

/// Immutable formula tree. Copies share structure; equality is structural.
class Formula {
public:
    Formula();  // TRUE

    static Formula constant(bool value);
    static Formula var(std::string name, bool primed = false);
    static Formula compare(Term lhs, CmpOp op, Term rhs);
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);

    FormulaKind kind() const;
    bool value() const;              // Const
    const VarRef& var_ref() const;   // BoolVar
    const Term& lhs() const;         // Compare
    const Term& rhs() const;         // Compare
    CmpOp op() const;                // Compare
    const Formula& child(std::size_t i) const;  // Not: 0; binary: 0, 1

    bool has_primed() const;
    bool operator==(const Formula& other) const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n);
    static std::shared_ptr<const Node> binary(FormulaKind kind, Formula a, Formula b);
    std::shared_ptr<const Node> node_;
};

Formula operator!(const Formula& f);
Formula operator&(const Formula& a, const Formula& b);
Formula operator|(const Formula& a, const Formula& b);

/// `name = value` (or `name' = value`).
Formula var_equals(std::string name, std::int64_t value, bool primed = false);

/// Conjunction of a formula list; TRUE when empty.
Formula conjunction(const std::vector<Formula>& fs);

/// Calls fn(const VarRef&) for every variable occurrence.
template <typename Fn>
void for_each_var(const Formula& f, Fn&& fn);

struct Gr1Spec {
    std::vector<VarDecl> variables;
    std::vector<Formula> env_init;
    std::vector<Formula> sys_init;
    std::vector<Formula> env_trans;
    std::vector<Formula> sys_trans;
    std::vector<Formula> env_liveness;
    std::vector<Formula> sys_liveness;

    const VarDecl* find(std::string_view name) const;
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool operator==(const Gr1Spec&) const = default;
};

class SpecError : public std::runtime_error {
public:
    enum class Kind {
        Syntax,
        UndeclaredVariable,
        ForbiddenPrime,
        ConstantOutOfDomain,
        DuplicateVariable,
        InvalidDeclaration,
        TypeMismatch,
    };

    SpecError(Kind kind, std::string message, int line = 0, int column = 0);

    Kind kind() const { return kind_; }
    int line() const { return line_; }     // 1-based; 0 when unknown
    int column() const { return column_; } // 1-based; 0 when unknown

private:
    Kind kind_;
    int line_;
    int column_;
};

/// Parses the sectioned text format. Throws SpecError.
Gr1Spec parse_spec(std::string_view text);

/// Checks section/prime rules, declarations and constant domains, and
/// normalizes empty liveness lists to a single TRUE goal. Throws SpecError.
Gr1Spec validate_spec(Gr1Spec spec);

std::string print_formula(const Formula& f);
std::string print_spec(const Gr1Spec& spec);

/// Variable assignment by name. Booleans are 0/1.
using Valuation = std::map<std::string, int, std::less<>>;

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluates `f` with unprimed atoms read from `now` and primed atoms read
/// from `next`. Throws EvalError when a primed variable is referenced and
/// `next` is null, or when a referenced variable has no value.
bool eval_formula(const Formula& f, const Valuation& now, const Valuation* next = nullptr);

// ---------------------------------------------------------------------------
// Patrol objectives

std::string position_var(std::string_view agent);
std::string heading_var(std::string_view agent);
std::string scout_var(std::string_view agent);

/// Objective-specific parts of one agent's system guarantees.
struct ObjectiveFragment {
    std::vector<Formula> init;
    std::vector<Formula> liveness;
    std::vector<Formula> safety;  // transition formulas

    bool operator==(const ObjectiveFragment&) const = default;
};

/// Agent id -> objective fragment.
using ObjectiveSet = std::map<std::string, ObjectiveFragment, std::less<>>;

/// Alternate between regions a and b, tracked by the agent's scout bit.
///
/// For a != b this yields two liveness goals, (a & !scout) and (b & scout),
/// and four safety formulas:
///   (a & !scout) -> (scout' & !a')      (b & scout) -> (!scout' & !b')
///   !(a' & scout')                      !(b' & !scout')
/// The two exclusions are stated over the next step so that an agent may be
/// (re)started anywhere with scout = false. For a == b the objective reduces
/// to the single goal `a` with no scout constraints.
ObjectiveFragment patrol(std::string_view agent, int a, int b);

// ---------------------------------------------------------------------------

namespace detail {
template <typename Fn>
void visit_term(const Term& t, Fn& fn)
{
    for (const auto& r : t.vars) fn(r);
}
}  // namespace detail

template <typename Fn>
void for_each_var(const Formula& f, Fn&& fn)
{
    switch (f.kind()) {
    case FormulaKind::Const:
        return;
    case FormulaKind::BoolVar:
        fn(f.var_ref());
        return;
    case FormulaKind::Compare:
        detail::visit_term(f.lhs(), fn);
        detail::visit_term(f.rhs(), fn);
        return;
    case FormulaKind::Not:
        for_each_var(f.child(0), fn);
        return;
    default:
        for_each_var(f.child(0), fn);
        for_each_var(f.child(1), fn);
        return;
    }
}

}  // namespace hetsynth
