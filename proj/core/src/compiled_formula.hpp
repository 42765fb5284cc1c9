#pragma once

// Index-based formula evaluation used on the game-construction hot path.

#include <cstdint>
#include <span>
#include <vector>

#include "hetsynth/speclang.hpp"

namespace hetsynth::detail {

enum class Tri : std::uint8_t { False, True, Unknown };

class CompiledFormula {
public:
    CompiledFormula(const Formula& f, const std::vector<VarDecl>& vars);

    bool eval(std::span<const int> now, std::span<const int> next) const;

    /// Kleene evaluation with every primed atom unknown.
    Tri eval_now(std::span<const int> now) const;

private:
    struct Ref {
        std::uint32_t var;
        bool primed;
    };
    struct Node {
        FormulaKind kind;
        bool value = false;
        bool primed = false;
        CmpOp op = CmpOp::Eq;
        std::uint32_t a = 0, b = 0;  // children, or ref ranges [a,b) / [b,c) for comparisons
        std::uint32_t c = 0;
        std::int64_t constant = 0;   // lhs constant minus rhs constant
        std::uint32_t var = 0;
    };

    std::uint32_t compile(const Formula& f, const std::vector<VarDecl>& vars);
    bool eval_node(std::uint32_t n, std::span<const int> now, std::span<const int> next) const;
    Tri tri_node(std::uint32_t n, std::span<const int> now) const;

    std::vector<Node> nodes_;
    std::vector<Ref> refs_;
    std::uint32_t root_ = 0;
};

}  // namespace hetsynth::detail
