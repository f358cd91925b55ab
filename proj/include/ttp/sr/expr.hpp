#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/format.hpp"

namespace ttp::sr {

enum class Op : std::uint8_t { Add, Sub, Mul, Div, Var, Const };

inline constexpr int arity(Op op) { return op == Op::Var || op == Op::Const ? 0 : 2; }

inline constexpr double kProtectedDivisionEps = 1e-6;

inline double protected_div(double a, double b) { return std::abs(b) < kProtectedDivisionEps ? 1.0 : a / b; }

struct Node {
    Op op = Op::Const;
    int var = 0;
    double value = 0.0;

    static Node function(Op op) { return {op, 0, 0.0}; }
    static Node variable(int v) { return {Op::Var, v, 0.0}; }
    static Node constant(double c) { return {Op::Const, 0, c}; }

    bool is_terminal() const { return arity(op) == 0; }

    friend bool operator==(const Node& a, const Node& b)
    {
        if (a.op != b.op) return false;
        if (a.op == Op::Var) return a.var == b.var;
        if (a.op == Op::Const) return a.value == b.value;
        return true;
    }
};

// Column-major input matrix: cols[v][row].
struct Columns {
    std::vector<std::vector<double>> cols;
    std::size_t rows() const { return cols.empty() ? 0 : cols.front().size(); }
    std::size_t vars() const { return cols.size(); }
};

// A parse tree stored in prefix order, the way gplearn keeps its programs.
class ExprTree {
public:
    ExprTree() = default;
    explicit ExprTree(std::vector<Node> nodes) : nodes_(std::move(nodes))
    {
        if (subtree_end(nodes_, 0) != nodes_.size()) {
            throw std::invalid_argument("node sequence is not a single arity-correct prefix tree");
        }
    }

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    std::size_t depth() const
    {
        // depth counts edges, so a single leaf has depth 0
        std::vector<int> pending;
        std::size_t max_depth = 0;
        for (const auto& n : nodes_) {
            const std::size_t d = pending.size();
            max_depth = std::max(max_depth, d);
            if (!pending.empty()) {
                --pending.back();
            }
            if (arity(n.op) > 0) {
                pending.push_back(arity(n.op));
            }
            while (!pending.empty() && pending.back() == 0) {
                pending.pop_back();
            }
        }
        return max_depth;
    }

    bool uses_variable(int v) const
    {
        return std::any_of(nodes_.begin(), nodes_.end(), [v](const Node& n) { return n.op == Op::Var && n.var == v; });
    }

    int max_variable() const
    {
        int mx = -1;
        for (const auto& n : nodes_) {
            if (n.op == Op::Var) mx = std::max(mx, n.var);
        }
        return mx;
    }

    // One past the last node of the subtree rooted at `start`; nodes.size() + 1 when truncated.
    static std::size_t subtree_end(std::span<const Node> nodes, std::size_t start)
    {
        std::size_t need = 1;
        std::size_t i = start;
        while (need > 0) {
            if (i >= nodes.size()) {
                return nodes.size() + 1;
            }
            need += static_cast<std::size_t>(arity(nodes[i].op));
            --need;
            ++i;
        }
        return i;
    }

    friend bool operator==(const ExprTree& a, const ExprTree& b) { return a.nodes_ == b.nodes_; }

private:
    std::vector<Node> nodes_;
};

namespace detail {

inline double eval_at(std::span<const Node> nodes, std::size_t& pos, std::span<const double> row)
{
    const Node& n = nodes[pos++];
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return row[static_cast<std::size_t>(n.var)];
    default: break;
    }
    const double a = eval_at(nodes, pos, row);
    const double b = eval_at(nodes, pos, row);
    switch (n.op) {
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return protected_div(a, b);
    default: return 0.0;
    }
}

} // namespace detail

inline double eval_expr(const ExprTree& expr, std::span<const double> row)
{
    if (expr.max_variable() >= static_cast<int>(row.size())) {
        throw std::invalid_argument("expression references a variable beyond the input row");
    }
    std::size_t pos = 0;
    return detail::eval_at(expr.nodes(), pos, row);
}

// Evaluates over every row at once. Reversed-prefix stack evaluation, one pass per node.
class BatchEvaluator {
public:
    void evaluate(const ExprTree& expr, const Columns& data, std::vector<double>& out)
    {
        const auto rows = data.rows();
        const auto& nodes = expr.nodes();
        if (stack_.size() < nodes.size()) {
            stack_.resize(nodes.size());
        }
        std::size_t top = 0;
        for (std::size_t k = nodes.size(); k-- > 0;) {
            const Node& n = nodes[k];
            if (n.op == Op::Const) {
                auto& buf = stack_[top++];
                buf.assign(rows, n.value);
                continue;
            }
            if (n.op == Op::Var) {
                auto& buf = stack_[top++];
                const auto& col = data.cols[static_cast<std::size_t>(n.var)];
                buf.assign(col.begin(), col.end());
                continue;
            }
            auto& a = stack_[top - 1]; // first operand
            const auto& b = stack_[top - 2];
            double* pa = a.data();
            const double* pb = b.data();
            switch (n.op) {
            case Op::Add:
                for (std::size_t r = 0; r < rows; ++r) pa[r] += pb[r];
                break;
            case Op::Sub:
                for (std::size_t r = 0; r < rows; ++r) pa[r] -= pb[r];
                break;
            case Op::Mul:
                for (std::size_t r = 0; r < rows; ++r) pa[r] *= pb[r];
                break;
            case Op::Div:
                for (std::size_t r = 0; r < rows; ++r) pa[r] = protected_div(pa[r], pb[r]);
                break;
            default: break;
            }
            std::swap(stack_[top - 2], stack_[top - 1]);
            --top;
        }
        out.swap(stack_[0]);
    }

private:
    std::vector<std::vector<double>> stack_;
};

inline std::string_view op_token(Op op)
{
    switch (op) {
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    default: return "";
    }
}

// Space-separated prefix text, e.g. "add mul x0 x1 0.5".
inline std::string to_prefix(const ExprTree& expr)
{
    std::string out;
    for (const auto& n : expr.nodes()) {
        if (!out.empty()) out += ' ';
        if (n.op == Op::Var) {
            out += "x" + std::to_string(n.var);
        } else if (n.op == Op::Const) {
            out += format_double(n.value);
        } else {
            out += op_token(n.op);
        }
    }
    return out;
}

inline ExprTree parse_prefix(std::string_view text)
{
    std::vector<Node> nodes;
    for (auto tok : split_ws(text)) {
        if (tok == "add") nodes.push_back(Node::function(Op::Add));
        else if (tok == "sub") nodes.push_back(Node::function(Op::Sub));
        else if (tok == "mul") nodes.push_back(Node::function(Op::Mul));
        else if (tok == "div") nodes.push_back(Node::function(Op::Div));
        else if (tok.size() > 1 && tok[0] == 'x') {
            auto v = parse_int(tok.substr(1));
            if (!v || *v < 0) throw std::invalid_argument("bad variable token " + std::string(tok));
            nodes.push_back(Node::variable(static_cast<int>(*v)));
        } else {
            auto c = parse_double(tok);
            if (!c) throw std::invalid_argument("bad token " + std::string(tok));
            nodes.push_back(Node::constant(*c));
        }
    }
    return ExprTree(std::move(nodes));
}

// Infix rendering for reports.
inline std::string to_infix(const ExprTree& expr)
{
    const auto& nodes = expr.nodes();
    std::size_t pos = 0;
    auto rec = [&](auto&& self) -> std::string {
        const Node& n = nodes[pos++];
        if (n.op == Op::Var) return "x" + std::to_string(n.var);
        if (n.op == Op::Const) return format_double(n.value);
        auto a = self(self);
        auto b = self(self);
        const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
        return "(" + a + sym + b + ")";
    };
    return nodes.empty() ? std::string() : rec(rec);
}

} // namespace ttp::sr
