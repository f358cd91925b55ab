#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ttp/error.hpp"
#include "ttp/sr/expr.hpp"

namespace ttp::sr {

// Exponent per variable; trailing zeros trimmed so monomials compare independent of arity.
struct Monomial {
    std::vector<int> exponents;

    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

    static Monomial one() { return {}; }
    static Monomial var(int v)
    {
        Monomial m;
        m.exponents.assign(static_cast<std::size_t>(v) + 1, 0);
        m.exponents.back() = 1;
        return m;
    }

    Monomial operator*(const Monomial& o) const
    {
        Monomial r;
        r.exponents.assign(std::max(exponents.size(), o.exponents.size()), 0);
        for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] += exponents[i];
        for (std::size_t i = 0; i < o.exponents.size(); ++i) r.exponents[i] += o.exponents[i];
        return r;
    }

    // "1", "x0", "x0^2", "x0*x1^2"
    std::string to_string() const
    {
        std::string out;
        for (std::size_t v = 0; v < exponents.size(); ++v) {
            if (exponents[v] == 0) continue;
            if (!out.empty()) out += '*';
            out += "x" + std::to_string(v);
            if (exponents[v] > 1) out += "^" + std::to_string(exponents[v]);
        }
        return out.empty() ? "1" : out;
    }

    double evaluate(std::span<const double> row) const
    {
        double p = 1.0;
        for (std::size_t v = 0; v < exponents.size(); ++v) {
            p *= std::pow(row[v], exponents[v]);
        }
        return p;
    }

    // Lower total degree first, then x0-heavy terms first: 1, x0, x1, x0^2, x0*x1, x1^2, ...
    friend bool operator<(const Monomial& a, const Monomial& b)
    {
        const int da = a.degree();
        const int db = b.degree();
        if (da != db) return da < db;
        const auto n = std::max(a.exponents.size(), b.exponents.size());
        for (std::size_t i = 0; i < n; ++i) {
            const int ea = i < a.exponents.size() ? a.exponents[i] : 0;
            const int eb = i < b.exponents.size() ? b.exponents[i] : 0;
            if (ea != eb) return ea > eb;
        }
        return false;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return !(a < b) && !(b < a); }
};

using TermSet = std::set<Monomial>;

inline std::string term_set_string(const TermSet& terms)
{
    std::string out = "{";
    bool first = true;
    for (const auto& m : terms) {
        if (!first) out += ',';
        out += m.to_string();
        first = false;
    }
    return out + "}";
}

using Polynomial = std::map<Monomial, double>;

inline constexpr int kMaxExpansionDegree = 64;

namespace detail {

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b)
{
    Polynomial r;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            auto m = ma * mb;
            if (m.degree() > kMaxExpansionDegree) {
                throw UnsupportedExpansionError("expansion degree exceeds limit");
            }
            r[m] += ca * cb;
        }
    }
    return r;
}

inline Polynomial expand_at(std::span<const Node> nodes, std::size_t& pos)
{
    const Node& n = nodes[pos++];
    switch (n.op) {
    case Op::Const: return {{Monomial::one(), n.value}};
    case Op::Var: return {{Monomial::var(n.var), 1.0}};
    case Op::Div: throw UnsupportedExpansionError("division cannot be expanded into monomials");
    default: break;
    }
    auto a = expand_at(nodes, pos);
    auto b = expand_at(nodes, pos);
    if (n.op == Op::Mul) {
        return poly_mul(a, b);
    }
    const double sign = n.op == Op::Add ? 1.0 : -1.0;
    for (const auto& [m, c] : b) {
        a[m] += sign * c;
    }
    return a;
}

} // namespace detail

// Distributes products over sums and collects exponents. Coefficients survive in the map.
inline Polynomial expand_polynomial(const ExprTree& expr)
{
    std::size_t pos = 0;
    return detail::expand_at(expr.nodes(), pos);
}

// The set of monomials with non-vanishing coefficients; constant terms appear as "1".
inline TermSet expand_to_monomials(const ExprTree& expr)
{
    const auto poly = expand_polynomial(expr);
    double scale = 0.0;
    for (const auto& [m, c] : poly) {
        scale = std::max(scale, std::abs(c));
    }
    TermSet terms;
    for (const auto& [m, c] : poly) {
        if (std::abs(c) > 1e-12 * std::max(1.0, scale)) {
            terms.insert(m);
        }
    }
    return terms;
}

} // namespace ttp::sr
