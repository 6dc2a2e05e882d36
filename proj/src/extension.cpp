#include "branchtor/extension.hpp"

#include <algorithm>

namespace branchtor {

std::string Relation::to_string(const std::vector<std::string>& names) const
{
    return lhs.to_string(names) + " = " + rhs.to_string(names);
}

std::vector<TruncatedSeries> ExtensionRing::t_generators() const
{
    std::vector<TruncatedSeries> out;
    for (int j = 0; j < s; ++j) out.push_back(ring->generator(T(j)));
    return out;
}

bool conductor_in_square(const Branch& b, const ValueSemigroup& vs)
{
    return b.valuations.back() < vs.conductor;
}

namespace {

std::vector<Monomial> t_singles(int n, int s)
{
    std::vector<Monomial> out;
    for (int j = 0; j < s; ++j) out.push_back(unit_vector(static_cast<std::size_t>(n + s), static_cast<std::size_t>(n + j)));
    return out;
}

std::vector<Terms> s_generator_terms(const Branch& b, const std::vector<int>& gaps)
{
    std::vector<Terms> gens = b.exact;
    for (int bj : gaps) gens.push_back(Terms{{bj, Rational(1)}});
    return gens;
}

}  // namespace

ExtensionRing build_extension(const Branch& b, const ValueSemigroup& vs, const StaircaseBasis& sb, Exec exec)
{
    if (!conductor_in_square(b, vs))
        throw ExtensionError("the conductor is not inside m^2 (a_n >= c_R); the a_1 + a_n criterion applies directly");
    ExtensionRing e;
    e.base = b;
    e.semigroup_R = vs;
    e.n = b.n();
    e.b = extension_gaps(vs, b.valuations.front());
    e.s = static_cast<int>(e.b.size());
    if (e.s == 0) throw ExtensionError("no extension gaps: c_R - 1 should never be attained");
    e.conductor_S = vs.conductor - b.valuations.front();
    e.names = default_names(static_cast<std::size_t>(e.n), static_cast<std::size_t>(e.s));
    e.ring = std::make_shared<Ring>("S", e.names, s_generator_terms(b, e.b), b.precision, b.polynomial);
    e.staircase_S = std::make_shared<const StaircaseBasis>(extend_staircase(sb, e.ring, t_singles(e.n, e.s), exec));

    const std::size_t nv = e.nvars();
    std::vector<std::size_t> into_S(static_cast<std::size_t>(e.n));
    for (int i = 0; i < e.n; ++i) into_S[i] = static_cast<std::size_t>(i);

    std::vector<std::pair<int, int>> xt, tt;
    for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.s; ++j) xt.emplace_back(i, j);
    for (int k = 0; k < e.s; ++k)
        for (int l = k; l < e.s; ++l) tt.emplace_back(k, l);
    e.relations.resize(xt.size() + tt.size());
    const long total = static_cast<long>(e.relations.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (long q = 0; q < total; ++q) {
        Relation r;
        Monomial lhs(nv, 0);
        if (q < static_cast<long>(xt.size())) {
            auto [i, j] = xt[q];
            r.kind = Relation::Kind::XT;
            r.i = i, r.j = j;
            lhs[e.x(i)] += 1;
            lhs[e.T(j)] += 1;
        } else {
            auto [k, l] = tt[q - xt.size()];
            r.kind = Relation::Kind::TT;
            r.i = k, r.j = l;
            lhs[e.T(k)] += 1;
            lhs[e.T(l)] += 1;
        }
        r.lhs = Polynomial::term(lhs, 1);
        TruncatedSeries value = e.ring->monomial_series(lhs);
        Division div = divide_by_staircase(value, sb, vs.conductor);
        r.rhs = div.expression.embedded(nv, into_S);
        r.rhs_series = e.ring->evaluate(r.rhs);
        e.relations[q] = std::move(r);
    }
    return e;
}

SemigroupResult semigroup_of_S(const ExtensionRing& e, Exec)
{
    ValueSemigroup vs = semigroup_from_staircase(*e.staircase_S);
    if (vs.conductor != e.conductor_S)
        throw ExtensionError("conductor of S is " + std::to_string(vs.conductor) + ", expected c_R - a_1 = " +
                             std::to_string(e.conductor_S));
    return {vs, e.staircase_S};
}

bool relations_sound(const ExtensionRing& e)
{
    for (auto& r : e.relations) {
        if (!(e.ring->evaluate(r.lhs) == r.rhs_series)) return false;
        for (auto& [m, c] : r.rhs.terms())
            if (total_degree(m) < 2) return false;
        if (r.rhs_series.order() < e.semigroup_R.conductor) return false;
    }
    return true;
}

TruncatedSeries Uniformizer::power(int k, int precision) const
{
    if (k < 0) throw std::invalid_argument("Uniformizer::power: negative exponent");
    if (precision > high_precision) throw PrecisionError("Uniformizer::power: precision exceeds the stored unit");
    if (k > precision) return TruncatedSeries(precision);
    TruncatedSeries unit = pow_unit(beta.with_precision(precision - k), Rational(k));
    Terms shifted;
    for (auto& [e, c] : unit.terms()) shifted.emplace_back(e + k, c);
    return TruncatedSeries(std::move(shifted), precision);
}

TruncatedSeries Uniformizer::ds_dt(int precision) const
{
    return derivative(power(1, precision + 1));
}

Uniformizer make_uniformizer(const Branch& b, int d)
{
    Uniformizer u;
    u.d = d;
    u.high_precision = b.precision + b.valuations.back() + 2;
    if (d < 0) {
        u.beta = TruncatedSeries::constant(1, u.high_precision);
    } else {
        if (d >= b.n()) throw std::out_of_range("make_uniformizer: generator index out of range");
        u.beta = nth_root_unit(b.unit_at(d, u.high_precision), b.valuations[d]);
    }
    return u;
}

TruncatedSeries wronskian_coefficient(const TruncatedSeries& z, const TruncatedSeries& y, const Uniformizer& u, int a,
                                      int precision)
{
    const int H = u.high_precision;
    if (z.precision() < H || y.precision() < H) throw PrecisionError("wronskian_coefficient: inputs below high precision");
    if (z.order() + y.order() < a) throw std::domain_error("wronskian_coefficient: valuations too small");
    const int P = H - 1;
    // s^{1-a} = t^{1-a} beta^{1-a}, and dy/ds = y'(t) / s'(t)
    TruncatedSeries num = z.with_precision(P) * derivative(y.with_precision(H));
    TruncatedSeries den = invert_unit(u.ds_dt(P));
    TruncatedSeries scale = pow_unit(u.beta.with_precision(P), Rational(1 - a));
    TruncatedSeries full = num * den * scale;
    TruncatedSeries out = full.unshifted(a - 1);
    if (out.precision() < precision) throw PrecisionError("wronskian_coefficient: not enough precision");
    return out.with_precision(precision);
}

Transport transport_T_under_monomialization(const ExtensionRing& e, const Uniformizer& u)
{
    Transport tr;
    tr.d = u.d;
    const std::size_t nv = e.nvars();
    const int B = e.ring->precision();
    for (int j = 0; j < e.s; ++j) {
        TruncatedSeries target = u.power(e.b[j], B) - e.ring->generator(e.T(j));
        Polynomial g(nv);
        if (!target.is_zero()) g = divide_by_staircase(target, *e.staircase_S, e.b[j] + 1).expression;
        Polynomial f(nv);
        std::vector<Rational> delta(static_cast<std::size_t>(e.s));
        for (auto& [m, c] : g.terms()) {
            int k = -1;
            for (int q = 0; q < e.s; ++q)
                if (m[e.T(q)]) k = q;
            if (k < 0) {
                f.add_term(m, c);
                continue;
            }
            if (total_degree(m) != 1) throw ExtensionError("transport produced a nonlinear T term");
            if (k <= j) throw ExtensionError("transport produced T_k with k <= j");
            delta[k] = c;
        }
        tr.T_prime.push_back(Polynomial::variable(nv, e.T(j)) + g);
        tr.f.push_back(std::move(f));
        tr.delta.push_back(std::move(delta));
    }
    return tr;
}

Transport transport_T_under_monomialization(const ExtensionRing& e, int d)
{
    return transport_T_under_monomialization(e, make_uniformizer(e.base, d));
}

}  // namespace branchtor
