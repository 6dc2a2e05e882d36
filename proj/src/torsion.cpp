#include "branchtor/torsion.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace branchtor {

namespace {

std::string one_based(int i) { return std::to_string(i + 1); }

Polynomial var(std::size_t nv, std::size_t i) { return Polynomial::variable(nv, i); }

Monomial x1x2(std::size_t nv, int a, int b)
{
    Monomial m(nv, 0);
    m[0] = a;
    m[1] = b;
    return m;
}

bool any_nonzero(const std::vector<Rational>& v)
{
    return std::any_of(v.begin(), v.end(), [](const Rational& c) { return !branchtor::is_zero(c); });
}

std::optional<Polynomial> divide_opt(const TruncatedSeries& sigma, const StaircaseBasis& sb, int floor = 0)
{
    try {
        return divide_by_staircase(sigma, sb, floor).expression;
    } catch (const DivisionError&) {
        return std::nullopt;
    }
}

// Tries the preferred staircase first, then the full one.
std::optional<Polynomial> divide_preferring(const TruncatedSeries& sigma, const StaircaseBasis* preferred,
                                            const StaircaseBasis& full)
{
    if (sigma.is_zero()) return Polynomial(full.ring().nvars());
    if (preferred) {
        auto g = divide_opt(sigma, *preferred);
        if (g) return g;
    }
    return divide_opt(sigma, full);
}

// A polynomial of S free of T read in the variables of R.
Polynomial to_R(const Polynomial& p, std::size_t n)
{
    Polynomial out(n);
    for (auto& [m, c] : p.terms()) {
        for (std::size_t k = n; k < m.size(); ++k)
            if (m[k]) throw std::logic_error("to_R: polynomial still involves T");
        out.add_term(Monomial(m.begin(), m.begin() + static_cast<long>(n)), c);
    }
    return out;
}

// x_i - (x_i - lambda s^{a_i}) as a polynomial, the second part divided by sb.
std::optional<Polynomial> matched_generator(const Ring& ring, const StaircaseBasis& sb, const Uniformizer& u, int i,
                                            int a, int floor)
{
    const int B = ring.precision();
    const std::size_t nv = ring.nvars();
    TruncatedSeries x = ring.generator(static_cast<std::size_t>(i));
    TruncatedSeries pw = u.power(a, B);
    Rational lambda = x.leading_coeff() / pw.leading_coeff();
    TruncatedSeries diff = x - pw * lambda;
    Polynomial y = var(nv, static_cast<std::size_t>(i));
    if (diff.is_zero()) return y;
    if (diff.order() < floor) return std::nullopt;
    auto g = divide_opt(diff, sb);
    if (!g) return std::nullopt;
    return y - *g;
}

QuotientSpec monomial_quotient(std::size_t nv, std::vector<Monomial> monos, std::string description)
{
    QuotientSpec q;
    q.nvars = nv;
    q.monomials = std::move(monos);
    q.description = std::move(description);
    return q;
}

QuotientSpec with_square(std::size_t nv, std::vector<std::size_t> vars, const std::string& description)
{
    QuotientSpec q = square_of_maximal(nv, description);
    add_variables(q, vars);
    return q;
}

QuotientSpec x_plus_T_squared(const ExtensionRing& e)
{
    std::vector<Monomial> monos;
    const std::size_t nv = e.nvars();
    for (int i = 0; i < e.n; ++i) monos.push_back(unit_vector(nv, e.x(i)));
    for (int k = 0; k < e.s; ++k)
        for (int l = k; l < e.s; ++l) {
            Monomial m(nv, 0);
            m[e.T(k)] += 1;
            m[e.T(l)] += 1;
            monos.push_back(m);
        }
    return monomial_quotient(nv, std::move(monos), "<x> + <T>^2");
}

std::vector<std::size_t> t_indices(const ExtensionRing& e)
{
    std::vector<std::size_t> v;
    for (int j = 0; j < e.s; ++j) v.push_back(e.T(j));
    return v;
}

std::vector<Monomial> t_singles(const ExtensionRing& e)
{
    std::vector<Monomial> v;
    for (auto k : t_indices(e)) v.push_back(unit_vector(e.nvars(), k));
    return v;
}

std::shared_ptr<const StaircaseBasis> restricted_staircase(RingPtr ring, std::size_t linear,
                                                           const std::vector<Monomial>& extra,
                                                           const MonomialIdeal& K, Exec exec)
{
    std::vector<Monomial> order;
    for (auto& m : staircase_order(*ring, linear, extra))
        if (K.contains(m)) order.push_back(m);
    return std::make_shared<const StaircaseBasis>(build_staircase(ring, order, exec));
}

// x_1, x_2 monomials belonging to J: everything above theta, and the
// candidates that may lie in the support of the defining ideal.
std::vector<Monomial> x1x2_part(const Analysis& A, const MonoData& d, std::size_t nv)
{
    const int a1 = A.a(0), a2 = A.a(1);
    std::vector<Monomial> out;
    for (int a = 0; a * a1 <= d.theta + a1; ++a) {
        int rest = d.theta - a * a1;
        int b = rest < 0 ? 0 : rest / a2 + 1;
        out.push_back(x1x2(nv, a, b));
    }
    for (std::size_t k = 0; k < d.candidates.size(); ++k)
        if (d.answers[k] != Support::no) {
            Monomial m(nv, 0);
            std::copy(d.candidates[k].begin(), d.candidates[k].end(), m.begin());
            out.push_back(m);
        }
    return out;
}

QuotientSpec lemma_quotient(const Analysis& A, const MonoData& d)
{
    const std::size_t n = static_cast<std::size_t>(A.n());
    std::vector<Monomial> monos = x1x2_part(A, d, n);
    for (std::size_t i = 2; i < n; ++i) monos.push_back(unit_vector(n, i));
    return monomial_quotient(n, std::move(monos), "<x3..xn> + x1,x2 monomials above theta or in Mono(I)");
}

QuotientSpec j_prime(const Analysis& A, const MonoData& d)
{
    const ExtensionRing& e = *A.extension;
    const std::size_t nv = e.nvars();
    std::vector<Monomial> monos = x1x2_part(A, d, nv);
    for (int i = 2; i < e.n; ++i) monos.push_back(unit_vector(nv, e.x(i)));
    for (auto& m : t_singles(e)) monos.push_back(m);
    // the relations must vanish in the quotient as well
    for (auto& r : e.relations)
        for (auto& [m, c] : r.rhs.terms()) {
            bool only12 = true;
            for (std::size_t k = 2; k < nv; ++k)
                if (m[k]) only12 = false;
            if (only12 && e.ring->valuation(m) <= d.theta) monos.push_back(m);
        }
    return monomial_quotient(nv, std::move(monos), "<x3..xn, T> + x1,x2 monomials above theta, in Mono(I) or in the relations");
}

// Rewrites polynomials of S into f(x) + sum c_j T_j using the relations.
class Rewriter
{
public:
    explicit Rewriter(const ExtensionRing& e) : e_(e) {}

    struct Form {
        Polynomial x;
        std::vector<Rational> t;
    };

    Form rewrite(const Polynomial& p) const
    {
        const std::size_t nv = e_.nvars();
        const int B = e_.ring->precision();
        Form out{Polynomial(nv), std::vector<Rational>(static_cast<std::size_t>(e_.s))};
        std::map<Monomial, Rational, GrlexLess> pending(p.terms().begin(), p.terms().end());
        while (!pending.empty()) {
            auto it = std::prev(pending.end());  // largest first, so replacements land below
            Monomial m = it->first;
            Rational c = it->second;
            pending.erase(it);
            if (branchtor::is_zero(c) || e_.ring->valuation(m) > B) continue;
            std::vector<int> ts;
            for (int j = 0; j < e_.s; ++j)
                for (int k = 0; k < m[e_.T(j)]; ++k) ts.push_back(j);
            int xdeg = total_degree(m) - static_cast<int>(ts.size());
            Polynomial replacement;
            Monomial rest = m;
            if (ts.empty()) {
                out.x.add_term(m, c);
                continue;
            }
            if (ts.size() == 1 && xdeg == 0) {
                out.t[static_cast<std::size_t>(ts[0])] += c;
                continue;
            }
            if (ts.size() >= 2) {
                int k = ts[0], l = ts[1];
                rest[e_.T(k)] -= 1;
                rest[e_.T(l)] -= 1;
                replacement = tt(k, l).rhs;
            } else {
                int j = ts[0];
                std::size_t i = 0;
                while (m[i] == 0) ++i;
                rest[i] -= 1;
                rest[e_.T(j)] -= 1;
                replacement = e_.xt(static_cast<int>(i), j).rhs;
            }
            for (auto& [q, v] : replacement.terms()) {
                Monomial mm = q + rest;
                pending[mm] += c * v;
            }
        }
        return out;
    }

    const Relation& tt(int k, int l) const
    {
        if (k > l) std::swap(k, l);
        int pos = e_.n * e_.s;
        for (int q = 0; q < k; ++q) pos += e_.s - q;
        pos += l - k;
        return e_.relations.at(static_cast<std::size_t>(pos));
    }

private:
    const ExtensionRing& e_;
};

// Coordinates of x_i dT_j and T_j dT_k (j < k) left after rewriting an
// element of Omega_S as an R-differential plus those terms.
struct Obstruction {
    std::vector<Polynomial> r_part;  // over the n+s variables, T-free
    std::vector<Rational> coords;
    bool constant_t_rows = false;
};

std::size_t pair_index(int s, int j, int k)
{
    std::size_t pos = 0;
    for (int q = 0; q < j; ++q) pos += static_cast<std::size_t>(s - q - 1);
    return pos + static_cast<std::size_t>(k - j - 1);
}

Obstruction obstruction_of(const ExtensionRing& e, const Rewriter& rw, const DifferentialElement& w)
{
    const std::size_t nv = e.nvars();
    const int n = e.n, s = e.s;
    Obstruction ob;
    ob.r_part.assign(static_cast<std::size_t>(n), Polynomial(nv));
    ob.coords.assign(static_cast<std::size_t>(n * s + s * (s - 1) / 2), Rational(0));
    auto eps = [&](int i, int j) -> Rational& { return ob.coords[static_cast<std::size_t>(i * s + j)]; };
    auto anti = [&](int j, int k) -> Rational& {
        return ob.coords[static_cast<std::size_t>(n * s) + pair_index(s, j, k)];
    };
    auto add_d = [&](const Polynomial& g, const Rational& c) {
        for (int u = 0; u < n; ++u) ob.r_part[static_cast<std::size_t>(u)] += g.partial(e.x(u)) * c;
    };
    for (int i = 0; i < n; ++i) {
        auto f = rw.rewrite(w.coeffs[e.x(i)]);
        ob.r_part[static_cast<std::size_t>(i)] += f.x;
        // T_j dx_i = d g_ij - x_i dT_j
        for (int j = 0; j < s; ++j) {
            const Rational& c = f.t[static_cast<std::size_t>(j)];
            if (branchtor::is_zero(c)) continue;
            add_d(e.xt(i, j).rhs, c);
            eps(i, j) -= c;
        }
    }
    for (int j = 0; j < s; ++j) {
        const Polynomial& coeff = w.coeffs[e.T(j)];
        if (!branchtor::is_zero(coeff.constant_term())) ob.constant_t_rows = true;
        auto f = rw.rewrite(coeff);
        for (auto& [m, c] : f.x.terms()) {
            if (total_degree(m) == 0) continue;
            std::size_t i = 0;
            while (m[i] == 0) ++i;
            Monomial rest = m;
            rest[i] -= 1;
            if (total_degree(rest) == 0) {
                eps(static_cast<int>(i), j) += c;
                continue;
            }
            // m' x_i dT_j = m' d g_ij - m' T_j dx_i
            Polynomial mp = Polynomial::term(rest, c);
            const Polynomial& g = e.xt(static_cast<int>(i), j).rhs;
            for (int u = 0; u < n; ++u) ob.r_part[static_cast<std::size_t>(u)] += mp * g.partial(e.x(u));
            Monomial rt = rest;
            rt[e.T(j)] += 1;
            auto back = rw.rewrite(Polynomial::term(rt, c));
            ob.r_part[i] -= back.x;
            for (int k = 0; k < s; ++k)
                if (!branchtor::is_zero(back.t[static_cast<std::size_t>(k)]))
                    throw std::logic_error("rewrite left a bare T term");
        }
        for (int k = 0; k < s; ++k) {
            const Rational& c = f.t[static_cast<std::size_t>(k)];
            if (branchtor::is_zero(c)) continue;
            if (k == j) {
                add_d(rw.tt(j, j).rhs, c / 2);
            } else if (k < j) {
                anti(k, j) += c;
            } else {
                // T_k dT_j = d(T_j T_k) - T_j dT_k
                add_d(rw.tt(j, k).rhs, c);
                anti(j, k) -= c;
            }
        }
    }
    return ob;
}

TorsionCertificate failed(std::string criterion, std::string ring, std::string why)
{
    TorsionCertificate c;
    c.criterion = std::move(criterion);
    c.ring = std::move(ring);
    c.notes.push_back(std::move(why));
    return c;
}

std::vector<DifferentialElement> concat(std::vector<DifferentialElement> a, const std::vector<DifferentialElement>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

Analysis analyze(const Branch& b, Exec exec)
{
    Analysis A;
    A.branch = b;
    A.exec = exec;
    A.R = Ring::of_branch(b);
    auto sr = value_semigroup(A.R, exec);
    A.semigroup = sr.semigroup;
    A.staircase = sr.staircase;
    A.conductor = sr.semigroup.conductor;
    A.conductor_in_square = conductor_in_square(b, A.semigroup);
    if (A.conductor_in_square)
        A.extension = std::make_shared<const ExtensionRing>(build_extension(b, A.semigroup, *A.staircase, exec));
    return A;
}

DifferentialElement pair_torsion(RingPtr ring, const Polynomial& P, int p, const Polynomial& Q, int q)
{
    DifferentialElement w(ring);
    for (std::size_t i = 0; i < ring->nvars(); ++i)
        w.coeffs[i] = Rational(p) * P * Q.partial(i) - Rational(q) * Q * P.partial(i);
    return w;
}

std::vector<DifferentialElement> gamma_torsions(const ExtensionRing& e)
{
    std::vector<DifferentialElement> out;
    const std::size_t nv = e.nvars();
    for (int i = 0; i < e.s; ++i)
        for (int j = i + 1; j < e.s; ++j) {
            auto w = pair_torsion(e.ring, var(nv, e.T(j)), e.b[j], var(nv, e.T(i)), e.b[i]);
            w.label = "Gamma(T" + one_based(i) + ",T" + one_based(j) + ")";
            out.push_back(std::move(w));
        }
    return out;
}

std::vector<DifferentialElement> bracket_torsions(const ExtensionRing& e)
{
    std::vector<DifferentialElement> out;
    const std::size_t nv = e.nvars();
    for (int i = 0; i < e.n; ++i) {
        Transport tr = transport_T_under_monomialization(e, i);
        for (int j = 0; j < e.s; ++j) {
            auto w = pair_torsion(e.ring, tr.T_prime[static_cast<std::size_t>(j)], e.b[j], var(nv, e.x(i)),
                                  e.base.valuations[i]);
            w.label = "[x" + one_based(i) + ",T" + one_based(j) + "]";
            out.push_back(std::move(w));
        }
    }
    return out;
}

PeelReport peel(const std::vector<DifferentialElement>& family, const std::vector<QuotientSpec>& stages, Exec exec)
{
    PeelReport r;
    r.family_size = family.size();
    std::vector<std::size_t> remaining(family.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    for (auto& J : stages) {
        if (remaining.empty()) break;
        PeelStage st;
        st.quotient = J;
        OmegaOfQuotient omega(ArtinianQuotient(J), exec);
        std::vector<std::vector<Rational>> classes(remaining.size());
        const long count = static_cast<long>(remaining.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
        for (long k = 0; k < count; ++k) classes[k] = omega.class_of(family[remaining[k]]);
        std::vector<std::size_t> keep;
        Echelon ech(static_cast<int>(omega.ambient_dimension()), false);
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            if (!any_nonzero(classes[k])) {
                keep.push_back(remaining[k]);
                continue;
            }
            st.survivors.push_back(family[remaining[k]].label);
            if (ech.insert(classes[k], 0).new_pivot) ++st.rank;
        }
        st.independent = st.rank == st.survivors.size();
        r.stages.push_back(st);
        if (!st.independent) return r;
        r.eliminated += st.survivors.size();
        remaining = std::move(keep);
    }
    r.success = remaining.empty();
    return r;
}

std::vector<QuotientSpec> count_bound_stages(const ExtensionRing& e)
{
    return {x_plus_T_squared(e), square_of_maximal(e.nvars(), "m_S^2")};
}

CountBound count_bound(const ExtensionRing& e, Exec exec)
{
    CountBound cb;
    cb.n = e.n;
    cb.s = e.s;
    cb.bound = static_cast<std::size_t>(e.n * e.s + e.s * (e.s - 1) / 2);
    auto family = concat(bracket_torsions(e), gamma_torsions(e));
    cb.report = peel(family, count_bound_stages(e), exec);
    // members removed at an independent stage stay independent on their own
    cb.achieved = cb.report.eliminated;
    return cb;
}

ClassCheck check_class(const DifferentialElement& w, const QuotientSpec& J, Exec exec)
{
    ClassCheck c;
    c.quotient = J;
    OmegaOfQuotient omega(ArtinianQuotient(J), exec);
    auto cls = omega.class_of(w);
    c.nonzero = any_nonzero(cls);
    c.surviving_class = omega.describe(cls, w.ring->names());
    return c;
}

PullbackResult pullback(const Analysis& A, const std::vector<DifferentialElement>& family, const PeelReport& report,
                        const std::vector<QuotientSpec>& r_quotients)
{
    PullbackResult pb;
    const ExtensionRing& e = *A.extension;
    const std::size_t n = static_cast<std::size_t>(e.n);
    pb.family_size = family.size();
    pb.required = static_cast<std::size_t>(e.n * e.s + e.s * (e.s - 1) / 2 + 1);
    pb.rank_certified = report.success;
    pb.t_rows_nonunit = true;
    for (auto& w : family)
        for (int j = 0; j < e.s; ++j)
            if (!branchtor::is_zero(w.coeffs[e.T(j)].constant_term())) pb.t_rows_nonunit = false;
    pb.existence = pb.rank_certified && pb.t_rows_nonunit && pb.family_size >= pb.required;
    if (!pb.rank_certified)
        pb.reason = "family independence not certified";
    else if (!pb.t_rows_nonunit)
        pb.reason = "a dT coefficient has a nonzero constant term";
    else if (pb.family_size < pb.required)
        pb.reason = "family smaller than ns + C(s,2) + 1";
    else
        pb.reason = "independent family larger than the obstruction space; a combination descends to R";
    if (!pb.existence) return pb;

    pb.explicit_attempted = true;
    Rewriter rw(e);
    std::vector<Obstruction> obs(family.size());
    const long count = static_cast<long>(family.size());
#pragma omp parallel for schedule(dynamic, 1) if (A.exec == Exec::parallel)
    for (long k = 0; k < count; ++k) obs[k] = obstruction_of(e, rw, family[k]);
    const int dim = static_cast<int>(obs.front().coords.size());
    Echelon ech(dim, true);
    SparseVec kernel;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        auto out = ech.insert(obs[k].coords, static_cast<int>(k), true);
        if (!out.new_pivot) {
            kernel = out.kernel;
            break;
        }
    }
    if (kernel.empty()) {
        pb.reason += "; explicit elimination found no kernel vector";
        return pb;
    }
    pb.combination.assign(family.size(), Rational(0));
    std::vector<Polynomial> coeffs(n, Polynomial(n));
    for (auto& [k, c] : kernel) {
        pb.combination[static_cast<std::size_t>(k)] = c;
        for (std::size_t u = 0; u < n; ++u) coeffs[u] += to_R(obs[static_cast<std::size_t>(k)].r_part[u], n) * c;
    }
    DifferentialElement w(A.R, std::move(coeffs));
    w.label = "pullback";
    pb.explicit_torsion_ok = torsion_test(w);
    std::vector<QuotientSpec> qs = r_quotients;
    qs.push_back(square_of_maximal(n, "m_R^2"));
    for (auto& q : qs) {
        try {
            auto cc = check_class(w, q, A.exec);
            pb.explicit_check = cc;
            if (cc.nonzero) break;
        } catch (const InfiniteQuotientError&) {
        }
    }
    pb.explicit_element = std::move(w);
    return pb;
}

bool TorsionCertificate::verified() const
{
    if (!torsion_ok || !nonvanishing.nonzero || !element.ring) return false;
    if (independence && !independence->success) return false;
    if (pullback && !pullback->existence) return false;
    if (monomial_zero && *monomial_zero) return false;
    return true;
}

bool reverify(const TorsionCertificate& c)
{
    if (!c.element.ring || !c.verified()) return false;
    if (!torsion_test(c.element)) return false;
    return check_class(c.element, c.nonvanishing.quotient).nonzero;
}

std::optional<DifferentialElement> wronskian_element(const Analysis& A, bool in_S)
{
    const int n = A.n();
    if (n < 2 || (in_S && !A.extension)) return std::nullopt;
    const int B = A.branch.precision;
    try {
        Uniformizer u = make_uniformizer(A.branch, 0);
        const int H = u.high_precision;
        TruncatedSeries z = A.branch.generator_at(n - 2, H);
        TruncatedSeries y = A.branch.generator_at(n - 1, H);
        TruncatedSeries E = wronskian_coefficient(z, y, u, A.a(0), B);
        RingPtr ring = in_S ? A.S() : A.R;
        const StaircaseBasis& sb = in_S ? *A.extension->staircase_S : *A.staircase;
        auto g = divide_opt(E, sb);
        if (!g) return std::nullopt;
        const std::size_t nv = ring->nvars();
        DifferentialElement w(ring);
        w.coeffs[0] = *g;
        w.coeffs[static_cast<std::size_t>(n - 1)] -= var(nv, static_cast<std::size_t>(n - 2)) * Rational(A.a(0));
        w.label = "tau";
        return w;
    } catch (const PrecisionError&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

namespace {

struct ShiftedLast {
    RingPtr ring;
    Polynomial y;
};

std::optional<ShiftedLast> shifted_last(const Analysis& A)
{
    const int n = A.n();
    const int an = A.a(n - 1);
    bool in_R = an >= A.conductor;
    if (!in_R && !A.extension) return std::nullopt;
    RingPtr ring = in_R ? A.R : A.S();
    const StaircaseBasis& sb = in_R ? *A.staircase : *A.extension->staircase_S;
    Uniformizer u = make_uniformizer(A.branch, 0);
    auto y = matched_generator(*ring, sb, u, n - 1, an, 0);
    if (!y) return std::nullopt;
    return ShiftedLast{ring, *y};
}

}  // namespace

std::optional<DifferentialElement> a1_an_element(const Analysis& A)
{
    if (A.n() < 2) return std::nullopt;
    auto sh = shifted_last(A);
    if (!sh) return std::nullopt;
    auto w = pair_torsion(sh->ring, sh->y, A.a(A.n() - 1), var(sh->ring->nvars(), 0), A.a(0));
    w.label = "tau";
    return w;
}

std::optional<DifferentialElement> mN_element(const Analysis& A, int N,
                                              const std::shared_ptr<const StaircaseBasis>& preferred)
{
    if (!A.extension || A.n() < 2 || N < 2) return std::nullopt;
    const int B = A.branch.precision;
    const int a1 = A.a(0), a2 = A.a(1);
    RingPtr S = A.S();
    const std::size_t nv = S->nvars();
    try {
        Uniformizer u = make_uniformizer(A.branch, 0);
        const int H = u.high_precision;
        TruncatedSeries z = A.R->evaluate_at(Polynomial::term(x1x2(A.R->nvars(), N - 1, 0), 1), H);
        TruncatedSeries y = A.branch.generator_at(1, H);
        TruncatedSeries E = wronskian_coefficient(z, y, u, a1, B);
        Polynomial lead = Polynomial::term(x1x2(nv, N - 2, 1), a2);
        auto g = divide_preferring(E - S->evaluate(lead), preferred.get(), *A.extension->staircase_S);
        if (!g) return std::nullopt;
        DifferentialElement w(S);
        w.coeffs[0] = lead + *g;
        w.coeffs[1] = Polynomial::term(x1x2(nv, N - 1, 0), -a1);
        w.label = "tau";
        return w;
    } catch (const PrecisionError&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

std::optional<DifferentialElement> lemma_element(const Analysis& A, int N,
                                                 const std::shared_ptr<const StaircaseBasis>& preferred)
{
    if (A.n() < 2 || N < 2) return std::nullopt;
    const int B = A.branch.precision;
    const int theta = (N - 2) * A.a(0) + A.a(1);
    const std::size_t n = A.R->nvars();
    Uniformizer u = make_uniformizer(A.branch, 0);
    Polynomial m = Polynomial::term(x1x2(n, N - 2, 1), 1);
    TruncatedSeries sigma = A.R->evaluate(m) - u.power(theta, B);
    auto f = divide_preferring(sigma, preferred.get(), *A.staircase);
    if (!f) return std::nullopt;
    auto w = pair_torsion(A.R, var(n, 0), A.a(0), m - *f, theta);
    w.label = "omega";
    return w;
}

std::optional<UnitOrderWitness> unit_order_element(const Analysis& A, int preferred)
{
    const int n = A.n();
    const int c = A.conductor;
    std::vector<int> order{0, -1};
    if (preferred >= 0 && preferred < n) order.push_back(preferred);
    for (int d = 1; d < n; ++d) order.push_back(d);
    std::vector<int> seen;
    const QuotientSpec m2 = square_of_maximal(A.R->nvars(), "m_R^2");
    for (int d : order) {
        if (std::find(seen.begin(), seen.end(), d) != seen.end()) continue;
        seen.push_back(d);
        Uniformizer u;
        try {
            u = make_uniformizer(A.branch, d);
        } catch (const PrecisionError&) {
            continue;
        }
        std::vector<std::pair<int, Polynomial>> ok;
        for (int j = 0; j < n; ++j) {
            auto y = matched_generator(*A.R, *A.staircase, u, j, A.a(j), c);
            if (y) ok.emplace_back(j, *y);
        }
        for (std::size_t p = 0; p < ok.size(); ++p)
            for (std::size_t q = p + 1; q < ok.size(); ++q) {
                auto& [j, yj] = ok[p];
                auto& [k, yk] = ok[q];
                auto w = pair_torsion(A.R, yj, A.a(j), yk, A.a(k));
                w.label = "tau";
                if (!check_class(w, m2, A.exec).nonzero) continue;
                return UnitOrderWitness{d, j, k, std::move(w)};
            }
    }
    return std::nullopt;
}

TorsionCertificate tau_two_valuations(const Analysis& A)
{
    const int n = A.n();
    if (n < 2) return failed("A1_AN", "R", "needs at least two generators");
    const int a1 = A.a(0), an = A.a(n - 1), c = A.conductor;
    if (a1 + an >= c) {
        if (an >= c) {
            auto w = a1_an_element(A);
            if (!w) return failed("A1_AN", "R", "could not express x_n as a power of the uniformizer of x_1");
            TorsionCertificate cert;
            cert.criterion = "A1_AN";
            cert.ring = "R";
            cert.element = *w;
            cert.torsion_ok = torsion_test(cert.element);
            cert.nonvanishing = check_class(cert.element, square_of_maximal(A.R->nvars(), "m_R^2"), A.exec);
            return cert;
        }
        const ExtensionRing& e = *A.extension;
        auto sh = shifted_last(A);
        if (!sh) return failed("A1_AN", "S", "could not express x_n as a power of the uniformizer of x_1 in S");
        const std::size_t nv = e.nvars();
        TorsionCertificate cert;
        cert.criterion = "A1_AN";
        cert.ring = "S";
        cert.element = pair_torsion(e.ring, sh->y, an, var(nv, 0), a1);
        cert.element.label = "tau";
        cert.torsion_ok = torsion_test(cert.element);
        cert.nonvanishing = check_class(cert.element, square_of_maximal(nv, "m_S^2"), A.exec);

        std::vector<DifferentialElement> family{cert.element};
        auto brackets = bracket_torsions(e);
        for (int i = 0; i + 1 < n; ++i)
            for (int j = 0; j < e.s; ++j) family.push_back(brackets[static_cast<std::size_t>(i * e.s + j)]);
        Transport tr = transport_T_under_monomialization(e, 0);
        for (int j = 0; j < e.s; ++j) {
            auto w = pair_torsion(e.ring, tr.T_prime[static_cast<std::size_t>(j)], e.b[j], sh->y, an);
            w.label = "[x" + one_based(n - 1) + "',T" + one_based(j) + "]";
            family.push_back(std::move(w));
        }
        family = concat(std::move(family), gamma_torsions(e));

        std::vector<std::size_t> firsts;
        for (int i = 0; i + 1 < n; ++i) firsts.push_back(e.x(i));
        QuotientSpec J0 = with_square(nv, firsts, "<x1..x(n-1), xn'> + m_S^2");
        J0.polynomials.push_back(sh->y);
        QuotientSpec J1 = square_of_maximal(nv, "<xn'> + m_S^2");
        J1.polynomials.push_back(sh->y);
        QuotientSpec J2 = with_square(nv, {e.x(0)}, "<x1> + m_S^2");
        QuotientSpec J3 = square_of_maximal(nv, "m_S^2");
        auto report = peel(family, {J0, J1, J2, J3}, A.exec);
        cert.pullback = pullback(A, family, report);
        cert.independence = std::move(report);
        return cert;
    }
    if (n >= 2 && A.a(n - 2) + an >= c + a1) {
        auto w = wronskian_element(A, false);
        if (!w) return failed("AN1_AN_SHIFTED", "R", "division of the wronskian coefficient failed");
        TorsionCertificate cert;
        cert.criterion = "AN1_AN_SHIFTED";
        cert.ring = "R";
        cert.element = *w;
        cert.torsion_ok = torsion_test(cert.element);
        cert.nonvanishing = check_class(cert.element, square_of_maximal(A.R->nvars(), "m_R^2"), A.exec);
        return cert;
    }
    return failed("A1_AN", "R", "neither a_1 + a_n >= c_R nor a_(n-1) + a_n >= c_R + a_1");
}

TorsionCertificate tau_aN_sum(const Analysis& A)
{
    const int n = A.n();
    if (n < 2) return failed("AN_AN1", "S", "needs at least two generators");
    const int an = A.a(n - 1);
    if (A.a(n - 2) + an < A.conductor) return failed("AN_AN1", "S", "a_(n-1) + a_n < c_R");
    if (!A.extension || an >= A.extension->conductor_S) {
        auto cert = tau_two_valuations(A);
        cert.notes.push_back("a_n >= c_S, handled by the a_1 + a_n construction");
        return cert;
    }
    const ExtensionRing& e = *A.extension;
    const std::size_t nv = e.nvars();
    auto w = wronskian_element(A, true);
    if (!w) return failed("AN_AN1", "S", "division of the wronskian coefficient failed");
    TorsionCertificate cert;
    cert.criterion = "AN_AN1";
    cert.ring = "S";
    cert.element = *w;
    cert.torsion_ok = torsion_test(cert.element);
    QuotientSpec JT = with_square(nv, t_indices(e), "m_S^2 + <T>");
    cert.nonvanishing = check_class(cert.element, JT, A.exec);
    auto family = concat(concat(bracket_torsions(e), gamma_torsions(e)), {cert.element});
    auto report = peel(family, {JT, x_plus_T_squared(e), square_of_maximal(nv, "m_S^2")}, A.exec);
    cert.pullback = pullback(A, family, report);
    cert.independence = std::move(report);
    return cert;
}

TorsionCertificate tau_unit_order(const Analysis& A, int chosen)
{
    auto wit = unit_order_element(A, chosen);
    if (!wit) return failed("UNIT_ORDER", "R", "no uniformizer makes two generators pure powers up to c_R");
    TorsionCertificate cert;
    cert.criterion = "UNIT_ORDER";
    cert.ring = "R";
    cert.element = wit->element;
    cert.torsion_ok = torsion_test(cert.element);
    cert.nonvanishing = check_class(cert.element, square_of_maximal(A.R->nvars(), "m_R^2"), A.exec);
    cert.notes.push_back("uniformizer " + (wit->uniformizer < 0 ? std::string("t") : "of x" + one_based(wit->uniformizer)) +
                         ", generators x" + one_based(wit->j) + " and x" + one_based(wit->k));
    return cert;
}

int minimal_N(int conductor, int a1) { return (conductor + a1 - 1) / a1; }

MonoData mono_data(const Analysis& A, int N)
{
    MonoData d;
    d.N = N;
    const int a1 = A.a(0), a2 = A.a(1);
    d.theta = (N - 2) * a1 + a2;
    const std::size_t n = A.R->nvars();
    for (int a = 0; a * a1 <= d.theta; ++a)
        for (int b = 0; a * a1 + b * a2 <= d.theta; ++b)
            if (a + b >= 2) d.candidates.push_back(x1x2(n, a, b));
    SupportOracle oracle(A.R, A.conductor, d.candidates, A.exec);
    for (auto& m : d.candidates) d.answers.push_back(oracle.in_support(m));
    auto settle = [&](const Monomial& m, MembershipResult& out) {
        try {
            out = membership_from_oracle(oracle, *A.R, A.conductor, m);
        } catch (const UndecidableError& ex) {
            d.decided = false;
            if (d.undecided_reason.empty()) d.undecided_reason = ex.what();
        }
    };
    if (N >= 1) settle(x1x2(n, N - 1, 0), d.power);
    if (N >= 2) settle(x1x2(n, N - 2, 1), d.mixed);
    return d;
}

namespace {

// Shared part of the two constructions built on the monomial data.
std::optional<std::string> mono_preconditions(const MonoData& d)
{
    if (d.N < 2) return "N must be at least 2";
    if (!d.decided) return "Mono(I) membership undecided: " + d.undecided_reason;
    if (d.power.member) return "x1^(N-1) lies in Mono(I)";
    if (d.mixed.member) return "x1^(N-2) x2 lies in Mono(I)";
    return std::nullopt;
}

void attach_expected(TorsionCertificate& cert, const QuotientSpec& J, const Polynomial& target, std::size_t u,
                     Exec exec)
{
    OmegaOfQuotient omega(ArtinianQuotient(J), exec);
    DifferentialElement expected(cert.element.ring);
    expected.coeffs[u] = target;
    auto want = omega.class_of(expected);
    cert.expected_class = omega.describe(want, cert.element.ring->names());
    cert.matches_expected = omega.class_of(cert.element) == want;
}

}  // namespace

TorsionCertificate tau_mN(const Analysis& A, const MonoData& d)
{
    if (!A.extension) return failed("M_POWER_N", "S", "the conductor is not inside m^2");
    if (auto why = mono_preconditions(d)) return failed("M_POWER_N", "S", *why);
    if (d.theta >= A.conductor) return failed("M_POWER_N", "S", "theta >= c_R; the R-side construction applies");
    const ExtensionRing& e = *A.extension;
    const std::size_t nv = e.nvars();
    const int N = d.N, a1 = A.a(0), a2 = A.a(1);
    QuotientSpec Jp = j_prime(A, d);
    MonomialIdeal K = minimalize(Jp.monomials, nv);
    const Monomial mixed = x1x2(nv, N - 2, 1);
    if (K.contains(x1x2(nv, N - 1, 0)) || K.contains(mixed))
        return failed("M_POWER_N", "S", "x1^(N-1) or x1^(N-2) x2 falls inside J'");
    auto preferred = restricted_staircase(e.ring, static_cast<std::size_t>(e.n), t_singles(e), K, A.exec);
    auto w = mN_element(A, N, preferred);
    if (!w) return failed("M_POWER_N", "S", "division of the wronskian coefficient failed");

    TorsionCertificate cert;
    cert.criterion = "M_POWER_N";
    cert.ring = "S";
    cert.element = *w;
    cert.torsion_ok = torsion_test(cert.element);
    cert.nonvanishing = check_class(cert.element, Jp, A.exec);
    attach_expected(cert, Jp, Polynomial::term(mixed, Rational(a2 + a1 * (N - 1))), 0, A.exec);
    cert.monomial_zero = monomial_zero_test(K, mixed, 0);

    auto family = concat(concat(bracket_torsions(e), gamma_torsions(e)), {cert.element});
    QuotientSpec J2 = with_square(nv, {e.x(0)}, "<x1> + m_S^2");
    auto report = peel(family, {J2, Jp, square_of_maximal(nv, "m_S^2")}, A.exec);
    cert.pullback = pullback(A, family, report, {lemma_quotient(A, d)});
    cert.independence = std::move(report);
    return cert;
}

TorsionCertificate tau_lemma_mN(const Analysis& A, const MonoData& d)
{
    if (auto why = mono_preconditions(d)) return failed("LEMMA_MN", "R", *why);
    const std::size_t n = A.R->nvars();
    const int N = d.N, a1 = A.a(0), a2 = A.a(1);
    QuotientSpec J = lemma_quotient(A, d);
    MonomialIdeal K = minimalize(J.monomials, n);
    const Monomial mixed = x1x2(n, N - 2, 1);
    if (K.contains(x1x2(n, N - 1, 0)) || K.contains(mixed))
        return failed("LEMMA_MN", "R", "x1^(N-1) or x1^(N-2) x2 falls inside J");
    auto preferred = restricted_staircase(A.R, n, {}, K, A.exec);
    auto w = lemma_element(A, N, preferred);
    if (!w) return failed("LEMMA_MN", "R", "could not write x1^(N-2) x2 as a power of the uniformizer");

    TorsionCertificate cert;
    cert.criterion = "LEMMA_MN";
    cert.ring = "R";
    cert.element = *w;
    cert.torsion_ok = torsion_test(cert.element);
    cert.nonvanishing = check_class(cert.element, J, A.exec);
    attach_expected(cert, J, Polynomial::term(mixed, Rational(-(a2 + a1 * (N - 1)))), 0, A.exec);
    cert.monomial_zero = monomial_zero_test(K, mixed, 0);
    return cert;
}

}  // namespace branchtor
