#include "hochkit/loday.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "hochkit/errors.hpp"

namespace hochkit {

// ---------------------------------------------------------------- tensor powers

TensorPower::TensorPower(const GradedAlgebra& a, std::size_t factors) : a_(&a), factors_(factors), size_(1)
{
    for (std::size_t k = 0; k < factors; ++k) {
        if (size_ > kMaxLevelSize / a.dim())
            throw std::length_error("tensor power A^{⊗" + std::to_string(factors) + "} exceeds " +
                                    std::to_string(kMaxLevelSize) + " generators");
        size_ *= a.dim();
    }
}

std::vector<std::uint32_t> TensorPower::digits(std::size_t index) const
{
    std::vector<std::uint32_t> out(factors_);
    std::size_t d = a_->dim();
    for (std::size_t k = factors_; k-- > 0;) {
        out[k] = static_cast<std::uint32_t>(index % d);
        index /= d;
    }
    return out;
}

std::size_t TensorPower::index(const std::vector<std::uint32_t>& digits) const
{
    std::size_t idx = 0;
    for (std::uint32_t v : digits)
        idx = idx * a_->dim() + v;
    return idx;
}

int TensorPower::degree(std::size_t index) const
{
    int t = 0;
    for (std::uint32_t v : digits(index))
        t += a_->degree(v);
    return t;
}

std::vector<int> TensorPower::degrees() const
{
    // degree of index i = degree of i / D plus degree of the last digit
    std::vector<int> out(size_, 0);
    std::size_t d = a_->dim();
    for (std::size_t i = 1; i < size_; ++i)
        out[i] = out[i / d] + a_->degree(i % d);
    return out;
}

SparseVec pushforward(const GradedAlgebra& a, const std::vector<std::uint32_t>& digits,
                      const std::vector<std::size_t>& phi, std::size_t target_factors)
{
    const Field& f = a.field();
    std::size_t m = digits.size();
    bool negative = false;
    for (std::size_t k = 0; k < m; ++k) {
        if (!a.odd(digits[k]))
            continue;
        for (std::size_t l = k + 1; l < m; ++l)
            if (phi[l] < phi[k] && a.odd(digits[l]))
                negative = !negative;
    }
    // Each target holds a basis element with coefficient 1 (monomial[j] >= 0),
    // nothing yet (-1), or a general vector (-2, stored in general[j]).
    constexpr long kEmpty = -1, kGeneral = -2;
    std::vector<long> monomial(target_factors, kEmpty);
    std::vector<SparseVec> general;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t j = phi[k];
        if (monomial[j] == kEmpty) {
            monomial[j] = digits[k];
            continue;
        }
        if (monomial[j] >= 0) {
            const SparseVec& p = a.product(std::size_t(monomial[j]), digits[k]);
            if (p.empty())
                return {};
            if (p.nnz() == 1 && p.leading().coeff.is_one()) {
                monomial[j] = long(p.leading().index);
                continue;
            }
            general.resize(target_factors);
            general[j] = p;
            monomial[j] = kGeneral;
            continue;
        }
        general[j] = a.multiply(general[j], SparseVec::unit(digits[k], f.one()));
        if (general[j].empty())
            return {};
    }
    std::size_t d = a.dim();
    const SparseVec& unit = a.unit();
    bool unit_monomial = unit.nnz() == 1 && unit.leading().coeff.is_one();
    std::vector<Term> acc{{0, negative ? -f.one() : f.one()}};
    for (std::size_t j = 0; j < target_factors; ++j) {
        if (monomial[j] >= 0 || (monomial[j] == kEmpty && unit_monomial)) {
            std::size_t v = monomial[j] >= 0 ? std::size_t(monomial[j]) : unit.leading().index;
            for (Term& t : acc)
                t.index = t.index * d + v;
            continue;
        }
        const SparseVec& g = monomial[j] == kEmpty ? unit : general[j];
        std::vector<Term> next;
        next.reserve(acc.size() * g.nnz());
        for (const Term& t : acc)
            for (const Term& u : g)
                next.push_back({t.index * d + u.index, t.coeff * u.coeff});
        acc = std::move(next);
    }
    return SparseVec::from_terms(std::move(acc));
}

SparseVec pushforward(const GradedAlgebra& a, const TensorPower& source, const SparseVec& v,
                      const std::vector<std::size_t>& phi, std::size_t target_factors)
{
    Accumulator acc;
    for (const Term& t : v)
        acc.add(pushforward(a, source.digits(t.index), phi, target_factors), t.coeff);
    return acc.finish();
}

// ---------------------------------------------------------------- Loday complex

namespace {

/// Index map X_n → X_{n'} induced by a function on simplices.
template <class F>
std::vector<std::size_t> level_map(const LevelIndex& from, const LevelIndex& to, F&& fn)
{
    std::vector<std::size_t> phi;
    phi.reserve(from.size());
    for (const Simplex& s : from.simplices())
        phi.push_back(to.position(fn(s)));
    return phi;
}

std::vector<SparseVec> base_relations(const AlgebraMap& base, const TensorPower& tp)
{
    const GradedAlgebra& a = base.target;
    const GradedAlgebra& t = base.source;
    const Field& f = a.field();
    std::size_t m = tp.factors();
    std::vector<SparseVec> out;
    if (m < 2)
        return out;
    std::size_t d = a.dim();
    for (std::size_t idx = 0; idx < tp.size(); ++idx) {
        std::vector<std::uint32_t> dig = tp.digits(idx);
        for (std::size_t pos = 0; pos + 1 < m; ++pos) {
            int before = 0;
            for (std::size_t k = 0; k < pos; ++k)
                before += a.degree(dig[k]);
            for (std::size_t ti = 0; ti < t.dim(); ++ti) {
                const SparseVec& img = base.images[ti];
                if (img.empty())
                    continue;
                int tdeg = t.degree(ti);
                Accumulator acc;
                for (int side = 0; side < 2; ++side) {
                    std::size_t at = pos + side;
                    int passed = before + (side ? a.degree(dig[pos]) : 0);
                    bool neg = (tdeg % 2 != 0) && (passed % 2 != 0);
                    Scalar sign = (neg != (side == 1)) ? -f.one() : f.one();
                    SparseVec prod = a.multiply(img, SparseVec::unit(dig[at], f.one()));
                    std::size_t scale = 1;
                    for (std::size_t k = at + 1; k < m; ++k)
                        scale *= d;
                    std::size_t stripped = idx - std::size_t(dig[at]) * scale;
                    for (const Term& u : prod)
                        acc.add(stripped + u.index * scale, sign * u.coeff);
                }
                SparseVec rel = acc.finish();
                if (!rel.empty())
                    out.push_back(std::move(rel));
            }
        }
    }
    return out;
}

} // namespace

std::vector<SparseVec> degenerate_span(const GradedAlgebra& a, const SimplicialSet& x, int n)
{
    std::vector<SparseVec> out;
    if (n < 1)
        return out;
    LevelIndex from(x, n - 1), to(x, n);
    TensorPower tp(a, from.size());
    for (int j = 0; j < n; ++j) {
        auto phi = level_map(from, to, [&](const Simplex& s) { return x.degeneracy(s, j); });
        for (std::size_t idx = 0; idx < tp.size(); ++idx)
            out.push_back(pushforward(a, tp.digits(idx), phi, to.size()));
    }
    return out;
}

FreenessReport check_free(const AlgebraMap& structure)
{
    const GradedAlgebra& t = structure.source;
    const GradedAlgebra& a = structure.target;
    const Field& f = a.field();
    FreenessReport rep;
    if (a.dim() % t.dim() != 0) {
        rep.reason = "dim A = " + std::to_string(a.dim()) + " is not a multiple of dim T = " + std::to_string(t.dim());
        return rep;
    }
    std::size_t r = a.dim() / t.dim();
    rep.rank = r;
    std::mt19937 rng(20240601u);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<SparseVec> cand;
        for (std::size_t k = 0; k < r; ++k) {
            std::vector<Term> terms;
            for (std::size_t i = 0; i < a.dim(); ++i)
                terms.push_back({i, f.from_int(long(rng() % 7) - 3)});
            cand.push_back(SparseVec::from_terms(std::move(terms)));
        }
        std::vector<SparseVec> span;
        for (const SparseVec& c : cand)
            for (std::size_t ti = 0; ti < t.dim(); ++ti)
                span.push_back(a.multiply(structure.images[ti], c));
        if (rank_of(f, span) == a.dim()) {
            rep.free = true;
            rep.basis = std::move(cand);
            return rep;
        }
    }
    rep.reason = "no T-basis of A found";
    return rep;
}

LodayComplex loday_complex(const GradedAlgebra& a, const SimplicialSet& x, int level_bound,
                           const std::optional<AlgebraMap>& base)
{
    if (level_bound < 1)
        throw std::invalid_argument("loday_complex: level bound must be at least 1");
    if (!a.commutative())
        throw ValidationError("loday_complex: the algebra must be graded-commutative");
    if (base) {
        base->validate();
        if (!base->source.commutative())
            throw ValidationError("loday_complex: the base algebra must be graded-commutative");
        FreenessReport fr = check_free(*base);
        if (!fr.free)
            throw ValidationError("loday_complex: A is not free over the base: " + fr.reason);
    }
    LodayComplex l;
    l.algebra = a;
    l.space = x;
    l.level_bound = level_bound;
    l.base = base;
    ChainComplex& c = l.tensor;
    c.field = a.field();
    std::vector<LevelIndex> levels;
    for (int n = 0; n <= level_bound; ++n)
        levels.emplace_back(x, n);
    for (int n = 0; n <= level_bound; ++n) {
        TensorPower tp(a, levels[n].size());
        c.internal.push_back(tp.degrees());
        SparseMatrix d(n ? c.internal[n - 1].size() : 0, tp.size());
        if (n >= 1) {
            std::vector<std::vector<std::size_t>> phis;
            for (int i = 0; i <= n; ++i)
                phis.push_back(level_map(levels[n], levels[n - 1], [&](const Simplex& s) { return x.face(s, i); }));
            std::size_t m1 = levels[n - 1].size();
            for (std::size_t idx = 0; idx < tp.size(); ++idx) {
                std::vector<std::uint32_t> dig = tp.digits(idx);
                Accumulator acc;
                for (int i = 0; i <= n; ++i)
                    acc.add(pushforward(a, dig, phis[i], m1), (i % 2) ? -c.field.one() : c.field.one());
                d.columns[idx] = acc.finish();
            }
        }
        c.d.push_back(std::move(d));
        if (base)
            l.relations.push_back(base_relations(*base, tp));
    }
    c.s_valid = level_bound - 1;
    if (base)
        l.relative = quotient_complex(c, l.relations);
    return l;
}

Quotient normalize(const LodayComplex& l)
{
    std::vector<std::vector<SparseVec>> gens(std::size_t(l.level_bound) + 1);
    for (int n = 0; n <= l.level_bound; ++n) {
        gens[n] = degenerate_span(l.algebra, l.space, n);
        if (std::size_t(n) < l.relations.size())
            gens[n].insert(gens[n].end(), l.relations[n].begin(), l.relations[n].end());
    }
    return quotient_complex(l.tensor, gens);
}

BettiTable hh(const GradedAlgebra& a, const SimplicialSet& x, int s_max, const std::optional<AlgebraMap>& base)
{
    if (s_max < 0)
        throw std::invalid_argument("hh: s_max must be nonnegative");
    // homology does not depend on the basis; a basis containing 1 keeps
    // the degenerate span sparse
    std::optional<AlgebraMap> adapted_base;
    if (base)
        adapted_base = unit_adapted(*base);
    LodayComplex l = loday_complex(unit_adapted(a).algebra, x, s_max + 1, adapted_base);
    Quotient q = normalize(l);
    return homology(q.complex, s_max, "loday");
}

// ---------------------------------------------------------------- induced maps

ChainMap induced_map(const SimplicialMap& f, const GradedAlgebra& a, int level_bound)
{
    auto src = std::make_shared<ChainComplex>(loday_complex(a, f.source(), level_bound).tensor);
    auto dst = std::make_shared<ChainComplex>(loday_complex(a, f.target(), level_bound).tensor);
    ChainMap out{src, dst, {}};
    for (int n = 0; n <= level_bound; ++n) {
        LevelIndex from(f.source(), n), to(f.target(), n);
        auto phi = f.level_map(n);
        TensorPower tp(a, from.size());
        SparseMatrix m(dst->dim(n), tp.size());
        for (std::size_t idx = 0; idx < tp.size(); ++idx)
            m.columns[idx] = pushforward(a, tp.digits(idx), phi, to.size());
        out.levels.push_back(std::move(m));
    }
    return out;
}

ChainMap induced_normalized_map(const SimplicialMap& f, const GradedAlgebra& a, int level_bound)
{
    LodayComplex ls = loday_complex(a, f.source(), level_bound);
    LodayComplex lt = loday_complex(a, f.target(), level_bound);
    Quotient qs = normalize(ls), qt = normalize(lt);
    ChainMap out{std::make_shared<ChainComplex>(qs.complex), std::make_shared<ChainComplex>(qt.complex), {}};
    for (int n = 0; n <= level_bound; ++n) {
        LevelIndex from(f.source(), n), to(f.target(), n);
        auto phi = f.level_map(n);
        TensorPower tp(a, from.size());
        SparseMatrix m(qt.complex.dim(n), qs.complex.dim(n));
        for (std::size_t k = 0; k < qs.kept[n].size(); ++k)
            m.columns[k] = qt.project(n, pushforward(a, tp.digits(qs.kept[n][k]), phi, to.size()));
        out.levels.push_back(std::move(m));
    }
    return out;
}

// ---------------------------------------------------------------- products

LodayHomology::LodayHomology(const GradedAlgebra& a, const SimplicialSet& x, int level_bound)
    : loday_(loday_complex(a, x, level_bound)), normalized_(normalize(loday_))
{
    for (int s = 0; s <= normalized_.complex.s_valid; ++s)
        levels_.emplace_back(normalized_.complex, s);
}

SparseVec LodayHomology::lift(int n, const SparseVec& v) const
{
    return normalized_.lift(n, v);
}

SparseVec LodayHomology::project(int n, const SparseVec& v) const
{
    return normalized_.project(n, v);
}

SparseVec LodayHomology::unit_cycle() const
{
    const GradedAlgebra& a = loday_.algebra;
    std::size_t m = LevelIndex(loday_.space, 0).size();
    return project(0, pushforward(a, {}, {}, m));
}

namespace {

/// (s_j)_* on absolute level n.
SparseVec degenerate(const GradedAlgebra& a, const SimplicialSet& x, int n, int j, const SparseVec& v)
{
    LevelIndex from(x, n), to(x, n + 1);
    auto phi = level_map(from, to, [&](const Simplex& s) { return x.degeneracy(s, j); });
    return pushforward(a, TensorPower(a, from.size()), v, phi, to.size());
}

} // namespace

namespace {

/// Σ sgn(μ,ν) s_ν u · s_μ v, without the Koszul factor.
SparseVec shuffle_core(const GradedAlgebra& a, const SimplicialSet& x, int p, const SparseVec& u, int q,
                       const SparseVec& v)
{
    const Field& f = a.field();
    int n = p + q;
    std::size_t m = LevelIndex(x, n).size();
    TensorPower tn(a, m);
    // fold: concatenate the two tuples and multiply position-wise
    std::vector<std::size_t> fold(2 * m);
    for (std::size_t k = 0; k < 2 * m; ++k)
        fold[k] = k % m;
    Accumulator out;
    // μ runs over the p-subsets of {0, …, n-1} in lexicographic order
    std::vector<int> mu(p);
    for (int i = 0; i < p; ++i)
        mu[i] = i;
    while (true) {
        std::vector<int> nu;
        for (int k = 0, i = 0; k < n; ++k) {
            if (i < p && mu[i] == k)
                ++i;
            else
                nu.push_back(k);
        }
        int inv = 0;
        for (int i = 0; i < p; ++i)
            inv += mu[i] - i;
        Scalar sgn = (inv % 2) ? -f.one() : f.one();
        SparseVec su = u, sv = v;
        int lu = p, lv = q;
        for (int j : nu)
            su = degenerate(a, x, lu++, j, su);
        for (int j : mu)
            sv = degenerate(a, x, lv++, j, sv);
        for (const Term& tu : su) {
            std::vector<std::uint32_t> both = tn.digits(tu.index);
            both.resize(2 * m);
            for (const Term& tv : sv) {
                std::vector<std::uint32_t> dv = tn.digits(tv.index);
                std::copy(dv.begin(), dv.end(), both.begin() + m);
                out.add(pushforward(a, both, fold, m), sgn * tu.coeff * tv.coeff);
            }
        }
        int i = p - 1;
        while (i >= 0 && mu[i] == n - p + i)
            --i;
        if (i < 0)
            break;
        ++mu[i];
        for (int k = i + 1; k < p; ++k)
            mu[k] = mu[k - 1] + 1;
    }
    return out.finish();
}

} // namespace

SparseVec shuffle_chain(const GradedAlgebra& a, const SimplicialSet& x, int p, const SparseVec& u, int q,
                        const SparseVec& v)
{
    if (q % 2 == 0)
        return shuffle_core(a, x, p, u, q, v);
    TensorPower tp(a, LevelIndex(x, p).size());
    std::vector<Term> even, odd;
    for (const Term& t : u)
        (tp.degree(t.index) % 2 ? odd : even).push_back(t);
    SparseVec out = shuffle_core(a, x, p, SparseVec::from_terms(std::move(even)), q, v);
    out.axpy(-a.field().one(), shuffle_core(a, x, p, SparseVec::from_terms(std::move(odd)), q, v));
    return out;
}

SparseVec shuffle_product(const LodayHomology& h, int p, const SparseVec& z1, int q, const SparseVec& z2)
{
    if (p + q > h.s_valid())
        throw TruncationError("shuffle_product: degree " + std::to_string(p + q) + " beyond the valid range");
    if (!h.level(p).is_cycle(z1) || !h.level(q).is_cycle(z2))
        throw std::invalid_argument("shuffle_product: inputs must be cycles");
    const LodayComplex& l = h.loday();
    SparseVec prod = shuffle_chain(l.algebra, l.space, p, h.lift(p, z1), q, h.lift(q, z2));
    return h.level(p + q).coordinates(h.project(p + q, prod));
}

// ---------------------------------------------------------------- Hochschild oracle

ChainComplex cyclic_bar_oracle(const GradedAlgebra& a, int level_bound)
{
    if (level_bound < 1)
        throw std::invalid_argument("cyclic_bar_oracle: level bound must be at least 1");
    const Field& f = a.field();
    std::size_t d = a.dim();
    ChainComplex c;
    c.field = f;
    std::vector<std::size_t> size;
    for (int n = 0; n <= level_bound; ++n) {
        std::size_t s = 1;
        for (int k = 0; k <= n; ++k) {
            if (s > kMaxLevelSize / d)
                throw std::length_error("cyclic_bar_oracle: level too large");
            s *= d;
        }
        size.push_back(s);
        std::vector<int> deg(s, 0);
        for (std::size_t i = 1; i < s; ++i)
            deg[i] = deg[i / d] + a.degree(i % d);
        c.internal.push_back(std::move(deg));
    }
    for (int n = 0; n <= level_bound; ++n) {
        SparseMatrix m(n ? size[n - 1] : 0, size[n]);
        if (n >= 1)
            for (std::size_t idx = 0; idx < size[n]; ++idx) {
                // digits a_0 … a_n, most significant first
                std::vector<std::size_t> x(std::size_t(n) + 1);
                std::size_t rest = idx;
                for (int k = n; k >= 0; --k) {
                    x[k] = rest % d;
                    rest /= d;
                }
                Accumulator acc;
                auto emit = [&](const std::vector<std::size_t>& prefix, const SparseVec& prod,
                                const std::vector<std::size_t>& suffix, const Scalar& coeff) {
                    for (const Term& t : prod) {
                        std::size_t out = 0;
                        for (std::size_t v : prefix)
                            out = out * d + v;
                        out = out * d + t.index;
                        for (std::size_t v : suffix)
                            out = out * d + v;
                        acc.add(out, coeff * t.coeff);
                    }
                };
                for (int i = 0; i < n; ++i) {
                    std::vector<std::size_t> pre(x.begin(), x.begin() + i);
                    std::vector<std::size_t> suf(x.begin() + i + 2, x.end());
                    Scalar sign = (i % 2) ? -f.one() : f.one();
                    emit(pre, a.product(x[i], x[i + 1]), suf, sign);
                }
                int others = 0;
                for (int k = 0; k < n; ++k)
                    others += a.degree(x[k]);
                bool neg = (n % 2 != 0) != ((a.degree(x[n]) % 2 != 0) && (others % 2 != 0));
                std::vector<std::size_t> suf(x.begin() + 1, x.begin() + n);
                emit({}, a.product(x[n], x[0]), suf, neg ? -f.one() : f.one());
                m.columns[idx] = acc.finish();
            }
        c.d.push_back(std::move(m));
    }
    c.s_valid = level_bound - 1;
    return c;
}

BettiTable oracle_hh(const GradedAlgebra& a, int s_max)
{
    return homology(cyclic_bar_oracle(a, s_max + 1), s_max, "oracle");
}

} // namespace hochkit
