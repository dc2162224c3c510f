#include "hochkit/sparse.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace hochkit {

SparseVec SparseVec::unit(std::size_t index, Scalar coeff)
{
    SparseVec v;
    if (!coeff.is_zero())
        v.terms_.push_back({index, std::move(coeff)});
    return v;
}

SparseVec SparseVec::from_terms(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
    SparseVec v;
    v.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!v.terms_.empty() && v.terms_.back().index == t.index) {
            v.terms_.back().coeff += t.coeff;
        } else {
            if (!v.terms_.empty() && v.terms_.back().coeff.is_zero())
                v.terms_.pop_back();
            v.terms_.push_back(std::move(t));
        }
    }
    if (!v.terms_.empty() && v.terms_.back().coeff.is_zero())
        v.terms_.pop_back();
    return v;
}

const Scalar* SparseVec::find(std::size_t index) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                               [](const Term& t, std::size_t i) { return t.index < i; });
    if (it == terms_.end() || it->index != index)
        return nullptr;
    return &it->coeff;
}

void SparseVec::axpy(const Scalar& a, const SparseVec& x)
{
    if (a.is_zero() || x.empty())
        return;
    std::vector<Term> out;
    out.reserve(terms_.size() + x.terms_.size());
    auto i = terms_.begin();
    auto j = x.terms_.begin();
    while (i != terms_.end() || j != x.terms_.end()) {
        if (j == x.terms_.end() || (i != terms_.end() && i->index < j->index)) {
            out.push_back(std::move(*i));
            ++i;
        } else if (i == terms_.end() || j->index < i->index) {
            out.push_back({j->index, a * j->coeff});
            ++j;
        } else {
            Scalar c = i->coeff + a * j->coeff;
            if (!c.is_zero())
                out.push_back({i->index, std::move(c)});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
}

void SparseVec::scale(const Scalar& a)
{
    if (a.is_zero()) {
        terms_.clear();
        return;
    }
    for (auto& t : terms_)
        t.coeff *= a;
}

SparseVec SparseVec::scaled(const Scalar& a) const
{
    SparseVec v = *this;
    v.scale(a);
    return v;
}

bool operator==(const SparseVec& a, const SparseVec& b)
{
    if (a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
        if (a.terms_[k].index != b.terms_[k].index || a.terms_[k].coeff != b.terms_[k].coeff)
            return false;
    return true;
}

void Accumulator::add(const SparseVec& v, const Scalar& c)
{
    if (c.is_zero())
        return;
    for (const auto& t : v)
        terms_.push_back({t.index, t.coeff * c});
}

void Accumulator::add(const SparseVec& v)
{
    for (const auto& t : v)
        terms_.push_back(t);
}

bool SparseMatrix::is_zero() const
{
    return std::all_of(columns.begin(), columns.end(), [](const SparseVec& c) { return c.empty(); });
}

SparseVec SparseMatrix::apply(const SparseVec& v) const
{
    Accumulator acc;
    for (const auto& t : v) {
        if (t.index >= columns.size())
            throw std::out_of_range("matrix apply: index out of range");
        acc.add(columns[t.index], t.coeff);
    }
    return acc.finish();
}

SparseMatrix compose(const SparseMatrix& lhs, const SparseMatrix& rhs)
{
    if (lhs.cols() != rhs.rows)
        throw std::invalid_argument("compose: dimension mismatch");
    SparseMatrix out(lhs.rows, rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j)
        out.columns[j] = lhs.apply(rhs.columns[j]);
    return out;
}

bool Echelon::add(SparseVec v)
{
    std::size_t id = generators_++;
    if (track_) {
        Tracked red = reduce_tracked(std::move(v));
        // gen_id = remainder + Σ c gen  =>  remainder = gen_id - Σ c gen
        SparseVec combo = red.combination.scaled(-field_.one());
        combo.axpy(field_.one(), SparseVec::unit(id, field_.one()));
        if (red.remainder.empty()) {
            relations_.push_back(std::move(combo));
            return false;
        }
        Scalar inv = red.remainder.leading().coeff.inverse();
        red.remainder.scale(inv);
        combo.scale(inv);
        std::size_t pivot = red.remainder.leading().index;
        rows_.emplace(pivot, Row{std::move(red.remainder), std::move(combo)});
        return true;
    }
    SparseVec rem = reduce(std::move(v));
    if (rem.empty())
        return false;
    rem.scale(rem.leading().coeff.inverse());
    std::size_t pivot = rem.leading().index;
    rows_.emplace(pivot, Row{std::move(rem), {}});
    return true;
}

SparseVec Echelon::reduce(SparseVec v) const
{
    std::size_t pos = 0;
    while (pos < v.nnz()) {
        const Term& t = v.terms()[pos];
        auto it = rows_.find(t.index);
        if (it == rows_.end()) {
            ++pos;
            continue;
        }
        Scalar c = -t.coeff;
        v.axpy(c, it->second.vec);
    }
    return v;
}

Echelon::Tracked Echelon::reduce_tracked(SparseVec v) const
{
    if (!track_)
        throw std::logic_error("Echelon::reduce_tracked needs tracking enabled");
    Accumulator combo;
    std::size_t pos = 0;
    while (pos < v.nnz()) {
        const Term& t = v.terms()[pos];
        auto it = rows_.find(t.index);
        if (it == rows_.end()) {
            ++pos;
            continue;
        }
        Scalar c = t.coeff;
        combo.add(it->second.combo, c);
        v.axpy(-c, it->second.vec);
    }
    return {std::move(v), combo.finish()};
}

std::vector<std::size_t> Echelon::pivots() const
{
    std::vector<std::size_t> out;
    out.reserve(rows_.size());
    for (const auto& [p, row] : rows_)
        out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

constexpr std::uint32_t kRankPrime = 2147483647u; // 2^31 - 1

std::uint32_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint32_t p)
{
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1)
            r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return std::uint32_t(r);
}

/// Residue of a scalar mod p, or nullopt when a denominator vanishes mod p.
std::optional<std::uint32_t> residue(const Scalar& c, std::uint32_t p)
{
    if (!c.field().is_rational())
        return std::uint32_t(c.to_rational().get_num().get_ui() % p);
    mpq_class q = c.to_rational();
    std::uint32_t den = std::uint32_t(mpz_fdiv_ui(q.get_den().get_mpz_t(), p));
    if (den == 0)
        return std::nullopt;
    std::uint32_t num = std::uint32_t(mpz_fdiv_ui(q.get_num().get_mpz_t(), p));
    return std::uint32_t(std::uint64_t(num) * pow_mod(den, p - 2, p) % p);
}

/// Rank over F_p of vectors given as (index, residue) lists, with early exit
/// at cap. Reduction uses a dense work row and a heap of touched indices.
std::size_t modular_rank(std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> vectors, std::uint32_t p,
                         std::size_t cap)
{
    std::size_t width = 0;
    for (const auto& v : vectors)
        for (const auto& [i, c] : v)
            width = std::max(width, i + 1);
    std::vector<std::uint32_t> work(width, 0);
    std::vector<char> queued(width, 0);
    std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::uint32_t>>> rows;
    std::vector<std::size_t> heap;
    auto push = [&](std::size_t i) {
        if (!queued[i]) {
            queued[i] = 1;
            heap.push_back(i);
            std::push_heap(heap.begin(), heap.end(), std::greater<>());
        }
    };
    for (auto& v : vectors) {
        if (rows.size() >= cap)
            break;
        for (const auto& [i, c] : v) {
            work[i] = c;
            push(i);
        }
        std::vector<std::pair<std::size_t, std::uint32_t>> rem;
        while (!heap.empty()) {
            std::pop_heap(heap.begin(), heap.end(), std::greater<>());
            std::size_t i = heap.back();
            heap.pop_back();
            queued[i] = 0;
            std::uint32_t c = work[i];
            work[i] = 0;
            if (c == 0)
                continue;
            auto it = rows.find(i);
            if (it == rows.end() || !rem.empty()) {
                rem.push_back({i, c});
                continue;
            }
            // row has leading coefficient 1: work -= c * row
            std::uint64_t neg = p - c;
            for (std::size_t k = 1; k < it->second.size(); ++k) {
                auto [j, r] = it->second[k];
                work[j] = std::uint32_t((work[j] + neg * r) % p);
                push(j);
            }
        }
        if (rem.empty())
            continue;
        std::uint64_t inv = pow_mod(rem.front().second, p - 2, p);
        for (auto& [i, c] : rem)
            c = std::uint32_t(c * inv % p);
        std::size_t pivot = rem.front().first;
        rows.emplace(pivot, std::move(rem));
    }
    return rows.size();
}

} // namespace

std::size_t rank_of(const Field& f, std::vector<SparseVec> vectors, std::size_t cap)
{
    // Pivot on the largest index: on Loday differentials this cuts fill-in
    // by more than an order of magnitude compared with the smallest.
    std::size_t width = 0;
    for (const SparseVec& v : vectors)
        if (!v.empty())
            width = std::max(width, v.back().index + 1);
    for (SparseVec& v : vectors) {
        std::vector<Term> flipped(v.terms().rbegin(), v.terms().rend());
        for (Term& t : flipped)
            t.index = width - 1 - t.index;
        v = SparseVec::from_terms(std::move(flipped));
    }
    // Modular pass: over F_p it is exact; over Q it bounds the rank from
    // below, so reaching cap proves the rank is cap.
    {
        std::uint32_t p = f.is_rational() ? kRankPrime : f.characteristic();
        bool usable = true;
        std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> residues;
        residues.reserve(vectors.size());
        for (const SparseVec& v : vectors) {
            std::vector<std::pair<std::size_t, std::uint32_t>> r;
            r.reserve(v.nnz());
            for (const Term& t : v) {
                auto c = residue(t.coeff, p);
                if (!c) {
                    usable = false;
                    break;
                }
                if (*c)
                    r.push_back({t.index, *c});
            }
            if (!usable)
                break;
            residues.push_back(std::move(r));
        }
        if (usable) {
            std::stable_sort(residues.begin(), residues.end(),
                             [](const auto& a, const auto& b) { return a.size() < b.size(); });
            std::size_t r = modular_rank(std::move(residues), p, cap);
            if (!f.is_rational() || r >= cap)
                return r;
        }
    }
    // Sparsest first keeps fill-in down.
    std::stable_sort(vectors.begin(), vectors.end(),
                     [](const SparseVec& a, const SparseVec& b) { return a.nnz() < b.nnz(); });
    Echelon e(f);
    for (auto& v : vectors) {
        if (e.rank() >= cap)
            break;
        if (!v.empty())
            e.add(std::move(v));
    }
    return e.rank();
}

std::vector<SparseVec> kernel_of(const Field& f, const std::vector<SparseVec>& columns)
{
    Echelon e(f, true);
    for (const auto& c : columns)
        e.add(c);
    return e.relations();
}

} // namespace hochkit
