/**
 * Sparse exact linear algebra: vectors, column matrices, and an incremental
 * row-echelon basis that answers rank, membership, quotient and kernel queries.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hochkit/scalar.hpp"

namespace hochkit {

struct Term {
    std::size_t index;
    Scalar coeff;
};

/// Sorted by index, no explicit zeros.
class SparseVec {
public:
    SparseVec() = default;

    static SparseVec unit(std::size_t index, Scalar coeff);
    /// Sorts, merges duplicate indices and drops zeros.
    static SparseVec from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    bool empty() const { return terms_.empty(); }
    std::size_t nnz() const { return terms_.size(); }
    const Term& leading() const { return terms_.front(); }
    const Term& back() const { return terms_.back(); }

    /// Coefficient at index, or nullptr when absent.
    const Scalar* find(std::size_t index) const;

    /// this += a * x
    void axpy(const Scalar& a, const SparseVec& x);
    void scale(const Scalar& a);
    SparseVec scaled(const Scalar& a) const;

    friend bool operator==(const SparseVec& a, const SparseVec& b);
    friend bool operator!=(const SparseVec& a, const SparseVec& b) { return !(a == b); }

private:
    std::vector<Term> terms_;
};

/// Collects unsorted terms; finish() merges them into a SparseVec.
class Accumulator {
public:
    void add(std::size_t index, const Scalar& c)
    {
        if (!c.is_zero())
            terms_.push_back({index, c});
    }
    void add(const SparseVec& v, const Scalar& c);
    void add(const SparseVec& v);
    SparseVec finish() { return SparseVec::from_terms(std::move(terms_)); }

private:
    std::vector<Term> terms_;
};

struct SparseMatrix {
    std::size_t rows = 0;
    std::vector<SparseVec> columns;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), columns(c) {}

    std::size_t cols() const { return columns.size(); }
    bool is_zero() const;
    SparseVec apply(const SparseVec& v) const;
};

/// this ∘ rhs
SparseMatrix compose(const SparseMatrix& lhs, const SparseMatrix& rhs);

/**
 * Row-echelon basis of a subspace, built one generator at a time.
 *
 * Each stored row is keyed by its leading (smallest) index and scaled so
 * that coefficient is 1. reduce() clears every pivot coordinate, so the
 * remainder is the canonical representative of v modulo the span; the
 * non-pivot coordinates are therefore quotient coordinates.
 *
 * With tracking enabled each row also remembers how it is written in terms
 * of the generators passed to add(), which yields kernels and expressions
 * of vectors in a chosen generating set.
 */
class Echelon {
public:
    explicit Echelon(Field field, bool track = false) : field_(field), track_(track) {}

    /// Returns true when v enlarged the span.
    bool add(SparseVec v);

    SparseVec reduce(SparseVec v) const;

    struct Tracked {
        SparseVec remainder;
        SparseVec combination; // over generator ids: v = remainder + Σ c_g gen_g
    };
    Tracked reduce_tracked(SparseVec v) const;

    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    std::size_t rank() const { return rows_.size(); }
    std::size_t generator_count() const { return generators_; }
    bool is_pivot(std::size_t index) const { return rows_.count(index) != 0; }
    /// Pivot indices in increasing order.
    std::vector<std::size_t> pivots() const;

    /// Dependencies found among the added generators (tracking only): each is
    /// a combination over generator ids summing to zero.
    const std::vector<SparseVec>& relations() const { return relations_; }

    /// The stored row whose leading index is `pivot`.
    const SparseVec& row(std::size_t pivot) const { return rows_.at(pivot).vec; }

    const Field& field() const { return field_; }

private:
    struct Row {
        SparseVec vec;
        SparseVec combo;
    };

    Field field_;
    bool track_;
    std::size_t generators_ = 0;
    std::unordered_map<std::size_t, Row> rows_;
    std::vector<SparseVec> relations_;
};

/// Rank of the span of the given vectors. Stops once the rank reaches cap,
/// which must be an upper bound known in advance.
std::size_t rank_of(const Field& f, std::vector<SparseVec> vectors, std::size_t cap = SIZE_MAX);

/// Basis of {c : Σ c_j columns[j] = 0}, as vectors over column ids.
std::vector<SparseVec> kernel_of(const Field& f, const std::vector<SparseVec>& columns);

} // namespace hochkit
