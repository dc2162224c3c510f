/**
 * Finite-dimensional graded algebras presented by structure constants.
 */
#pragma once

#include <string>
#include <vector>

#include "hochkit/sparse.hpp"

namespace hochkit {

struct BasisElement {
    std::string name;
    int degree = 0;
};

/// Raw description; make_algebra() turns it into a validated GradedAlgebra.
struct AlgebraSpec {
    Field field;
    std::vector<BasisElement> basis;
    std::vector<Scalar> unit;                     // dense, length dim
    std::vector<std::vector<std::vector<Scalar>>> table; // table[i][j] = dense product e_i e_j
    bool commutative = false;
};

class GradedAlgebra {
public:
    GradedAlgebra() = default;

    const Field& field() const { return field_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<BasisElement>& basis() const { return basis_; }
    const std::string& name(std::size_t i) const { return basis_[i].name; }
    int degree(std::size_t i) const { return basis_[i].degree; }
    bool odd(std::size_t i) const { return basis_[i].degree % 2 != 0; }
    bool commutative() const { return commutative_; }
    const SparseVec& unit() const { return unit_; }

    /// e_i e_j
    const SparseVec& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }

    SparseVec multiply(const SparseVec& u, const SparseVec& v) const;
    /// Dense overload; throws on length mismatch.
    std::vector<Scalar> multiply(const std::vector<Scalar>& u, const std::vector<Scalar>& v) const;

    /// Internal degree of a homogeneous vector, or nullopt-like sentinel via bool.
    bool homogeneous(const SparseVec& v, int* degree = nullptr) const;
    /// True when every basis element sits in internal degree 0.
    bool concentrated_in_degree_zero() const;
    /// Number of basis elements per internal degree, sorted by degree.
    std::vector<std::pair<int, std::size_t>> degree_profile() const;

    AlgebraSpec spec() const;

    friend GradedAlgebra make_algebra(const AlgebraSpec& spec);
    friend GradedAlgebra from_structure(Field, std::vector<BasisElement>, SparseVec, std::vector<SparseVec>, bool);

private:
    Field field_;
    std::vector<BasisElement> basis_;
    SparseVec unit_;
    std::vector<SparseVec> table_;
    bool commutative_ = false;
};

/// Validates every axiom by exhaustive enumeration; throws ValidationError
/// naming the first violated axiom and the offending basis elements.
GradedAlgebra make_algebra(const AlgebraSpec& spec);

/// Same validation, from sparse data.
GradedAlgebra from_structure(Field field, std::vector<BasisElement> basis, SparseVec unit,
                             std::vector<SparseVec> table, bool commutative);

/// Graded tensor product with (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'.
/// Basis index of (i, j) is i * dim(B) + j.
GradedAlgebra tensor_algebras(const GradedAlgebra& a, const GradedAlgebra& b);

/// a ·op b = (-1)^{|a||b|} b a.
GradedAlgebra opposite(const GradedAlgebra& a);

/// Nondegeneracy of the trace form tr(L_{e_i e_j}). Requires a commutative
/// algebra concentrated in internal degree 0.
bool is_etale(const GradedAlgebra& a);

/// The trace form matrix, row-major.
std::vector<std::vector<Scalar>> trace_form(const GradedAlgebra& a);

/// Basis of the graded center {z : z u = (-1)^{|z||u|} u z}.
std::vector<SparseVec> center(const GradedAlgebra& a);

/// Algebra homomorphism given by the images of the source basis.
struct AlgebraMap {
    GradedAlgebra source;
    GradedAlgebra target;
    std::vector<SparseVec> images;

    SparseVec apply(const SparseVec& v) const;
    /// Throws ValidationError unless unit, products and degrees are preserved.
    void validate() const;
};

/// An isomorphic copy of A whose basis contains the unit, so that unit
/// insertions stay monomial. The unit replaces the basis element at the
/// leading index of the old unit; forward[i] is old e_i in the new basis.
struct UnitAdapted {
    GradedAlgebra algebra;
    std::vector<SparseVec> forward;

    SparseVec apply(const SparseVec& v) const;
};
UnitAdapted unit_adapted(const GradedAlgebra& a);

/// The same map between unit-adapted copies of source and target.
AlgebraMap unit_adapted(const AlgebraMap& f);

/// Dense helpers.
SparseVec to_sparse(const std::vector<Scalar>& dense);
std::vector<Scalar> to_dense(const Field& f, const SparseVec& v, std::size_t dim);

/// Catalogue of small algebras used by tests and the shipped corpus.
namespace algebras {
GradedAlgebra ground(Field f);                 // k
GradedAlgebra dual_numbers(Field f);           // k[x]/x^2, deg x = 0
GradedAlgebra product_of_fields(Field f, std::size_t n); // k^n
GradedAlgebra exterior(Field f, int degree);   // Λ(x), odd deg x
GradedAlgebra matrices(Field f, std::size_t n);  // M_n(k)
GradedAlgebra f4_over_f2();                    // F_2[x]/(x^2+x+1)
GradedAlgebra truncated_polynomial(Field f, std::size_t n); // k[x]/x^n
} // namespace algebras

} // namespace hochkit
