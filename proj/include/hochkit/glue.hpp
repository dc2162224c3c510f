/**
 * Gluing constructions: the two-sided bar construction of chain-level DG
 * algebras and modules (pushouts and the suspension recursion), and the cobar
 * complex computing RHom and Hochschild cohomology.
 *
 * Sign convention: a basis chain at level q with internal degree t has
 * Koszul parity q + t. Leibniz reads d(xy) = dx·y + (-1)^{q+t} x·dy.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hochkit/algebra.hpp"
#include "hochkit/chains.hpp"
#include "hochkit/simplicial.hpp"

namespace hochkit {

/// Product of two basis chains, tabulated for every pair of levels whose
/// sum is at most top(). Products past top() are not stored.
struct DGAlgebra {
    ChainComplex complex;
    /// table[q1][q2][i * dim(q2) + j] = e_{q1,i} · e_{q2,j}, at level q1 + q2.
    std::vector<std::vector<std::vector<SparseVec>>> table;
    SparseVec unit; // at level 0
    bool commutative = false;

    int top() const { return complex.top(); }
    std::size_t dim(int q) const { return complex.dim(q); }
    int parity(int q, std::size_t i) const { return q + complex.internal[q][i]; }
    /// Zero when q1 + q2 > top() and the complex is complete; throws
    /// TruncationError when the product would leave an incomplete range.
    const SparseVec& product(int q1, std::size_t i, int q2, std::size_t j) const;
    SparseVec multiply(int q1, const SparseVec& x, int q2, const SparseVec& y) const;

    /// Unit, associativity, Leibniz and (when flagged) graded commutativity
    /// on all basis pairs and triples in range.
    std::optional<std::string> check() const;
};

/// A (graded) algebra as a DG algebra concentrated in level 0.
DGAlgebra dg_from_algebra(const GradedAlgebra& a);

/// Normalized Loday chains of X through level top with the shuffle product.
DGAlgebra dg_loday(const GradedAlgebra& a, const SimplicialSet& x, int top);

enum class Side { left, right };

/// DG module over a DG algebra B. action[qb][qm][b * dim(qm) + m] is b·m
/// (left) or m·b (right), at level qb + qm.
struct DGModule {
    ChainComplex complex;
    Side side = Side::left;
    std::vector<std::vector<std::vector<SparseVec>>> action;

    int top() const { return complex.top(); }
    std::size_t dim(int q) const { return complex.dim(q); }
    int parity(int q, std::size_t i) const { return q + complex.internal[q][i]; }
    const SparseVec& act(int qb, std::size_t b, int qm, std::size_t m) const;

    /// Unit, associativity and Leibniz against b.
    std::optional<std::string> check(const DGAlgebra& b) const;
};

/// B acting on itself by multiplication.
DGModule regular_module(const DGAlgebra& b, Side side);

/// A graded algebra A (level 0) as a B-module through an augmentation
/// ε : B → A given on B_0 (eps[i] = ε(e_{0,i}) ∈ A); positive levels act by 0.
DGModule augmentation_module(const DGAlgebra& b, const GradedAlgebra& a, const std::vector<SparseVec>& eps,
                             Side side);

/**
 * B(M, B, N) as a double complex: column p is M ⊗ B^{⊗p} ⊗ N, rows are the
 * total chain level q ≤ q_top. dh = Σ (-1)^i d_i with d_0 the right action
 * on M, d_p the left action on N and the middle faces multiplying adjacent
 * factors; dv is the tensor differential (twisted by (-1)^p in storage).
 * s_valid = min(p_max - 1, bounds of incomplete inputs). Throws
 * ValidationError when an input fails its checks.
 */
DoubleComplex two_sided_bar(const DGModule& m, const DGAlgebra& b, const DGModule& n, int p_max);

/// Generator layout of one bar column (p, q); exposed for tests.
struct BarGenerator {
    std::vector<int> levels;          // q_0 … q_{p+1}
    std::vector<std::size_t> indices; // basis index in each factor
};
std::vector<BarGenerator> bar_generators(const DGModule& m, const DGAlgebra& b, const DGModule& n, int p, int q);

/// B(A, A⊗A, A) for a graded-commutative A, through column p_max.
DoubleComplex hochschild_bar(const GradedAlgebra& a, int p_max);

/// The double complex behind hh_via_suspension.
DoubleComplex suspension_bar(const GradedAlgebra& a, int d, int s_max);

/// HH^{S^d}(A) from B(A, HH^{S^{d-1}}(A), A), where the middle term is the
/// normalized Loday model of S^{d-1} with the shuffle product (A ⊗ A for
/// d = 1). Provenance "bar-suspension".
BettiTable hh_via_suspension(const GradedAlgebra& a, int d, int s_max);

/// Graded left module over an algebra without differential.
struct LeftModule {
    Field field;
    std::vector<int> degrees;
    /// action[a * dim + m] = e_a · e_m.
    std::vector<SparseVec> action;

    std::size_t dim() const { return degrees.size(); }
    /// Throws ValidationError naming the first failing axiom.
    void validate(const GradedAlgebra& a) const;
};

LeftModule regular_left(const GradedAlgebra& a);

/// Restriction along f : A → B of a left B-module.
LeftModule restrict(const AlgebraMap& f, const LeftModule& m);

/// Bimodule with left and right actions; right[m * dim A + a] = e_m · e_a.
struct Bimodule {
    Field field;
    std::vector<int> degrees;
    std::vector<SparseVec> left;
    std::vector<SparseVec> right;

    std::size_t dim() const { return degrees.size(); }
};

Bimodule regular_bimodule(const GradedAlgebra& a);

/// M as a left module over A ⊗ A^op: (a ⊗ b)·m = (-1)^{|b||m|} a m b.
LeftModule enveloping_module(const GradedAlgebra& a, const Bimodule& m);

/**
 * C^n = Hom(A^{⊗n} ⊗ M, N), n = 0 … n_max, with
 * (δφ)(a_1 … a_{n+1} m) = (-1)^{|a_1||φ|} a_1 φ(a_2 … m)
 *                        + Σ_{i=1}^{n} (-1)^i φ(… a_i a_{i+1} …)
 *                        + (-1)^{n+1} φ(a_1 … a_n ⊗ a_{n+1} m).
 * Basis map φ_{x,y} sends basis input x to basis output y; its internal
 * degree is |y| - |x|.
 */
struct CobarComplex {
    Field field;
    int n_max = 0;
    /// internal[n][k]: internal degree of basis map k of C^n.
    std::vector<std::vector<int>> internal;
    /// delta[n] : C^n → C^{n+1}, n < n_max.
    std::vector<SparseMatrix> delta;

    std::size_t dim(int n) const { return n < 0 || n > n_max ? 0 : internal[n].size(); }
    std::optional<std::string> check() const;
};

CobarComplex cobar_complex(const LeftModule& m, const GradedAlgebra& a, const LeftModule& n, int n_max);

/// Cohomology H^n, n ≤ n_max - 1, as a table indexed by (n, internal degree).
BettiTable cohomology(const CobarComplex& c, const std::string& provenance = "cobar");

/// cohomology(cobar_complex(M, A, N, n_max)).
BettiTable cobar(const LeftModule& m, const GradedAlgebra& a, const LeftModule& n, int n_max);

/// cobar(A, A ⊗ A^op, M); provenance "hochschild-cohomology".
BettiTable hochschild_cohomology(const GradedAlgebra& a, const Bimodule& m, int n_max);

} // namespace hochkit
