/**
 * The Loday construction [n] ↦ A^{⊗X_n} of a graded-commutative algebra A
 * over a finite simplicial set X, its normalization and homology, maps
 * induced by simplicial maps, the shuffle product, and the classical
 * Hochschild complex as an independent reference.
 *
 * Level n has one tensor factor per simplex of X_n, in the order of
 * SimplicialSet::level_simplices. A basis tuple (i_0, …, i_{m-1}) has index
 * Σ i_k · D^{m-1-k} with D = dim A (big-endian mixed radix).
 */
#pragma once

#include <optional>
#include <vector>

#include "hochkit/algebra.hpp"
#include "hochkit/chains.hpp"
#include "hochkit/simplicial.hpp"

namespace hochkit {

/// Indexing of A^{⊗m} by basis tuples.
class TensorPower {
public:
    TensorPower(const GradedAlgebra& a, std::size_t factors);

    std::size_t size() const { return size_; }
    std::size_t factors() const { return factors_; }
    std::vector<std::uint32_t> digits(std::size_t index) const;
    std::size_t index(const std::vector<std::uint32_t>& digits) const;
    int degree(std::size_t index) const;
    /// Internal degree of every basis tuple, in index order.
    std::vector<int> degrees() const;

private:
    const GradedAlgebra* a_;
    std::size_t factors_;
    std::size_t size_;
};

/// Largest tensor power the engine will materialize.
inline constexpr std::size_t kMaxLevelSize = std::size_t(1) << 26;

/**
 * Image of the basis tensor ⊗_k e_{digits[k]} under the map A^{⊗m} → A^{⊗m'}
 * induced by phi : [m] → [m']. Factors landing on the same target are
 * multiplied in source order; targets hit by nothing receive the unit; the
 * Koszul sign of the reordering is applied. Requires A graded-commutative
 * unless phi is order-preserving.
 */
SparseVec pushforward(const GradedAlgebra& a, const std::vector<std::uint32_t>& digits,
                      const std::vector<std::size_t>& phi, std::size_t target_factors);

/// Pushforward of a whole vector of A^{⊗m}.
SparseVec pushforward(const GradedAlgebra& a, const TensorPower& source, const SparseVec& v,
                      const std::vector<std::size_t>& phi, std::size_t target_factors);

struct LodayComplex {
    GradedAlgebra algebra;
    SimplicialSet space;
    int level_bound = 0;
    /// Structure map T → A when computing relative to a base T.
    std::optional<AlgebraMap> base;

    /// Absolute tensor powers A^{⊗X_n}, n = 0 … level_bound.
    ChainComplex tensor;
    /// Spanning sets of the relations defining A^{⊗_T X_n} (empty without a base).
    std::vector<std::vector<SparseVec>> relations;
    /// tensor modulo relations (only with a base).
    std::optional<Quotient> relative;

    /// The Loday complex itself: relative when a base is given.
    const ChainComplex& complex() const { return relative ? relative->complex : tensor; }
};

/// Throws ValidationError for non-commutative A, a base map that fails
/// validation, or A not free over the base; std::invalid_argument for N < 1.
LodayComplex loday_complex(const GradedAlgebra& a, const SimplicialSet& x, int level_bound,
                           const std::optional<AlgebraMap>& base = std::nullopt);

/// Quotient by the degenerate subcomplex (plus the base relations, if any).
/// kept/subspaces refer to the absolute tensor levels.
Quotient normalize(const LodayComplex& l);

/// Spanning set of the degenerate part of level n: images of all (s_j)_*.
std::vector<SparseVec> degenerate_span(const GradedAlgebra& a, const SimplicialSet& x, int n);

/// loday_complex(N = s_max+1) → normalize → homology; provenance "loday".
/// Runs on the unit-adapted copy of A (and of the base map).
BettiTable hh(const GradedAlgebra& a, const SimplicialSet& x, int s_max,
              const std::optional<AlgebraMap>& base = std::nullopt);

/// Result of the freeness test of A over T.
struct FreenessReport {
    bool free = false;
    std::size_t rank = 0;
    /// T-basis of A when free.
    std::vector<SparseVec> basis;
    std::string reason;
};

/// Searches for a T-basis of A (a certificate of freeness). Inhomogeneous
/// candidates are allowed; the search is deterministic.
FreenessReport check_free(const AlgebraMap& structure);

/// Maps of absolute Loday complexes induced by f, levels 0 … level_bound.
ChainMap induced_map(const SimplicialMap& f, const GradedAlgebra& a, int level_bound);

/// The same map between normalized complexes.
ChainMap induced_normalized_map(const SimplicialMap& f, const GradedAlgebra& a, int level_bound);

/// Normalized Loday complex with homology bookkeeping for products.
class LodayHomology {
public:
    LodayHomology(const GradedAlgebra& a, const SimplicialSet& x, int level_bound);
    // levels_ points into normalized_
    LodayHomology(const LodayHomology&) = delete;
    LodayHomology& operator=(const LodayHomology&) = delete;

    const LodayComplex& loday() const { return loday_; }
    const Quotient& normalized() const { return normalized_; }
    const ChainComplex& complex() const { return normalized_.complex; }
    const HomologyLevel& level(int s) const { return levels_.at(s); }
    int s_valid() const { return normalized_.complex.s_valid; }

    /// Normalized coordinates → absolute coordinates (kept generators).
    SparseVec lift(int n, const SparseVec& v) const;
    /// Absolute coordinates → normalized coordinates.
    SparseVec project(int n, const SparseVec& v) const;

    /// The class of the unit 1 ⊗ … ⊗ 1 in H_0, as normalized chain.
    SparseVec unit_cycle() const;

private:
    LodayComplex loday_;
    Quotient normalized_;
    std::vector<HomologyLevel> levels_;
};

/**
 * Eilenberg–Zilber shuffle of a ∈ L_p and b ∈ L_q (absolute coordinates)
 * followed by the levelwise product: (-1)^{t_a q} Σ sgn(μ,ν) s_ν a · s_μ b.
 * Lands in L_{p+q}.
 */
SparseVec shuffle_chain(const GradedAlgebra& a, const SimplicialSet& x, int p, const SparseVec& u, int q,
                        const SparseVec& v);

/// Homology class (coordinates in h.level(p+q)) of z1 · z2 for normalized
/// cycles z1 ∈ N_p, z2 ∈ N_q. Throws std::invalid_argument for non-cycles
/// and TruncationError beyond s_valid.
SparseVec shuffle_product(const LodayHomology& h, int p, const SparseVec& z1, int q, const SparseVec& z2);

/// Hochschild complex A^{⊗(n+1)} with the cyclic bar differential, levels
/// 0 … level_bound; valid through level_bound - 1. Associative A suffices.
ChainComplex cyclic_bar_oracle(const GradedAlgebra& a, int level_bound);

/// homology(cyclic_bar_oracle(A, s_max+1), s_max), provenance "oracle".
BettiTable oracle_hh(const GradedAlgebra& a, int s_max);

} // namespace hochkit
