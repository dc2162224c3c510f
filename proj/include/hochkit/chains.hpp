/**
 * Chain complexes with an internal grading, their homology, maps, cones,
 * tensor products, double complexes and the spectral sequence of the column
 * filtration.
 *
 * Truncation: a complex stores levels 0..top() and a bound s_valid. Homology
 * is only reported for s <= s_valid. A complex is complete when
 * s_valid == top(), meaning there are no levels above top().
 */
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hochkit/sparse.hpp"

namespace hochkit {

struct ChainComplex {
    Field field;
    /// internal[s][k]: internal degree t of generator k at level s.
    std::vector<std::vector<int>> internal;
    /// d[s] : level s → level s-1. d[0] has zero rows.
    std::vector<SparseMatrix> d;
    int s_valid = 0;

    int top() const { return static_cast<int>(internal.size()) - 1; }
    std::size_t dim(int s) const { return s < 0 || s > top() ? 0 : internal[s].size(); }
    bool complete() const { return s_valid >= top(); }

    /// d∘d = 0 and t-preservation; returns the first violation.
    std::optional<std::string> check() const;
};

/// Complex with the given level sizes and differentials; every generator in
/// internal degree 0. Matrix shapes are validated.
ChainComplex make_complex(Field field, std::vector<SparseMatrix> d, int s_valid);

struct BettiTable {
    std::string provenance;
    int s_valid = 0;
    /// (s, t) → dimension; zero entries are omitted.
    std::map<std::pair<int, int>, std::size_t> entries;

    std::size_t at(int s, int t) const;
    /// Σ_t dim H_{s,t}.
    std::size_t total(int s) const;
    /// Same nonzero entries for s <= window (provenance ignored).
    bool agrees(const BettiTable& other, int window) const;
    /// First (s, t) in the window where the tables differ.
    std::optional<std::pair<int, int>> first_mismatch(const BettiTable& other, int window) const;
    /// Entries restricted to s <= window.
    BettiTable truncated(int window) const;

    std::string to_json() const;
    /// Aligned text table, one row per s, one column per t.
    std::string to_text() const;
};

/// Betti table of the convolution Σ_{a+b=s, t1+t2=t} dims, through s_valid
/// (default: the smaller input bound; pass more when both inputs are complete).
BettiTable convolve(const BettiTable& a, const BettiTable& b, std::optional<int> s_valid = std::nullopt);

/// Homology through s_max. Throws TruncationError when s_max > C.s_valid.
BettiTable homology(const ChainComplex& c, int s_max, const std::string& provenance = "");

/// Explicit cycle representatives for H_s and coordinates of cycles in them.
class HomologyLevel {
public:
    HomologyLevel(const ChainComplex& c, int s);

    std::size_t dim() const { return basis_.size(); }
    const std::vector<SparseVec>& basis() const { return basis_; }
    bool is_cycle(const SparseVec& v) const;
    bool is_boundary(const SparseVec& v) const;
    /// Coordinates of the class of a cycle; throws std::invalid_argument for non-cycles.
    SparseVec coordinates(const SparseVec& cycle) const;

private:
    const ChainComplex* c_;
    int s_;
    std::vector<SparseVec> basis_;
    Echelon boundaries_;
    Echelon classes_; // boundaries followed by the basis, tracked
    std::size_t boundary_generators_ = 0;
    std::vector<std::size_t> basis_ids_; // generator id of each basis element in classes_
};

struct ChainMap {
    std::shared_ptr<const ChainComplex> source;
    std::shared_ptr<const ChainComplex> target;
    std::vector<SparseMatrix> levels; // levels[s] : source_s → target_s

    /// Commutes with d and preserves t, on levels both sides define.
    std::optional<std::string> check() const;
};

/// cone_n = C_{n-1} ⊕ D_n, d(c, x) = (-dc, f(c) + dx).
ChainComplex mapping_cone(const ChainMap& f);

/// Vanishing cone homology for s <= s_max: H_s(f) is an isomorphism for
/// s < s_max and onto at s_max. Throws on grading mismatch or when s_max
/// exceeds either validity bound.
bool is_quasi_iso(const ChainMap& f, int s_max);

/// ⊕_{a+b=s} C_a ⊗ D_b with d(x⊗y) = dx⊗y + (-1)^a x⊗dy. Generators of
/// level s are ordered by a, then row-major in (C_a index, D_b index).
ChainComplex tensor_complexes(const ChainComplex& c, const ChainComplex& d);

/// Quotient of C by subcomplexes S_n = span(gens[n]) (d S_n ⊆ S_{n-1} is
/// checked). Quotient basis = non-pivot coordinates, in increasing order.
struct Quotient {
    ChainComplex complex;
    /// For each level, the original index of each quotient generator.
    std::vector<std::vector<std::size_t>> kept;
    /// Echelon basis of the subspace divided out at each level.
    std::vector<Echelon> subspaces;
    /// position[n][original index] = quotient index, or SIZE_MAX for pivots.
    std::vector<std::vector<std::size_t>> position;

    /// Class of an original-level vector in quotient coordinates.
    SparseVec project(int n, const SparseVec& v) const;
    /// Quotient coordinates → original coordinates on the kept generators.
    SparseVec lift(int n, const SparseVec& v) const;
};
Quotient quotient_complex(const ChainComplex& c, const std::vector<std::vector<SparseVec>>& gens);

/**
 * Double complex on 0 <= p <= p_top, 0 <= q <= q_top. Vertical maps are
 * stored already multiplied by (-1)^p, so squares anticommute and the total
 * differential is dh + dv.
 */
struct DoubleComplex {
    Field field;
    int p_top = 0;
    int q_top = 0;
    /// internal[p][q][k]: internal degree of generator k at (p, q).
    std::vector<std::vector<std::vector<int>>> internal;
    std::vector<std::vector<SparseMatrix>> dh; // (p,q) → (p-1,q)
    std::vector<std::vector<SparseMatrix>> dv; // (p,q) → (p,q-1)
    /// Total-degree validity.
    int s_valid = 0;

    std::size_t dim(int p, int q) const;
    std::optional<std::string> check() const;
};

/// Shape-valid double complex with zero differentials.
DoubleComplex make_double(Field field, const std::vector<std::vector<std::vector<int>>>& internal, int s_valid);

/// Generators of level n are ordered by p, then by index within D_{p,n-p}.
ChainComplex total_complex(const DoubleComplex& dc);

struct SpectralSequencePage {
    int r = 0;
    /// (p, q, internal t) → dim E^r_{p,q,t}; zero entries omitted.
    std::map<std::array<int, 3>, std::size_t> dims;

    struct Differential {
        int p, q, t;
        SparseMatrix matrix; // E^r_{p,q,t} → E^r_{p-r,q+r-1,t} on the page's representatives
    };
    std::vector<Differential> differentials;

    std::size_t at(int p, int q) const;
    /// Σ_{p+q=n} dim E^r_{p,q}.
    std::size_t total(int n) const;
};

struct SseqOptions {
    int r_max = 3;
    /// Also compute d_r matrices on representatives (costly; small inputs only).
    bool explicit_differentials = false;
};

/// Pages E^0 … E^{r_max} followed by E^∞ (as a final page with r = -1), for
/// total degrees n <= s_valid only.
std::vector<SpectralSequencePage> sseq_pages(const DoubleComplex& dc, const SseqOptions& options = {});

/// Σ_{p+q=n} dim E^∞ = dim H_n(Tot) for all n <= s_valid.
bool sseq_converges(const DoubleComplex& dc, const std::vector<SpectralSequencePage>& pages);

} // namespace hochkit
