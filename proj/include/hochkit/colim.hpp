/**
 * Homology of finite posets with functor coefficients through the normalized
 * nerve (strict chains only), finite arc-cover posets of the circle, and the
 * edge homomorphism into H_0.
 *
 * Nerve conventions: level p is the sum over strict chains x_0 < … < x_p of
 * F(x_0); d_0 applies F(x_0 ≤ x_1) and d_i drops x_i for i ≥ 1.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hochkit/algebra.hpp"
#include "hochkit/chains.hpp"
#include "hochkit/glue.hpp"
#include "hochkit/simplicial.hpp"

namespace hochkit {

struct PosetObject {
    std::string name;
    /// Number of connected components; 0 marks an unlabeled object.
    int components = 0;
};

struct PosetRelation {
    std::size_t lower = 0;
    std::size_t upper = 0;
    /// Component of `upper` containing each component of `lower`.
    std::optional<std::vector<std::size_t>> components;
};

/**
 * Finite poset stored as its reflexive-transitive closure. Construction
 * throws ValidationError on a cycle (antisymmetry) or on inconsistent
 * component maps of a labeled poset.
 *
 * Component maps of a labeled poset are known on every strict pair: given
 * ones are kept, covers without one default to "all into component 0" when
 * the upper object is connected and to the identity when the counts agree,
 * and longer pairs compose along any intermediate object.
 */
class Poset {
public:
    Poset(std::vector<PosetObject> objects, const std::vector<PosetRelation>& relations);

    std::size_t size() const { return objects_.size(); }
    const PosetObject& object(std::size_t x) const { return objects_[x]; }
    std::optional<std::size_t> find(const std::string& name) const;

    bool leq(std::size_t x, std::size_t y) const { return leq_[x][y]; }
    bool less(std::size_t x, std::size_t y) const { return x != y && leq_[x][y]; }
    /// Pairs x < y with nothing strictly between, in lexicographic order.
    const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }

    bool labeled() const { return labeled_; }
    /// Throws ValidationError unless labeled and x < y.
    const std::vector<std::size_t>& component_map(std::size_t x, std::size_t y) const;

    /// Strict chains with p + 1 elements, lexicographic in object indices.
    std::vector<std::vector<std::size_t>> chains(int p) const;
    /// Length (number of steps) of the longest strict chain.
    int height() const { return height_; }

private:
    std::vector<PosetObject> objects_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::pair<std::size_t, std::size_t>> covers_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> component_maps_;
    bool labeled_ = false;
    int height_ = 0;
};

/// Graded vector space per object and a linear map per strict pair x < y.
struct PosetFunctor {
    Field field;
    /// degrees[x][k]: internal degree of basis vector k of F(x).
    std::vector<std::vector<int>> degrees;
    std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> maps;

    std::size_t dim(std::size_t x) const { return degrees[x].size(); }
    const SparseMatrix& map(std::size_t x, std::size_t y) const;
    /// Shapes, degree preservation and F(x<z) = F(y<z)F(x<y) on every strict
    /// triple. Throws ValidationError naming the offending triple.
    void validate(const Poset& p) const;
};

/// The field at every object with identity maps.
PosetFunctor constant_functor(const Poset& p, const Field& f);

/// The zero functor.
PosetFunctor zero_functor(const Poset& p, const Field& f);

/// Complete chain complex of levels 0..height(); validates F first.
ChainComplex nerve_complex(const Poset& p, const PosetFunctor& f);

/// Provenance "poset". Throws TruncationError when s_max > height().
BettiTable poset_homology(const Poset& p, const PosetFunctor& f, int s_max);

/**
 * Proper nonempty open subcomplexes of the m-gon (vertices v_i, edges e_i
 * from v_i to v_{i+1}) ordered by inclusion. Objects are named by their
 * cells ("e0", "v0+e0+e1", …) and labeled by component count; components
 * are numbered by their first cell in the order v0, e0, v1, e1, ….
 * For m = 2 these are e0, e1, e0+e1 and the two vertex stars.
 */
Poset cyclic_cech_poset(int m);

/// U ↦ A^{⊗π₀(U)}: merging components multiplies (with Koszul signs for the
/// reordering), new components receive the unit. A must be graded-commutative.
PosetFunctor arc_functor(const GradedAlgebra& a, const Poset& p);

struct EdgeMap {
    /// F(x0) → H_0(I; F) in the coordinates of HomologyLevel(nerve, 0).
    SparseMatrix map;
    /// Bijective onto H_0 (hence in every internal degree, as the map is graded).
    bool iso = false;
    /// iso and H_s(I; F) = 0 for 0 < s ≤ height().
    bool collapses = false;
};

/// Throws std::invalid_argument when x0 is out of range or, for a labeled
/// poset, not a single component.
EdgeMap edge_map(const Poset& p, const PosetFunctor& f, std::size_t x0);

/// Chain complex per object and a chain map (per level) per strict pair.
struct ChainFunctor {
    Field field;
    std::vector<ChainComplex> values;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<SparseMatrix>> maps;

    /// Chain maps (degree preserving, commuting with d) and functoriality.
    void validate(const Poset& p) const;
};

/// U ↦ B^{⊗π₀(U)} for B the normalized Loday chains of X through level top,
/// with shuffle products on merges. A must be graded-commutative.
ChainFunctor loday_functor(const GradedAlgebra& a, const Poset& p, const SimplicialSet& x, int top);

/// Column p = ⊕_{x_0<…<x_p} F(x_0); dh is the nerve differential and dv the
/// internal one. s_valid = height() + top for complete values, otherwise the
/// smallest value bound.
DoubleComplex nerve_double_complex(const Poset& p, const ChainFunctor& f);

} // namespace hochkit
