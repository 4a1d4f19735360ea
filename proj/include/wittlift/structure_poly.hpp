#pragma once

#include <map>
#include <vector>

#include "wittlift/local_ring.hpp"

namespace wittlift {

// Integer Laurent polynomial in the formal uniformizer: exponent -> coefficient.
using laurent = std::map<int, bigint>;

enum class poly_kind { sum, product, frobenius_f, negation };

// A universal structure polynomial in weighted variables a_0..a_L (and
// b_0..b_L for binary kinds), exact over Z[pi, 1/pi].  Negative pi-powers are
// legitimate here; integrality of each full coefficient is a property of the
// concrete (F, pi) it gets bound to and is verified at binding time.
struct universal_poly {
    poly_kind kind;
    int index = 0;
    long q = 0;
    int vars_a = 0, vars_b = 0;
    // monomials in graded-lex order on the concatenated exponent vector
    std::vector<std::pair<std::vector<int>, laurent>> monos;

    bool weighted_homogeneous(const bigint& degree) const;
};

struct poly_family {
    long q = 0;
    int length = 0;
    std::vector<universal_poly> sum;    // indices 0..length-1
    std::vector<universal_poly> prod;   // indices 0..length-1
    std::vector<universal_poly> frob_f; // indices 0..length-2
    std::vector<universal_poly> neg;    // indices 0..length-1
};

// Largest length for which fully expanded polynomials are generated; beyond
// it Witt operations fall back to evaluation through a torsion-free lift.
int max_expanded_length(long q);

// Exact generation by ghost-map inversion over Q(pi).  Cached per (q, length).
// Throws depth_budget_exceeded beyond max_expanded_length(q).
const poly_family& structure_polys(long q, int length);

// A structure polynomial with coefficients evaluated in a concrete O_F.
// Binding performs every pi-division exactly at padded precision and throws
// integrality_failure if a coefficient fails to land in O_F.
struct bound_poly {
    poly_kind kind;
    int index = 0;
    int vars_a = 0, vars_b = 0;
    std::vector<std::pair<ring_elt, std::vector<int>>> terms;

    // vars = a-components followed by b-components, already embedded in the
    // evaluation ring (which must contain F)
    ring_elt eval(const std::vector<ring_elt>& vars, const ring_ptr& R) const;
};

bound_poly bind_poly(const universal_poly& up, const ring_ptr& F);

struct bound_family {
    std::vector<bound_poly> sum, prod, frob_f, neg;
};

const bound_family& bound_polys(long q, int length, const ring_ptr& F);

} // namespace wittlift
