#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wittlift/bigint.hpp"
#include "wittlift/errors.hpp"

namespace wittlift {

class local_ring;
using ring_ptr = std::shared_ptr<const local_ring>;

enum class level_kind { base, unramified, eisenstein };

// Valuation in units where the top uniformizer has valuation 1.  `exact`
// distinguishes a computed value from the "indistinguishable from zero"
// sentinel, which carries the lower bound known_precision * e_top.
struct val_t {
    bool exact;
    long v; // exact valuation, or the sentinel lower bound

    bool at_least(long t) const { return exact ? v >= t : v >= t; }
    bool exactly(long t) const { return exact && v == t; }
};

class ring_elt {
public:
    ring_elt() = default;
    ring_elt(ring_ptr ring, std::vector<bigint> coords, int known);

    const ring_ptr& ring() const { return ring_; }
    const std::vector<bigint>& coords() const { return coords_; }
    int known_precision() const { return known_; }
    bool valid() const { return ring_ != nullptr; }

    ring_elt operator+(const ring_elt& o) const;
    ring_elt operator-(const ring_elt& o) const;
    ring_elt operator*(const ring_elt& o) const;
    ring_elt operator-() const;
    ring_elt& operator+=(const ring_elt& o) { return *this = *this + o; }
    ring_elt& operator-=(const ring_elt& o) { return *this = *this - o; }
    ring_elt& operator*=(const ring_elt& o) { return *this = *this * o; }

    bool is_zero_rep() const; // all stored coordinates zero

    // same value, relabelled precision; the caller certifies the bound
    ring_elt with_known(int k) const { return ring_elt(ring_, coords_, k); }

private:
    friend class local_ring;
    ring_ptr ring_;
    std::vector<bigint> coords_; // flat nested power basis, entries in [0, p^M)
    int known_ = 0;              // meaningful base-p digits
};

// An immutable level of a tower of local rings.  The base ring is Z_p at
// absolute precision p^M; every further level is a monic polynomial quotient
// of the level below, flagged unramified or Eisenstein, with a designated
// uniformizer.
class local_ring : public std::enable_shared_from_this<local_ring> {
public:
    static ring_ptr make_base(long p, int precision);

    // poly_low: coordinates of c_0..c_{d-1} in the ring below (the monic
    // leading coefficient is implicit); unif: coordinates in the new ring.
    // Coordinates are exact integers; they are reduced mod p^M internally but
    // retained exactly so the tower can be rebuilt at other precisions.
    static ring_ptr extend(const ring_ptr& below, level_kind kind,
                           std::vector<std::vector<bigint>> poly_low,
                           std::vector<bigint> unif);

    long p() const { return p_; }
    int precision() const { return M_; }
    const bigint& p_pow_M() const { return pM_; }
    level_kind kind() const { return kind_; }
    const ring_ptr& below() const { return below_; }
    int degree() const { return deg_; } // relative degree of the top level
    long dim() const { return dim_; }   // absolute degree over Z_p
    long e_top() const { return e_top_; }
    long f_top() const { return f_top_; }
    long residue_card() const { return q_res_; }
    bool is_residue_ring() const { return residue_mode_; }

    // Residue field of this ring, as an unramified-only ring at precision 1.
    ring_ptr residue_ring() const;

    ring_elt zero() const;
    ring_elt one() const;
    ring_elt from_int(const bigint& n) const;
    ring_elt from_coords(std::vector<bigint> coords, int known = -1) const;
    ring_elt uniformizer() const { return unif_; }
    const ring_elt& U_inv() const { return U_inv_; }
    const std::vector<ring_elt>& level_poly() const { return poly_; }
    const std::vector<std::vector<bigint>>& level_poly_exact() const { return poly_exact_; }
    const std::vector<bigint>& unif_exact() const { return unif_exact_; }

    // Structural clone of the whole tower at a different precision.
    ring_ptr rebuilt_at(int precision) const;

    // true if `anc` appears in this ring's parent chain (or equals it)
    bool has_ancestor(const local_ring* anc) const;

    // Constant embedding from an ancestor ring (same precision).
    ring_elt embed(const ring_elt& z) const;

    // Same stored representative carried to a structurally equal ring at a
    // different precision (lift keeps coordinates, truncate reduces them).
    ring_elt carry_to(const ring_elt& z) const;

    bool same_structure(const local_ring& o, bool ignore_precision) const;

    friend val_t valuation(const ring_elt& z);
    friend ring_elt norm_down(const ring_elt& z, const local_ring* target);
    friend ring_elt residue(const ring_elt& z);
    friend ring_elt exact_divide(const ring_elt& z, long k);
    friend ring_elt exact_divide_by(const ring_elt& z, const ring_elt& w, long n);
    friend ring_elt invert_unit(const ring_elt& z);

    // internal span arithmetic (public for the structure-poly evaluator)
    void add_span(const bigint* a, const bigint* b, bigint* out) const;
    void sub_span(const bigint* a, const bigint* b, bigint* out) const;
    void mul_span(const bigint* a, const bigint* b, bigint* out) const;
    void norm_one_level(const bigint* a, bigint* out) const; // out: below dim

private:
    local_ring() = default;
    static ring_ptr finish(std::shared_ptr<local_ring> r, std::vector<bigint> unif,
                           bool residue_mode);

    val_t valuation_span(const bigint* a, int known) const;
    void reduce_top(std::vector<bigint>& acc) const; // degree-2d scratch -> d

    ring_ptr below_;
    long p_ = 0;
    int M_ = 0;
    bigint pM_;
    level_kind kind_ = level_kind::base;
    int deg_ = 1;
    long e_top_ = 1, f_top_ = 1, dim_ = 1, q_res_ = 0;
    bool residue_mode_ = false;
    std::vector<ring_elt> poly_;                  // c_0..c_{d-1} in below, reduced
    std::vector<std::vector<bigint>> poly_exact_; // exact coordinates as given
    std::vector<bigint> unif_exact_;
    ring_elt unif_;
    ring_elt U_inv_; // inverse of unif^e_top / p, exact mod p^M
    mutable ring_ptr residue_cache_;
};

val_t valuation(const ring_elt& z);
ring_elt norm_down(const ring_elt& z, const local_ring* target);
ring_elt residue(const ring_elt& z);
ring_elt exact_divide(const ring_elt& z, long k);
// divide by w^n where w is the designated uniformizer of an ancestor level
// (or of the ring itself); n in that level's valuation normalization
ring_elt exact_divide_by(const ring_elt& z, const ring_elt& w, long n);
ring_elt invert_unit(const ring_elt& z);
ring_elt pow_elt(ring_elt base, bigint exp);

// congruence mod p^k (i.e. mod pi_top^{k*e_top})
bool congruent_mod_p_pow(const ring_elt& a, const ring_elt& b, int k);
// congruence mod pi_top^t
bool congruent_mod_pi_pow(const ring_elt& a, const ring_elt& b, long t);

// q-th root in a residue field ring (errors unless is_residue_ring)
ring_elt qth_root(const ring_elt& z, long q);
// arbitrary (positional) lift of a residue-field element
ring_elt any_lift(const ring_elt& rbar, const ring_ptr& into);
// Teichmueller lift of a residue-field element into a ring with that residue field
ring_elt teichmuller_lift(const ring_elt& rbar, const ring_ptr& into);

} // namespace wittlift
