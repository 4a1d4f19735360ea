#pragma once

#include <functional>
#include <memory>

#include "wittlift/local_ring.hpp"
#include "wittlift/structure_poly.hpp"

namespace wittlift {

struct witt_ctx;
using witt_ctx_ptr = std::shared_ptr<const witt_ctx>;

// Everything W_pi needs to know about where its components live: the working
// ring R, the coefficient ring F (bottom of R; its designated uniformizer is
// the Witt pi), and q = |k_F|.  In char-p mode R is a residue ring and pi
// acts as zero; F is retained as the lifting ring for operations that route
// through a torsion-free cover.
struct witt_ctx {
    ring_ptr R;
    ring_ptr F;
    long q = 0;
    bool char_p = false;
    ring_elt pi; // pi_F embedded in R (zero element in char-p mode)
    int max_length = 5;

    static witt_ctx_ptr make(ring_ptr R, ring_ptr F, long q, int max_length = 5);
    long e_rel() const { return char_p ? 1 : R->e_top() / F->e_top(); }
};

struct witt_vector {
    witt_ctx_ptr ctx;
    std::vector<ring_elt> comp;
    int length() const { return (int)comp.size(); }
};

witt_vector make_witt(witt_ctx_ptr ctx, std::vector<ring_elt> comps);
witt_vector zero_witt(const witt_ctx_ptr& ctx, int length);
witt_vector truncate_witt(const witt_vector& w, int length);
bool witt_equal_mod_p_pow(const witt_vector& a, const witt_vector& b, int digits);

// ghost components (a_0, a_0^q + pi a_1, ...)
std::vector<ring_elt> ghost(const witt_vector& w);

witt_vector witt_add(const witt_vector& a, const witt_vector& b);
witt_vector witt_mul(const witt_vector& a, const witt_vector& b);
witt_vector witt_neg(const witt_vector& a);
witt_vector witt_sub(const witt_vector& a, const witt_vector& b);

// Explicit routing, used by differential tests: `polys` evaluates the cached
// structure polynomials, `lifted` computes through a torsion-free lift.
enum class witt_route { automatic, polys, lifted };
witt_vector witt_add_routed(const witt_vector& a, const witt_vector& b, witt_route r);
witt_vector witt_mul_routed(const witt_vector& a, const witt_vector& b, witt_route r);

// ghost left shift; length drops by one
witt_vector frobenius(const witt_vector& w);
// additive right shift; length grows by one
witt_vector verschiebung(const witt_vector& w);
// multiplication by pi as Fr(V(w)); length preserved, no precision loss
witt_vector pi_times(const witt_vector& w);
// multiplication by pi over a residue ring: (0, a_0^q, a_1^q, ...)
witt_vector mult_by_pi_charp(const witt_vector& w);

witt_vector teichmuller(const witt_ctx_ptr& ctx, const ring_elt& a, int length);

// Opaque endomorphism witness.  `q_power_mod_pi_checked` is set by
// verify_phi_on_samples; dwork_lift additionally verifies the ghost
// congruences it actually depends on.
struct phi_witness {
    std::function<ring_elt(const ring_elt&)> eval;
    bool q_power_mod_pi_checked = false;
};

phi_witness make_phi_witness(std::function<ring_elt(const ring_elt&)> eval);
bool verify_phi_on_samples(const witt_ctx_ptr& ctx, phi_witness& phi, int samples,
                           unsigned long seed);

// Constructive Dwork lifting: returns w with ghost(w) = y; component n loses
// n pi_F-digits of precision to the divisions in the construction.
witt_vector dwork_lift(const witt_ctx_ptr& ctx, const std::vector<ring_elt>& y,
                       const phi_witness& phi);

// lambda_phi(r): the Dwork lift of (r, phi(r), phi^2(r), ...)
witt_vector lambda_phi(const witt_ctx_ptr& ctx, const ring_elt& r, const phi_witness& phi,
                       int length);

// the image of a constant c from O_F: ghost components (c, c, c, ...)
witt_vector scalar_witt(const witt_ctx_ptr& ctx, const ring_elt& c, int length);

// For y with pi | y_0, exhibits w' with pi_times(w') = frobenius(y), via
// y = pi [y_0/pi] + V(z).  Output length is one less than y's.
witt_vector frobenius_divided_by_pi(const witt_vector& y);

} // namespace wittlift
