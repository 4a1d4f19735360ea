#pragma once

#include "wittlift/witt.hpp"

namespace wittlift {

// A finite window (x_{q^0}, ..., x_{q^D}) of Witt vectors with
// frobenius(x_{q^{i+1}}) = x_{q^i} mod pi^compat_precision, modeling an
// element of the Frobenius inverse limit to depth D.
struct frob_window {
    witt_ctx_ptr ctx;
    std::vector<witt_vector> x; // x[i] = x_{q^i}
    long compat_precision = 0;  // measured, in pi_F-adic units

    int depth() const { return (int)x.size() - 1; }
    int witt_length() const { return x.empty() ? 0 : x[0].length(); }
};

// Validates shapes, measures the compatibility precision.
frob_window make_window(witt_ctx_ptr ctx, std::vector<witt_vector> vectors);

// A q-power compatible sequence in R/(pi), stored through representatives in
// the ambient char-0 ring, entry i the q-th power of entry i+1.
struct char_p_seq {
    ring_ptr R;
    ring_elt pi; // embedded pi_F; entries are classes mod (pi)
    long q = 0;
    std::vector<ring_elt> s;

    int depth() const { return (int)s.size() - 1; }
};

char_p_seq make_char_p_seq(ring_ptr R, ring_elt pi, long q, std::vector<ring_elt> entries);
bool char_p_entry_equal(const char_p_seq& a, int i, const ring_elt& rep);
bool char_p_seq_equal(const char_p_seq& a, const char_p_seq& b);

// Frobenius automorphism of the window: prepends Fr(x_{q^0}), drops the
// deepest entry; the shared Witt length shrinks by one.
frob_window window_frobenius(const frob_window& w);
// left shift (x_{q^1}, ..., x_{q^D}); inverse of window_frobenius where defined
frob_window window_shift_left(const frob_window& w);

// reduction mod pi: residues of the first Witt components
char_p_seq beta(const frob_window& w);

// theta as first-component projection
ring_elt theta(const frob_window& w);
// theta through the classical limit formula evaluated at the deepest slot
ring_elt theta_classical(const frob_window& w);
// pi_F-adic precision to which theta and theta_classical provably agree
long theta_shared_precision(const frob_window& w);

// Lift of a q-power compatible sequence: Frobenius-iterates lifts from deeper
// indices until the components stabilize, then assembles the multiplicative
// window.  Requires s.depth() >= depth + length + slack (slack < 0 uses the
// ring precision).
frob_window window_lift_charp(const char_p_seq& s, const witt_ctx_ptr& ctx, int length,
                              int depth, int slack = -1);

// functoriality shift: x'_{q^{j+b}} = x_{q^j}; shallow slots are filled by
// Frobenius iterates, depth and length drop by b
frob_window shift_embed(const frob_window& w, int b);

// entrywise ring operations (Fr is a ring homomorphism, so windows form a ring)
frob_window window_add(const frob_window& a, const frob_window& b);
frob_window window_mul(const frob_window& a, const frob_window& b);
frob_window window_neg(const frob_window& a);
frob_window window_pi_times(const frob_window& a);

// constructive division by pi on the kernel of beta; depth and length drop by one
frob_window window_divide_pi(const frob_window& w);

} // namespace wittlift
