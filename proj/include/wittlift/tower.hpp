#pragma once

#include <optional>

#include "wittlift/window.hpp"

namespace wittlift {

// phi-iterate data: a monic degree-q polynomial phi over O_F with phi(0) = 0
// and phi = x^q mod pi, plus a chosen uniformizer pi_0 of K.
struct phi_iterate {
    ring_ptr K;
    ring_ptr F;
    long q = 0;
    std::vector<ring_elt> phi; // c_0..c_q in F, c_0 = 0, c_q = 1
    ring_elt pi0;              // in K
};

phi_iterate make_phi_iterate(ring_ptr K, ring_ptr F, std::vector<ring_elt> phi_coeffs,
                             ring_elt pi0);

// K(pi_1) c K(pi_2) c ... realized as a chain of Eisenstein extensions with
// step polynomial phi(x) - pi_{i-1}; Phi_i = phi^(i) - pi_0 is composed and
// verified Eisenstein over K independently.
struct phi_tower {
    phi_iterate it;
    int depth = 0;
    std::vector<ring_ptr> rings;                // rings[i] = K(pi_i), rings[0] = K
    std::vector<ring_elt> pi_at;                // pi_i as an element of rings[i]
    std::vector<std::vector<ring_elt>> Phi;     // composed minimal polys over K
    witt_ctx_ptr top_ctx;

    const ring_ptr& top() const { return rings.back(); }
    // pi_i embedded in the deepest ring
    ring_elt pi_in_top(int i) const { return top()->embed(pi_at[i]); }
    // evaluate phi on an element of any tower ring
    ring_elt phi_eval(const ring_elt& x) const;
    phi_witness phi_witness_on(const ring_ptr& R) const;
};

phi_tower build_tower(const phi_iterate& it, int depth, int max_witt_length = 5,
                      long dim_budget = 512);

// canonical uniformizer window: slot i is the Dwork lift with ghost
// components (pi_i, pi_{i-1}, ..., pi_0, phi(pi_0), ...) in K(pi_i)
frob_window uniformizer_window(const phi_tower& t, int witt_length);

struct norm_level_report {
    int level;                 // i, comparing Nm(pi_i) against pi_{i-1}
    bool pass;
    long residual_valuation;   // of Nm(pi_i) - pi_{i-1}, in pi_F units (-1 if exact 0)
};

struct norm_report {
    bool all_pass = true;
    std::vector<norm_level_report> levels;
};

// Nm_{K(pi_i)/K(pi_{i-1})}(pi_i) = pi_{i-1} mod pi, all levels
norm_report norm_compat_check(const phi_tower& t);

// one elementary field, identified with a tower level
struct alk_degree {
    int m;           // index of K_m
    long q_exponent; // [K_m : K_1] = q^q_exponent
    int tower_level; // K_m identified with K(pi_{tower_level})
};

struct alk_result {
    bool member = true;
    // first failing (j, m, component) if not
    struct witness_t {
        int j;
        int m;
        int component;
    };
    std::optional<witness_t> witness;
};

// A+_{L/K} membership: whenever q^j | [K_m:K_1], every Witt component of
// x_{q^j} must lie in O_{K_m}; tested at precision M - slack.
alk_result alk_membership(const frob_window& w, const phi_tower& t,
                          const std::vector<alk_degree>& elem, int slack = 2);

// substitute the uniformizer window for u in a truncated power series over
// W_pi(k); coefficients enter through the canonical W_pi(k) -> window map
frob_window iota_pi(const std::vector<witt_vector>& series, const phi_tower& t,
                    int witt_length, int depth);

// the canonical window of a single W_pi(k) coefficient
frob_window coefficient_window(const witt_vector& c, const phi_tower& t, int witt_length,
                               int depth);

// element of Frac(O_E): num / pi^denom
struct frac_elt {
    ring_elt num;
    long denom = 0;
};

struct lin_result {
    int order = 0;
    std::vector<frac_elt> coeff; // coeff[j] = a_{j+1}, j >= 1; a_1 = 1 implicit
};

// solve A(f(u)) = f_1 A(u) for A = u + a_2 u^2 + ... to the given order;
// fr_coeffs[j] is the coefficient of u^{j+1} in f, fr_coeffs[0] = f_1 != 0
lin_result linearize(const ring_ptr& E, const std::vector<ring_elt>& fr_coeffs, int order);

// helper shared with tests: a polynomial phi-witness with coefficients from F
phi_witness poly_phi_witness(const ring_ptr& R, const ring_ptr& F,
                             const std::vector<ring_elt>& coeffs_in_F);

} // namespace wittlift
