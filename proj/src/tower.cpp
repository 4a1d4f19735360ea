#include "wittlift/tower.hpp"

#include <algorithm>

namespace wittlift {

phi_iterate make_phi_iterate(ring_ptr K, ring_ptr F, std::vector<ring_elt> phi_coeffs,
                             ring_elt pi0) {
    phi_iterate it;
    it.K = std::move(K);
    it.F = std::move(F);
    it.q = (long)phi_coeffs.size() - 1;
    it.phi = std::move(phi_coeffs);
    it.pi0 = std::move(pi0);
    if (it.q < 2) throw bad_descriptor("phi must have degree q >= 2");
    {
        long p = it.F->p(), t = it.q;
        while (t > 1) {
            if (t % p != 0) throw bad_descriptor("deg(phi) must be a power of p");
            t /= p;
        }
    }
    if (it.q != it.F->residue_card())
        throw bad_descriptor("deg(phi) must equal the residue cardinality of F");
    if (!it.K->has_ancestor(it.F.get())) throw ring_mismatch("K must contain F");
    for (auto& c : it.phi)
        if (!c.ring()->same_structure(*it.F, false))
            throw ring_mismatch("phi coefficients must live in F");
    // the iterate definition: phi(0) = 0, phi = x^q mod pi, monic of degree q
    if (!congruent_mod_p_pow(it.phi[it.q], it.F->one(), it.F->precision()))
        throw not_eisenstein("phi is not monic");
    if (!it.phi[0].is_zero_rep()) throw not_eisenstein("phi(0) != 0 violates the definition");
    for (long j = 1; j < it.q; ++j) {
        const ring_elt& c = it.phi[j];
        if (!c.is_zero_rep() && !valuation(c).at_least(1))
            throw not_eisenstein("phi != x^q mod pi: coefficient " + std::to_string(j) +
                                 " is a unit");
    }
    val_t v0 = valuation(it.pi0);
    if (!v0.exactly(1))
        throw uniformizer_not_valuation_one("pi_0 must be a uniformizer of K");
    return it;
}

namespace {

// phi evaluated on an element, with coefficients embedded from F
ring_elt eval_phi(const std::vector<ring_elt>& phi, const ring_ptr& R, const ring_elt& x) {
    ring_elt acc = R->zero().with_known(x.known_precision());
    ring_elt xp = R->one();
    for (size_t j = 0; j < phi.size(); ++j) {
        if (!phi[j].is_zero_rep()) acc += R->embed(phi[j]) * xp;
        if (j + 1 < phi.size()) xp *= x;
    }
    return acc;
}

// composition g(h(x)) for polynomials with coefficients in a common ring
std::vector<ring_elt> compose(const std::vector<ring_elt>& g, const std::vector<ring_elt>& h,
                              const ring_ptr& R) {
    std::vector<ring_elt> acc = {R->zero()};
    for (int j = (int)g.size() - 1; j >= 0; --j) {
        // acc = acc * h + g[j]
        std::vector<ring_elt> next((acc.size() - 1) + (h.size() - 1) + 1, R->zero());
        for (size_t s = 0; s < acc.size(); ++s)
            for (size_t u = 0; u < h.size(); ++u) next[s + u] += acc[s] * h[u];
        next[0] += g[j];
        acc = std::move(next);
    }
    return acc;
}

} // namespace

ring_elt phi_tower::phi_eval(const ring_elt& x) const { return eval_phi(it.phi, x.ring(), x); }

phi_witness phi_tower::phi_witness_on(const ring_ptr& R) const {
    return poly_phi_witness(R, it.F, it.phi);
}

phi_witness poly_phi_witness(const ring_ptr& R, const ring_ptr& F,
                             const std::vector<ring_elt>& coeffs_in_F) {
    (void)F;
    return make_phi_witness(
        [R, coeffs_in_F](const ring_elt& x) { return eval_phi(coeffs_in_F, R, x); });
}

phi_tower build_tower(const phi_iterate& it, int depth, int max_witt_length, long dim_budget) {
    if (depth < 1) throw bad_descriptor("tower depth must be >= 1");
    {
        long dim = it.K->dim();
        for (int i = 0; i < depth; ++i) {
            dim *= it.q;
            if (dim > dim_budget)
                throw depth_budget_exceeded("tower dimension " + std::to_string(dim) +
                                            " exceeds the budget");
        }
    }
    phi_tower t;
    t.it = it;
    t.depth = depth;
    t.rings.push_back(it.K);
    t.pi_at.push_back(it.pi0);

    // composed minimal polynomials Phi_i = phi^(i) - pi_0 over K, verified
    // Eisenstein independently of the stepwise construction
    std::vector<ring_elt> phiK;
    for (auto& c : it.phi) phiK.push_back(it.K->embed(c));
    std::vector<ring_elt> comp = phiK;
    for (int i = 1; i <= depth; ++i) {
        if (i > 1) comp = compose(comp, phiK, it.K);
        std::vector<ring_elt> Phi = comp;
        Phi[0] -= it.pi0;
        if (!congruent_mod_p_pow(Phi.back(), it.K->one(), it.K->precision()))
            throw not_eisenstein("Phi_" + std::to_string(i) + " is not monic");
        for (size_t j = 0; j + 1 < Phi.size(); ++j) {
            val_t v = valuation(Phi[j]);
            if (j == 0) {
                if (!v.exactly(1))
                    throw not_eisenstein("Phi_" + std::to_string(i) +
                                         " constant term valuation != 1");
            } else if (v.exact && v.v < 1) {
                throw not_eisenstein("Phi_" + std::to_string(i) + " coefficient " +
                                     std::to_string(j) + " is a unit");
            }
        }
        t.Phi.push_back(std::move(Phi));
    }

    // stepwise realization: K(pi_i) = K(pi_{i-1})[x] / (phi(x) - pi_{i-1})
    for (int i = 1; i <= depth; ++i) {
        const ring_ptr& below = t.rings.back();
        std::vector<std::vector<bigint>> poly_low;
        for (long j = 0; j < it.q; ++j) {
            ring_elt c = below->embed(it.phi[j]);
            if (j == 0) c = c - t.pi_at.back();
            poly_low.push_back(c.coords());
        }
        std::vector<bigint> unif(below->dim() * it.q);
        unif[below->dim()] = 1; // the class of x
        ring_ptr next = local_ring::extend(below, level_kind::eisenstein, std::move(poly_low),
                                           std::move(unif));
        t.rings.push_back(next);
        t.pi_at.push_back(next->uniformizer());
    }

    // phi(pi_i) = pi_{i-1} under the canonical embedding, by construction;
    // assert it as a guard against descriptor mix-ups
    for (int i = 1; i <= depth; ++i) {
        ring_elt img = eval_phi(it.phi, t.rings[i], t.pi_at[i]);
        ring_elt want = t.rings[i]->embed(t.pi_at[i - 1]);
        if (!congruent_mod_p_pow(img, want, t.rings[i]->precision()))
            throw not_eisenstein("phi(pi_i) != pi_{i-1} at level " + std::to_string(i));
    }

    t.top_ctx = witt_ctx::make(t.rings.back(), it.F, it.q, max_witt_length);
    return t;
}

frob_window uniformizer_window(const phi_tower& t, int witt_length) {
    const ring_ptr& top = t.top();
    std::vector<witt_vector> slots;
    for (int i = 0; i <= t.depth; ++i) {
        const ring_ptr& Ri = t.rings[i];
        witt_ctx_ptr ctx_i = i == t.depth ? t.top_ctx
                                          : witt_ctx::make(Ri, t.it.F, t.it.q,
                                                           t.top_ctx->max_length);
        std::vector<ring_elt> y;
        ring_elt cur = t.pi_at[i];
        for (int j = 0; j < witt_length; ++j) {
            y.push_back(cur);
            cur = eval_phi(t.it.phi, Ri, cur);
        }
        witt_vector w = dwork_lift(ctx_i, y, t.phi_witness_on(Ri));
        if (i == t.depth) {
            slots.push_back(w);
        } else {
            std::vector<ring_elt> up;
            for (auto& c : w.comp) up.push_back(top->embed(c));
            slots.push_back(make_witt(t.top_ctx, std::move(up)));
        }
    }
    return make_window(t.top_ctx, std::move(slots));
}

norm_report norm_compat_check(const phi_tower& t) {
    norm_report rep;
    const long eF = t.it.F->e_top();
    for (int i = 1; i <= t.depth; ++i) {
        ring_elt nm = norm_down(t.pi_at[i], t.rings[i - 1].get());
        ring_elt diff = nm - t.pi_at[i - 1];
        norm_level_report lr;
        lr.level = i;
        if (diff.is_zero_rep()) {
            lr.pass = true;
            lr.residual_valuation = -1;
        } else {
            val_t v = valuation(diff);
            long need = t.rings[i - 1]->e_top() / eF; // v(pi_F) at level i-1
            lr.pass = v.at_least(need);
            lr.residual_valuation = v.v;
        }
        rep.all_pass = rep.all_pass && lr.pass;
        rep.levels.push_back(lr);
    }
    return rep;
}

alk_result alk_membership(const frob_window& w, const phi_tower& t,
                          const std::vector<alk_degree>& elem, int slack) {
    alk_result res;
    const int M = t.top()->precision();
    for (auto& e : elem) {
        if (e.tower_level < 0 || e.tower_level > t.depth)
            throw bad_descriptor("alk_membership: elementary field beyond the tower");
        const long sub_dim = t.rings[e.tower_level]->dim();
        for (int j = 0; j <= w.depth(); ++j) {
            if (e.q_exponent < j) continue; // q^j does not divide [K_m : K_1]
            for (int c = 0; c < w.witt_length(); ++c) {
                // membership in O_{K_m}: the subring is spanned by the first
                // sub_dim coordinates of the nested power basis
                const ring_elt& comp = w.x[j].comp[c];
                const int prec = std::max(1, std::min(M - slack, comp.known_precision()));
                if (prec < 1) throw precision_exhausted("alk_membership");
                const bigint pk = pow_bigint(t.top()->p(), prec);
                const auto& coords = comp.coords();
                for (long idx = sub_dim; idx < (long)coords.size(); ++idx) {
                    if (coords[idx] % pk != 0) {
                        res.member = false;
                        res.witness = alk_result::witness_t{j, e.m, c};
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

frob_window coefficient_window(const witt_vector& c, const phi_tower& t, int witt_length,
                               int depth) {
    if (!c.ctx->char_p) throw wrong_characteristic("coefficient_window expects W_pi(k) input");
    if (c.length() < witt_length) throw length_mismatch("coefficient witt vector too short");
    const ring_ptr& top = t.top();
    std::vector<witt_vector> slots;
    for (int i = 0; i <= depth; ++i) {
        // slot i is the componentwise Teichmueller lift of Fr^{-i}(c); its
        // ghost components are the values of Fr^{-i+n}(c) as required
        std::vector<ring_elt> comps;
        for (int j = 0; j < witt_length; ++j) {
            ring_elt cj = c.comp[j];
            for (int s = 0; s < i; ++s) cj = qth_root(cj, t.it.q);
            comps.push_back(teichmuller_lift(cj, top));
        }
        slots.push_back(make_witt(t.top_ctx, std::move(comps)));
    }
    return make_window(t.top_ctx, std::move(slots));
}

frob_window iota_pi(const std::vector<witt_vector>& series, const phi_tower& t,
                    int witt_length, int depth) {
    if (series.empty()) throw bad_descriptor("iota_pi: empty series");
    frob_window U = uniformizer_window(t, witt_length);
    if (depth > U.depth()) throw depth_exhausted("iota_pi: depth exceeds the tower");
    if (depth < U.depth()) {
        std::vector<witt_vector> cut(U.x.begin(), U.x.begin() + depth + 1);
        U = make_window(t.top_ctx, std::move(cut));
    }
    frob_window acc = coefficient_window(series[0], t, witt_length, depth);
    frob_window upow = U;
    for (size_t n = 1; n < series.size(); ++n) {
        if (n > 1) upow = window_mul(upow, U);
        acc = window_add(acc, window_mul(coefficient_window(series[n], t, witt_length, depth),
                                         upow));
    }
    return acc;
}

lin_result linearize(const ring_ptr& E, const std::vector<ring_elt>& fr_coeffs, int order) {
    if (fr_coeffs.empty()) throw bad_descriptor("linearize: empty series");
    const ring_elt& f1 = fr_coeffs[0];
    if (f1.is_zero_rep()) throw bad_descriptor("linearize requires f_1 != 0");
    if (order < 1) throw bad_descriptor("linearize: order must be >= 1");

    // powers of f(u) modulo u^{order+1}, exact over O_E
    std::vector<std::vector<ring_elt>> fpow; // fpow[t][j]: coeff of u^{j+1} in f^{t+1}
    {
        std::vector<ring_elt> f(order, E->zero());
        for (int j = 0; j < order && j < (int)fr_coeffs.size(); ++j) f[j] = fr_coeffs[j];
        fpow.push_back(f);
        for (int tpow = 2; tpow <= order; ++tpow) {
            std::vector<ring_elt> nx(order, E->zero());
            const auto& prev = fpow.back();
            // (f^{t-1} * f), indices track u-exponents shifted by one
            for (int a = 0; a + 1 <= order; ++a)
                for (int b = 0; b + 1 <= order; ++b)
                    if (a + b + 1 < order) nx[a + b + 1] += prev[a] * f[b];
            fpow.push_back(std::move(nx));
        }
    }

    lin_result out;
    out.order = order;
    std::vector<frac_elt> a(order + 1); // a[t] = coefficient of u^t in A
    a[1] = {E->one(), 0};
    for (int j = 2; j <= order; ++j) {
        // a_j (f_1^j - f_1) = - sum_{t<j} a_t [u^j] f^t
        frac_elt num{E->zero(), 0};
        for (int tpow = 1; tpow < j; ++tpow) {
            const ring_elt& co = fpow[tpow - 1][j - 1];
            if (co.is_zero_rep()) continue;
            ring_elt add = a[tpow].num * co;
            long d = a[tpow].denom;
            if (d > num.denom) {
                num.num = num.num * pow_elt(E->uniformizer(), bigint(d - num.denom));
                num.denom = d;
            } else if (d < num.denom) {
                add = add * pow_elt(E->uniformizer(), bigint(num.denom - d));
            }
            num.num += add;
        }
        num.num = -num.num;
        ring_elt den = pow_elt(f1, bigint(j)) - f1;
        if (den.is_zero_rep())
            throw resonance_division_by_zero("f_1^" + std::to_string(j) +
                                             " = f_1 at working precision");
        val_t vd = valuation(den);
        if (!vd.exact)
            throw resonance_division_by_zero("f_1^" + std::to_string(j) +
                                             " - f_1 is indistinguishable from zero");
        long v = vd.v;
        ring_elt den_unit = v == 0 ? den : exact_divide(den, v);
        ring_elt inv = invert_unit(den_unit);
        frac_elt aj;
        aj.num = num.num * inv;
        aj.denom = num.denom + v;
        a[j] = aj;
        if (a[j].num.known_precision() < 1)
            throw precision_exhausted("linearize coefficient a_" + std::to_string(j));
    }
    out.coeff.assign(a.begin() + 1, a.end());
    return out;
}

} // namespace wittlift
