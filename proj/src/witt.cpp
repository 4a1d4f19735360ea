#include "wittlift/witt.hpp"

#include <random>

namespace wittlift {

namespace {

long pow_long(long b, int e) {
    long r = 1;
    while (e--) r *= b;
    return r;
}

void require_same_ctx(const witt_vector& a, const witt_vector& b) {
    if (a.ctx.get() != b.ctx.get() &&
        !(a.ctx->q == b.ctx->q && a.ctx->R->same_structure(*b.ctx->R, false)))
        throw ring_mismatch("witt vectors over different contexts");
    if (a.length() != b.length())
        throw length_mismatch("witt lengths " + std::to_string(a.length()) + " vs " +
                              std::to_string(b.length()));
}

witt_vector make_unchecked(witt_ctx_ptr ctx, std::vector<ring_elt> comps) {
    witt_vector w;
    w.ctx = std::move(ctx);
    w.comp = std::move(comps);
    return w;
}

// ghost components of a span of ring elements, in the given ring with the
// given embedded pi
std::vector<ring_elt> ghost_in(const std::vector<ring_elt>& comp, const ring_elt& pi, long q) {
    const ring_ptr R = comp[0].ring();
    std::vector<ring_elt> g;
    for (int n = 0; n < (int)comp.size(); ++n) {
        ring_elt acc = R->zero();
        ring_elt pij = R->one();
        for (int j = 0; j <= n; ++j) {
            acc += pij * pow_elt(comp[j], pow_bigint(q, n - j));
            if (j < n) pij *= pi;
        }
        g.push_back(acc);
    }
    return g;
}

// invert the ghost map over a padded torsion-free ring; divisions are by
// powers of the F-level uniformizer and must be exact
std::vector<ring_elt> ghost_invert_in(const std::vector<ring_elt>& g, const ring_ptr& Fpad,
                                      const ring_elt& pi, long q) {
    const ring_ptr R = g[0].ring();
    std::vector<ring_elt> x;
    for (int n = 0; n < (int)g.size(); ++n) {
        ring_elt num = g[n];
        ring_elt pij = R->one();
        for (int j = 0; j < n; ++j) {
            num -= pij * pow_elt(x[j], pow_bigint(q, n - j));
            pij *= pi;
        }
        x.push_back(n == 0 ? num : exact_divide_by(num, Fpad->uniformizer(), n));
    }
    return x;
}

struct padded_env {
    ring_ptr Rpad, Fpad;
    ring_elt pi;
    bool from_char_p;
};

padded_env enter_padded(const witt_ctx& ctx, int out_len) {
    padded_env env;
    env.from_char_p = ctx.char_p;
    const int pad = 2 * out_len + 2;
    if (ctx.char_p) {
        env.Fpad = ctx.F->rebuilt_at(pad + 2);
        env.Rpad = env.Fpad;
    } else {
        env.Rpad = ctx.R->rebuilt_at(ctx.R->precision() + pad);
        env.Fpad = ctx.F->rebuilt_at(ctx.F->precision() + pad);
    }
    env.pi = env.Rpad->embed(env.Fpad->uniformizer());
    return env;
}

std::vector<ring_elt> lift_comps(const padded_env& env, const std::vector<ring_elt>& comp) {
    std::vector<ring_elt> out;
    out.reserve(comp.size());
    for (auto& c : comp)
        out.push_back(env.from_char_p ? any_lift(c, env.Rpad) : env.Rpad->carry_to(c));
    return out;
}

std::vector<ring_elt> settle_comps(const witt_ctx_ptr& ctx, const padded_env& env,
                                   const std::vector<ring_elt>& comp, int known) {
    std::vector<ring_elt> out;
    out.reserve(comp.size());
    for (auto& c : comp) {
        if (env.from_char_p) {
            out.push_back(residue(c));
        } else {
            // the components are integral polynomials of the inputs, so they
            // are determined mod p^known by the inputs mod p^known
            out.push_back(ctx->R->carry_to(c).with_known(known));
        }
    }
    return out;
}

int min_known(const witt_vector& a) {
    int k = a.comp[0].known_precision();
    for (auto& c : a.comp) k = std::min(k, c.known_precision());
    return k;
}

enum class binop { add, mul };

witt_vector padded_binary(const witt_vector& a, const witt_vector& b, binop op) {
    const witt_ctx& ctx = *a.ctx;
    padded_env env = enter_padded(ctx, a.length());
    auto la = lift_comps(env, a.comp);
    auto lb = lift_comps(env, b.comp);
    auto ga = ghost_in(la, env.pi, ctx.q);
    auto gb = ghost_in(lb, env.pi, ctx.q);
    std::vector<ring_elt> g;
    for (int n = 0; n < (int)ga.size(); ++n)
        g.push_back(op == binop::add ? ga[n] + gb[n] : ga[n] * gb[n]);
    auto x = ghost_invert_in(g, env.Fpad, env.pi, ctx.q);
    int known = ctx.char_p ? 1 : std::min(min_known(a), min_known(b));
    return make_unchecked(a.ctx, settle_comps(a.ctx, env, x, known));
}

witt_vector padded_unary(const witt_vector& a, bool negate, bool shift_ghost) {
    const witt_ctx& ctx = *a.ctx;
    const int out_len = shift_ghost ? a.length() - 1 : a.length();
    padded_env env = enter_padded(ctx, a.length());
    auto la = lift_comps(env, a.comp);
    auto ga = ghost_in(la, env.pi, ctx.q);
    std::vector<ring_elt> g;
    for (int n = 0; n < out_len; ++n) {
        ring_elt v = ga[shift_ghost ? n + 1 : n];
        g.push_back(negate ? -v : v);
    }
    auto x = ghost_invert_in(g, env.Fpad, env.pi, ctx.q);
    int known = ctx.char_p ? 1 : min_known(a);
    return make_unchecked(a.ctx, settle_comps(a.ctx, env, x, known));
}

bool use_polys(const witt_ctx& ctx, int length) {
    return length <= max_expanded_length(ctx.q);
}

// evaluate a bound poly with coefficients pushed to the residue ring
ring_elt eval_charp(const bound_poly& bp, const std::vector<ring_elt>& vars, const ring_ptr& K) {
    std::vector<int> maxe(vars.size(), 0);
    for (auto& [c, k] : bp.terms)
        for (size_t v = 0; v < k.size(); ++v) maxe[v] = std::max(maxe[v], k[v]);
    std::vector<std::vector<ring_elt>> pows(vars.size());
    for (size_t v = 0; v < vars.size(); ++v) {
        pows[v].push_back(K->one());
        for (int e = 1; e <= maxe[v]; ++e) pows[v].push_back(pows[v].back() * vars[v]);
    }
    ring_elt acc = K->zero();
    for (auto& [c, k] : bp.terms) {
        ring_elt t = K->embed(residue(c));
        for (size_t v = 0; v < k.size(); ++v)
            if (k[v] > 0) t *= pows[v][k[v]];
        acc += t;
    }
    return acc;
}

witt_vector poly_binary(const witt_vector& a, const witt_vector& b, binop op) {
    const witt_ctx& ctx = *a.ctx;
    const int L = a.length();
    const bound_family& bf = bound_polys(ctx.q, L, ctx.F);
    std::vector<ring_elt> vars = a.comp;
    vars.insert(vars.end(), b.comp.begin(), b.comp.end());
    std::vector<ring_elt> out;
    for (int n = 0; n < L; ++n) {
        const bound_poly& bp = op == binop::add ? bf.sum[n] : bf.prod[n];
        out.push_back(ctx.char_p ? eval_charp(bp, vars, ctx.R) : bp.eval(vars, ctx.R));
    }
    return make_unchecked(a.ctx, std::move(out));
}

} // namespace

witt_ctx_ptr witt_ctx::make(ring_ptr R, ring_ptr F, long q, int max_length) {
    auto c = std::make_shared<witt_ctx>();
    c->R = R;
    c->F = F;
    c->q = q;
    c->max_length = max_length;
    long p = F->p();
    long a = 0;
    for (long t = q; t > 1; t /= p) {
        if (t % p != 0) throw bad_descriptor("q must be a power of p");
        ++a;
    }
    if (a < 1 || pow_long(p, (int)a) != q) throw bad_descriptor("q must be a power of p");
    if (q != F->residue_card())
        throw bad_descriptor("q must equal the residue cardinality of F");
    if (R->is_residue_ring()) {
        c->char_p = true;
        if (!F->residue_ring()->same_structure(*R, false) &&
            !R->has_ancestor(F->residue_ring().get()))
            throw ring_mismatch("residue ring does not match the lifting ring F");
        c->pi = R->zero();
    } else {
        if (!R->has_ancestor(F.get())) throw ring_mismatch("F is not a bottom level of R");
        if (R->precision() != F->precision()) throw ring_mismatch("R and F precision differ");
        c->pi = R->embed(F->uniformizer());
    }
    return c;
}

witt_vector make_witt(witt_ctx_ptr ctx, std::vector<ring_elt> comps) {
    if (comps.empty()) throw length_mismatch("witt vector must have length >= 1");
    if ((int)comps.size() > ctx->max_length)
        throw length_mismatch("witt length exceeds the configured maximum " +
                              std::to_string(ctx->max_length));
    for (auto& c : comps)
        if (!c.ring()->same_structure(*ctx->R, false))
            throw ring_mismatch("witt component in the wrong ring");
    return make_unchecked(std::move(ctx), std::move(comps));
}

witt_vector zero_witt(const witt_ctx_ptr& ctx, int length) {
    return make_witt(ctx, std::vector<ring_elt>(length, ctx->R->zero()));
}

witt_vector truncate_witt(const witt_vector& w, int length) {
    if (length < 1 || length > w.length()) throw length_mismatch("truncate_witt");
    return make_unchecked(w.ctx, {w.comp.begin(), w.comp.begin() + length});
}

bool witt_equal_mod_p_pow(const witt_vector& a, const witt_vector& b, int digits) {
    require_same_ctx(a, b);
    for (int i = 0; i < a.length(); ++i)
        if (!congruent_mod_p_pow(a.comp[i], b.comp[i], digits)) return false;
    return true;
}

std::vector<ring_elt> ghost(const witt_vector& w) { return ghost_in(w.comp, w.ctx->pi, w.ctx->q); }

witt_vector witt_add_routed(const witt_vector& a, const witt_vector& b, witt_route r) {
    require_same_ctx(a, b);
    bool polys = r == witt_route::polys || (r == witt_route::automatic && use_polys(*a.ctx, a.length()));
    return polys ? poly_binary(a, b, binop::add) : padded_binary(a, b, binop::add);
}

witt_vector witt_mul_routed(const witt_vector& a, const witt_vector& b, witt_route r) {
    require_same_ctx(a, b);
    bool polys = r == witt_route::polys || (r == witt_route::automatic && use_polys(*a.ctx, a.length()));
    return polys ? poly_binary(a, b, binop::mul) : padded_binary(a, b, binop::mul);
}

witt_vector witt_add(const witt_vector& a, const witt_vector& b) {
    return witt_add_routed(a, b, witt_route::automatic);
}

witt_vector witt_mul(const witt_vector& a, const witt_vector& b) {
    return witt_mul_routed(a, b, witt_route::automatic);
}

witt_vector witt_neg(const witt_vector& a) {
    if (use_polys(*a.ctx, a.length())) {
        const bound_family& bf = bound_polys(a.ctx->q, a.length(), a.ctx->F);
        std::vector<ring_elt> out;
        for (int n = 0; n < a.length(); ++n)
            out.push_back(a.ctx->char_p ? eval_charp(bf.neg[n], a.comp, a.ctx->R)
                                        : bf.neg[n].eval(a.comp, a.ctx->R));
        return make_unchecked(a.ctx, std::move(out));
    }
    return padded_unary(a, true, false);
}

witt_vector witt_sub(const witt_vector& a, const witt_vector& b) {
    return witt_add(a, witt_neg(b));
}

witt_vector frobenius(const witt_vector& w) {
    if (w.length() < 2) throw length_too_short("frobenius needs length >= 2");
    const witt_ctx& ctx = *w.ctx;
    if (ctx.char_p) {
        std::vector<ring_elt> out;
        for (int i = 0; i + 1 < w.length(); ++i) out.push_back(pow_elt(w.comp[i], ctx.q));
        return make_unchecked(w.ctx, std::move(out));
    }
    if (use_polys(ctx, w.length())) {
        const bound_family& bf = bound_polys(ctx.q, w.length(), ctx.F);
        std::vector<ring_elt> out;
        for (int i = 0; i + 1 < w.length(); ++i)
            out.push_back(pow_elt(w.comp[i], ctx.q) + ctx.pi * bf.frob_f[i].eval(w.comp, ctx.R));
        return make_unchecked(w.ctx, std::move(out));
    }
    return padded_unary(w, false, true);
}

witt_vector verschiebung(const witt_vector& w) {
    std::vector<ring_elt> out;
    out.push_back(w.ctx->R->zero());
    out.insert(out.end(), w.comp.begin(), w.comp.end());
    return make_unchecked(w.ctx, std::move(out));
}

witt_vector pi_times(const witt_vector& w) {
    if (w.ctx->char_p) return mult_by_pi_charp(w);
    return frobenius(verschiebung(w));
}

witt_vector mult_by_pi_charp(const witt_vector& w) {
    if (!w.ctx->char_p) throw wrong_characteristic("mult_by_pi_charp needs a residue ring");
    std::vector<ring_elt> out;
    out.push_back(w.ctx->R->zero());
    for (int i = 0; i + 1 < w.length(); ++i) out.push_back(pow_elt(w.comp[i], w.ctx->q));
    return make_unchecked(w.ctx, std::move(out));
}

witt_vector teichmuller(const witt_ctx_ptr& ctx, const ring_elt& a, int length) {
    std::vector<ring_elt> comps(length, ctx->R->zero());
    comps[0] = a;
    return make_witt(ctx, std::move(comps));
}

phi_witness make_phi_witness(std::function<ring_elt(const ring_elt&)> eval) {
    phi_witness w;
    w.eval = std::move(eval);
    return w;
}

bool verify_phi_on_samples(const witt_ctx_ptr& ctx, phi_witness& phi, int samples,
                           unsigned long seed) {
    std::mt19937_64 rng(seed);
    const ring_ptr R = ctx->R;
    std::uniform_int_distribution<long> digit(0, R->p() - 1);
    for (int s = 0; s < samples; ++s) {
        std::vector<bigint> c(R->dim());
        for (auto& x : c) {
            bigint acc = 0;
            for (int d = 0; d < R->precision(); ++d) acc = acc * R->p() + digit(rng);
            x = acc;
        }
        ring_elt x = R->from_coords(std::move(c));
        ring_elt d = phi.eval(x) - pow_elt(x, ctx->q);
        if (!d.is_zero_rep() && !valuation(d).at_least(ctx->e_rel())) {
            phi.q_power_mod_pi_checked = false;
            return false;
        }
    }
    phi.q_power_mod_pi_checked = true;
    return true;
}

witt_vector dwork_lift(const witt_ctx_ptr& ctx, const std::vector<ring_elt>& y,
                       const phi_witness& phi) {
    if (ctx->char_p) throw wrong_characteristic("dwork_lift needs a pi-torsion free ring");
    if (y.empty()) throw length_mismatch("dwork_lift: empty ghost vector");
    const long e_rel = ctx->e_rel();
    for (int i = 1; i < (int)y.size(); ++i) {
        ring_elt d = phi.eval(y[i - 1]) - y[i];
        if (!d.is_zero_rep() && !valuation(d).at_least(i * e_rel))
            throw compatibility_violation("phi(y_" + std::to_string(i - 1) + ") != y_" +
                                          std::to_string(i) + " mod pi^" + std::to_string(i));
    }
    int ky = y[0].known_precision();
    for (auto& v : y) ky = std::min(ky, v.known_precision());

    std::vector<ring_elt> x;
    for (int n = 0; n < (int)y.size(); ++n) {
        ring_elt num = y[n];
        ring_elt pij = ctx->R->one();
        for (int j = 0; j < n; ++j) {
            num -= pij * pow_elt(x[j], pow_bigint(ctx->q, n - j));
            pij *= ctx->pi;
        }
        if (n == 0) {
            x.push_back(num);
            continue;
        }
        // the pi^j factors restore what x_j's divisions consumed, so the
        // numerator is accurate to the precision of the inputs themselves
        num = num.with_known(ky);
        x.push_back(exact_divide_by(num, ctx->F->uniformizer(), n));
    }
    return make_witt(ctx, std::move(x));
}

witt_vector lambda_phi(const witt_ctx_ptr& ctx, const ring_elt& r, const phi_witness& phi,
                       int length) {
    std::vector<ring_elt> y;
    y.push_back(r);
    for (int i = 1; i < length; ++i) y.push_back(phi.eval(y.back()));
    return dwork_lift(ctx, y, phi);
}

witt_vector scalar_witt(const witt_ctx_ptr& ctx, const ring_elt& c, int length) {
    if (ctx->char_p) throw wrong_characteristic("scalar_witt over residue rings is trivial");
    phi_witness id = make_phi_witness([](const ring_elt& z) { return z; });
    return dwork_lift(ctx, std::vector<ring_elt>(length, c), id);
}

witt_vector frobenius_divided_by_pi(const witt_vector& y) {
    if (y.ctx->char_p) throw wrong_characteristic("frobenius_divided_by_pi: char 0 only");
    if (y.length() < 2) throw length_too_short("frobenius_divided_by_pi needs length >= 2");
    ring_elt y0p = exact_divide_by(y.comp[0], y.ctx->F->uniformizer(), 1);
    witt_vector t = teichmuller(y.ctx, y0p, y.length());
    witt_vector d = witt_sub(y, pi_times(t));
    std::vector<ring_elt> tail(d.comp.begin() + 1, d.comp.end());
    witt_vector z = make_unchecked(y.ctx, std::move(tail));
    return witt_add(teichmuller(y.ctx, pow_elt(y0p, y.ctx->q), y.length() - 1), z);
}

} // namespace wittlift
