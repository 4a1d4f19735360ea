#include "wittlift/window.hpp"

namespace wittlift {

namespace {

// valuation lower bound in pi_F units
long pi_f_bound(const ring_elt& z, long e_rel) {
    if (z.is_zero_rep()) return (long)z.known_precision() * z.ring()->e_top() / e_rel;
    val_t v = valuation(z);
    return v.v / e_rel;
}

} // namespace

frob_window make_window(witt_ctx_ptr ctx, std::vector<witt_vector> vectors) {
    if (vectors.empty()) throw length_mismatch("window needs at least one slot");
    const int L1 = vectors[0].length();
    for (auto& v : vectors) {
        if (v.length() != L1) throw length_mismatch("window slots of unequal witt length");
        if (v.ctx->R.get() != ctx->R.get() && !v.ctx->R->same_structure(*ctx->R, false))
            throw ring_mismatch("window slot in the wrong ring");
    }
    frob_window w;
    w.ctx = std::move(ctx);
    w.x = std::move(vectors);
    const long e_rel = w.ctx->e_rel();
    long compat = (long)w.ctx->R->precision() * w.ctx->R->e_top() / e_rel;
    if (L1 >= 2) {
        for (int i = 0; i + 1 < (int)w.x.size(); ++i) {
            witt_vector fr = frobenius(w.x[i + 1]);
            for (int j = 0; j < fr.length(); ++j)
                compat = std::min(compat, pi_f_bound(fr.comp[j] - w.x[i].comp[j], e_rel));
        }
    }
    w.compat_precision = compat;
    return w;
}

char_p_seq make_char_p_seq(ring_ptr R, ring_elt pi, long q, std::vector<ring_elt> entries) {
    if (entries.empty()) throw length_mismatch("char-p sequence needs at least one entry");
    char_p_seq s;
    s.R = std::move(R);
    s.pi = std::move(pi);
    s.q = q;
    s.s = std::move(entries);
    val_t vpi = valuation(s.pi);
    if (!vpi.exact) throw bad_descriptor("char_p_seq: pi reduces to zero");
    for (int i = 0; i + 1 < (int)s.s.size(); ++i) {
        ring_elt d = s.s[i] - pow_elt(s.s[i + 1], q);
        if (!d.is_zero_rep() && !valuation(d).at_least(vpi.v))
            throw compatibility_violation("entry " + std::to_string(i) +
                                          " is not the q-th power of entry " +
                                          std::to_string(i + 1) + " mod pi");
    }
    return s;
}

bool char_p_entry_equal(const char_p_seq& a, int i, const ring_elt& rep) {
    ring_elt d = a.s[i] - rep;
    if (d.is_zero_rep()) return true;
    return valuation(d).at_least(valuation(a.pi).v);
}

bool char_p_seq_equal(const char_p_seq& a, const char_p_seq& b) {
    if (a.s.size() != b.s.size()) return false;
    for (int i = 0; i <= a.depth(); ++i)
        if (!char_p_entry_equal(a, i, b.s[i])) return false;
    return true;
}

frob_window window_frobenius(const frob_window& w) {
    if (w.depth() < 1) throw depth_exhausted("window_frobenius consumes one unit of depth");
    if (w.witt_length() < 2) throw length_too_short("window_frobenius needs witt length >= 2");
    std::vector<witt_vector> out;
    out.push_back(frobenius(w.x[0]));
    for (int i = 0; i + 1 < (int)w.x.size(); ++i)
        out.push_back(truncate_witt(w.x[i], w.witt_length() - 1));
    return make_window(w.ctx, std::move(out));
}

frob_window window_shift_left(const frob_window& w) {
    if (w.depth() < 1) throw depth_exhausted("window_shift_left needs depth >= 1");
    return make_window(w.ctx, {w.x.begin() + 1, w.x.end()});
}

char_p_seq beta(const frob_window& w) {
    std::vector<ring_elt> entries;
    for (auto& v : w.x) entries.push_back(v.comp[0]);
    try {
        return make_char_p_seq(w.ctx->R, w.ctx->pi, w.ctx->q, std::move(entries));
    } catch (const compatibility_violation& e) {
        throw compatibility_violation(std::string("beta of a corrupted window: ") + e.what());
    }
}

ring_elt theta(const frob_window& w) { return w.x[0].comp[0]; }

ring_elt theta_classical(const frob_window& w) {
    const int D = w.depth();
    const int L = w.witt_length() - 1;
    if (D < 1) throw insufficient_depth("theta_classical needs window depth >= 1");
    const witt_vector& deep = w.x[D];
    ring_elt acc = w.ctx->R->zero();
    ring_elt pij = w.ctx->R->one();
    for (int i = 0; i <= std::min(D, L); ++i) {
        acc += pij * pow_elt(deep.comp[i], pow_bigint(w.ctx->q, D - i));
        pij *= w.ctx->pi;
    }
    return acc;
}

long theta_shared_precision(const frob_window& w) {
    const long trunc = std::min<long>(w.depth(), w.witt_length() - 1) + 1;
    return std::min(trunc, w.compat_precision);
}

frob_window window_lift_charp(const char_p_seq& s, const witt_ctx_ptr& ctx, int length,
                              int depth, int slack) {
    if (slack < 0) slack = ctx->R->precision();
    if (s.depth() < depth + length + slack)
        throw insufficient_depth("char-p sequence depth " + std::to_string(s.depth()) +
                                 " < depth + length + slack = " +
                                 std::to_string(depth + length + slack));
    // agreement improves by one pi_F-digit per iterate, so this many steps
    // pins the limit modulo the full ring precision
    const long needed = (long)ctx->R->precision() * ctx->F->e_top();
    std::vector<witt_vector> vectors;
    for (int i = 0; i <= depth; ++i) {
        long m = std::min<long>(needed, s.depth() - i);
        ring_elt t = pow_elt(ctx->R->carry_to(s.s[i + m]), pow_bigint(ctx->q, m));
        vectors.push_back(teichmuller(ctx, t, length));
    }
    return make_window(ctx, std::move(vectors));
}

frob_window shift_embed(const frob_window& w, int b) {
    if (b < 0) throw bad_descriptor("shift_embed: b must be >= 0");
    if (b == 0) return w;
    if (b > w.depth()) throw depth_exhausted("shift_embed: b exceeds window depth");
    if (w.witt_length() - b < 1) throw length_too_short("shift_embed: witt length exhausted");
    const int L1 = w.witt_length() - b;
    const int D1 = w.depth() - b;
    std::vector<witt_vector> out;
    for (int i = 0; i < b && i <= D1; ++i) {
        witt_vector f = w.x[0];
        for (int t = 0; t < b - i; ++t) f = frobenius(f);
        out.push_back(truncate_witt(f, L1));
    }
    for (int i = b; i <= D1; ++i) out.push_back(truncate_witt(w.x[i - b], L1));
    return make_window(w.ctx, std::move(out));
}

frob_window window_add(const frob_window& a, const frob_window& b) {
    if (a.depth() != b.depth() || a.witt_length() != b.witt_length())
        throw length_mismatch("window shapes differ");
    std::vector<witt_vector> out;
    for (int i = 0; i <= a.depth(); ++i) out.push_back(witt_add(a.x[i], b.x[i]));
    return make_window(a.ctx, std::move(out));
}

frob_window window_mul(const frob_window& a, const frob_window& b) {
    if (a.depth() != b.depth() || a.witt_length() != b.witt_length())
        throw length_mismatch("window shapes differ");
    std::vector<witt_vector> out;
    for (int i = 0; i <= a.depth(); ++i) out.push_back(witt_mul(a.x[i], b.x[i]));
    return make_window(a.ctx, std::move(out));
}

frob_window window_neg(const frob_window& a) {
    std::vector<witt_vector> out;
    for (auto& v : a.x) out.push_back(witt_neg(v));
    return make_window(a.ctx, std::move(out));
}

frob_window window_pi_times(const frob_window& a) {
    std::vector<witt_vector> out;
    for (auto& v : a.x) out.push_back(pi_times(v));
    return make_window(a.ctx, std::move(out));
}

frob_window window_divide_pi(const frob_window& w) {
    if (w.depth() < 1) throw depth_exhausted("window_divide_pi consumes one unit of depth");
    if (w.witt_length() < 2) throw length_too_short("window_divide_pi needs witt length >= 2");
    const long e_rel = w.ctx->e_rel();
    for (auto& v : w.x) {
        ring_elt c0 = v.comp[0];
        if (!c0.is_zero_rep() && !valuation(c0).at_least(e_rel))
            throw not_divisible("window_divide_pi: beta is nonzero");
    }
    std::vector<witt_vector> out;
    for (int i = 1; i <= w.depth(); ++i) out.push_back(frobenius_divided_by_pi(w.x[i]));
    return make_window(w.ctx, std::move(out));
}

} // namespace wittlift
