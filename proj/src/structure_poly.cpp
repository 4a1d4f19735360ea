#include "wittlift/structure_poly.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace wittlift {

namespace {

using mpoly = std::map<std::vector<int>, laurent>;

void acc_term(mpoly& dst, const std::vector<int>& key, int piexp, const bigint& c) {
    if (c == 0) return;
    auto& lv = dst[key];
    auto it = lv.find(piexp);
    if (it == lv.end()) {
        lv.emplace(piexp, c);
    } else {
        it->second += c;
        if (it->second == 0) lv.erase(it);
    }
    if (lv.empty()) dst.erase(key);
}

void mp_add_into(mpoly& dst, const mpoly& src, int sign) {
    for (auto& [k, lv] : src)
        for (auto& [m, c] : lv) acc_term(dst, k, m, sign > 0 ? c : bigint(-c));
}

mpoly mp_mul(const mpoly& a, const mpoly& b) {
    mpoly r;
    std::vector<int> key;
    for (auto& [ka, la] : a)
        for (auto& [kb, lb] : b) {
            key.resize(ka.size());
            for (size_t i = 0; i < ka.size(); ++i) key[i] = ka[i] + kb[i];
            for (auto& [ma, ca] : la)
                for (auto& [mb, cb] : lb) acc_term(r, key, ma + mb, ca * cb);
        }
    return r;
}

mpoly mp_pow(const mpoly& a, long n, int nvars) {
    mpoly r;
    r[std::vector<int>(nvars, 0)] = {{0, bigint(1)}};
    if (n == 0) return r;
    mpoly base = a;
    while (n) {
        if (n & 1) r = mp_mul(r, base);
        n >>= 1;
        if (n) base = mp_mul(base, base);
    }
    return r;
}

mpoly mp_shift_pi(const mpoly& a, int s) {
    mpoly r;
    for (auto& [k, lv] : a) {
        laurent nl;
        for (auto& [m, c] : lv) nl[m + s] = c;
        r[k] = std::move(nl);
    }
    return r;
}

mpoly mp_var(int i, int nvars) {
    std::vector<int> k(nvars, 0);
    k[i] = 1;
    mpoly r;
    r[std::move(k)] = {{0, bigint(1)}};
    return r;
}

// ghost component n of the vector whose j-th entry is vars[j]
mpoly ghost_of(const std::vector<mpoly>& vars, int n, long q, int nvars) {
    mpoly r;
    long e = 1;
    for (int t = 0; t < n; ++t) e *= q;
    for (int j = 0; j <= n; ++j) {
        mp_add_into(r, mp_shift_pi(mp_pow(vars[j], e, nvars), j), +1);
        e /= q;
    }
    return r;
}

// solve pi^n X_n = rhs_n - sum_{j<n} pi^j X_j^{q^{n-j}} over Z[pi, 1/pi]
std::vector<mpoly> ghost_invert(const std::vector<mpoly>& rhs, long q, int nvars) {
    std::vector<mpoly> X;
    for (int n = 0; n < (int)rhs.size(); ++n) {
        mpoly num = rhs[n];
        long e = 1;
        for (int t = 0; t < n; ++t) e *= q;
        for (int j = 0; j < n; ++j) {
            mp_add_into(num, mp_shift_pi(mp_pow(X[j], e, nvars), j), -1);
            e /= q;
        }
        X.push_back(mp_shift_pi(num, -n));
    }
    return X;
}

universal_poly pack(poly_kind kind, int index, long q, int va, int vb, const mpoly& m) {
    universal_poly up;
    up.kind = kind;
    up.index = index;
    up.q = q;
    up.vars_a = va;
    up.vars_b = vb;
    for (auto& [k, lv] : m) {
        std::vector<int> key(k.begin(), k.begin() + va);
        for (int j = 0; j < vb; ++j) key.push_back(k[va + j]);
        up.monos.emplace_back(std::move(key), lv);
    }
    std::sort(up.monos.begin(), up.monos.end(), [](const auto& x, const auto& y) {
        long dx = 0, dy = 0;
        for (int e : x.first) dx += e;
        for (int e : y.first) dy += e;
        if (dx != dy) return dx < dy;
        return x.first < y.first;
    });
    return up;
}

std::string ring_key(const local_ring& R) {
    std::ostringstream os;
    os << R.p() << ":" << R.precision() << ":" << (int)R.kind();
    for (auto& c : R.level_poly_exact()) {
        os << "[";
        for (auto& x : c) os << x << ",";
        os << "]";
    }
    os << "u[";
    for (auto& x : R.unif_exact()) os << x << ",";
    os << "]";
    if (R.below()) os << "|" << ring_key(*R.below());
    return os.str();
}

} // namespace

bool universal_poly::weighted_homogeneous(const bigint& degree) const {
    for (auto& [k, lv] : monos) {
        bigint d = 0;
        bigint w = 1;
        for (int j = 0; j < vars_a; ++j) {
            d += w * k[j];
            w *= q;
        }
        w = 1;
        for (int j = 0; j < vars_b; ++j) {
            d += w * k[vars_a + j];
            w *= q;
        }
        if (d != degree) return false;
    }
    return true;
}

int max_expanded_length(long q) {
    if (q <= 2) return 5;
    if (q <= 4) return 4;
    if (q <= 9) return 3;
    return 2;
}

const poly_family& structure_polys(long q, int length) {
    static std::mutex mtx;
    static std::map<std::pair<long, int>, poly_family> cache;
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find({q, length});
    if (it != cache.end()) return it->second;
    if (length < 1) throw bad_descriptor("structure_polys: length must be >= 1");
    if (length > max_expanded_length(q))
        throw depth_budget_exceeded("expanded structure polynomials for q=" + std::to_string(q) +
                                    " are budgeted to length " +
                                    std::to_string(max_expanded_length(q)));

    poly_family fam;
    fam.q = q;
    fam.length = length;
    const int L = length;
    const int nv = 2 * L;

    std::vector<mpoly> av, bv;
    for (int j = 0; j < L; ++j) av.push_back(mp_var(j, nv));
    for (int j = 0; j < L; ++j) bv.push_back(mp_var(L + j, nv));

    std::vector<mpoly> rhs_sum, rhs_prod, rhs_neg, rhs_frob;
    for (int n = 0; n < L; ++n) {
        mpoly gs = ghost_of(av, n, q, nv);
        mpoly gb = ghost_of(bv, n, q, nv);
        mpoly s = gs;
        mp_add_into(s, gb, +1);
        rhs_sum.push_back(std::move(s));
        rhs_prod.push_back(mp_mul(gs, gb));
        mpoly ng;
        mp_add_into(ng, gs, -1);
        rhs_neg.push_back(std::move(ng));
        if (n + 1 < L) rhs_frob.push_back(ghost_of(av, n + 1, q, nv));
    }

    auto S = ghost_invert(rhs_sum, q, nv);
    auto P = ghost_invert(rhs_prod, q, nv);
    auto N = ghost_invert(rhs_neg, q, nv);
    auto Fr = ghost_invert(rhs_frob, q, nv);

    for (int n = 0; n < L; ++n) {
        fam.sum.push_back(pack(poly_kind::sum, n, q, L, L, S[n]));
        fam.prod.push_back(pack(poly_kind::product, n, q, L, L, P[n]));
        fam.neg.push_back(pack(poly_kind::negation, n, q, L, 0, N[n]));
    }
    for (int n = 0; n + 1 < L; ++n) {
        // f_n = (Fr_n - a_n^q) / pi
        mpoly f = Fr[n];
        mp_add_into(f, mp_pow(av[n], q, nv), -1);
        f = mp_shift_pi(f, -1);
        fam.frob_f.push_back(pack(poly_kind::frobenius_f, n, q, L, 0, f));
        if (!fam.frob_f.back().weighted_homogeneous(pow_bigint(q, n + 1)))
            throw integrality_failure("frobenius f_" + std::to_string(n) +
                                      " failed the weighted homogeneity check");
    }

    auto [pos, ok] = cache.emplace(std::pair<long, int>{q, length}, std::move(fam));
    (void)ok;
    return pos->second;
}

ring_elt bound_poly::eval(const std::vector<ring_elt>& vars, const ring_ptr& R) const {
    if ((int)vars.size() != vars_a + vars_b) throw bad_descriptor("bound_poly::eval arity");
    std::vector<int> maxe(vars.size(), 0);
    for (auto& [c, k] : terms)
        for (size_t v = 0; v < k.size(); ++v) maxe[v] = std::max(maxe[v], k[v]);
    std::vector<std::vector<ring_elt>> pows(vars.size());
    for (size_t v = 0; v < vars.size(); ++v) {
        pows[v].push_back(R->one());
        for (int e = 1; e <= maxe[v]; ++e) pows[v].push_back(pows[v].back() * vars[v]);
    }
    ring_elt acc = R->zero();
    for (auto& [c, k] : terms) {
        ring_elt t = R->embed(c);
        for (size_t v = 0; v < k.size(); ++v)
            if (k[v] > 0) t *= pows[v][k[v]];
        acc += t;
    }
    return acc;
}

bound_poly bind_poly(const universal_poly& up, const ring_ptr& F) {
    bound_poly bp;
    bp.kind = up.kind;
    bp.index = up.index;
    bp.vars_a = up.vars_a;
    bp.vars_b = up.vars_b;

    int maxneg = 0;
    for (auto& [k, lv] : up.monos)
        if (!lv.empty()) maxneg = std::max(maxneg, -lv.begin()->first);
    const long eF = F->e_top();
    ring_ptr Fpad =
        maxneg > 0 ? F->rebuilt_at(F->precision() + (int)ceil_div(maxneg, eF) + 1) : F;
    ring_elt pi_pad = Fpad->uniformizer();

    for (auto& [k, lv] : up.monos) {
        int T = lv.empty() ? 0 : std::max(0, -lv.begin()->first);
        ring_elt num = Fpad->zero();
        for (auto& [m, c] : lv) num += Fpad->from_int(c) * pow_elt(pi_pad, bigint(m + T));
        ring_elt val = num;
        if (T > 0) {
            try {
                val = exact_divide_by(num, pi_pad, T);
            } catch (const not_divisible&) {
                throw integrality_failure("coefficient is not integral for this (q, pi)");
            }
        }
        bp.terms.emplace_back(F->carry_to(val), k);
    }
    return bp;
}

const bound_family& bound_polys(long q, int length, const ring_ptr& F) {
    static std::mutex mtx;
    static std::map<std::tuple<long, int, std::string>, bound_family> cache;
    const poly_family& fam = structure_polys(q, length);
    std::lock_guard<std::mutex> lk(mtx);
    auto key = std::make_tuple(q, length, ring_key(*F));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    bound_family bf;
    for (auto& u : fam.sum) bf.sum.push_back(bind_poly(u, F));
    for (auto& u : fam.prod) bf.prod.push_back(bind_poly(u, F));
    for (auto& u : fam.frob_f) bf.frob_f.push_back(bind_poly(u, F));
    for (auto& u : fam.neg) bf.neg.push_back(bind_poly(u, F));
    auto [pos, ok] = cache.emplace(std::move(key), std::move(bf));
    (void)ok;
    return pos->second;
}

} // namespace wittlift
