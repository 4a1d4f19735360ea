#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "wittlift/witt.hpp"

using namespace wittlift;
using wittlift::testing::oracle;

namespace {

struct config {
    witt_ctx_ptr ctx;
    std::string name;
};

ring_ptr base_ring(long p, int M) { return local_ring::make_base(p, M); }

ring_ptr eis_over(const ring_ptr& b) {
    // y^2 - p, uniformizer y
    std::vector<bigint> c0(b->dim()), c1(b->dim());
    c0[0] = -b->p();
    std::vector<bigint> u(2 * b->dim());
    u[b->dim()] = 1;
    return local_ring::extend(b, level_kind::eisenstein, {c0, c1}, u);
}

ring_ptr unram_over(const ring_ptr& b) {
    std::vector<bigint> c0{bigint(1)}, c1{bigint(b->p() == 2 ? 1 : 0)};
    return local_ring::extend(b, level_kind::unramified, {c0, c1}, {bigint(b->p()), bigint(0)});
}

// the acceptance grid: p in {2,3}, q in {p, p^2}, pi in {p, Eisenstein}
std::vector<config> desk_configs(int M) {
    std::vector<config> out;
    for (long p : {2L, 3L}) {
        auto B = base_ring(p, M);
        out.push_back({witt_ctx::make(B, B, p), "p=" + std::to_string(p) + " F=Qp pi=p"});
        auto E = eis_over(B);
        out.push_back({witt_ctx::make(E, E, p), "p=" + std::to_string(p) + " F=Qp(sqrt p)"});
        auto U = unram_over(B);
        out.push_back({witt_ctx::make(U, U, p * p), "p=" + std::to_string(p) + " F=Qp2 pi=p"});
        auto UE = eis_over(U);
        out.push_back(
            {witt_ctx::make(UE, UE, p * p), "p=" + std::to_string(p) + " F=Qp2(sqrt p)"});
    }
    return out;
}

ring_elt random_elt(const ring_ptr& R, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> digit(0, R->p() - 1);
    std::vector<bigint> c(R->dim());
    for (auto& x : c) {
        bigint acc = 0;
        for (int d = 0; d < R->precision(); ++d) acc = acc * R->p() + digit(rng);
        x = acc;
    }
    return R->from_coords(std::move(c));
}

witt_vector random_witt(const witt_ctx_ptr& ctx, int len, std::mt19937_64& rng) {
    std::vector<ring_elt> c;
    for (int i = 0; i < len; ++i) c.push_back(random_elt(ctx->R, rng));
    return make_witt(ctx, std::move(c));
}

// small-coordinate elements so the exact oracle stays fast
ring_elt small_elt(const ring_ptr& R, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> v(-20, 20);
    std::vector<bigint> c(R->dim());
    for (auto& x : c) x = v(rng);
    return R->from_coords(std::move(c));
}

phi_witness poly_phi(const witt_ctx_ptr& ctx, const std::vector<long>& coeffs) {
    return make_phi_witness([ctx, coeffs](const ring_elt& x) {
        ring_elt acc = x.ring()->zero().with_known(x.known_precision());
        ring_elt xp = x.ring()->one();
        for (size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] != 0) acc += x.ring()->from_int(coeffs[j]) * xp;
            xp = xp * x;
        }
        return acc;
    });
}

} // namespace

TEST_CASE("ghost map matches the defining formula") {
    auto B = base_ring(2, 8);
    auto ctx = witt_ctx::make(B, B, 2);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
        ring_elt a0 = random_elt(B, rng), a1 = random_elt(B, rng);
        auto g = ghost(make_witt(ctx, {a0, a1}));
        CHECK(congruent_mod_p_pow(g[0], a0, 8));
        CHECK(congruent_mod_p_pow(g[1], a0 * a0 + B->from_int(2) * a1, 8));
    }
    // teichmuller of 1 over p=q=3
    auto B3 = base_ring(3, 8);
    auto ctx3 = witt_ctx::make(B3, B3, 3);
    auto g1 = ghost(teichmuller(ctx3, B3->one(), 3));
    for (auto& v : g1) CHECK(congruent_mod_p_pow(v, B3->one(), 8));
    // (0,1) over p=q=pi=2 -> (0, 2)
    auto g01 = ghost(make_witt(ctx, {B->zero(), B->one()}));
    CHECK(g01[0].is_zero_rep());
    CHECK(congruent_mod_p_pow(g01[1], B->from_int(2), 8));
}

TEST_CASE("structure polynomial golden values") {
    // sum index 1, q=2: a1 + b1 - a0 b0 once pi = 2
    const auto& fam2 = structure_polys(2, 2);
    auto B = base_ring(2, 8);
    auto bp = bind_poly(fam2.sum[1], B);
    REQUIRE(bp.terms.size() == 3);
    // graded-lex: b1, a1, then a0*b0
    CHECK(bp.terms[0].second == std::vector<int>{0, 0, 0, 1});
    CHECK(bp.terms[0].first.coords()[0] == 1);
    CHECK(bp.terms[1].second == std::vector<int>{0, 1, 0, 0});
    CHECK(bp.terms[1].first.coords()[0] == 1);
    CHECK(bp.terms[2].second == std::vector<int>{1, 0, 1, 0});
    CHECK(bp.terms[2].first.coords()[0] == B->p_pow_M() - 1); // -1 mod 2^8

    // product index 1, general q: a0^q b1 + a1 b0^q + pi a1 b1
    for (long q : {2L, 3L}) {
        const auto& fam = structure_polys(q, 2);
        const auto& monos = fam.prod[1].monos;
        REQUIRE(monos.size() == 3);
        for (auto& [k, lv] : monos) {
            if (k == std::vector<int>{0, 1, 0, 1}) { // a1 b1
                CHECK(lv == laurent{{1, bigint(1)}});
            } else if (k == std::vector<int>{(int)q, 0, 0, 1}) { // a0^q b1
                CHECK(lv == laurent{{0, bigint(1)}});
            } else { // a1 b0^q
                CHECK(k == std::vector<int>{0, 1, (int)q, 0});
                CHECK(lv == laurent{{0, bigint(1)}});
            }
        }
        // frobenius f_0 = a_1
        REQUIRE(fam.frob_f[0].monos.size() == 1);
        CHECK(fam.frob_f[0].monos[0].first == std::vector<int>{0, 1});
        CHECK(fam.frob_f[0].monos[0].second == laurent{{0, bigint(1)}});
    }
}

TEST_CASE("generation succeeds and frobenius polys are weighted homogeneous") {
    struct cfg {
        long q;
        int len;
    };
    for (auto [q, len] : {cfg{2, 4}, cfg{3, 4}, cfg{4, 4}, cfg{9, 3}}) {
        const auto& fam = structure_polys(q, len);
        for (int i = 0; i < (int)fam.frob_f.size(); ++i)
            CHECK(fam.frob_f[i].weighted_homogeneous(pow_bigint(q, i + 1)));
    }
    CHECK_THROWS_AS(structure_polys(9, 4), depth_budget_exceeded);
}

TEST_CASE("binding integrality over every desk F") {
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        int len = std::min(4, max_expanded_length(cf.ctx->q));
        CHECK_NOTHROW(bound_polys(cf.ctx->q, len, cf.ctx->F));
    }
}

TEST_CASE("teichmuller sum: [1] + [1] = (2, -1) for q = pi = 2") {
    auto B = base_ring(2, 8);
    auto ctx = witt_ctx::make(B, B, 2);
    auto s = witt_add(teichmuller(ctx, B->one(), 2), teichmuller(ctx, B->one(), 2));
    CHECK(congruent_mod_p_pow(s.comp[0], B->from_int(2), 8));
    CHECK(congruent_mod_p_pow(s.comp[1], B->from_int(-1), 8));
}

TEST_CASE("additive identity and teichmuller multiplicativity") {
    std::mt19937_64 rng(3);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        auto w = random_witt(cf.ctx, 3, rng);
        CHECK(witt_equal_mod_p_pow(witt_add(w, zero_witt(cf.ctx, 3)), w, 8));
        ring_elt a = random_elt(cf.ctx->R, rng), b = random_elt(cf.ctx->R, rng);
        auto prod = witt_mul(teichmuller(cf.ctx, a, 3), teichmuller(cf.ctx, b, 3));
        CHECK(witt_equal_mod_p_pow(prod, teichmuller(cf.ctx, a * b, 3), 8));
    }
}

TEST_CASE("witt_add/witt_mul against the exact ghost-inversion oracle") {
    std::mt19937_64 rng(17);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        oracle orc(cf.ctx->R);
        for (int len : {2, 4}) {
            for (int t = 0; t < 4; ++t) {
                std::vector<ring_elt> ac, bc;
                std::vector<testing::oracle_elt> ao, bo;
                for (int i = 0; i < len; ++i) {
                    ring_elt x = small_elt(cf.ctx->R, rng), y = small_elt(cf.ctx->R, rng);
                    ac.push_back(x);
                    bc.push_back(y);
                    ao.push_back(orc.from_ring_elt(x));
                    bo.push_back(orc.from_ring_elt(y));
                }
                auto wa = make_witt(cf.ctx, ac), wb = make_witt(cf.ctx, bc);
                auto ga = orc.ghost(ao, cf.ctx->q), gb = orc.ghost(bo, cf.ctx->q);
                std::vector<testing::oracle_elt> gs, gp;
                for (int i = 0; i < len; ++i) {
                    gs.push_back(orc.add(ga[i], gb[i]));
                    gp.push_back(orc.mul(ga[i], gb[i]));
                }
                auto xs = orc.ghost_invert(gs, cf.ctx->q);
                auto xp = orc.ghost_invert(gp, cf.ctx->q);
                auto s = witt_add(wa, wb), m = witt_mul(wa, wb);
                for (int i = 0; i < len; ++i) {
                    CHECK(congruent_mod_p_pow(s.comp[i], orc.to_ring(xs[i], cf.ctx->R), 8));
                    CHECK(congruent_mod_p_pow(m.comp[i], orc.to_ring(xp[i], cf.ctx->R), 8));
                }
            }
        }
    }
}

TEST_CASE("poly route and lifted route agree") {
    std::mt19937_64 rng(23);
    for (auto& cf : desk_configs(8)) {
        if (max_expanded_length(cf.ctx->q) < 3) continue;
        CAPTURE(cf.name);
        auto a = random_witt(cf.ctx, 3, rng), b = random_witt(cf.ctx, 3, rng);
        CHECK(witt_equal_mod_p_pow(witt_add_routed(a, b, witt_route::polys),
                                   witt_add_routed(a, b, witt_route::lifted), 8));
        CHECK(witt_equal_mod_p_pow(witt_mul_routed(a, b, witt_route::polys),
                                   witt_mul_routed(a, b, witt_route::lifted), 8));
    }
}

TEST_CASE("ghost is a ring homomorphism") {
    std::mt19937_64 rng(29);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        auto a = random_witt(cf.ctx, 4, rng), b = random_witt(cf.ctx, 4, rng);
        auto ga = ghost(a), gb = ghost(b);
        auto gs = ghost(witt_add(a, b)), gp = ghost(witt_mul(a, b));
        for (int i = 0; i < 4; ++i) {
            CHECK(congruent_mod_p_pow(gs[i], ga[i] + gb[i], 8));
            CHECK(congruent_mod_p_pow(gp[i], ga[i] * gb[i], 8));
        }
    }
}

TEST_CASE("frobenius: teichmuller, ghost shift, char p") {
    std::mt19937_64 rng(31);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        ring_elt a = random_elt(cf.ctx->R, rng);
        auto fr = frobenius(teichmuller(cf.ctx, a, 3));
        CHECK(witt_equal_mod_p_pow(fr, teichmuller(cf.ctx, pow_elt(a, cf.ctx->q), 2), 8));

        auto w = random_witt(cf.ctx, 4, rng);
        auto g = ghost(w);
        auto gf = ghost(frobenius(w));
        for (int i = 0; i + 1 < 4; ++i) CHECK(congruent_mod_p_pow(gf[i], g[i + 1], 8));
        // first output component is a_0^q + pi a_1
        CHECK(congruent_mod_p_pow(frobenius(w).comp[0],
                                  pow_elt(w.comp[0], cf.ctx->q) + cf.ctx->pi * w.comp[1], 8));
    }
    // residue ring: componentwise q-power
    auto B = base_ring(3, 6);
    auto kctx = witt_ctx::make(B->residue_ring(), B, 3);
    std::vector<ring_elt> c = {B->residue_ring()->from_int(2).with_known(1),
                               B->residue_ring()->from_int(1).with_known(1),
                               B->residue_ring()->from_int(2).with_known(1)};
    auto w = make_witt(kctx, c);
    auto fw = frobenius(w);
    for (int i = 0; i < 2; ++i)
        CHECK(fw.comp[i].coords() == pow_elt(c[i], 3).coords());
}

TEST_CASE("verschiebung and Fr V = pi") {
    std::mt19937_64 rng(37);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        auto v1 = verschiebung(teichmuller(cf.ctx, cf.ctx->R->one(), 2));
        CHECK(v1.comp[0].is_zero_rep());
        CHECK(congruent_mod_p_pow(v1.comp[1], cf.ctx->R->one(), 8));

        auto w1 = random_witt(cf.ctx, 3, rng), w2 = random_witt(cf.ctx, 3, rng);
        CHECK(witt_equal_mod_p_pow(verschiebung(witt_add(w1, w2)),
                                   witt_add(verschiebung(w1), verschiebung(w2)), 8));

        // Fr V = pi: ghost of pi_times(w) is pi * ghost(w)
        auto w = random_witt(cf.ctx, 3, rng);
        auto gp = ghost(pi_times(w));
        auto g = ghost(w);
        for (int i = 0; i < 3; ++i) CHECK(congruent_mod_p_pow(gp[i], cf.ctx->pi * g[i], 8));
        // and agrees with multiplication by the scalar pi
        auto spi = scalar_witt(cf.ctx, cf.ctx->pi, 3);
        CHECK(witt_equal_mod_p_pow(pi_times(w), witt_mul(spi, w), 6));
    }
}

TEST_CASE("char p: V Fr = Fr V = mult_by_pi") {
    auto B = base_ring(2, 6);
    auto kctx = witt_ctx::make(B->residue_ring(), B, 2);
    auto K = B->residue_ring();
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        std::vector<ring_elt> c;
        for (int i = 0; i < 3; ++i)
            c.push_back(K->from_int(rng() % 2).with_known(1));
        auto w = make_witt(kctx, c);
        auto m = mult_by_pi_charp(w);
        auto vf = verschiebung(frobenius(w));
        auto fv = frobenius(verschiebung(w));
        CHECK(m.comp.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(m.comp[i].coords() == fv.comp[i].coords());
            if (i < (int)vf.comp.size()) CHECK(m.comp[i].coords() == vf.comp[i].coords());
        }
        // applied twice: (0, 0, a_0^{q^2})
        auto m2 = mult_by_pi_charp(m);
        CHECK(m2.comp[0].is_zero_rep());
        CHECK(m2.comp[1].is_zero_rep());
        CHECK(m2.comp[2].coords() == pow_elt(c[0], 4).coords());
    }
}

TEST_CASE("divisibility transfer: pi^i | w forces component valuations") {
    std::mt19937_64 rng(43);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        auto w = random_witt(cf.ctx, 4, rng);
        const long e_rel = cf.ctx->e_rel();
        for (int i = 1; i <= 2; ++i) {
            auto piw = w;
            for (int t = 0; t < i; ++t) piw = pi_times(piw);
            for (int j = 0; j <= i; ++j) {
                auto v = valuation(piw.comp[j]);
                CHECK(v.at_least((i - j) * e_rel));
            }
        }
    }
}

TEST_CASE("first-component divisibility: Fr(y) = pi w' constructively") {
    std::mt19937_64 rng(47);
    for (auto& cf : desk_configs(8)) {
        CAPTURE(cf.name);
        auto y = random_witt(cf.ctx, 4, rng);
        y.comp[0] = cf.ctx->pi * y.comp[0];
        auto wprime = frobenius_divided_by_pi(y);
        auto lhs = pi_times(wprime);
        auto rhs = frobenius(y);
        CHECK(witt_equal_mod_p_pow(lhs, rhs, 7));
    }
}

TEST_CASE("dwork lift: teichmuller case and ghost roundtrip") {
    std::mt19937_64 rng(53);
    for (auto& cf : desk_configs(10)) {
        CAPTURE(cf.name);
        phi_witness frob = make_phi_witness(
            [q = cf.ctx->q](const ring_elt& x) { return pow_elt(x, q); });
        ring_elt a = random_elt(cf.ctx->R, rng);
        std::vector<ring_elt> y = {a, pow_elt(a, cf.ctx->q), pow_elt(a, cf.ctx->q * cf.ctx->q)};
        auto w = dwork_lift(cf.ctx, y, frob);
        CHECK(congruent_mod_p_pow(w.comp[0], a, 10));
        CHECK(valuation(w.comp[1]).at_least((10 - 1) * cf.ctx->R->e_top() - 2));
        CHECK(valuation(w.comp[2]).at_least((10 - 2) * cf.ctx->R->e_top() - 2));

        // ghost roundtrip for iterates of a genuine endomorphism mod pi
        phi_witness ph = poly_phi(cf.ctx, {0, (long)cf.ctx->F->p(), 0, 1}); // x^3 + p x
        if (cf.ctx->q != 3) continue; // phi = x^q mod pi only for q = 3
        ring_elt r = random_elt(cf.ctx->R, rng);
        std::vector<ring_elt> yy = {r, ph.eval(r), ph.eval(ph.eval(r))};
        auto lift = dwork_lift(cf.ctx, yy, ph);
        auto g = ghost(lift);
        for (int i = 0; i < 3; ++i)
            CHECK(congruent_mod_p_pow(cf.ctx->R->carry_to(g[i]).with_known(
                                          g[i].known_precision()),
                                      yy[i], g[i].known_precision()));
    }
}

TEST_CASE("dwork lift: polynomial example over p = q = 2") {
    // phi(x) = x^2 + 2x, y = (c, phi(c), phi^2(c)) lifts to (c, c, c^3+c^2+c)
    auto B = base_ring(2, 12);
    auto ctx = witt_ctx::make(B, B, 2);
    phi_witness ph = poly_phi(ctx, {0, 2, 1});
    std::mt19937_64 rng(59);
    for (int t = 0; t < 10; ++t) {
        ring_elt c = random_elt(B, rng);
        std::vector<ring_elt> y = {c, ph.eval(c), ph.eval(ph.eval(c))};
        auto w = dwork_lift(ctx, y, ph);
        CHECK(congruent_mod_p_pow(w.comp[0], c, 12));
        CHECK(congruent_mod_p_pow(w.comp[1], c, 11));
        CHECK(congruent_mod_p_pow(w.comp[2], pow_elt(c, 3) + c * c + c, 10));
    }
}

TEST_CASE("dwork lift: compatibility violation is reported with its index") {
    auto B = base_ring(2, 8);
    auto ctx = witt_ctx::make(B, B, 2);
    phi_witness frob = make_phi_witness([](const ring_elt& x) { return x * x; });
    std::vector<ring_elt> y = {B->one(), B->zero()};
    CHECK_THROWS_WITH_AS(dwork_lift(ctx, y, frob), doctest::Contains("mod pi^1"),
                         compatibility_violation);
}

TEST_CASE("lambda_phi: section, ghost components, intertwining") {
    auto B = base_ring(2, 12);
    auto ctx = witt_ctx::make(B, B, 2);
    phi_witness ph = poly_phi(ctx, {0, 2, 1}); // x^2 + 2x
    CHECK(verify_phi_on_samples(ctx, ph, 10, 7));
    std::mt19937_64 rng(61);
    for (int t = 0; t < 5; ++t) {
        ring_elt r = random_elt(B, rng);
        auto lam = lambda_phi(ctx, r, ph, 4);
        CHECK(congruent_mod_p_pow(lam.comp[0], r, 12));
        auto g = ghost(lam);
        ring_elt it = r;
        for (int i = 0; i < 4; ++i) {
            CHECK(congruent_mod_pi_pow(g[i], B->carry_to(it), 12 - i));
            it = ph.eval(it);
        }
        // Fr(lambda(r)) = lambda(phi(r)) at reduced length
        auto lhs = frobenius(lam);
        auto rhs = lambda_phi(ctx, ph.eval(r), ph, 3);
        CHECK(witt_equal_mod_p_pow(lhs, rhs, 9));
    }
    // phi = x^q gives the teichmuller lift
    phi_witness frq = make_phi_witness([](const ring_elt& x) { return x * x; });
    ring_elt r = random_elt(B, rng);
    auto lam = lambda_phi(ctx, r, frq, 3);
    CHECK(congruent_mod_p_pow(lam.comp[0], r, 12));
    CHECK(valuation(lam.comp[1]).at_least(10));
    CHECK(valuation(lam.comp[2]).at_least(9));
}

TEST_CASE("scalar embedding has constant ghost") {
    for (auto& cf : desk_configs(10)) {
        CAPTURE(cf.name);
        ring_elt c = cf.ctx->R->from_int(7);
        auto w = scalar_witt(cf.ctx, c, 3);
        auto g = ghost(w);
        for (auto& v : g)
            CHECK(congruent_mod_p_pow(cf.ctx->R->carry_to(v).with_known(v.known_precision()),
                                      c, v.known_precision()));
    }
}

TEST_CASE("witt length bounds enforced") {
    auto B = base_ring(2, 8);
    auto ctx = witt_ctx::make(B, B, 2);
    CHECK_THROWS_AS(make_witt(ctx, std::vector<ring_elt>(6, B->zero())), length_mismatch);
    CHECK_THROWS_AS(make_witt(ctx, {}), length_mismatch);
    CHECK_THROWS_AS(frobenius(teichmuller(ctx, B->one(), 1)), length_too_short);
    auto w1 = make_witt(ctx, {B->one(), B->zero()});
    auto w2 = make_witt(ctx, {B->one(), B->zero(), B->zero()});
    CHECK_THROWS_AS(witt_add(w1, w2), length_mismatch);
}
