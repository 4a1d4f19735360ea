#include "wittlift/local_ring.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace wittlift {

namespace {

bigint mod_reduce(const bigint& x, const bigint& m) {
    bigint r = x % m;
    if (r < 0) r += m;
    return r;
}

} // namespace

// ---------------------------------------------------------------- ring_elt

ring_elt::ring_elt(ring_ptr ring, std::vector<bigint> coords, int known)
    : ring_(std::move(ring)), coords_(std::move(coords)), known_(known) {
    assert((long)coords_.size() == ring_->dim());
}

ring_elt ring_elt::operator+(const ring_elt& o) const {
    if (!ring_->same_structure(*o.ring_, false)) throw ring_mismatch("add");
    ring_elt r(ring_, std::vector<bigint>(coords_.size()), std::min(known_, o.known_));
    ring_->add_span(coords_.data(), o.coords_.data(), r.coords_.data());
    return r;
}

ring_elt ring_elt::operator-(const ring_elt& o) const {
    if (!ring_->same_structure(*o.ring_, false)) throw ring_mismatch("sub");
    ring_elt r(ring_, std::vector<bigint>(coords_.size()), std::min(known_, o.known_));
    ring_->sub_span(coords_.data(), o.coords_.data(), r.coords_.data());
    return r;
}

ring_elt ring_elt::operator*(const ring_elt& o) const {
    if (!ring_->same_structure(*o.ring_, false)) throw ring_mismatch("mul");
    ring_elt r(ring_, std::vector<bigint>(coords_.size()), std::min(known_, o.known_));
    ring_->mul_span(coords_.data(), o.coords_.data(), r.coords_.data());
    return r;
}

ring_elt ring_elt::operator-() const {
    ring_elt r(ring_, coords_, known_);
    for (auto& c : r.coords_)
        if (c != 0) c = ring_->p_pow_M() - c;
    return r;
}

bool ring_elt::is_zero_rep() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const bigint& c) { return c == 0; });
}

// ------------------------------------------------- exact (unreduced) helpers

// Arithmetic on exact integer coordinates, used for ring constants whose true
// value must be known beyond the working modulus (e.g. unif^e_top / p).
namespace {

void exact_mul_span(const local_ring* R, const bigint* a, const bigint* b, bigint* out);

void exact_reduce_top(const local_ring* R, std::vector<bigint>& acc,
                      const std::vector<std::vector<bigint>>& poly) {
    const long sub = R->below()->dim();
    const int d = R->degree();
    std::vector<bigint> prod(sub);
    for (int t = 2 * d - 2; t >= d; --t) {
        bigint* head = acc.data() + t * sub;
        bool nz = false;
        for (long i = 0; i < sub; ++i)
            if (head[i] != 0) { nz = true; break; }
        if (!nz) continue;
        for (int j = 0; j < d; ++j) {
            exact_mul_span(R->below().get(), head, poly[j].data(), prod.data());
            for (long i = 0; i < sub; ++i) acc[(t - d + j) * sub + i] -= prod[i];
        }
        for (long i = 0; i < sub; ++i) head[i] = 0;
    }
}

void exact_mul_span(const local_ring* R, const bigint* a, const bigint* b, bigint* out) {
    if (!R->below()) {
        out[0] = a[0] * b[0];
        return;
    }
    const long sub = R->below()->dim();
    const int d = R->degree();
    std::vector<bigint> acc((2 * d - 1) * sub);
    std::vector<bigint> prod(sub);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            exact_mul_span(R->below().get(), a + i * sub, b + j * sub, prod.data());
            for (long k = 0; k < sub; ++k) acc[(i + j) * sub + k] += prod[k];
        }
    exact_reduce_top(R, acc, R->level_poly_exact());
    std::copy(acc.begin(), acc.begin() + R->dim(), out);
}

} // namespace

// --------------------------------------------------------------- local_ring

ring_ptr local_ring::make_base(long p, int precision) {
    if (p < 2) throw bad_descriptor("prime must be >= 2");
    if (precision < 2) throw precision_too_small("precision must be >= 2");
    auto r = std::shared_ptr<local_ring>(new local_ring());
    r->p_ = p;
    r->M_ = precision;
    r->pM_ = pow_bigint(p, precision);
    r->unif_exact_ = {bigint(p)};
    return finish(r, {bigint(p)}, false);
}

ring_ptr local_ring::extend(const ring_ptr& below, level_kind kind,
                            std::vector<std::vector<bigint>> poly_low,
                            std::vector<bigint> unif) {
    if (kind == level_kind::base) throw bad_descriptor("cannot extend by a base level");
    int d = (int)poly_low.size();
    if (d < 2) throw bad_descriptor("extension degree must be >= 2");
    auto r = std::shared_ptr<local_ring>(new local_ring());
    r->below_ = below;
    r->p_ = below->p_;
    r->M_ = below->M_;
    r->pM_ = below->pM_;
    r->kind_ = kind;
    r->deg_ = d;
    r->dim_ = below->dim_ * d;
    r->e_top_ = below->e_top_ * (kind == level_kind::eisenstein ? d : 1);
    r->f_top_ = below->f_top_ * (kind == level_kind::unramified ? d : 1);
    r->poly_exact_ = poly_low;
    for (auto& lc : poly_low) {
        if ((long)lc.size() != below->dim_) throw bad_descriptor("level poly coefficient dimension");
        std::vector<bigint> red(lc.size());
        for (size_t i = 0; i < lc.size(); ++i) red[i] = mod_reduce(lc[i], r->pM_);
        r->poly_.push_back(ring_elt(below, std::move(red), below->M_));
    }

    if (kind == level_kind::eisenstein) {
        for (int j = 0; j < d; ++j) {
            val_t v = valuation(r->poly_[j]);
            if (j == 0) {
                if (!v.exactly(1))
                    throw not_eisenstein("constant term must have valuation exactly 1");
            } else if (v.exact && v.v < 1) {
                throw not_eisenstein("coefficient of degree " + std::to_string(j) +
                                     " must lie in the maximal ideal");
            }
        }
    } else {
        auto kres = below->residue_ring();
        std::vector<ring_elt> rbar;
        for (auto& c : r->poly_) rbar.push_back(residue(c));
        if (d > 3) throw bad_descriptor("unramified extensions of degree > 3 are unsupported");
        long card = kres->residue_card();
        std::vector<bigint> pt(kres->dim());
        for (long n = 0; n < card; ++n) {
            long m = n;
            for (long i = 0; i < kres->dim(); ++i) {
                pt[i] = m % below->p_;
                m /= below->p_;
            }
            ring_elt x = kres->from_coords(pt, 1);
            ring_elt acc = kres->zero();
            ring_elt xp = kres->one();
            for (int j = 0; j < d; ++j) {
                acc += rbar[j] * xp;
                xp *= x;
            }
            acc += xp;
            if (acc.is_zero_rep())
                throw bad_descriptor("unramified level poly is reducible over the residue field");
        }
    }

    return finish(r, std::move(unif), false);
}

ring_ptr local_ring::finish(std::shared_ptr<local_ring> r, std::vector<bigint> unif,
                            bool residue_mode) {
    r->residue_mode_ = residue_mode;
    {
        bigint qr = 1;
        for (long i = 0; i < r->f_top_; ++i) qr *= r->p_;
        r->q_res_ = (qr > std::numeric_limits<long>::max()) ? -1 : (long)qr;
    }
    if ((long)unif.size() != r->dim_) throw bad_descriptor("uniformizer dimension mismatch");
    r->unif_exact_ = unif;
    std::vector<bigint> ured(unif.size());
    for (size_t i = 0; i < unif.size(); ++i) ured[i] = mod_reduce(unif[i], r->pM_);
    r->unif_ = ring_elt(r, std::move(ured), r->M_);

    ring_ptr self = r;

    // residue ring first: valuation/inversion below rely on it
    if (residue_mode) {
        r->residue_cache_ = self;
    } else if (!r->below_) {
        auto k = std::shared_ptr<local_ring>(new local_ring());
        k->p_ = r->p_;
        k->M_ = 1;
        k->pM_ = r->p_;
        r->residue_cache_ = finish(k, {bigint(r->p_)}, true);
    } else if (r->kind_ == level_kind::eisenstein) {
        r->residue_cache_ = r->below_->residue_ring();
    } else {
        auto kb = r->below_->residue_ring();
        std::vector<std::vector<bigint>> pl;
        for (auto& c : r->poly_) pl.push_back(residue(c).coords());
        auto k = std::shared_ptr<local_ring>(new local_ring());
        k->below_ = kb;
        k->p_ = r->p_;
        k->M_ = 1;
        k->pM_ = r->p_;
        k->kind_ = level_kind::unramified;
        k->deg_ = r->deg_;
        k->dim_ = kb->dim() * r->deg_;
        k->e_top_ = 1;
        k->f_top_ = kb->f_top() * r->deg_;
        k->poly_exact_ = pl;
        for (auto& lc : pl) k->poly_.push_back(ring_elt(kb, lc, 1));
        std::vector<bigint> uc(k->dim_);
        uc[0] = r->p_;
        r->residue_cache_ = finish(k, std::move(uc), true);
    }

    if (!residue_mode) {
        val_t vu = valuation(r->unif_);
        if (!vu.exactly(1))
            throw uniformizer_not_valuation_one(
                "designated uniformizer has valuation " +
                (vu.exact ? std::to_string(vu.v) : (">= " + std::to_string(vu.v))));

        // U = unif^e_top / p from exact coordinates; its inverse drives
        // lossless division by uniformizer powers.
        std::vector<bigint> acc(r->dim_);
        acc[0] = 1;
        std::vector<bigint> tmp(r->dim_);
        for (long i = 0; i < r->e_top_; ++i) {
            exact_mul_span(r.get(), acc.data(), r->unif_exact_.data(), tmp.data());
            acc.swap(tmp);
        }
        for (auto& c : acc) {
            if (c % r->p_ != 0) throw std::logic_error("unif^e_top not divisible by p");
            c = mod_reduce(c / r->p_, r->pM_);
        }
        ring_elt U(self, std::move(acc), r->M_);
        r->U_inv_ = invert_unit(U);
    }
    return self;
}

ring_ptr local_ring::residue_ring() const { return residue_cache_; }

ring_ptr local_ring::rebuilt_at(int precision) const {
    if (!below_) {
        auto r = std::shared_ptr<local_ring>(new local_ring());
        r->p_ = p_;
        r->M_ = precision;
        r->pM_ = pow_bigint(p_, precision);
        return finish(r, unif_exact_, residue_mode_ && precision == 1);
    }
    ring_ptr b = below_->rebuilt_at(precision);
    auto r = std::shared_ptr<local_ring>(new local_ring());
    r->below_ = b;
    r->p_ = p_;
    r->M_ = precision;
    r->pM_ = b->p_pow_M();
    r->kind_ = kind_;
    r->deg_ = deg_;
    r->dim_ = dim_;
    r->e_top_ = e_top_;
    r->f_top_ = f_top_;
    r->poly_exact_ = poly_exact_;
    for (auto& lc : poly_exact_) {
        std::vector<bigint> red(lc.size());
        for (size_t i = 0; i < lc.size(); ++i) red[i] = mod_reduce(lc[i], r->pM_);
        r->poly_.push_back(ring_elt(b, std::move(red), precision));
    }
    return finish(r, unif_exact_, residue_mode_ && precision == 1);
}

bool local_ring::has_ancestor(const local_ring* anc) const {
    for (const local_ring* r = this; r; r = r->below_.get())
        if (r == anc || r->same_structure(*anc, false)) return true;
    return false;
}

bool local_ring::same_structure(const local_ring& o, bool ignore_precision) const {
    if (this == &o) return true;
    if (p_ != o.p_ || deg_ != o.deg_ || kind_ != o.kind_ || dim_ != o.dim_) return false;
    if (!ignore_precision && M_ != o.M_) return false;
    if (poly_exact_ != o.poly_exact_) return false;
    if (!below_) return !o.below_;
    return o.below_ && below_->same_structure(*o.below_, ignore_precision);
}

ring_elt local_ring::zero() const {
    return ring_elt(shared_from_this(), std::vector<bigint>(dim_), M_);
}

ring_elt local_ring::one() const {
    std::vector<bigint> c(dim_);
    c[0] = 1 % pM_;
    return ring_elt(shared_from_this(), std::move(c), M_);
}

ring_elt local_ring::from_int(const bigint& n) const {
    std::vector<bigint> c(dim_);
    c[0] = mod_reduce(n, pM_);
    return ring_elt(shared_from_this(), std::move(c), M_);
}

ring_elt local_ring::from_coords(std::vector<bigint> coords, int known) const {
    if ((long)coords.size() != dim_) throw bad_descriptor("coordinate dimension mismatch");
    for (auto& c : coords) c = mod_reduce(c, pM_);
    return ring_elt(shared_from_this(), std::move(coords), known < 0 ? M_ : known);
}

ring_elt local_ring::embed(const ring_elt& z) const {
    if (z.ring().get() == this) return z;
    if (!has_ancestor(z.ring().get())) throw ring_mismatch("embed: not an ancestor");
    std::vector<bigint> c(dim_);
    std::copy(z.coords().begin(), z.coords().end(), c.begin());
    return ring_elt(shared_from_this(), std::move(c), z.known_precision());
}

ring_elt local_ring::carry_to(const ring_elt& z) const {
    if (!same_structure(*z.ring(), true)) throw ring_mismatch("carry_to: different tower");
    std::vector<bigint> c(dim_);
    for (long i = 0; i < dim_; ++i) c[i] = mod_reduce(z.coords()[i], pM_);
    return ring_elt(shared_from_this(), std::move(c), std::min(z.known_precision(), M_));
}

// ------------------------------------------------------------ span arithmetic

void local_ring::add_span(const bigint* a, const bigint* b, bigint* out) const {
    for (long i = 0; i < dim_; ++i) {
        out[i] = a[i] + b[i];
        if (out[i] >= pM_) out[i] -= pM_;
    }
}

void local_ring::sub_span(const bigint* a, const bigint* b, bigint* out) const {
    for (long i = 0; i < dim_; ++i) {
        out[i] = a[i] - b[i];
        if (out[i] < 0) out[i] += pM_;
    }
}

void local_ring::reduce_top(std::vector<bigint>& acc) const {
    const long sub = below_->dim_;
    std::vector<bigint> prod(sub);
    for (int t = 2 * deg_ - 2; t >= deg_; --t) {
        bigint* head = acc.data() + t * sub;
        bool nz = false;
        for (long i = 0; i < sub; ++i)
            if (head[i] != 0) { nz = true; break; }
        if (!nz) continue;
        for (int j = 0; j < deg_; ++j) {
            below_->mul_span(head, poly_[j].coords().data(), prod.data());
            below_->sub_span(acc.data() + (t - deg_ + j) * sub, prod.data(),
                             acc.data() + (t - deg_ + j) * sub);
        }
        for (long i = 0; i < sub; ++i) head[i] = 0;
    }
}

void local_ring::mul_span(const bigint* a, const bigint* b, bigint* out) const {
    if (!below_) {
        out[0] = mod_reduce(a[0] * b[0], pM_);
        return;
    }
    const long sub = below_->dim_;
    std::vector<bigint> acc((2 * deg_ - 1) * sub);
    std::vector<bigint> prod(sub);
    for (int i = 0; i < deg_; ++i)
        for (int j = 0; j < deg_; ++j) {
            below_->mul_span(a + i * sub, b + j * sub, prod.data());
            below_->add_span(acc.data() + (i + j) * sub, prod.data(),
                             acc.data() + (i + j) * sub);
        }
    reduce_top(acc);
    std::copy(acc.begin(), acc.begin() + dim_, out);
}

// ----------------------------------------------------------------- valuation

namespace {

ring_elt berkowitz_det(const std::vector<std::vector<ring_elt>>& A) {
    const int n = (int)A.size();
    const ring_ptr R = A[0][0].ring();
    if (n == 1) return A[0][0];
    std::vector<ring_elt> p = {R->one(), -A[0][0]};
    for (int r = 2; r <= n; ++r) {
        std::vector<ring_elt> firstcol;
        firstcol.push_back(R->one());
        firstcol.push_back(-A[r - 1][r - 1]);
        std::vector<ring_elt> w(r - 1);
        for (int i = 0; i < r - 1; ++i) w[i] = A[i][r - 1];
        for (int i = 0; i <= r - 2; ++i) {
            ring_elt s = R->zero();
            for (int j = 0; j < r - 1; ++j) s += A[r - 1][j] * w[j];
            firstcol.push_back(-s);
            if (i < r - 2) {
                std::vector<ring_elt> w2(r - 1, R->zero());
                for (int a = 0; a < r - 1; ++a)
                    for (int b = 0; b < r - 1; ++b) w2[a] += A[a][b] * w[b];
                w = std::move(w2);
            }
        }
        std::vector<ring_elt> np(r + 1, R->zero());
        for (int i = 0; i <= r; ++i)
            for (int j = 0; j < (int)p.size(); ++j)
                if (i - j >= 0 && i - j < (int)firstcol.size()) np[i] += firstcol[i - j] * p[j];
        p = std::move(np);
    }
    ring_elt det = p[n];
    if (n % 2 != 0) det = -det;
    return det;
}

} // namespace

ring_elt norm_down(const ring_elt& z, const local_ring* target) {
    ring_elt cur = z;
    while (cur.ring().get() != target && !cur.ring()->same_structure(*target, false)) {
        const local_ring* R = cur.ring().get();
        if (!R->below()) throw ring_mismatch("norm_down: target is not an ancestor");
        const ring_ptr below = R->below();
        const long sub = below->dim();
        const int d = R->degree();
        std::vector<std::vector<ring_elt>> A(d, std::vector<ring_elt>(d));
        std::vector<bigint> col(cur.coords());
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                std::vector<bigint> c(col.begin() + i * sub, col.begin() + (i + 1) * sub);
                A[i][j] = ring_elt(below, std::move(c), cur.known_precision());
            }
            if (j + 1 < d) {
                std::vector<bigint> acc((2 * d - 1) * sub);
                std::copy(col.begin(), col.end(), acc.begin() + sub);
                R->reduce_top(acc);
                col.assign(acc.begin(), acc.begin() + d * sub);
            }
        }
        cur = berkowitz_det(A);
    }
    return cur;
}

val_t valuation(const ring_elt& z) {
    const local_ring& R = *z.ring();
    const long K = z.known_precision();
    if (K < 1) throw precision_exhausted("valuation of an element with no known digits");
    const local_ring* base = &R;
    while (base->below()) base = base->below().get();
    ring_elt N = norm_down(z, base);
    const bigint& n = N.coords()[0];
    if (n == 0) return {false, K * R.e_top()};
    long t = vp_int(n, R.p());
    if (t >= K * R.dim()) return {false, K * R.e_top()};
    if (t % R.f_top() != 0) throw std::logic_error("norm valuation not divisible by inertia degree");
    return {true, t / R.f_top()};
}

// ------------------------------------------------------------------ residue

namespace {

void residue_span(const local_ring* R, const bigint* a, const local_ring* KR, bigint* out) {
    if (!R->below()) {
        out[0] = a[0] % R->p();
        return;
    }
    if (R->kind() == level_kind::eisenstein) {
        residue_span(R->below().get(), a, KR, out);
        return;
    }
    const long sub = R->below()->dim();
    const long ksub = KR->below()->dim();
    for (int j = 0; j < R->degree(); ++j)
        residue_span(R->below().get(), a + j * sub, KR->below().get(), out + j * ksub);
}

std::vector<long> residue_basis_positions(const local_ring* R) {
    if (!R->below()) return {0};
    auto sub = residue_basis_positions(R->below().get());
    if (R->kind() == level_kind::eisenstein) return sub;
    std::vector<long> out;
    long stride = R->below()->dim();
    for (int j = 0; j < R->degree(); ++j)
        for (long s : sub) out.push_back(j * stride + s);
    return out;
}

ring_elt naive_lift(const ring_elt& rbar, const ring_ptr& into) {
    std::vector<long> pos = residue_basis_positions(into.get());
    std::vector<bigint> c(into->dim());
    for (size_t i = 0; i < pos.size(); ++i) c[pos[i]] = rbar.coords()[i];
    return into->from_coords(std::move(c));
}

// Newton inversion from a start correct modulo the maximal ideal.
ring_elt newton_invert(const ring_elt& z, ring_elt x) {
    const local_ring& R = *z.ring();
    long need = (long)R.precision() * R.e_top();
    long steps = 1;
    while ((1L << steps) < need + 1) ++steps;
    ring_elt two = R.from_int(2);
    for (long i = 0; i <= steps; ++i) x = x * (two - z * x);
    return ring_elt(x.ring(), x.coords(), z.known_precision());
}

} // namespace

ring_elt residue(const ring_elt& z) {
    if (z.known_precision() < 1) throw precision_exhausted("residue needs one known digit");
    ring_ptr K = z.ring()->residue_ring();
    std::vector<bigint> out(K->dim());
    residue_span(z.ring().get(), z.coords().data(), K.get(), out.data());
    return ring_elt(K, std::move(out), 1);
}

// ------------------------------------------------------------------ division

ring_elt exact_divide(const ring_elt& z, long k) {
    return exact_divide_by(z, z.ring()->uniformizer(), k);
}

ring_elt exact_divide_by(const ring_elt& z, const ring_elt& w, long n) {
    if (n == 0) return z;
    if (n < 0) throw bad_descriptor("exact_divide: negative exponent");
    const local_ring* lvl = w.ring().get();
    if (!z.ring()->has_ancestor(lvl)) throw ring_mismatch("exact_divide_by: level not in tower");
    if (!(w.coords() == lvl->uniformizer().coords()))
        throw bad_descriptor("exact_divide_by divides by designated uniformizer powers only");
    const long e = lvl->e_top();
    const long j = ceil_div(n, e);
    const long ratio = z.ring()->e_top() / e;

    val_t v = valuation(z);
    if (v.exact && v.v < n * ratio)
        throw not_divisible("valuation " + std::to_string(v.v) + " below " +
                            std::to_string(n * ratio));

    const int known = z.known_precision();
    if (known - j < 1)
        throw precision_exhausted("division by uniformizer^" + std::to_string(n) +
                                  " exhausts known precision");

    // z / w^n = z * w^(e*j - n) * U^{-j} / p^j  with w^e = p * U in lvl
    ring_elt factor = lvl->U_inv();
    factor = pow_elt(factor, bigint(j));
    for (long i = 0; i < e * j - n; ++i) factor *= w;
    ring_elt t = z * z.ring()->embed(factor);

    const bigint pj = pow_bigint(z.ring()->p(), j);
    const bigint pcheck = pow_bigint(z.ring()->p(), std::min<long>(j, known));
    std::vector<bigint> c(t.coords());
    for (auto& x : c) {
        if (x % pcheck != 0) throw not_divisible("coordinate not divisible at known precision");
        x /= pj;
    }
    return ring_elt(z.ring(), std::move(c), known - (int)j);
}

ring_elt invert_unit(const ring_elt& z) {
    val_t v = valuation(z);
    if (!v.exactly(0)) throw not_divisible("invert_unit: not a unit");
    ring_elt rbar = residue(z);
    long card = rbar.ring()->residue_card();
    if (card < 0) throw bad_descriptor("residue field too large for inversion");
    ring_elt ibar = pow_elt(rbar, bigint(card - 2));
    return newton_invert(z, naive_lift(ibar, z.ring()));
}

ring_elt pow_elt(ring_elt base, bigint exp) {
    if (exp < 0) throw bad_descriptor("pow_elt: negative exponent");
    ring_elt r(base.ring(), base.ring()->one().coords(), base.known_precision());
    while (exp > 0) {
        if ((exp & 1) != 0) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

bool congruent_mod_p_pow(const ring_elt& a, const ring_elt& b, int k) {
    if (!a.ring()->same_structure(*b.ring(), false)) throw ring_mismatch("congruence");
    if (k > std::min(a.known_precision(), b.known_precision()))
        throw precision_exhausted("congruence check beyond known precision");
    const bigint pk = pow_bigint(a.ring()->p(), k);
    for (long i = 0; i < a.ring()->dim(); ++i)
        if ((a.coords()[i] - b.coords()[i]) % pk != 0) return false;
    return true;
}

bool congruent_mod_pi_pow(const ring_elt& a, const ring_elt& b, long t) {
    ring_elt d = a - b;
    if (d.is_zero_rep()) return true;
    return valuation(d).at_least(t);
}

ring_elt qth_root(const ring_elt& z, long q) {
    const local_ring& K = *z.ring();
    if (!K.is_residue_ring()) throw bad_descriptor("qth_root: residue rings only");
    if (z.is_zero_rep()) return z;
    long card = K.residue_card();
    if (card < 0) throw bad_descriptor("residue field too large for root extraction");
    long m = card - 1;
    long r;
    {
        long t0 = 0, t1 = 1, r0 = m, r1 = q % m;
        while (r1 != 0) {
            long qn = r0 / r1;
            long tmp = r0 - qn * r1;
            r0 = r1;
            r1 = tmp;
            tmp = t0 - qn * t1;
            t0 = t1;
            t1 = tmp;
        }
        if (r0 != 1) throw bad_descriptor("q not invertible mod residue card - 1");
        r = ((t0 % m) + m) % m;
    }
    return pow_elt(z, bigint(r));
}

ring_elt any_lift(const ring_elt& rbar, const ring_ptr& into) {
    if (!rbar.ring()->is_residue_ring()) throw bad_descriptor("any_lift: residue input");
    if (!into->residue_ring()->same_structure(*rbar.ring(), false))
        throw ring_mismatch("any_lift: residue field mismatch");
    return naive_lift(rbar, into);
}

ring_elt teichmuller_lift(const ring_elt& rbar, const ring_ptr& into) {
    if (!rbar.ring()->is_residue_ring()) throw bad_descriptor("teichmuller_lift: residue input");
    ring_ptr K = into->residue_ring();
    if (!K->same_structure(*rbar.ring(), false))
        throw ring_mismatch("teichmuller_lift: residue field mismatch");
    ring_elt x = naive_lift(rbar, into);
    if (x.is_zero_rep()) return x;

    const bigint Q = pow_bigint(into->p(), into->f_top());
    long need = (long)into->precision() * into->e_top();
    long steps = 1;
    while ((1L << steps) < need + 1) ++steps;
    for (long i = 0; i <= steps; ++i) {
        ring_elt xq1 = pow_elt(x, Q - 1);
        ring_elt f = xq1 * x - x;
        ring_elt fp = into->from_int(Q) * xq1 - into->one(); // = -1 mod the maximal ideal
        x = x - f * newton_invert(fp, -into->one());
    }
    return x;
}

} // namespace wittlift
