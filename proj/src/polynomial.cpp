#include "lehmer/polynomial.hpp"

#include "lehmer/quadint.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <sstream>

namespace lehmer {

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
}

IntPoly IntPoly::monomial(const mpz_class& c, int k) {
    std::vector<mpz_class> v(static_cast<std::size_t>(k) + 1);
    v[static_cast<std::size_t>(k)] = c;
    return IntPoly(std::move(v));
}

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class IntPoly::coeff(int k) const {
    if (k < 0 || k > degree()) return 0;
    return c_[static_cast<std::size_t>(k)];
}

int IntPoly::sign_at(const mpq_class& q) const {
    if (c_.empty()) return 0;
    // Homogenised Horner: sum c_k num^k den^(deg-k) has the sign of p(q).
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    mpz_class acc = c_.back();
    mpz_class dp = 1;
    for (int k = degree() - 1; k >= 0; --k) {
        dp *= den;
        acc *= num;
        acc += c_[static_cast<std::size_t>(k)] * dp;
    }
    return sgn(acc);
}

IntPoly IntPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<mpz_class> v(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<unsigned long>(k);
    return IntPoly(std::move(v));
}

IntPoly IntPoly::reflect() const {
    IntPoly r = *this;
    for (std::size_t k = 1; k < r.c_.size(); k += 2) r.c_[k] = -r.c_[k];
    return r;
}

IntPoly IntPoly::shift(const mpz_class& a) const {
    std::vector<mpz_class> v = c_;
    const int n = degree();
    for (int i = 0; i < n; ++i) {
        for (int j = n - 1; j >= i; --j) v[static_cast<std::size_t>(j)] += a * v[static_cast<std::size_t>(j) + 1];
    }
    return IntPoly(std::move(v));
}

IntPoly IntPoly::primitive() const {
    if (c_.empty()) return {};
    mpz_class g = 0;
    for (const auto& c : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    if (c_.back() < 0) g = -g;
    IntPoly r = *this;
    if (g != 1) {
        for (auto& c : r.c_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }
    return r;
}

bool IntPoly::is_palindromic() const {
    const std::size_t n = c_.size();
    for (std::size_t k = 0; k < n / 2; ++k) {
        if (c_[k] != c_[n - 1 - k]) return false;
    }
    return true;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
    return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly IntPoly::operator-() const {
    IntPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPoly(std::move(v));
}

std::string IntPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const mpz_class& c = c_[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0 || a != 1) os << a.get_str();
        if (k > 0 && a != 1) os << "*";
        if (k >= 1) os << "x";
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

// ------------------------------------------------------- division and gcd

std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b) {
    if (b.is_zero()) throw ValidationError("division by the zero polynomial");
    if (a.is_zero()) return IntPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<mpz_class> r = a.coeffs();
    const auto& bc = b.coeffs();
    const int db = b.degree();
    std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db) + 1);
    for (int k = a.degree(); k >= db; --k) {
        mpz_class& top = r[static_cast<std::size_t>(k)];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), bc.back().get_mpz_t())) return std::nullopt;
        mpz_class t;
        mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), bc.back().get_mpz_t());
        q[static_cast<std::size_t>(k - db)] = t;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= t * bc[static_cast<std::size_t>(j)];
    }
    for (int k = 0; k < db; ++k) {
        if (r[static_cast<std::size_t>(k)] != 0) return std::nullopt;
    }
    return IntPoly(std::move(q));
}

namespace {

// Positive multiple of the remainder of a by b.
IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> r = a.coeffs();
    const auto& bc = b.coeffs();
    const int db = b.degree();
    const mpz_class& l = bc.back();
    const mpz_class al = abs(l);
    const int sl = sgn(l);
    int dr = a.degree();
    while (dr >= db) {
        const mpz_class t = r[static_cast<std::size_t>(dr)] * sl;
        for (auto& c : r) c *= al;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(dr - db + j)] -= t * bc[static_cast<std::size_t>(j)];
        while (dr >= 0 && r[static_cast<std::size_t>(dr)] == 0) --dr;
        r.resize(static_cast<std::size_t>(dr + 1));
    }
    return IntPoly(std::move(r));
}

// Content divided out while keeping the sign.
IntPoly content_free(const IntPoly& p) {
    IntPoly q = p.primitive();
    if (!p.is_zero() && sgn(p.leading()) != sgn(q.leading())) q = -q;
    return q;
}

}  // namespace

IntPoly poly_gcd(const IntPoly& a0, const IntPoly& b0) {
    IntPoly a = a0.primitive();
    IntPoly b = b0.primitive();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b).primitive();
        a = std::move(b);
        b = std::move(r);
    }
    return a.primitive();
}

std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& p) {
    std::vector<std::pair<IntPoly, int>> out;
    if (p.degree() < 1) return out;
    IntPoly g = poly_gcd(p, p.derivative());
    IntPoly s = *exact_divide(p.primitive(), g);
    for (int i = 1; s.degree() > 0; ++i) {
        IntPoly h = poly_gcd(s, g);
        IntPoly f = *exact_divide(s, h);
        if (f.degree() > 0) out.emplace_back(f.primitive(), i);
        g = *exact_divide(g, h);
        s = std::move(h);
    }
    return out;
}

IntPoly squarefree_part(const IntPoly& p) {
    if (p.degree() < 1) return p.primitive();
    IntPoly g = poly_gcd(p, p.derivative());
    return exact_divide(p.primitive(), g)->primitive();
}

mpz_class cauchy_bound(const IntPoly& p) {
    if (p.is_zero()) throw ValidationError("Cauchy bound of the zero polynomial");
    mpz_class m = 0;
    for (int k = 0; k < p.degree(); ++k) m = std::max<mpz_class>(m, abs(p.coeff(k)));
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), m.get_mpz_t(), mpz_class(abs(p.leading())).get_mpz_t());
    return q + 2;
}

// ------------------------------------------------------------------- Sturm

SturmChain::SturmChain(const IntPoly& p) {
    if (p.is_zero()) throw ValidationError("Sturm chain of the zero polynomial");
    seq_.push_back(squarefree_part(p));
    if (seq_[0].degree() < 1) return;
    seq_.push_back(content_free(seq_[0].derivative()));
    while (true) {
        const IntPoly& a = seq_[seq_.size() - 2];
        const IntPoly& b = seq_.back();
        if (b.degree() < 1) break;
        IntPoly r = pseudo_remainder(a, b);
        if (r.is_zero()) break;
        seq_.push_back(content_free(-r));
    }
}

int SturmChain::variations(const mpq_class& x) const {
    int v = 0;
    int last = 0;
    for (const auto& q : seq_) {
        const int s = q.sign_at(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

int SturmChain::count(const mpq_class& a, const mpq_class& b) const {
    if (!(a < b)) throw ValidationError("Sturm count needs a < b");
    if (seq_[0].degree() < 1) return 0;
    return variations(a) - variations(b);
}

int sturm_count(const IntPoly& p, const mpq_class& a, const mpq_class& b) {
    return SturmChain(p).count(a, b);
}

bool is_cyclotomic_spectrum(const IntPoly& p) {
    if (!p.is_monic()) throw ValidationError("is_cyclotomic_spectrum needs a monic polynomial");
    if (p.degree() < 1) return true;
    const SturmChain chain(p);
    // At least 3 so that (2, b] is nonempty; x^n has bound 2.
    const mpq_class b(std::max<mpz_class>(cauchy_bound(p), 3));
    const mpq_class two(2);
    if (chain.count(two, b) != 0) return false;
    // (-B, -2] minus a possible root at -2 gives [-B, -2) since -B is not a root.
    int below = chain.count(-b, -two);
    if (chain.base().sign_at(-two) == 0) --below;
    return below == 0;
}

namespace {

int sign_variations(const IntPoly& p) {
    int v = 0;
    int last = 0;
    for (const auto& c : p.coeffs()) {
        const int s = sgn(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

}  // namespace

bool spectrum_within_two(const IntPoly& p) {
    if (!p.is_monic()) throw ValidationError("spectrum_within_two needs a monic polynomial");
    const mpz_class two(2);
    return sign_variations(p.shift(two)) == 0 && sign_variations(p.reflect().shift(two)) == 0;
}

bool spectrum_within_two(const std::int64_t* coeffs, int degree) {
    // All roots <= 0 of a real-rooted monic polynomial means no negative coefficient.
    __int128 a[64];
    __int128 b[64];
    if (degree >= 63) {
        std::vector<mpz_class> v;
        for (int k = 0; k <= degree; ++k) v.emplace_back(static_cast<long>(coeffs[k]));
        return spectrum_within_two(IntPoly(std::move(v)));
    }
    for (int k = 0; k <= degree; ++k) {
        a[k] = coeffs[k];
        b[k] = (k % 2 == 0) ? coeffs[k] : -static_cast<__int128>(coeffs[k]);
    }
    if (degree % 2 == 1) {
        for (int k = 0; k <= degree; ++k) b[k] = -b[k];
    }
    for (__int128* v : {a, b}) {
        for (int i = 0; i < degree; ++i) {
            for (int j = degree - 1; j >= i; --j) {
                __int128 t;
                if (__builtin_add_overflow(v[j + 1], v[j + 1], &t) || __builtin_add_overflow(v[j], t, &v[j])) {
                    std::vector<mpz_class> w;
                    for (int k = 0; k <= degree; ++k) w.emplace_back(static_cast<long>(coeffs[k]));
                    return spectrum_within_two(IntPoly(std::move(w)));
                }
            }
        }
        for (int k = 0; k <= degree; ++k) {
            if (v[k] < 0) return false;
        }
    }
    return true;
}

// --------------------------------------------------------------- isolation

namespace {

void bisect(const SturmChain& chain, const mpq_class& lo, const mpq_class& hi, int cnt, const mpq_class& width,
            std::vector<RootInterval>& out) {
    if (cnt == 0) return;
    if (cnt == 1 && hi - lo < width) {
        out.push_back(RootInterval{lo, hi, 1});
        return;
    }
    mpq_class mid = (lo + hi) / 2;
    const int left = chain.count(lo, mid);
    bisect(chain, lo, mid, left, width, out);
    bisect(chain, mid, hi, cnt - left, width, out);
}

void assign_multiplicities(const IntPoly& p, std::vector<RootInterval>& roots) {
    const auto factors = squarefree_decomposition(p);
    if (factors.size() == 1) {
        for (auto& r : roots) r.multiplicity = factors[0].second;
        return;
    }
    std::vector<SturmChain> chains;
    for (const auto& f : factors) chains.emplace_back(f.first);
    for (auto& r : roots) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (chains[i].count(r.lo, r.hi) == 1) {
                r.multiplicity = factors[i].second;
                break;
            }
        }
    }
}

void refine_once(const SturmChain& chain, RootInterval& r) {
    mpq_class mid = (r.lo + r.hi) / 2;
    if (chain.count(r.lo, mid) == 1) {
        r.hi = mid;
    } else {
        r.lo = mid;
    }
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const IntPoly& p, const mpq_class& width) {
    if (p.is_zero()) throw ValidationError("cannot isolate roots of the zero polynomial");
    if (width <= 0) throw ValidationError("isolation width must be positive");
    std::vector<RootInterval> out;
    if (p.degree() < 1) return out;
    const SturmChain chain(p);
    const mpq_class b(cauchy_bound(p));
    bisect(chain, -b, b, chain.count(-b, b), width, out);
    assign_multiplicities(p, out);
    return out;
}

// ----------------------------------------------------------------- Mahler

namespace {

class Mpfr {
  public:
    Mpfr() { mpfr_init2(v_, 256); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

  private:
    mpfr_t v_;
};

// (x + sqrt(x^2 - 4)) / 2 for rational x >= 2, rounded in direction rnd.
void reciprocal_root(const mpq_class& x, mpfr_rnd_t rnd, mpfr_ptr out) {
    Mpfr t;
    Mpfr s;
    mpfr_set_q(t.get(), x.get_mpq_t(), rnd);
    mpfr_sqr(s.get(), t.get(), rnd);
    mpfr_sub_ui(s.get(), s.get(), 4, rnd);
    if (mpfr_sgn(s.get()) < 0) mpfr_set_zero(s.get(), 1);
    mpfr_sqrt(s.get(), s.get(), rnd);
    mpfr_add(out, t.get(), s.get(), rnd);
    mpfr_div_2ui(out, out, 1, rnd);
    if (mpfr_cmp_ui(out, 1) < 0) mpfr_set_ui(out, 1, rnd);
}

void enclose_product(const std::vector<RootInterval>& roots, MahlerResult& res) {
    Mpfr lo;
    Mpfr hi;
    Mpfr f;
    mpfr_set_ui(lo.get(), 1, MPFR_RNDD);
    mpfr_set_ui(hi.get(), 1, MPFR_RNDU);
    for (const auto& r : roots) {
        // Root in (r.lo, r.hi]; for negative roots |x| lies in [-hi, -lo).
        const bool positive = r.lo >= 2;
        const mpq_class a = positive ? r.lo : mpq_class(-r.hi);
        const mpq_class b = positive ? r.hi : mpq_class(-r.lo);
        for (int m = 0; m < r.multiplicity; ++m) {
            reciprocal_root(a, MPFR_RNDD, f.get());
            mpfr_mul(lo.get(), lo.get(), f.get(), MPFR_RNDD);
            reciprocal_root(b, MPFR_RNDU, f.get());
            mpfr_mul(hi.get(), hi.get(), f.get(), MPFR_RNDU);
        }
    }
    mpfr_get_q(res.lower.get_mpq_t(), lo.get());
    mpfr_get_q(res.upper.get_mpq_t(), hi.get());
}

void require_tol(const mpq_class& tol) {
    if (tol <= 0) throw ValidationError("tolerance must be positive");
}

IntPoly strip_root(IntPoly p, long r) {
    const IntPoly lin{-r, 1};
    while (p.degree() >= 1 && p.sign_at(mpq_class(r)) == 0) p = *exact_divide(p, lin);
    return p;
}

}  // namespace

MahlerResult mahler_real_rooted(const IntPoly& p0, const mpq_class& tol) {
    require_tol(tol);
    if (!p0.is_monic()) throw ValidationError("mahler_real_rooted needs a monic polynomial");
    MahlerResult res;
    IntPoly p = strip_root(strip_root(p0, 2), -2);
    if (p.degree() < 1 || is_cyclotomic_spectrum(p)) return res;

    const SturmChain chain(p);
    // At least 3 so that (2, b] is nonempty; x^n has bound 2.
    const mpq_class b(std::max<mpz_class>(cauchy_bound(p), 3));
    const mpq_class two(2);
    std::vector<RootInterval> roots;
    bisect(chain, -b, -two, chain.count(-b, -two), mpq_class(1), roots);
    bisect(chain, two, b, chain.count(two, b), mpq_class(1), roots);
    assign_multiplicities(p, roots);

    for (int iter = 0;; ++iter) {
        enclose_product(roots, res);
        if (res.width() <= tol) break;
        if (iter > 4000) throw std::runtime_error("Mahler enclosure failed to converge");
        for (auto& r : roots) refine_once(chain, r);
    }
    res.witnesses = std::move(roots);
    return res;
}

namespace {

// Certified product of max(1, |x|) over the real roots of a real-rooted p.
MahlerResult mahler_real_roots_direct(const IntPoly& p, const mpq_class& tol) {
    MahlerResult res;
    const SturmChain chain(p);
    const mpq_class b(cauchy_bound(p));
    const mpq_class one(1);
    std::vector<RootInterval> roots;
    bisect(chain, -b, -one, chain.count(-b, -one), one, roots);
    bisect(chain, one, b, chain.count(one, b), one, roots);
    // A root at -1 lands in (-B, -1] and contributes 1 either way.
    assign_multiplicities(p, roots);
    for (int iter = 0;; ++iter) {
        mpq_class lo = 1;
        mpq_class hi = 1;
        for (const auto& r : roots) {
            const bool positive = r.lo >= 1;
            const mpq_class a = positive ? r.lo : mpq_class(-r.hi);
            const mpq_class c = positive ? r.hi : mpq_class(-r.lo);
            for (int m = 0; m < r.multiplicity; ++m) {
                lo *= std::max(a, one);
                hi *= std::max(c, one);
            }
        }
        res.lower = lo;
        res.upper = hi;
        if (res.width() <= tol) break;
        if (iter > 4000) throw std::runtime_error("Mahler enclosure failed to converge");
        for (auto& r : roots) refine_once(chain, r);
    }
    res.witnesses = std::move(roots);
    return res;
}

bool is_real_rooted(const IntPoly& p) {
    const IntPoly s = squarefree_part(p);
    if (s.degree() < 1) return true;
    const mpq_class b(cauchy_bound(s));
    return sturm_count(s, -b, b) == s.degree();
}

using cld = std::complex<long double>;

MahlerResult mahler_aberth(const IntPoly& p) {
    const int n = p.degree();
    std::vector<long double> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = std::stold(p.coeff(k).get_str());
    auto eval = [&](const cld& z, cld& d) {
        cld v = c[static_cast<std::size_t>(n)];
        d = 0;
        for (int k = n - 1; k >= 0; --k) {
            d = d * z + v;
            v = v * z + c[static_cast<std::size_t>(k)];
        }
        return v;
    };
    long double radius = 0;
    for (int k = 0; k < n; ++k) {
        radius = std::max(radius, std::pow(std::fabs(c[static_cast<std::size_t>(k)]), 1.0L / (n - k)));
    }
    radius = 2 * radius + 1;
    std::vector<cld> z(static_cast<std::size_t>(n));
    const long double pi = std::acos(-1.0L);
    for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(j)] = std::polar(radius, 2 * pi * j / n + 0.4L);
    for (int iter = 0; iter < 2000; ++iter) {
        long double worst = 0;
        for (int j = 0; j < n; ++j) {
            cld d;
            const cld v = eval(z[static_cast<std::size_t>(j)], d);
            if (v == cld(0)) continue;
            const cld w = v / d;
            cld s = 0;
            for (int k = 0; k < n; ++k) {
                if (k != j) s += 1.0L / (z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)]);
            }
            const cld step = w / (1.0L - w * s);
            z[static_cast<std::size_t>(j)] -= step;
            worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[static_cast<std::size_t>(j)])));
        }
        if (worst < 1e-18L) break;
    }
    long double lo = 1;
    long double hi = 1;
    for (const auto& zj : z) {
        cld d;
        const cld v = eval(zj, d);
        const long double r = std::abs(d) == 0 ? INFINITY : n * std::abs(v) / std::abs(d);
        lo *= std::max(1.0L, std::abs(zj) - r);
        hi *= std::max(1.0L, std::abs(zj) + r);
    }
    const long double pad = 64 * n * std::numeric_limits<long double>::epsilon();
    MahlerResult res;
    res.certified = false;
    res.lower = std::max(1.0, std::nextafter(static_cast<double>(lo * (1 - pad)), 0.0));
    res.upper = std::nextafter(static_cast<double>(hi * (1 + pad)), INFINITY);
    return res;
}

}  // namespace

MahlerResult mahler_general(const IntPoly& p0, const mpq_class& tol) {
    require_tol(tol);
    if (!p0.is_monic()) throw ValidationError("mahler_general needs a monic polynomial");
    std::vector<mpz_class> c = p0.coeffs();
    std::size_t k0 = 0;
    while (k0 < c.size() && c[k0] == 0) ++k0;
    const IntPoly p(std::vector<mpz_class>(c.begin() + static_cast<std::ptrdiff_t>(k0), c.end()));
    if (p.degree() < 1 || is_cyclotomic_product(p)) return MahlerResult{};
    if (auto g = trace_polynomial(p); g && is_real_rooted(*g)) return mahler_real_rooted(*g, tol);
    if (is_real_rooted(p)) return mahler_real_roots_direct(p, tol);
    return mahler_aberth(p);
}

std::string MahlerResult::decimal(int digits) const {
    return "[" + decimal_floor(lower, digits) + ", " + decimal_ceil(upper, digits) + "]";
}

// ------------------------------------------------------- reciprocal forms

IntPoly associated_reciprocal(const IntPoly& g) {
    if (!g.is_monic()) throw ValidationError("associated_reciprocal needs a monic polynomial");
    const int n = g.degree();
    if (n < 1) throw ValidationError("associated_reciprocal needs degree >= 1");
    const IntPoly q{1, 0, 1};
    IntPoly acc;
    IntPoly qk{1};
    for (int k = 0; k <= n; ++k) {
        if (g.coeff(k) != 0) acc = acc + IntPoly::monomial(g.coeff(k), n - k) * qk;
        qk = qk * q;
    }
    return acc;
}

std::optional<IntPoly> trace_polynomial(const IntPoly& p) {
    if (p.degree() < 2 || p.degree() % 2 != 0 || !p.is_palindromic()) return std::nullopt;
    const int m = p.degree() / 2;
    const IntPoly q{1, 0, 1};
    std::vector<IntPoly> qpow{IntPoly{1}};
    for (int k = 1; k <= m; ++k) qpow.push_back(qpow.back() * q);
    IntPoly rest = p;
    std::vector<mpz_class> g(static_cast<std::size_t>(m) + 1);
    for (int k = m; k >= 0; --k) {
        g[static_cast<std::size_t>(k)] = rest.coeff(m + k);
        if (g[static_cast<std::size_t>(k)] != 0) {
            rest = rest - IntPoly::monomial(g[static_cast<std::size_t>(k)], m - k) * qpow[static_cast<std::size_t>(k)];
        }
    }
    if (!rest.is_zero()) return std::nullopt;
    return IntPoly(std::move(g));
}

// ------------------------------------------------------------- cyclotomic

namespace {

int euler_phi(int m) {
    int r = m;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        r -= r / p;
    }
    if (m > 1) r -= r / m;
    return r;
}

int mobius(int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
    }
    if (m > 1) r = -r;
    return r;
}

}  // namespace

IntPoly cyclotomic_polynomial(int m) {
    if (m < 1) throw ValidationError("cyclotomic index must be positive");
    // Phi_m = prod_{e | m} (x^e - 1)^{mu(m/e)}.
    IntPoly num{1};
    IntPoly den{1};
    for (int e = 1; e <= m; ++e) {
        if (m % e != 0) continue;
        const int mu = mobius(m / e);
        if (mu == 0) continue;
        IntPoly f = IntPoly::monomial(1, e) - IntPoly{1};
        if (mu > 0) {
            num = num * f;
        } else {
            den = den * f;
        }
    }
    return *exact_divide(num, den);
}

bool is_cyclotomic_product(const IntPoly& p0) {
    if (p0.is_zero()) return false;
    std::vector<mpz_class> c = p0.coeffs();
    std::size_t k0 = 0;
    while (c[k0] == 0) ++k0;
    IntPoly p(std::vector<mpz_class>(c.begin() + static_cast<std::ptrdiff_t>(k0), c.end()));
    if (p.leading() < 0) p = -p;
    if (p.leading() != 1) return false;
    if (abs(p.coeff(0)) != 1) return false;
    const int n = p.degree();
    for (int m = 1; p.degree() > 0 && m <= 2 * n * n + 2; ++m) {
        if (euler_phi(m) > p.degree()) continue;
        const IntPoly phi = cyclotomic_polynomial(m);
        while (p.degree() >= phi.degree()) {
            auto q = exact_divide(p, phi);
            if (!q) break;
            p = std::move(*q);
        }
    }
    return p == IntPoly{1};
}

IntPoly lehmer_polynomial() { return IntPoly{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}; }

const MahlerResult& lehmer_constant() {
    static const MahlerResult value = mahler_general(lehmer_polynomial(), parse_rational("1e-12"));
    return value;
}

// --------------------------------------------------------------- decimals

mpq_class parse_rational(const std::string& s) {
    auto bad = [&] { return ValidationError("not a number: '" + s + "'"); };
    if (s.empty()) throw bad();
    if (s.find('/') != std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw bad();
        q.canonicalize();
        return q;
    }
    std::string mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        try {
            std::size_t used = 0;
            exp10 = std::stol(s.substr(e + 1), &used);
            if (used != s.size() - e - 1) throw bad();
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    bool neg = false;
    std::size_t i = 0;
    if (i < mant.size() && (mant[i] == '-' || mant[i] == '+')) neg = mant[i++] == '-';
    std::string digits;
    bool seen_dot = false;
    bool any = false;
    for (; i < mant.size(); ++i) {
        const char ch = mant[i];
        if (ch == '.' && !seen_dot) {
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits += ch;
            any = true;
            if (seen_dot) --exp10;
        } else {
            throw bad();
        }
    }
    if (!any) throw bad();
    mpz_class v(digits, 10);
    if (neg) v = -v;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    mpq_class q = exp10 >= 0 ? mpq_class(v * scale) : mpq_class(v, scale);
    q.canonicalize();
    return q;
}

namespace {

std::string fixed_point(const mpz_class& n, int digits) {
    std::string s = mpz_class(abs(n)).get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits + 1) - s.size(), '0');
    if (digits > 0) s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return (n < 0 ? "-" : "") + s;
}

mpz_class scaled(const mpq_class& q, int digits) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    return q.get_num() * p;
}

}  // namespace

std::string decimal_floor(const mpq_class& q, int digits) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), scaled(q, digits).get_mpz_t(), q.get_den_mpz_t());
    return fixed_point(r, digits);
}

std::string decimal_ceil(const mpq_class& q, int digits) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), scaled(q, digits).get_mpz_t(), q.get_den_mpz_t());
    return fixed_point(r, digits);
}


IntPoly read_poly(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::string> tokens;
    for (std::string t; is >> t;) tokens.push_back(t);
    std::size_t i = 0;
    if (!tokens.empty() && tokens[0] == "intpoly") {
        if (tokens.size() < 2 || tokens[1] != "1") throw ValidationError("unsupported intpoly version");
        i = 2;
    }
    std::vector<mpz_class> c;
    for (; i < tokens.size(); ++i) {
        mpz_class v;
        const std::string& t = tokens[i];
        const std::size_t start = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (start == t.size() || !std::all_of(t.begin() + static_cast<std::ptrdiff_t>(start), t.end(), ::isdigit)) {
            throw ValidationError("bad coefficient '" + t + "'");
        }
        v.set_str(t[0] == '+' ? t.substr(1) : t, 10);
        c.push_back(v);
    }
    IntPoly p(std::move(c));
    if (p.is_zero()) throw ValidationError("polynomial file has no nonzero coefficient");
    return p;
}

std::string write_poly(const IntPoly& p) {
    std::string s = "intpoly 1\n";
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        if (i) s += ' ';
        s += p.coeffs()[i].get_str();
    }
    return s + "\n";
}

}  // namespace lehmer
