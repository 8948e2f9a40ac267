#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lehmer {

/// Integer polynomial with ascending coefficients. The zero polynomial has no
/// coefficients and degree -1; otherwise the last coefficient is nonzero.
class IntPoly {
  public:
    IntPoly() = default;
    explicit IntPoly(std::vector<mpz_class> coeffs);
    IntPoly(std::initializer_list<long> coeffs);
    static IntPoly monomial(const mpz_class& c, int k);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    /// Coefficient of x^k; zero beyond the degree.
    mpz_class coeff(int k) const;
    const mpz_class& leading() const { return c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    /// Sign of p(q), exact.
    int sign_at(const mpq_class& q) const;
    IntPoly derivative() const;
    /// p(-x).
    IntPoly reflect() const;
    /// p(x + a).
    IntPoly shift(const mpz_class& a) const;
    /// Divides out the content; leading coefficient made positive.
    IntPoly primitive() const;
    bool is_palindromic() const;

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    IntPoly operator-() const;
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

    std::string to_string() const;

  private:
    void trim();
    std::vector<mpz_class> c_;
};

/// Exact quotient a / b when b divides a over Z[x].
std::optional<IntPoly> exact_divide(const IntPoly& a, const IntPoly& b);
/// Primitive gcd with positive leading coefficient.
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);
/// Factors (q_i, i) with p = c * prod q_i^i and each q_i squarefree, pairwise coprime.
std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& p);
IntPoly squarefree_part(const IntPoly& p);
/// Integer B with every complex root strictly inside |z| < B.
mpz_class cauchy_bound(const IntPoly& p);

class SturmChain {
  public:
    /// Built on the squarefree part of p.
    explicit SturmChain(const IntPoly& p);
    /// Distinct real roots in (a, b].
    int count(const mpq_class& a, const mpq_class& b) const;
    int variations(const mpq_class& x) const;
    const IntPoly& base() const { return seq_.front(); }

  private:
    std::vector<IntPoly> seq_;
};

int sturm_count(const IntPoly& p, const mpq_class& a, const mpq_class& b);

/// True iff p is monic and every root lies in [-2, 2]. Requires all roots real.
bool is_cyclotomic_spectrum(const IntPoly& p);

/// Same predicate on a real-rooted monic polynomial by Descartes' rule applied
/// to p(x+2) and p(-x-2); exact for real-rooted inputs.
bool spectrum_within_two(const IntPoly& p);
/// Fixed-width variant; coefficients ascending, leading coefficient 1.
bool spectrum_within_two(const std::int64_t* coeffs, int degree);

struct RootInterval {
    mpq_class lo;
    mpq_class hi;  ///< The root lies in (lo, hi].
    int multiplicity = 1;
};

/// Disjoint isolating intervals, ascending, each of width < width.
std::vector<RootInterval> isolate_real_roots(const IntPoly& p, const mpq_class& width);

struct MahlerResult {
    mpq_class lower{1};
    mpq_class upper{1};
    std::vector<RootInterval> witnesses;
    bool certified = true;

    mpq_class width() const { return upper - lower; }
    /// "[lower, upper]" in decimal with outward rounding.
    std::string decimal(int digits = 12) const;
};

MahlerResult mahler_real_rooted(const IntPoly& p, const mpq_class& tol);
MahlerResult mahler_general(const IntPoly& p, const mpq_class& tol);

/// z^n g(z + 1/z) for monic g of degree n >= 1.
IntPoly associated_reciprocal(const IntPoly& g);
/// Inverse transform for palindromic P of even degree; nullopt otherwise.
std::optional<IntPoly> trace_polynomial(const IntPoly& p);

IntPoly cyclotomic_polynomial(int m);
bool is_cyclotomic_product(const IntPoly& p);

IntPoly lehmer_polynomial();
/// Enclosure of the Mahler measure of lehmer_polynomial(), computed once.
const MahlerResult& lehmer_constant();

/// Parses a decimal or fraction string ("1e-9", "0.001", "1/1000") exactly.
mpq_class parse_rational(const std::string& s);
std::string decimal_floor(const mpq_class& q, int digits);
std::string decimal_ceil(const mpq_class& q, int digits);

/// Coefficient file: optional "intpoly 1" header, then ascending integer
/// coefficients separated by whitespace.
IntPoly read_poly(const std::string& text);
std::string write_poly(const IntPoly& p);

}  // namespace lehmer
