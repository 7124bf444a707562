#ifndef PERTURB_SERIES_HPP
#define PERTURB_SERIES_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "perturb/rational.hpp"

namespace perturb {

/// Symbols of the coefficient ring. n and y1 must never carry negative
/// exponents; x, y, y0 may (Laurent directions).
enum class Sym : int { n = 0, x = 1, y = 2, y0 = 3, y1 = 4 };

inline constexpr int kSymCount = 5;

const char* sym_name(Sym s);

/// Power product over the five symbols, stored as an exponent vector.
struct Monomial {
    std::array<int, kSymCount> exp{};

    static Monomial one() { return Monomial{}; }
    static Monomial var(Sym s, int e = 1);

    int operator[](Sym s) const { return exp[static_cast<int>(s)]; }
    int& operator[](Sym s) { return exp[static_cast<int>(s)]; }

    bool is_one() const;
    Monomial operator*(const Monomial& o) const;
    Monomial pow(int e) const;
    /// Multiplicative inverse; requires zero exponents on n and y1.
    Monomial inverse() const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.exp < b.exp; }

    std::string str() const;
};

/// Laurent polynomial over {n, x, y, y0, y1} with exact rational
/// coefficients. Zero coefficients are never stored, so representation
/// equality is structural equality.
class Polynomial {
  public:
    Polynomial() = default;

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return constant(Rational(1)); }
    static Polynomial constant(const Rational& c);
    static Polynomial variable(Sym s, int e = 1);
    static Polynomial term(const Monomial& m, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_constant() const;
    /// True when the polynomial is a single term (a unit of the Laurent
    /// ring when that term's monomial avoids n and y1).
    bool is_single_term() const { return terms_.size() == 1; }
    std::size_t term_count() const { return terms_.size(); }

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    Rational coeff(const Monomial& m) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    Polynomial scaled(const Rational& c) const;
    Polynomial times_monomial(const Monomial& m) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Highest power of n appearing in any term (0 for the zero polynomial).
    int degree_n() const;
    /// Evaluate n at an exact rational value, collapsing the n dimension.
    Polynomial substitute_n(const Rational& value) const;

    /// Numeric evaluation; values indexed by Sym. Negative exponents use
    /// exact binary powering of the reciprocal.
    double eval(const std::array<double, kSymCount>& values) const;

    /// Deterministic rendering: terms in descending lexicographic exponent
    /// order, e.g. "-x^2 + y^2".
    std::string str() const;

    void add_term(const Monomial& m, const Rational& c);

  private:
    std::map<Monomial, Rational> terms_;
};

/// Exponent of the form a*n + b used by the generalized binomial series.
struct AffineExponent {
    long n_coeff = 0;
    long offset = 0;

    static AffineExponent integer(long b) { return {0, b}; }
    static AffineExponent n_minus(long c) { return {1, -c}; }
};

/// Polynomial in eps, truncated at a fixed order: sum of coeff(j) * eps^j
/// for j = 0..order. Coefficients live in the Laurent ring above.
class EpsSeries {
  public:
    explicit EpsSeries(int order);
    static EpsSeries from_poly(const Polynomial& p, int order, int eps_power = 0);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Polynomial& coeff(int j) const;
    void set_coeff(int j, Polynomial p);

    bool is_zero() const;

    /// Truncation to a lower (or equal) order.
    EpsSeries truncated(int new_order) const;
    /// Exact division by eps^s; the s lowest coefficients must vanish.
    EpsSeries shifted_down(int s) const;

    EpsSeries operator-() const;
    friend EpsSeries operator+(const EpsSeries& a, const EpsSeries& b);
    friend EpsSeries operator-(const EpsSeries& a, const EpsSeries& b);
    /// Cauchy product truncated to the shorter operand's order.
    friend EpsSeries operator*(const EpsSeries& a, const EpsSeries& b);

    EpsSeries scaled(const Rational& c) const;
    EpsSeries times_poly(const Polynomial& p) const;

    friend bool operator==(const EpsSeries& a, const EpsSeries& b) { return a.c_ == b.c_; }
    friend bool operator!=(const EpsSeries& a, const EpsSeries& b) { return !(a == b); }

    std::string str() const;

  private:
    std::vector<Polynomial> c_;
};

/// Coefficient of u^k in (1 + u)^(a*n + b): the falling factorial
/// (an+b)(an+b-1)...(an+b-k+1) / k!, expanded as a polynomial in n.
Polynomial generalized_binomial(const AffineExponent& m, int k);

/// (1 + eps*u)^(a*n + b) as an eps-series with coefficients
/// generalized_binomial(m, j) * u^j.
EpsSeries binomial_expand(const AffineExponent& m, const Polynomial& u, int order);

/// Multiplicative inverse of a series whose eps^0 coefficient is exactly 1.
EpsSeries geometric_invert(const EpsSeries& s);

/// Replace every power of `target` by the series `replacement`, re-expanding
/// and truncating to s.order(). Negative powers of `target` require the
/// replacement's eps^0 coefficient to be a single-term unit of the Laurent
/// ring (the ring has no inverses for general polynomials).
EpsSeries substitute(const EpsSeries& s, Sym target, const EpsSeries& replacement);

/// Bounds-checked coefficient access.
const Polynomial& extract_order(const EpsSeries& s, int j);

/// Exact synthetic division of a polynomial by (n - c). Every residue class
/// (grouped by the non-n part of each monomial) must divide exactly; a
/// nonzero remainder raises an error naming the offending group.
Polynomial poly_div_linear_n(const Polynomial& p, long c);

}  // namespace perturb

#endif
