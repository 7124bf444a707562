#include "perturb/series.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace perturb {

const char* sym_name(Sym s) {
    switch (s) {
        case Sym::n: return "n";
        case Sym::x: return "x";
        case Sym::y: return "y";
        case Sym::y0: return "y0";
        case Sym::y1: return "y1";
    }
    throw std::logic_error("sym_name: bad symbol");
}

Monomial Monomial::var(Sym s, int e) {
    Monomial m;
    m[s] = e;
    return m;
}

bool Monomial::is_one() const {
    for (int e : exp)
        if (e != 0) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kSymCount; ++i) r.exp[i] = exp[i] + o.exp[i];
    return r;
}

Monomial Monomial::pow(int e) const {
    Monomial r;
    for (int i = 0; i < kSymCount; ++i) r.exp[i] = exp[i] * e;
    return r;
}

Monomial Monomial::inverse() const {
    if ((*this)[Sym::n] != 0 || (*this)[Sym::y1] != 0)
        throw std::invalid_argument("Monomial::inverse: n and y1 are not invertible, got " + str());
    return pow(-1);
}

std::string Monomial::str() const {
    if (is_one()) return "1";
    std::string out;
    for (int i = 0; i < kSymCount; ++i) {
        if (exp[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += sym_name(static_cast<Sym>(i));
        if (exp[i] != 1) out += "^" + std::to_string(exp[i]);
    }
    return out;
}

namespace {

void check_ring_exponents(const Monomial& m) {
    if (m[Sym::n] < 0 || m[Sym::y1] < 0)
        throw std::invalid_argument("Polynomial: negative exponent on n or y1 in " + m.str());
}

}  // namespace

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    p.add_term(Monomial::one(), c);
    return p;
}

Polynomial Polynomial::variable(Sym s, int e) { return term(Monomial::var(s, e), Rational(1)); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
    Polynomial p;
    p.add_term(m, c);
    return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    check_ring_exponents(m);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool Polynomial::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second.is_one();
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::operator-() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r;
    if (c.is_zero()) return r;
    for (const auto& [m, q] : terms_) r.terms_.emplace(m, q * c);
    return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m) const {
    Polynomial r;
    for (const auto& [mt, c] : terms_) r.add_term(mt * m, c);
    return r;
}

int Polynomial::degree_n() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[Sym::n]);
    return d;
}

Polynomial Polynomial::substitute_n(const Rational& value) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        Rational factor(1);
        for (int i = 0; i < m[Sym::n]; ++i) factor *= value;
        Monomial rest = m;
        rest[Sym::n] = 0;
        r.add_term(rest, c * factor);
    }
    return r;
}

namespace {

double ipow(double base, int e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

}  // namespace

double Polynomial::eval(const std::array<double, kSymCount>& values) const {
    double sum = 0.0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (int i = 0; i < kSymCount; ++i)
            if (m.exp[i] != 0) t *= ipow(values[i], m.exp[i]);
        sum += t;
    }
    return sum;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Monomial& m = it->first;
        Rational c = it->second;
        bool negative = c.sign() < 0;
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        Rational a = negative ? -c : c;
        if (m.is_one()) {
            out += a.str();
        } else if (a.is_one()) {
            out += m.str();
        } else {
            out += a.str() + "*" + m.str();
        }
    }
    return out;
}

EpsSeries::EpsSeries(int order) {
    if (order < 0) throw std::invalid_argument("EpsSeries: negative order");
    c_.resize(static_cast<std::size_t>(order) + 1);
}

EpsSeries EpsSeries::from_poly(const Polynomial& p, int order, int eps_power) {
    EpsSeries s(order);
    if (eps_power < 0) throw std::invalid_argument("EpsSeries::from_poly: negative eps power");
    if (eps_power <= order) s.c_[eps_power] = p;
    return s;
}

const Polynomial& EpsSeries::coeff(int j) const {
    if (j < 0 || j > order())
        throw std::out_of_range("EpsSeries: order " + std::to_string(j) + " outside 0.." +
                                std::to_string(order()));
    return c_[static_cast<std::size_t>(j)];
}

void EpsSeries::set_coeff(int j, Polynomial p) {
    if (j < 0 || j > order())
        throw std::out_of_range("EpsSeries: order " + std::to_string(j) + " outside 0.." +
                                std::to_string(order()));
    c_[static_cast<std::size_t>(j)] = std::move(p);
}

bool EpsSeries::is_zero() const {
    for (const auto& p : c_)
        if (!p.is_zero()) return false;
    return true;
}

EpsSeries EpsSeries::truncated(int new_order) const {
    if (new_order < 0 || new_order > order())
        throw std::invalid_argument("EpsSeries::truncated: order " + std::to_string(new_order) +
                                    " outside 0.." + std::to_string(order()));
    EpsSeries r(new_order);
    for (int j = 0; j <= new_order; ++j) r.c_[j] = c_[j];
    return r;
}

EpsSeries EpsSeries::shifted_down(int s) const {
    if (s < 0 || s > order())
        throw std::invalid_argument("EpsSeries::shifted_down: shift " + std::to_string(s) +
                                    " outside 0.." + std::to_string(order()));
    for (int j = 0; j < s; ++j)
        if (!c_[j].is_zero())
            throw std::invalid_argument("EpsSeries::shifted_down: nonzero eps^" +
                                        std::to_string(j) + " coefficient " + c_[j].str());
    EpsSeries r(order() - s);
    for (int j = s; j <= order(); ++j) r.c_[j - s] = c_[j];
    return r;
}

EpsSeries EpsSeries::operator-() const {
    EpsSeries r(order());
    for (int j = 0; j <= order(); ++j) r.c_[j] = -c_[j];
    return r;
}

EpsSeries operator+(const EpsSeries& a, const EpsSeries& b) {
    int ord = std::min(a.order(), b.order());
    EpsSeries r(ord);
    for (int j = 0; j <= ord; ++j) r.c_[j] = a.c_[j] + b.c_[j];
    return r;
}

EpsSeries operator-(const EpsSeries& a, const EpsSeries& b) {
    int ord = std::min(a.order(), b.order());
    EpsSeries r(ord);
    for (int j = 0; j <= ord; ++j) r.c_[j] = a.c_[j] - b.c_[j];
    return r;
}

EpsSeries operator*(const EpsSeries& a, const EpsSeries& b) {
    int ord = std::min(a.order(), b.order());
    EpsSeries r(ord);
    for (int j = 0; j <= ord; ++j) {
        Polynomial sum;
        for (int i = 0; i <= j; ++i) sum += a.c_[i] * b.c_[j - i];
        r.c_[j] = std::move(sum);
    }
    return r;
}

EpsSeries EpsSeries::scaled(const Rational& c) const {
    EpsSeries r(order());
    for (int j = 0; j <= order(); ++j) r.c_[j] = c_[j].scaled(c);
    return r;
}

EpsSeries EpsSeries::times_poly(const Polynomial& p) const {
    EpsSeries r(order());
    for (int j = 0; j <= order(); ++j) r.c_[j] = c_[j] * p;
    return r;
}

std::string EpsSeries::str() const {
    std::string out;
    for (int j = 0; j <= order(); ++j) {
        if (c_[j].is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (j == 0) {
            out += "(" + c_[j].str() + ")";
        } else if (j == 1) {
            out += "eps*(" + c_[j].str() + ")";
        } else {
            out += "eps^" + std::to_string(j) + "*(" + c_[j].str() + ")";
        }
    }
    if (out.empty()) return "0";
    return out + " + O(eps^" + std::to_string(order() + 1) + ")";
}

Polynomial generalized_binomial(const AffineExponent& m, int k) {
    if (k < 0) throw std::invalid_argument("generalized_binomial: negative k");
    Polynomial r = Polynomial::one();
    for (int i = 0; i < k; ++i) {
        Polynomial factor = Polynomial::term(Monomial::var(Sym::n), Rational(m.n_coeff)) +
                            Polynomial::constant(Rational(m.offset - i));
        r = r * factor;
    }
    return r.scaled(Rational::factorial(static_cast<unsigned>(k)).inverse());
}

EpsSeries binomial_expand(const AffineExponent& m, const Polynomial& u, int order) {
    EpsSeries s(order);
    Polynomial u_pow = Polynomial::one();
    for (int j = 0; j <= order; ++j) {
        if (j > 0) u_pow = u_pow * u;
        s.set_coeff(j, generalized_binomial(m, j) * u_pow);
    }
    return s;
}

EpsSeries geometric_invert(const EpsSeries& s) {
    if (!s.coeff(0).is_one())
        throw std::invalid_argument("geometric_invert: eps^0 coefficient must be 1, got " +
                                    s.coeff(0).str());
    int ord = s.order();
    EpsSeries inv(ord);
    inv.set_coeff(0, Polynomial::one());
    for (int j = 1; j <= ord; ++j) {
        Polynomial acc;
        for (int i = 1; i <= j; ++i) acc += s.coeff(i) * inv.coeff(j - i);
        inv.set_coeff(j, -acc);
    }
    return inv;
}

EpsSeries substitute(const EpsSeries& s, Sym target, const EpsSeries& replacement) {
    int ord = std::min(s.order(), replacement.order());
    EpsSeries src = s.truncated(ord);
    EpsSeries rep = replacement.truncated(ord);

    int min_exp = 0, max_exp = 0;
    for (int j = 0; j <= ord; ++j)
        for (const auto& [m, c] : src.coeff(j).terms()) {
            min_exp = std::min(min_exp, m[target]);
            max_exp = std::max(max_exp, m[target]);
        }

    // Positive powers of the replacement.
    std::vector<EpsSeries> pos;
    pos.push_back(EpsSeries::from_poly(Polynomial::one(), ord));
    for (int e = 1; e <= max_exp; ++e) pos.push_back(pos.back() * rep);

    // Negative powers need a series inverse: factor the eps^0 coefficient
    // as unit * (1 + higher eps terms) and invert the parenthesis.
    std::vector<EpsSeries> neg;
    if (min_exp < 0) {
        const Polynomial& head = rep.coeff(0);
        if (head.is_zero())
            throw std::invalid_argument(
                "substitute: negative power of " + std::string(sym_name(target)) +
                " but the replacement's eps^0 coefficient is zero");
        if (!head.is_single_term())
            throw std::invalid_argument(
                "substitute: negative power of " + std::string(sym_name(target)) +
                " requires a single-term eps^0 coefficient (a Laurent unit), got " + head.str());
        const auto& [unit_mono, unit_coeff] = *head.terms().begin();
        Monomial unit_inv = unit_mono.inverse();
        Rational coeff_inv = unit_coeff.inverse();
        EpsSeries normalized = rep.scaled(coeff_inv).times_poly(Polynomial::term(unit_inv, Rational(1)));
        EpsSeries rep_inv = geometric_invert(normalized)
                                .scaled(coeff_inv)
                                .times_poly(Polynomial::term(unit_inv, Rational(1)));
        neg.push_back(EpsSeries::from_poly(Polynomial::one(), ord));
        for (int e = 1; e <= -min_exp; ++e) neg.push_back(neg.back() * rep_inv);
    }

    EpsSeries out(ord);
    for (int j = 0; j <= ord; ++j) {
        for (const auto& [m, c] : src.coeff(j).terms()) {
            int e = m[target];
            Monomial rest = m;
            rest[target] = 0;
            const EpsSeries& power = e >= 0 ? pos[e] : neg[-e];
            EpsSeries contrib = power.times_poly(Polynomial::term(rest, c));
            for (int i = 0; i + j <= ord; ++i)
                out.set_coeff(i + j, out.coeff(i + j) + contrib.coeff(i));
        }
    }
    return out;
}

const Polynomial& extract_order(const EpsSeries& s, int j) { return s.coeff(j); }

Polynomial poly_div_linear_n(const Polynomial& p, long c) {
    // Group terms by their non-n monomial part; each group is a univariate
    // polynomial in n that must be divisible by (n - c).
    std::map<Monomial, std::map<int, Rational>> groups;
    for (const auto& [m, q] : p.terms()) {
        Monomial rest = m;
        rest[Sym::n] = 0;
        groups[rest][m[Sym::n]] = q;
    }

    Polynomial quotient;
    const Rational root(c);
    for (const auto& [rest, coeffs] : groups) {
        int deg = coeffs.rbegin()->first;
        std::vector<Rational> a(static_cast<std::size_t>(deg) + 1);
        for (const auto& [e, q] : coeffs) a[static_cast<std::size_t>(e)] = q;

        // Synthetic division by (n - c), highest degree first.
        Rational carry(0);
        std::vector<Rational> b(static_cast<std::size_t>(deg));
        for (int e = deg; e >= 1; --e) {
            carry = a[static_cast<std::size_t>(e)] + carry * root;
            b[static_cast<std::size_t>(e - 1)] = carry;
        }
        Rational remainder = a[0] + carry * root;
        if (!remainder.is_zero())
            throw std::invalid_argument("poly_div_linear_n: remainder " + remainder.str() +
                                        " on group " + rest.str() + " dividing by (n - " +
                                        std::to_string(c) + ")");
        for (int e = 0; e < deg; ++e) {
            Monomial m = rest;
            m[Sym::n] = e;
            quotient.add_term(m, b[static_cast<std::size_t>(e)]);
        }
    }
    return quotient;
}

}  // namespace perturb
