#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "transversal/errors.hpp"

namespace trv {

// Exact rational with overflow-checked 64-bit arithmetic (coefficients in the
// emitted systems stay tiny; the checks are a guard, not a bignum substitute).
struct Rational {
    long long num = 0;
    long long den = 1; // always > 0, gcd(|num|, den) = 1

    Rational() = default;
    Rational(long long n) : num(n) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    bool is_zero() const { return num == 0; }
    bool negative() const { return num < 0; }
    long double to_long_double() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }
    std::string str() const;
};

// Multivariate polynomial over named variables with exact coefficients.
// Terms are kept in graded-lexicographic order (leading term first).
class Poly {
  public:
    using Exponents = std::vector<unsigned>;

    struct GrlexGreater {
        bool operator()(const Exponents& a, const Exponents& b) const;
    };
    using TermMap = std::map<Exponents, Rational, GrlexGreater>;

    explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}
    static Poly constant(std::size_t nvars, const Rational& c);
    static Poly variable(std::size_t nvars, std::size_t index);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly pow(unsigned k) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    int total_degree() const; // -1 for the zero polynomial
    unsigned degree_in(std::size_t var) const;
    std::size_t term_count() const { return terms_.size(); }
    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }

    long double eval(std::span<const double> x) const;

    void add_term(const Exponents& e, const Rational& c);

  private:
    std::size_t nvars_;
    TermMap terms_;
};

struct PolynomialSystem {
    enum class Kind { equality, greater, greater_equal };

    struct Constraint {
        std::string name;
        Poly poly;
        Kind kind = Kind::equality;
        int degree = 0;
    };

    std::string title;
    std::vector<std::string> variables;
    std::vector<Constraint> equalities;
    std::vector<Constraint> inequalities;

    std::size_t variable_count() const { return variables.size(); }
};

// one constraint per line, expanded monomials, exact coefficients
std::string emit_plain(const PolynomialSystem& sys);
// QF_NRA script asserting all constraints
std::string emit_smtlib(const PolynomialSystem& sys);
// inverse of emit_plain
PolynomialSystem parse_plain(const std::string& text);

std::string poly_to_string(const Poly& p, const std::vector<std::string>& variables);
Poly poly_from_string(const std::string& text, const std::vector<std::string>& variables);

} // namespace trv
