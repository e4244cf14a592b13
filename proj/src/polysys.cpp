#include "transversal/polysys.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace trv {

namespace {

long long checked_mul(long long a, long long b) {
    __int128 r = static_cast<__int128>(a) * b;
    if (r > INT64_MAX || r < INT64_MIN) throw NumericFailure("rational overflow in multiply");
    return static_cast<long long>(r);
}

long long checked_add(long long a, long long b) {
    __int128 r = static_cast<__int128>(a) + b;
    if (r > INT64_MAX || r < INT64_MIN) throw NumericFailure("rational overflow in add");
    return static_cast<long long>(r);
}

} // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw InvalidInput("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(checked_add(checked_mul(num, o.den), checked_mul(o.num, den)),
                    checked_mul(den, o.den));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    return Rational(checked_mul(num, o.num), checked_mul(den, o.den));
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

bool Poly::GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da > db;
    return a > b; // lexicographic on the declared variable order
}

Poly Poly::constant(std::size_t nvars, const Rational& c) {
    Poly p(nvars);
    if (!c.is_zero()) p.terms_[Exponents(nvars, 0)] = c;
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw InvalidInput("Poly::variable index out of range");
    Poly p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.terms_[e] = Rational(1);
    return p;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
    if (e.size() != nvars_) throw InvalidInput("exponent arity mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_[e] = c;
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InvalidInput("polynomial arity mismatch");
    Poly r(*this);
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InvalidInput("polynomial arity mismatch");
    Poly r(*this);
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_) throw InvalidInput("polynomial arity mismatch");
    Poly r(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(nvars_);
            for (std::size_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r = Poly::constant(nvars_, Rational(1));
    Poly base(*this);
    while (k > 0) {
        if (k & 1u) r = r * base;
        base = base * base;
        k >>= 1u;
    }
    return r;
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    // leading term has maximal degree under grlex
    const Exponents& e = terms_.begin()->first;
    return static_cast<int>(std::accumulate(e.begin(), e.end(), 0u));
}

unsigned Poly::degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

long double Poly::eval(std::span<const double> x) const {
    if (x.size() != nvars_) throw InvalidInput("eval arity mismatch");
    // per-variable power tables
    std::vector<std::vector<long double>> pows(nvars_);
    for (std::size_t v = 0; v < nvars_; ++v) {
        unsigned d = degree_in(v);
        pows[v].resize(d + 1);
        pows[v][0] = 1.0L;
        for (unsigned k = 1; k <= d; ++k) pows[v][k] = pows[v][k - 1] * static_cast<long double>(x[v]);
    }
    long double sum = 0.0L;
    for (const auto& [e, c] : terms_) {
        long double t = c.to_long_double();
        for (std::size_t v = 0; v < nvars_; ++v)
            if (e[v] > 0) t *= pows[v][e[v]];
        sum += t;
    }
    return sum;
}

namespace {

std::string monomial_to_string(const Poly::Exponents& e, const Rational& c,
                               const std::vector<std::string>& vars) {
    Rational a = c.negative() ? -c : c;
    std::string body;
    for (std::size_t v = 0; v < vars.size(); ++v) {
        if (e[v] == 0) continue;
        if (!body.empty()) body += "*";
        body += vars[v];
        if (e[v] > 1) body += "^" + std::to_string(e[v]);
    }
    if (body.empty()) return a.str();
    if (a == Rational(1)) return body;
    return a.str() + "*" + body;
}

} // namespace

std::string poly_to_string(const Poly& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (first) {
            if (c.negative()) out += "-";
            out += monomial_to_string(e, c, vars);
            first = false;
        } else {
            out += c.negative() ? " - " : " + ";
            out += monomial_to_string(e, c, vars);
        }
    }
    return out;
}

namespace {

struct Tok {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char get() {
        skip_ws();
        return s[pos++];
    }
    long long integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw InvalidInput("expected integer in polynomial string");
        return std::stoll(s.substr(start, pos - start));
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
            ++pos;
        if (start == pos) throw InvalidInput("expected identifier in polynomial string");
        return s.substr(start, pos - start);
    }
};

} // namespace

Poly poly_from_string(const std::string& text, const std::vector<std::string>& vars) {
    Poly p(vars.size());
    auto var_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw InvalidInput("unknown variable in polynomial: " + name);
        return static_cast<std::size_t>(it - vars.begin());
    };
    Tok tok{text};
    bool first = true;
    while (!tok.eof()) {
        int sign = 1;
        char c = tok.peek();
        if (c == '+' || c == '-') {
            tok.get();
            sign = c == '-' ? -1 : 1;
        } else if (!first) {
            throw InvalidInput("expected +/- between terms");
        }
        first = false;
        Rational coeff(sign);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(tok.peek()))) {
            long long n = tok.integer();
            long long d = 1;
            if (tok.peek() == '/') {
                tok.get();
                d = tok.integer();
            }
            coeff = Rational(sign * n, d);
            have_coeff = true;
        }
        Poly::Exponents e(vars.size(), 0);
        bool have_var = false;
        for (;;) {
            if (tok.peek() == '*') {
                tok.get();
            } else if (have_coeff || have_var) {
                break;
            }
            if (!std::isalpha(static_cast<unsigned char>(tok.peek()))) {
                if (have_coeff || have_var) break;
                throw InvalidInput("expected variable or coefficient");
            }
            std::string name = tok.ident();
            unsigned exp = 1;
            if (tok.peek() == '^') {
                tok.get();
                exp = static_cast<unsigned>(tok.integer());
            }
            e[var_index(name)] += exp;
            have_var = true;
        }
        p.add_term(e, coeff);
    }
    return p;
}

std::string emit_plain(const PolynomialSystem& sys) {
    std::ostringstream out;
    out << "# " << sys.title << "\n";
    out << "variables:";
    for (const auto& v : sys.variables) out << " " << v;
    out << "\n";
    for (const auto& c : sys.equalities)
        out << "equality " << c.name << ": " << poly_to_string(c.poly, sys.variables) << " = 0\n";
    for (const auto& c : sys.inequalities)
        out << "inequality " << c.name << ": " << poly_to_string(c.poly, sys.variables)
            << (c.kind == PolynomialSystem::Kind::greater ? " > 0" : " >= 0") << "\n";
    return out.str();
}

PolynomialSystem parse_plain(const std::string& text) {
    PolynomialSystem sys;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            sys.title = line.size() > 2 ? line.substr(2) : "";
            continue;
        }
        if (line.rfind("variables:", 0) == 0) {
            std::istringstream vs(line.substr(10));
            std::string v;
            while (vs >> v) sys.variables.push_back(v);
            continue;
        }
        bool is_eq = line.rfind("equality ", 0) == 0;
        bool is_ineq = line.rfind("inequality ", 0) == 0;
        if (!is_eq && !is_ineq) throw InvalidInput("unrecognized system line: " + line);
        std::size_t name_start = is_eq ? 9 : 11;
        std::size_t colon = line.find(':', name_start);
        if (colon == std::string::npos) throw InvalidInput("missing ':' in system line");
        PolynomialSystem::Constraint c;
        c.name = line.substr(name_start, colon - name_start);
        std::string rhs = line.substr(colon + 1);
        PolynomialSystem::Kind kind;
        std::size_t cut;
        if ((cut = rhs.rfind(" >= 0")) != std::string::npos && cut + 5 == rhs.size()) {
            kind = PolynomialSystem::Kind::greater_equal;
        } else if ((cut = rhs.rfind(" > 0")) != std::string::npos && cut + 4 == rhs.size()) {
            kind = PolynomialSystem::Kind::greater;
        } else if ((cut = rhs.rfind(" = 0")) != std::string::npos && cut + 4 == rhs.size()) {
            kind = PolynomialSystem::Kind::equality;
        } else {
            throw InvalidInput("missing relation in system line: " + line);
        }
        c.kind = kind;
        c.poly = poly_from_string(rhs.substr(0, cut), sys.variables);
        c.degree = c.poly.total_degree();
        if (kind == PolynomialSystem::Kind::equality)
            sys.equalities.push_back(std::move(c));
        else
            sys.inequalities.push_back(std::move(c));
    }
    return sys;
}

namespace {

std::string rational_sexpr(const Rational& r) {
    std::string mag = r.den == 1 ? std::to_string(r.num < 0 ? -r.num : r.num)
                                 : "(/ " + std::to_string(r.num < 0 ? -r.num : r.num) + " " +
                                       std::to_string(r.den) + ")";
    return r.negative() ? "(- " + mag + ")" : mag;
}

std::string term_sexpr(const Poly::Exponents& e, const Rational& c,
                       const std::vector<std::string>& vars) {
    std::vector<std::string> factors;
    bool unit = c == Rational(1);
    if (!unit) factors.push_back(rational_sexpr(c));
    for (std::size_t v = 0; v < vars.size(); ++v)
        for (unsigned k = 0; k < e[v]; ++k) factors.push_back(vars[v]);
    if (factors.empty()) return rational_sexpr(c);
    if (factors.size() == 1) return factors[0];
    std::string out = "(*";
    for (const auto& f : factors) out += " " + f;
    return out + ")";
}

std::string poly_sexpr(const Poly& p, const std::vector<std::string>& vars) {
    if (p.is_zero()) return "0";
    std::vector<std::string> terms;
    for (const auto& [e, c] : p.terms()) terms.push_back(term_sexpr(e, c, vars));
    if (terms.size() == 1) return terms[0];
    std::string out = "(+";
    for (const auto& t : terms) out += " " + t;
    return out + ")";
}

} // namespace

std::string emit_smtlib(const PolynomialSystem& sys) {
    std::ostringstream out;
    out << "(set-logic QF_NRA)\n";
    out << "; " << sys.title << "\n";
    for (const auto& v : sys.variables) out << "(declare-const " << v << " Real)\n";
    auto relation = [](PolynomialSystem::Kind k) {
        switch (k) {
            case PolynomialSystem::Kind::equality: return "=";
            case PolynomialSystem::Kind::greater: return ">";
            case PolynomialSystem::Kind::greater_equal: return ">=";
        }
        return "=";
    };
    for (const auto& c : sys.equalities)
        out << "(assert (= " << poly_sexpr(c.poly, sys.variables) << " 0)) ; " << c.name << "\n";
    for (const auto& c : sys.inequalities)
        out << "(assert (" << relation(c.kind) << " " << poly_sexpr(c.poly, sys.variables)
            << " 0)) ; " << c.name << "\n";
    out << "(check-sat)\n";
    return out.str();
}

} // namespace trv
