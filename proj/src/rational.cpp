#include "inoc/rational.hpp"

#include <cctype>
#include <cstdio>

#include "inoc/errors.hpp"

namespace inoc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw InputError("empty rational literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) throw InputError("malformed rational literal: '" + std::string(text) + "'");

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw InputError("malformed fraction: '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(num), 10), mpz_class(std::string(den), 10));
        if (value.get_den() == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
        value.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw InputError("malformed decimal: '" + std::string(text) + "'");
        mpz_class scaled(std::string(whole) + std::string(frac), 10);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        value = Rational(scaled, scale);
        value.canonicalize();
    } else {
        if (!all_digits(s)) throw InputError("malformed rational literal: '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(s), 10));
    }
    return negative ? Rational(-value) : value;
}

std::string fraction_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string decimal_string(const Rational& value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value.get_d());
    return buf;
}

long floor_long(const Rational& value) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw InputError("rational floor out of range: " + fraction_string(value));
    return q.get_si();
}

long ceil_long(const Rational& value) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num().get_mpz_t(), value.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw InputError("rational ceil out of range: " + fraction_string(value));
    return q.get_si();
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace inoc
