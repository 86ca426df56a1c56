#include "cryptoyield/core/rational.hpp"

#include "cryptoyield/error.hpp"

#include <cctype>
#include <fmt/format.h>

namespace cyield::core {

namespace {

using boost::multiprecision::mpz_int;

mpz_int parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) return mpz_int(0);
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw DataError(fmt::format("not an exact decimal: '{}'", whole));
    return mpz_int(std::string(digits));
}

} // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const std::string_view whole = text;
    if (text.empty()) throw DataError("empty number");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(text.substr(0, slash));
        const Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw DataError(fmt::format("zero denominator in '{}'", whole));
        return num / den;
    }

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    int exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        const std::string exp_text(text.substr(e + 1));
        try {
            std::size_t used = 0;
            exponent = std::stoi(exp_text, &used);
            if (used != exp_text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw DataError(fmt::format("not an exact decimal: '{}'", whole));
        }
        text = text.substr(0, e);
    }
    const auto dot = text.find('.');
    const std::string_view int_part = text.substr(0, dot);
    const std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) throw DataError(fmt::format("not an exact decimal: '{}'", whole));

    const mpz_int mantissa = parse_integer(std::string(int_part) + std::string(frac_part), whole);
    exponent -= static_cast<int>(frac_part.size());
    mpz_int ten_pow = boost::multiprecision::pow(mpz_int(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
    Rational out = exponent < 0 ? Rational(mantissa, ten_pow) : Rational(mantissa * ten_pow);
    return negative ? Rational(-out) : out;
}

Rational exact_sqrt(const Rational& q) {
    if (q < 0) throw NumericError("square root of a negative rational");
    const mpz_int n = boost::multiprecision::numerator(q);
    const mpz_int d = boost::multiprecision::denominator(q);
    const mpz_int rn = boost::multiprecision::sqrt(n);
    const mpz_int rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d) throw NumericError("rational has no exact square root");
    return Rational(rn, rd);
}

std::string to_string(const Rational& q, int digits) {
    return fmt::format("{:.{}g}", to_double(q), digits);
}

} // namespace cyield::core
