#include "lrgrade/coord.hpp"

#include <cmath>
#include <stdexcept>

namespace lrg {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

[[noreturn]] void overflow() { throw std::overflow_error("dyadic coordinate out of range"); }

std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) overflow();
    return static_cast<std::int64_t>(v);
}

}  // namespace

Dyadic::Dyadic(std::int64_t n, int e) : num(n), exp(e) {
    if (num == 0) {
        exp = 0;
        return;
    }
    while (exp > 0 && (num & 1) == 0) {
        num >>= 1;
        --exp;
    }
    if (exp < 0) {
        // value num * 2^{-exp}: fold the power into the numerator
        i128 wide = static_cast<i128>(num);
        for (; exp < 0; ++exp) {
            wide <<= 1;
            if (wide > INT64_MAX || wide < INT64_MIN) overflow();
        }
        num = static_cast<std::int64_t>(wide);
    }
    if (exp > max_exp) overflow();
}

Dyadic Dyadic::from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("coordinate is not finite");
    if (v == 0.0) return {};
    int e2 = 0;
    double mant = std::frexp(v, &e2);          // v = mant * 2^e2, |mant| in [0.5,1)
    auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));  // exact, |m| < 2^53
    // v = m * 2^{e2-53}
    return Dyadic(m, 53 - e2);
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num), -exp); }

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    const int common = exp > o.exp ? exp : o.exp;
    const i128 a = static_cast<i128>(num) << (common - exp);
    const i128 b = static_cast<i128>(o.num) << (common - o.exp);
    return a < b ? std::strong_ordering::less
         : a > b ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    const int common = exp > o.exp ? exp : o.exp;
    const i128 a = static_cast<i128>(num) << (common - exp);
    const i128 b = static_cast<i128>(o.num) << (common - o.exp);
    return Dyadic(narrow(a + b), common);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + Dyadic(-o.num, o.exp); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
    const i128 p = static_cast<i128>(num) * o.num;
    return Dyadic(narrow(p), exp + o.exp);
}

Dyadic Dyadic::operator-() const { return Dyadic(-num, exp); }

Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
    const Dyadic s = a + b;
    return Dyadic(s.num, s.exp + 1);
}

Dyadic abs(const Dyadic& a) { return a.num < 0 ? -a : a; }

std::optional<Dyadic> dyadic_from_decimal(std::string_view text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    std::string_view digits = text.substr(i);
    const auto dot = digits.find('.');
    std::string_view ip = dot == std::string_view::npos ? digits : digits.substr(0, dot);
    std::string_view fp = dot == std::string_view::npos ? std::string_view{} : digits.substr(dot + 1);
    if (ip.empty() && fp.empty()) return std::nullopt;
    for (char c : ip)
        if (c < '0' || c > '9') return std::nullopt;
    for (char c : fp)
        if (c < '0' || c > '9') return std::nullopt;

    i128 ival = 0;
    for (char c : ip) {
        ival = ival * 10 + (c - '0');
        if (ival > INT64_MAX) return std::nullopt;
    }

    // Fold fractional digits right to left; each step divides by 10, which is
    // exact for dyadics iff the running numerator is divisible by 5.
    i128 fnum = 0;  // fraction = fnum / 2^fexp, always < 10 * 2^fexp
    int fexp = 0;
    for (auto it = fp.rbegin(); it != fp.rend(); ++it) {
        const i128 n = fnum + static_cast<i128>(*it - '0') * (static_cast<i128>(1) << fexp);
        if (n % 5 != 0) return std::nullopt;
        fnum = n / 5;
        fexp += 1;
        if (fexp > Dyadic::max_exp) return std::nullopt;
    }

    const i128 total = ival * (static_cast<i128>(1) << fexp) + fnum;
    if (total > INT64_MAX) return std::nullopt;
    auto v = static_cast<std::int64_t>(total);
    return Dyadic(neg ? -v : v, fexp);
}

std::string to_decimal(const Dyadic& d) {
    std::string out;
    u128 n = d.num < 0 ? static_cast<u128>(-static_cast<i128>(d.num)) : static_cast<u128>(d.num);
    if (d.num < 0) out += '-';

    const u128 ip = n >> d.exp;
    std::string istr;
    if (ip == 0) istr = "0";
    for (u128 v = ip; v != 0; v /= 10) istr.insert(istr.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    out += istr;

    u128 rem = n & ((static_cast<u128>(1) << d.exp) - 1);
    if (rem != 0) {
        out += '.';
        // fraction = rem / 2^e; multiplying by 10 == (*5, shift one bit off)
        for (int e = d.exp; rem != 0; --e) {
            rem *= 5;
            out += static_cast<char>('0' + static_cast<int>(rem >> (e - 1)));
            rem &= (static_cast<u128>(1) << (e - 1)) - 1;
        }
    }
    return out;
}

}  // namespace lrg
