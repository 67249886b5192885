#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lrg {

/// Exact dyadic rational num / 2^exp.
///
/// Every mesh coordinate is dyadic: refinement only ever bisects intervals,
/// so denominators stay powers of two and all set operations on meshes can
/// use exact comparisons. Canonical form: exp == 0 or num odd.
struct Dyadic {
    std::int64_t num = 0;
    int exp = 0;

    // Deep enough for any refinement this library can reach and for exact
    // conversion of ordinary doubles; keeps cross-multiplied comparisons
    // inside __int128.
    static constexpr int max_exp = 60;

    constexpr Dyadic() = default;
    Dyadic(std::int64_t n, int e);  // canonicalizes, e may be negative

    static Dyadic from_int(std::int64_t n) { return Dyadic(n, 0); }
    static Dyadic from_double(double v);  // exact; throws if |exp| too deep

    double to_double() const;
    bool is_zero() const { return num == 0; }
    int sign() const { return num < 0 ? -1 : num > 0 ? 1 : 0; }

    bool operator==(const Dyadic&) const = default;
    std::strong_ordering operator<=>(const Dyadic& o) const;

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator*(const Dyadic& o) const;
    Dyadic operator-() const;
};

Dyadic midpoint(const Dyadic& a, const Dyadic& b);
Dyadic abs(const Dyadic& a);

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

/// Parses a plain decimal literal ("-1.375") as an exact dyadic.
/// Returns nullopt when the text is malformed or the value is not a dyadic
/// rational (e.g. "0.2").
std::optional<Dyadic> dyadic_from_decimal(std::string_view text);

/// Exact finite decimal expansion, no trailing zeros ("0.375", "-2", "1.5").
/// Inverse of dyadic_from_decimal.
std::string to_decimal(const Dyadic& d);

}  // namespace lrg
