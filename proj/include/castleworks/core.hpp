#pragma once

// Shared plumbing: exact rationals, typed errors, small utilities.

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace castleworks {

// All frequencies, defects and bounds in this library are exact rationals.
// Window counts stay far below 2^31, so cross products fit in long long.
using Rat = boost::rational<long long>;

enum class ErrKind {
    config,        // malformed input / configuration       -> CLI exit 2
    precondition,  // an operation's stated precondition failed -> CLI exit 1
    condition,     // a verified condition failed (with witness) -> CLI exit 1
    cap,           // enumeration/resource cap exceeded      -> CLI exit 3
    internal,      // broken invariant inside the library    -> CLI exit 3
};

class Error : public std::runtime_error {
  public:
    Error(ErrKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrKind kind() const { return kind_; }

  private:
    ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool ok, ErrKind kind, const std::string& msg) {
    if (!ok) fail(kind, msg);
}

// Hard cap on any single enumeration (ball sizes, position tables, ...).
inline constexpr long long kEnumerationCap = 10'000'000;

// ---- rationals ----------------------------------------------------------

// Canonical text form "p/q" (always with an explicit denominator, "0/1" for zero).
inline std::string rat_str(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "p/q" or a plain integer "p". Anything else (notably decimals like
// "0.25") is a config error: exactness is part of the interface.
inline Rat parse_rat(const std::string& text) {
    auto bad = [&]() -> Rat {
        fail(ErrKind::config,
             "malformed rational '" + text + "': expected \"p/q\" (e.g. \"1/4\"), not a decimal");
    };
    if (text.empty()) return bad();
    std::size_t slash = text.find('/');
    auto parse_int = [&](const std::string& s) -> long long {
        if (s.empty()) bad();
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) bad();
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9') bad();
        try {
            return std::stoll(s);
        } catch (const std::exception&) {
            bad();
        }
        return 0;  // unreachable
    };
    if (slash == std::string::npos) return Rat(parse_int(text));
    long long p = parse_int(text.substr(0, slash));
    long long q = parse_int(text.substr(slash + 1));
    if (q == 0) fail(ErrKind::config, "malformed rational '" + text + "': zero denominator");
    return Rat(p, q);
}

// ---- hashing ------------------------------------------------------------

inline void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace castleworks
