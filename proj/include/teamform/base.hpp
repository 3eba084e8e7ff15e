#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace teamform {

using Rat = boost::rational<long long>;

/// Thrown on invalid models, malformed files or bad arguments.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an enumeration or search exceeds a configured guard.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Guards {
    std::size_t max_states = 2'000'000;
    int max_coalition_n = 12;
    int max_search_projects = 24;
    int farsighted_exhaustive_max = 20;  // |X| bound for exhaustive mode
};

/// Utility value: exact rational for the linear / equal-split / table
/// families, floating point for the publishing family. Mixing the two in
/// arithmetic demotes the result to floating point.
class Util {
public:
    Util() : exact_(true), q_(0), d_(0.0) {}
    Util(const Rat& q) : exact_(true), q_(q), d_(boost::rational_cast<double>(q)) {}
    Util(long long n) : Util(Rat(n)) {}

    static Util real(double d) {
        Util u;
        u.exact_ = false;
        u.d_ = d;
        return u;
    }

    bool exact() const { return exact_; }
    const Rat& rat() const {
        if (!exact_) throw ConfigError("Util: rational value requested from real-valued utility");
        return q_;
    }
    double approx() const { return d_; }

    Util operator+(const Util& o) const {
        if (exact_ && o.exact_) return Util(q_ + o.q_);
        return real(d_ + o.d_);
    }
    Util operator-(const Util& o) const {
        if (exact_ && o.exact_) return Util(q_ - o.q_);
        return real(d_ - o.d_);
    }
    Util operator*(const Rat& r) const {
        if (exact_) return Util(q_ * r);
        return real(d_ * boost::rational_cast<double>(r));
    }
    Util& operator+=(const Util& o) { return *this = *this + o; }
    Util& operator-=(const Util& o) { return *this = *this - o; }

    /// Strict comparison; for real-valued utilities "strictly greater" means
    /// exceeding by more than tol.
    static bool gt(const Util& a, const Util& b, double tol) {
        if (a.exact_ && b.exact_) return a.q_ > b.q_;
        return a.d_ > b.d_ + tol;
    }
    static bool ge(const Util& a, const Util& b, double tol) {
        if (a.exact_ && b.exact_) return a.q_ >= b.q_;
        return a.d_ >= b.d_ - tol;
    }
    static bool eq(const Util& a, const Util& b, double tol) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        double diff = a.d_ - b.d_;
        return diff <= tol && diff >= -tol;
    }
    static bool lt(const Util& a, const Util& b, double tol) { return gt(b, a, tol); }

private:
    bool exact_;
    Rat q_;
    double d_;
};

}  // namespace teamform
