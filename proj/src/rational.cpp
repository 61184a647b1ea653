#include "msa/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace msa {


Exact exact_from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite parameter");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    std::string s(buf);
    auto epos = s.find('e');
    int exp10 = std::stoi(s.substr(epos + 1));
    std::string mant = s.substr(0, epos);
    bool neg = mant[0] == '-';
    if (neg) mant = mant.substr(1);
    auto dot = mant.find('.');
    std::string digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<int>(mant.size() - dot - 1);
    BigInt num(digits);
    BigInt ten = 10;
    Exact r = exp10 >= 0 ? Exact(num * boost::multiprecision::pow(ten, static_cast<unsigned>(exp10)))
                         : Exact(num, boost::multiprecision::pow(ten, static_cast<unsigned>(-exp10)));
    return neg ? Exact(-r) : r;
}

int64_t floor_int(const Exact& v) {
    BigInt q = numerator(v) / denominator(v);  // truncates toward zero
    if (Exact(q) > v) q -= 1;
    return static_cast<int64_t>(q);
}

int64_t ceil_int(const Exact& v) {
    BigInt q = numerator(v) / denominator(v);
    if (Exact(q) < v) q += 1;
    return static_cast<int64_t>(q);
}

Rational ceil_rational(const Exact& v, int64_t den) { return {ceil_int(v * den), den}; }

Exact to_exact(const Rational& r) { return Exact(r.num, r.den); }

std::vector<Exact> geometric_down(const Exact& start, const Exact& eps, const Exact& floor) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    std::vector<Exact> out{start};
    Exact ratio = 1 + eps;
    while (true) {
        Exact next = out.back() / ratio;
        if (next < floor) break;
        out.push_back(next);
    }
    return out;
}

}  // namespace msa
