#pragma once

#include <cstdint>

#include <boost/multiprecision/gmp.hpp>

#include "msa/exact_core.hpp"

namespace msa {

using Exact = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

// Decimal parameters are read as the fraction they spell (0.02 -> 1/50).
Exact exact_from_double(double v);
// Smallest Rational with denominator den that is >= v.
Rational ceil_rational(const Exact& v, int64_t den);
int64_t ceil_int(const Exact& v);
int64_t floor_int(const Exact& v);
Exact to_exact(const Rational& r);
// (1+eps)^-i for i = 0.. while the value stays >= floor (and at least one entry)
std::vector<Exact> geometric_down(const Exact& start, const Exact& eps, const Exact& floor);

}  // namespace msa
