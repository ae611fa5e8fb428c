#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "erw/bd_chain.hpp"

namespace erw::bd {

using Rational = boost::multiprecision::cpp_rational;

/// Exact hitting probability of n before 1 from `start`. The double inputs
/// are dyadic rationals, so the result is the mathematically exact value
/// for the chain as stored.
Rational hit_prob_rational(const BDChain& chain, int start);

/// All of r_1..r_n exactly.
std::vector<Rational> hit_prob_profile_rational(const BDChain& chain);

}  // namespace erw::bd
