// zoo.hpp — built-in test functions on the circle: monomials, Re/Im parts,
// the two canonical non-smooth Lipschitz functions (|Im z| and the arc
// sawtooth, shipped via Jackson truncation with certified error), and seeded
// random trig polynomials with decaying coefficients.

#pragma once

#include "opcalc/circle_function.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opcalc::zoo {

// closed-form samplers with exact Fourier coefficients
PeriodicSampler abs_im_sampler();    // t -> |sin t|
PeriodicSampler sawtooth_sampler();  // t -> dist(t, {0, 2pi})

CircleFunction monomial(int n);                       // id "z^n"
CircleFunction re_z();                                // (z + z^-1)/2
CircleFunction im_z();                                // (z - z^-1)/2i
CircleFunction abs_im_truncated(int n);               // id "|Im|~N"
CircleFunction sawtooth_truncated(int n);             // id "saw~N"
CircleFunction random_poly(std::uint64_t seed, int degree);  // id "rand-<seed>-d<N>"

// Resolve a zoo id ("z^3", "Re", "Im", "|Im|~24", "saw~24", "rand-7-d6").
// Throws on unknown ids.
CircleFunction by_id(const std::string& id);

// default campaign selection; every entry is a trig polynomial of degree
// <= max_degree
std::vector<std::string> default_ids(int max_degree = 24);

}  // namespace opcalc::zoo
