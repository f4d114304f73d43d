#pragma once

// Umbrella header for the margulis library: Margulis-Smilga invariants and
// marked invariant spectra for the adjoint family PSL(n,R) x| sl(n,R).

#include "margulis/error.hpp"
#include "margulis/invariant.hpp"
#include "margulis/liegroup.hpp"
#include "margulis/linalg.hpp"
#include "margulis/poly.hpp"
#include "margulis/rational.hpp"
#include "margulis/repspec.hpp"
#include "margulis/rng.hpp"
#include "margulis/spectrum.hpp"
#include "margulis/word.hpp"
