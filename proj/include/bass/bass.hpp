#pragma once

#include "bass/analysis.hpp"
#include "bass/automorphism.hpp"
#include "bass/bench.hpp"
#include "bass/counting.hpp"
#include "bass/errors.hpp"
#include "bass/hash_poly.hpp"
#include "bass/params.hpp"
#include "bass/polynomial.hpp"
#include "bass/random.hpp"
#include "bass/scheme.hpp"
