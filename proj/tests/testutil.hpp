#pragma once

#include <cmath>

// Absolute-tolerance check; doctest's Approx is purely relative and cannot
// compare against zero.
#define CHECK_ABS(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define REQUIRE_ABS(a, b, tol) REQUIRE(std::abs((a) - (b)) <= (tol))
