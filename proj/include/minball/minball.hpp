#ifndef MINBALL_MINBALL_HPP
#define MINBALL_MINBALL_HPP

#include "conditions.hpp"
#include "errors.hpp"
#include "fr_integrals.hpp"
#include "geometry.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "orbit.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "rng.hpp"
#include "sampling.hpp"
#include "special.hpp"
#include "transfer.hpp"

#endif // MINBALL_MINBALL_HPP
