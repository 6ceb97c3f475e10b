#pragma once

#include "residua/rational.hpp"
#include "residua/monomial.hpp"
#include "residua/polynomial.hpp"
#include "residua/expr.hpp"
#include "residua/groebner.hpp"
#include "residua/syzygies.hpp"
#include "residua/resolution.hpp"
#include "residua/residue.hpp"
#include "residua/bmform.hpp"
#include "residua/quad.hpp"
