#pragma once

#include "fjt/specfun/bessel.hpp"
#include "fjt/specfun/gamma.hpp"
#include "fjt/specfun/hypergeometric.hpp"
#include "fjt/specfun/params.hpp"
