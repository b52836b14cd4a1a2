#pragma once

#include "exchrays/beta_mix.hpp"
#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/numeric.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"
#include "exchrays/ray_cache.hpp"
#include "exchrays/rays_corr.hpp"
#include "exchrays/rays_mean.hpp"
#include "exchrays/risk_bounds.hpp"
#include "exchrays/serialization.hpp"
#include "exchrays/version.hpp"
