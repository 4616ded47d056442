#pragma once

#include "favard/rng.hpp"
#include "favard/model.hpp"
#include "favard/geometry.hpp"
#include "favard/estimators.hpp"
#include "favard/verify.hpp"
#include "favard/io.hpp"
#include "favard/cli.hpp"
