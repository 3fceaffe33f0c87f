#pragma once

#include "tentative/bayes.hpp"
#include "tentative/clip.hpp"
#include "tentative/data.hpp"
#include "tentative/distributions.hpp"
#include "tentative/error.hpp"
#include "tentative/monte_carlo.hpp"
#include "tentative/parallel.hpp"
#include "tentative/random.hpp"
#include "tentative/rational.hpp"
#include "tentative/resampling.hpp"
#include "tentative/version.hpp"
