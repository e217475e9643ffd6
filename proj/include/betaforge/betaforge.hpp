#pragma once

#include "betaforge/airy.hpp"
#include "betaforge/conditional.hpp"
#include "betaforge/devroye.hpp"
#include "betaforge/empirical.hpp"
#include "betaforge/ensembles.hpp"
#include "betaforge/equilibrium.hpp"
#include "betaforge/errors.hpp"
#include "betaforge/fd.hpp"
#include "betaforge/gibbs.hpp"
#include "betaforge/hankel.hpp"
#include "betaforge/jacobi.hpp"
#include "betaforge/mala.hpp"
#include "betaforge/measure.hpp"
#include "betaforge/potential.hpp"
#include "betaforge/rng.hpp"
#include "betaforge/spectral.hpp"
#include "betaforge/stieltjes.hpp"
#include "betaforge/tracy_widom.hpp"
