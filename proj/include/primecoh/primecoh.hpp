#pragma once

#include "primecoh/config.hpp"
#include "primecoh/controls.hpp"
#include "primecoh/csv.hpp"
#include "primecoh/divergence.hpp"
#include "primecoh/eigenspectrum.hpp"
#include "primecoh/errors.hpp"
#include "primecoh/experiment.hpp"
#include "primecoh/fits.hpp"
#include "primecoh/nelder_mead.hpp"
#include "primecoh/observables.hpp"
#include "primecoh/operators.hpp"
#include "primecoh/presets.hpp"
#include "primecoh/primes.hpp"
#include "primecoh/rng.hpp"
#include "primecoh/version.hpp"
