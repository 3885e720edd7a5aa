#pragma once

#include "enetfp/datagen.hpp"
#include "enetfp/dictionary.hpp"
#include "enetfp/errors.hpp"
#include "enetfp/experiments.hpp"
#include "enetfp/feature_id.hpp"
#include "enetfp/io.hpp"
#include "enetfp/operators.hpp"
#include "enetfp/oracle.hpp"
#include "enetfp/parallel.hpp"
#include "enetfp/prox.hpp"
#include "enetfp/selection.hpp"
#include "enetfp/solver.hpp"
