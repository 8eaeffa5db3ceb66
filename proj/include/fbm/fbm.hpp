#pragma once

#include "fbm/core/errors.hpp"
#include "fbm/core/field.hpp"
#include "fbm/core/grid.hpp"
#include "fbm/core/params.hpp"
#include "fbm/core/random.hpp"
#include "fbm/core/semigroup.hpp"
#include "fbm/core/snapshot.hpp"
#include "fbm/experiments/data.hpp"
#include "fbm/experiments/estimate_k.hpp"
#include "fbm/experiments/report.hpp"
#include "fbm/experiments/rescale.hpp"
#include "fbm/experiments/selfsim.hpp"
#include "fbm/experiments/stability.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/lp/inequalities.hpp"
#include "fbm/lp/morrey.hpp"
#include "fbm/lp/paraproduct.hpp"
#include "fbm/lp/partition.hpp"
#include "fbm/solver/duhamel.hpp"
#include "fbm/solver/etd.hpp"
#include "fbm/solver/nonlinearity.hpp"
#include "fbm/solver/picard.hpp"
#include "fbm/symbols/catalog.hpp"
#include "fbm/symbols/coupling.hpp"
