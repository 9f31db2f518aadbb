#pragma once

#include "capclust/clustering.hpp"
#include "capclust/congest/async.hpp"
#include "capclust/congest/gamma.hpp"
#include "capclust/congest/network.hpp"
#include "capclust/congest/programs.hpp"
#include "capclust/congest/sync.hpp"
#include "capclust/distribution.hpp"
#include "capclust/generators.hpp"
#include "capclust/graph.hpp"
#include "capclust/hash.hpp"
#include "capclust/json.hpp"
#include "capclust/ldd.hpp"
#include "capclust/spanner.hpp"
#include "capclust/verify.hpp"
