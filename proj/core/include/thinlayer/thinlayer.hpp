#pragma once

#include "thinlayer/ctmc.hpp"
#include "thinlayer/errors.hpp"
#include "thinlayer/forms.hpp"
#include "thinlayer/grid.hpp"
#include "thinlayer/layer.hpp"
#include "thinlayer/limit.hpp"
#include "thinlayer/linalg.hpp"
#include "thinlayer/membrane.hpp"
#include "thinlayer/parallel.hpp"
#include "thinlayer/sticky.hpp"
#include "thinlayer/version.hpp"
