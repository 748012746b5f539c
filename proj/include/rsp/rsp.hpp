#pragma once

#include "rsp/arc.hpp"
#include "rsp/cache.hpp"
#include "rsp/core.hpp"
#include "rsp/error.hpp"
#include "rsp/eval.hpp"
#include "rsp/gf2.hpp"
#include "rsp/identities.hpp"
#include "rsp/norms.hpp"
#include "rsp/parallel.hpp"
#include "rsp/roots.hpp"
#include "rsp/sturm.hpp"
#include "rsp/verify.hpp"
