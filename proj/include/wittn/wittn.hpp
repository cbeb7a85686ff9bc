#pragma once

#include "wittn/abelian_group.hpp"
#include "wittn/arith.hpp"
#include "wittn/error.hpp"
#include "wittn/json_io.hpp"
#include "wittn/ktheory.hpp"
#include "wittn/lattice.hpp"
#include "wittn/polynomial.hpp"
#include "wittn/rings.hpp"
#include "wittn/truncation.hpp"
#include "wittn/universal.hpp"
#include "wittn/witt.hpp"
#include "wittn/zrank.hpp"
