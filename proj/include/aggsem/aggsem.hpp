#pragma once

#include "analysis.hpp"
#include "core.hpp"
#include "eval.hpp"
#include "frontend.hpp"
#include "semantics.hpp"
