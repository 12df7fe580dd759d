#pragma once

#include "pigraph/ast.hpp"
#include "pigraph/bisim.hpp"
#include "pigraph/clock.hpp"
#include "pigraph/configuration.hpp"
#include "pigraph/engine.hpp"
#include "pigraph/errors.hpp"
#include "pigraph/lts.hpp"
#include "pigraph/name.hpp"
#include "pigraph/parser.hpp"
#include "pigraph/partition.hpp"
