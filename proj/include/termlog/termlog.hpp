#pragma once

#include "termlog/acceptability.hpp"
#include "termlog/callset.hpp"
#include "termlog/certificate.hpp"
#include "termlog/depgraph.hpp"
#include "termlog/error.hpp"
#include "termlog/interpreter.hpp"
#include "termlog/oracle.hpp"
#include "termlog/orders.hpp"
#include "termlog/parser.hpp"
#include "termlog/solver.hpp"
#include "termlog/term.hpp"
