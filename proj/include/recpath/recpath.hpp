#pragma once

#include "recpath/ast.hpp"
#include "recpath/corpus.hpp"
#include "recpath/error.hpp"
#include "recpath/flowgraph.hpp"
#include "recpath/interp.hpp"
#include "recpath/lexer.hpp"
#include "recpath/parser.hpp"
#include "recpath/paths.hpp"
#include "recpath/pretty.hpp"
#include "recpath/program.hpp"
#include "recpath/recursion.hpp"
#include "recpath/report.hpp"
#include "recpath/symbolic.hpp"
#include "recpath/testgen.hpp"
#include "recpath/trace.hpp"
