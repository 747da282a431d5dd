#pragma once

#include <string_view>

#include "recpath/parser.hpp"

namespace recpath {

/// MiniLang transliteration of the two-recursive-module worked example:
/// main reads n, prints n! and then 1! + 2! + ... + n!. Kept byte-identical
/// to corpus/fig1.mini.
inline constexpr std::string_view kCanonicalSource =
    "int sum = 0; int temp = 0;\n"
    "int Factorial(int n) { if (n < 1) { return 1; } else { return n * Factorial(n - 1); } }\n"
    "int SumofFact(int n) { if (n > 0) { sum = sum + Factorial(n); temp = SumofFact(n - 1); } "
    "else { return sum; } }\n"
    "void main() { int number; number = read(); print(Factorial(number)); print(SumofFact(number)); }\n";

/// Sidecar numbering that pins the example's node ids to the ones used by
/// the golden path strings. Kept byte-identical to corpus/fig1.nodemap.
inline constexpr std::string_view kCanonicalNodeMap =
    "# Global node ids for corpus/fig1.mini.\n"
    "main.entry = 1\n"
    "main.stmt0 = 2\n"
    "main.stmt1 = 3\n"
    "main.call0 = 4\n"
    "main.call1 = 5\n"
    "main.exit = 6\n"
    "Factorial.entry = 7\n"
    "Factorial.pred0 = 8\n"
    "Factorial.mark0 = 9\n"
    "Factorial.stmt0 = 10\n"
    "Factorial.call0 = 11\n"
    "Factorial.exit = 12\n"
    "SumofFact.entry = 13\n"
    "SumofFact.pred0 = 14\n"
    "SumofFact.mark0 = 15\n"
    "SumofFact.stmt0 = 16\n"
    "SumofFact.call0 = 17\n"
    "SumofFact.exit = 18\n"
    "SumofFact.call1 = 19\n";

inline ProgramAst canonical_example() { return parse_source(kCanonicalSource); }

}  // namespace recpath
