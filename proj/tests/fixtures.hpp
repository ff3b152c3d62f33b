#pragma once

// Shared test fixtures: the two stochastic matrices used across the
// measure suites, as JSON in the CLI's input schema.

namespace fixtures {

inline const char* kMatrix4Json = R"({
  "n": 4,
  "rows": [
    ["1/2", "1/2", "0", "0"],
    ["1/8", "0", "1/8", "3/4"],
    ["0", "1/16", "1/16", "7/8"],
    ["0", "0", "1", "0"]
  ]
})";

inline const char* kMatrix9Json = R"({
  "n": 9,
  "rows": [
    ["1/3", "0", "1/3", "0", "0", "0", "1/6", "1/6", "0"],
    ["1/18", "1/18", "0", "1/3", "0", "1/3", "1/9", "1/9", "0"],
    ["0", "0", "0", "1/2", "0", "0", "1/4", "1/4", "0"],
    ["1/4", "0", "1/4", "0", "1/4", "0", "0", "1/8", "1/8"],
    ["1/7", "1/7", "1/7", "0", "1/7", "0", "1/7", "1/7", "1/7"],
    ["0", "1/6", "1/6", "1/12", "1/12", "1/12", "1/12", "1/6", "1/6"],
    ["1/5", "1/5", "0", "0", "1/5", "1/10", "1/10", "1/10", "1/10"],
    ["1/18", "1/18", "0", "1/9", "2/9", "1/3", "1/9", "1/18", "1/18"],
    ["1/5", "1/5", "1/10", "1/10", "0", "1/10", "1/10", "1/10", "1/10"]
  ]
})";

inline const char* kBernoulli4Json = R"(["1/2", "1/8", "1/8", "1/4"])";

}  // namespace fixtures
