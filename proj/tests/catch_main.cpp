// Single compilation of the amalgamated Catch2 implementation (provides main).
#include <catch2/catch_amalgamated.cpp>
