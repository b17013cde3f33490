#include <doctest.h>
TEST_SUITE_BEGIN("subgraph");
TEST_SUITE_END();
