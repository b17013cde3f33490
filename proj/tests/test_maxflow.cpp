#include <doctest.h>
TEST_SUITE_BEGIN("maxflow");
TEST_SUITE_END();
