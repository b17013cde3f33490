#include <doctest.h>
TEST_SUITE_BEGIN("apsp");
TEST_SUITE_END();
