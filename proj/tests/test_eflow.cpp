#include <doctest.h>
TEST_SUITE_BEGIN("eflow");
TEST_SUITE_END();
