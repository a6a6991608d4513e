#include <gtest/gtest.h>

#include "properties.hpp"

namespace ecoroute::testing {
namespace {

class Property : public ::testing::TestWithParam<NamedProperty> {};

TEST_P(Property, Holds) {
  const auto result = GetParam().run();
  EXPECT_TRUE(result.passed) << result.name << ": " << result.detail;
}

INSTANTIATE_TEST_SUITE_P(Battery, Property, ::testing::ValuesIn(all_properties()),
                         [](const ::testing::TestParamInfo<NamedProperty>& info) {
                           return std::string(info.param.name);
                         });

}  // namespace
}  // namespace ecoroute::testing
