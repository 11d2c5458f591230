#ifndef HPEZ_TEST_EXPECT_ERROR_HPP
#define HPEZ_TEST_EXPECT_ERROR_HPP

#include <gtest/gtest.h>

#include "hpez/error.hpp"

#define EXPECT_HPEZ_ERROR(stmt, expected_code)                                            \
    do {                                                                                  \
        try {                                                                             \
            stmt;                                                                         \
            ADD_FAILURE() << "expected " << ::hpez::to_string(expected_code);             \
        } catch (const ::hpez::Error &e_) {                                               \
            EXPECT_EQ(e_.code(), expected_code) << e_.what();                             \
        }                                                                                 \
    } while (0)

#endif
