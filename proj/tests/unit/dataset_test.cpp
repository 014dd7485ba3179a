#include "nvinfo/bootstrap.hpp"
#include "nvinfo/dataset.hpp"
#include "nvinfo/errors.hpp"
#include "nvinfo/random.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

namespace nvinfo {
namespace {

using testing::sales_table;

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

std::string error_of(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

TEST(Dataset, LoadsTableOneFixture) {
    const Dataset& d = sales_table();
    EXPECT_EQ(d.n_rows(), 36u);
    ASSERT_EQ(d.names(), (std::vector<std::string>{"A", "B"}));
    const auto a = d.column("A");
    const auto b = d.column("B");
    EXPECT_TRUE(std::equal(a.begin(), a.end(), testing::kProductA.begin()));
    EXPECT_TRUE(std::equal(b.begin(), b.end(), testing::kProductB.begin()));
    EXPECT_EQ(std::accumulate(b.begin(), b.end(), 0.0), 4608.0);
}

TEST(Dataset, AcceptsWhitespaceAndSigns) {
    const Dataset d = parse(" x , y \n 1.5 , -2\n+3,4e1\n\n");
    EXPECT_EQ(d.n_rows(), 2u);
    EXPECT_DOUBLE_EQ(d.column("x")[1], 3.0);
    EXPECT_DOUBLE_EQ(d.column("y")[0], -2.0);
    EXPECT_DOUBLE_EQ(d.column("y")[1], 40.0);
}

TEST(Dataset, HeaderOnlyIsZeroDataRows) {
    EXPECT_NE(error_of("A,B\n").find("zero data rows"), std::string::npos);
}

TEST(Dataset, NonNumericCellNamesLine) {
    const auto msg = error_of("A,B\n1,2\nabc,4\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
}

TEST(Dataset, RaggedRowNamesLine) {
    const auto msg = error_of("A,B\n1,2\n3,4\n5\n");
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("ragged"), std::string::npos) << msg;
}

TEST(Dataset, DuplicateColumnAndBlankCellRejected) {
    EXPECT_NE(error_of("A,A\n1,2\n3,4\n").find("duplicate column name"), std::string::npos);
    EXPECT_NE(error_of("A,B\n1,\n3,4\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("A\nnan\n1\n").find("non-finite"), std::string::npos);
}

TEST(Dataset, MissingFileReported) {
    EXPECT_THROW((void)load_csv("/nonexistent/sales.csv"), InputError);
}

TEST(Dataset, ConstructorEnforcesInvariants) {
    EXPECT_THROW(Dataset({"a"}, {{1.0}}), InputError);
    EXPECT_THROW(Dataset({"a", "b"}, {{1.0, 2.0}, {1.0}}), InputError);
    EXPECT_THROW(Dataset({"a"}, {{1.0, std::numeric_limits<double>::infinity()}}), InputError);
}

TEST(Dataset, ResampleIdentityAndConstant) {
    const Dataset& d = sales_table();
    std::vector<std::size_t> identity(36);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    const Dataset same = resample_rows(d, identity);
    EXPECT_EQ(same.names(), d.names());
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_TRUE(std::equal(same.column(j).begin(), same.column(j).end(), d.column(j).begin()));
    }

    const std::vector<std::size_t> zeros{0, 0, 0};
    const Dataset constant = resample_rows(d, zeros);
    EXPECT_EQ(constant.n_rows(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(constant.column("A")[i], 6576.0);
        EXPECT_EQ(constant.column("B")[i], 215.0);
    }
}

TEST(Dataset, ResampleRejectsOutOfRangeIndex) {
    const std::vector<std::size_t> bad{0, 36};
    EXPECT_THROW((void)resample_rows(sales_table(), bad), InputError);
}

TEST(Dataset, SeededResampleIsDeterministic) {
    const auto i1 = draw_indices(36, stream_key(99, 4));
    const auto i2 = draw_indices(36, stream_key(99, 4));
    const Dataset r1 = resample_rows(sales_table(), i1);
    const Dataset r2 = resample_rows(sales_table(), i2);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_TRUE(std::equal(r1.column(j).begin(), r1.column(j).end(), r2.column(j).begin()));
    }
}

// Property: write then load preserves every value bit-exactly.
TEST(Dataset, WriteLoadRoundTrip) {
    StreamRng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t rows = 2 + rng.below(30);
        std::vector<std::vector<double>> cols(3, std::vector<double>(rows));
        for (auto& c : cols)
            for (auto& v : c) v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(12)) - 6.0);
        const Dataset d({"x", "y", "z"}, cols);
        std::stringstream ss;
        write_csv(d, ss);
        const Dataset back = parse_csv(ss);
        ASSERT_EQ(back.names(), d.names());
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t i = 0; i < rows; ++i) ASSERT_EQ(back.column(j)[i], d.column(j)[i]);
        }
    }
}

}  // namespace
}  // namespace nvinfo
