#include <sstream>

#include <gtest/gtest.h>

#include "trex/io.hpp"

namespace {

using namespace trex;

TEST(CsvMatrix, HeaderDetectedFromNonNumericFirstRow) {
    std::istringstream in("a, b,\"c\"\n1,2,3\n4,5e-1,-6\n");
    const auto m = io::parse_csv_matrix(in);
    EXPECT_EQ(m.header, (std::vector<std::string>{"a", "b", "c"}));
    ASSERT_EQ(m.data.rows(), 2);
    EXPECT_EQ(m.data(1, 1), 0.5);
    EXPECT_EQ(m.data(1, 2), -6.0);
}

TEST(CsvMatrix, NoHeaderBlankLinesAndCrlf) {
    std::istringstream in("1,2\r\n\r\n3,+4\r\n");
    const auto m = io::parse_csv_matrix(in);
    EXPECT_TRUE(m.header.empty());
    EXPECT_EQ(m.data, (Matrix(2, 2) << 1, 2, 3, 4).finished());
}

TEST(CsvMatrix, MalformedInputsNameTheLine) {
    std::istringstream ragged("1,2\n3\n");
    try {
        io::parse_csv_matrix(ragged, "x.csv");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("x.csv:2"), std::string::npos);
    }
    std::istringstream bad("a,b\n1,oops\n");
    EXPECT_THROW(io::parse_csv_matrix(bad), InputError);
    std::istringstream empty("a,b\n");
    EXPECT_THROW(io::parse_csv_matrix(empty), InputError);
    std::istringstream missing("1,,2\n");
    EXPECT_THROW(io::parse_csv_matrix(missing), InputError);
}

TEST(CsvMatrix, RoundTripIsExact) {
    Matrix M(3, 2);
    M << 0.1, -1e-300, 1.0 / 3.0, 12345.678901234567, -0.0, 2.5e17;
    std::ostringstream out;
    io::write_csv_matrix(out, M, {"u", "v"});
    std::istringstream in(out.str());
    const auto back = io::parse_csv_matrix(in);
    EXPECT_EQ(back.header, (std::vector<std::string>{"u", "v"}));
    EXPECT_EQ(back.data, M);
}

TEST(CsvTable, MixedFields) {
    std::istringstream in("trial,base,selected\n0,ien,1;2\n1,en,\n");
    const auto t = io::parse_csv_table(in);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[0][t.column("base")], "ien");
    EXPECT_EQ(t.rows[1][t.column("selected")], "");
    EXPECT_THROW(t.column("missing"), InputError);
    std::istringstream ragged("a,b\n1\n");
    EXPECT_THROW(io::parse_csv_table(ragged), InputError);
}

TEST(Json, TextIsPrettyWithTrailingNewline) {
    const auto text = io::json_text({{"schema_version", 1}});
    EXPECT_EQ(text, "{\n  \"schema_version\": 1\n}\n");
}

}  // namespace
