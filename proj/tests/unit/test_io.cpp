#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "maxsub/pgm.hpp"
#include "maxsub/text_io.hpp"

using maxsub::PgmFormat;

namespace {

std::span<const unsigned char> bytes_of(const std::string& s) {
    return {reinterpret_cast<const unsigned char*>(s.data()), s.size()};
}

std::string expect_pgm_error(const std::string& data, std::size_t* offset = nullptr) {
    try {
        maxsub::read_pgm(bytes_of(data));
    } catch (const maxsub::PgmError& e) {
        if (offset) *offset = e.offset();
        return e.what();
    }
    ADD_FAILURE() << "expected a PGM error";
    return {};
}

}  // namespace

TEST(ParseWeights, LinesAndCommas) {
    EXPECT_EQ(maxsub::parse_weights("1,-2,3,4,-1"), (std::vector<double>{1, -2, 3, 4, -1}));
    EXPECT_EQ(maxsub::parse_weights("1\n-2.5\n\n3e1\r\n"), (std::vector<double>{1, -2.5, 30}));
    EXPECT_EQ(maxsub::parse_weights("# header\n1, 2\n3 ,4\n"), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(maxsub::parse_weights("+0.5"), (std::vector<double>{0.5}));
}

TEST(ParseWeights, ErrorsNameTheLine) {
    try {
        maxsub::parse_weights("1\n2\nabc\n");
        FAIL();
    } catch (const maxsub::InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(maxsub::parse_weights("1,,2"), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::parse_weights("1,2 3"), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::parse_weights("1,2,"), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::parse_weights("inf"), maxsub::InvalidInput);
}

TEST(ParseMatrixCsv, Shapes) {
    const auto m = maxsub::parse_matrix_csv("1,2,3\n4,5,6\n");
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    EXPECT_DOUBLE_EQ(m(1, 2), 6.0);
    EXPECT_THROW(maxsub::parse_matrix_csv("1,2\n3\n"), maxsub::InvalidInput);
    EXPECT_THROW(maxsub::parse_matrix_csv("\n"), maxsub::InvalidInput);
}

TEST(Pgm, ParsesPlainWithComments) {
    const std::string data = "P2\n# a comment\n3 2\n# another\n255\n0 10 20\n30 40 255\n";
    const auto img = maxsub::read_pgm(bytes_of(data));
    EXPECT_EQ(img.width, 3u);
    EXPECT_EQ(img.height, 2u);
    EXPECT_EQ(img.maxval, 255u);
    EXPECT_EQ(img.format, PgmFormat::Plain);
    EXPECT_EQ(img.pixels, (std::vector<std::uint16_t>{0, 10, 20, 30, 40, 255}));
}

TEST(Pgm, ParsesRaw8And16Bit) {
    std::string p5 = "P5\n2 2\n255\n";
    p5 += std::string{'\x00', '\x7f', '\x80', '\xff'};
    auto img = maxsub::read_pgm(bytes_of(p5));
    EXPECT_EQ(img.pixels, (std::vector<std::uint16_t>{0, 127, 128, 255}));

    std::string wide = "P5\n2 1\n65535\n";
    wide += std::string{'\x01', '\x02', '\xff', '\xfe'};
    img = maxsub::read_pgm(bytes_of(wide));
    EXPECT_EQ(img.pixels, (std::vector<std::uint16_t>{0x0102, 0xfffe}));
}

TEST(Pgm, CanonicalFixturesRoundTripByteExactly) {
    const std::string p2 = "P2\n4 2\n1000\n0 1 999 1000\n500 7 8 9\n";
    auto img = maxsub::read_pgm(bytes_of(p2));
    EXPECT_EQ(maxsub::write_pgm(img, PgmFormat::Plain), p2);

    std::string p5 = "P5\n3 2\n255\n";
    p5 += std::string{'\x01', '\x00', '\xff', '\x10', '\x20', '\x30'};
    img = maxsub::read_pgm(bytes_of(p5));
    EXPECT_EQ(maxsub::write_pgm(img, PgmFormat::Raw), p5);

    std::string p5w = "P5\n1 2\n4095\n";
    p5w += std::string{'\x0f', '\xff', '\x00', '\x01'};
    img = maxsub::read_pgm(bytes_of(p5w));
    EXPECT_EQ(maxsub::write_pgm(img, PgmFormat::Raw), p5w);
}

TEST(Pgm, RandomImagesRoundTripThroughBothEncodings) {
    std::mt19937 gen(4);
    for (int c = 0; c < 50; ++c) {
        maxsub::PgmImage img;
        img.width = 1 + gen() % 9;
        img.height = 1 + gen() % 9;
        img.maxval = c % 2 ? 255 : 1 + gen() % 65535;
        for (std::size_t i = 0; i < img.width * img.height; ++i) img.pixels.push_back(gen() % (img.maxval + 1));
        for (PgmFormat f : {PgmFormat::Plain, PgmFormat::Raw}) {
            const std::string enc = maxsub::write_pgm(img, f);
            const auto back = maxsub::read_pgm(bytes_of(enc));
            EXPECT_EQ(back.pixels, img.pixels);
            EXPECT_EQ(maxsub::write_pgm(back, f), enc);
        }
    }
}

TEST(Pgm, ErrorsReportByteOffsets) {
    std::size_t off = 99;
    expect_pgm_error("P6\n1 1\n255\n\x00", &off);
    EXPECT_EQ(off, 0u);

    const std::string trunc = std::string("P5\n2 2\n255\n") + "ab";
    const std::string msg = expect_pgm_error(trunc, &off);
    EXPECT_EQ(off, trunc.size());
    EXPECT_NE(msg.find("truncated"), std::string::npos);

    expect_pgm_error("P2\n2 x\n255\n", &off);
    EXPECT_EQ(off, 5u);

    expect_pgm_error("P2\n1 1\n255\n256\n", &off);
    EXPECT_EQ(off, 11u);

    expect_pgm_error("P2\n1 1\n70000\n1\n", &off);
    expect_pgm_error("P2\n0 1\n255\n", &off);
    expect_pgm_error("P2\n2 1\n255\n1\n", &off);
}

TEST(Pgm, ToMatrixSubtractsBackground) {
    const std::string data = "P2\n2 1\n255\n10 200\n";
    const auto m = maxsub::pgm_to_matrix(maxsub::read_pgm(bytes_of(data)), 10.0);
    EXPECT_EQ(m.rows(), 1u);
    EXPECT_EQ(m.cols(), 2u);
    EXPECT_DOUBLE_EQ(m(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(m(0, 1), 190.0);
}
