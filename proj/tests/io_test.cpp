#include <gtest/gtest.h>

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "secagg/io.hpp"

using namespace secagg;

static std::shared_ptr<const Field> gf(std::uint64_t p, unsigned m = 1) {
    return std::make_shared<const Field>(p, m);
}

TEST(Wire, IntegerRoundTrips) {
    std::stringstream ss;
    wire::put_u8(ss, 0xab);
    wire::put_u16(ss, 0x1234);
    wire::put_u32(ss, 0xdeadbeef);
    wire::put_u64(ss, 0x0102030405060708ull);
    EXPECT_EQ(wire::get_u8(ss), 0xab);
    EXPECT_EQ(wire::get_u16(ss), 0x1234);
    EXPECT_EQ(wire::get_u32(ss), 0xdeadbeefu);
    EXPECT_EQ(wire::get_u64(ss), 0x0102030405060708ull);
    EXPECT_THROW(wire::get_u8(ss), io_error);  // exhausted
}

TEST(Wire, LittleEndianLayout) {
    std::stringstream ss;
    wire::put_u32(ss, 0x00010203);
    std::string bytes = ss.str();
    ASSERT_EQ(bytes.size(), 4u);
    EXPECT_EQ(bytes, std::string("\x03\x02\x01\x00", 4));
}

TEST(Wire, ElementWidthFollowsField) {
    Field f5(5), f257(257);
    std::stringstream a;
    wire::put_elems(a, f5, {4, 0, 3});
    EXPECT_EQ(a.str().size(), 3u);  // one byte per element
    std::stringstream b;
    wire::put_elems(b, f257, {256});
    EXPECT_EQ(b.str().size(), 2u);  // nine bits round up to two bytes
    EXPECT_EQ(wire::get_elems(b, f257, 1), (std::vector<felem>{256}));
    std::stringstream c;
    EXPECT_THROW(wire::put_elems(c, f5, {5}), io_error);
    std::stringstream d(std::string("\x07", 1));
    EXPECT_THROW(wire::get_elems(d, f5, 1), io_error);  // 7 outside GF(5)
}

TEST(Params, RoundTripAndGoldenBytes) {
    SessionParams sp = SessionParams::make(3, 2, 1, gf(5), 1, 1);
    std::stringstream ss;
    write_params(ss, sp);
    const std::string want(
        "\x03\x00\x00\x00"                   // users
        "\x02\x00\x00\x00"                   // response threshold
        "\x01\x00\x00\x00"                   // collusion threshold
        "\x05\x00\x00\x00\x00\x00\x00\x00"   // characteristic
        "\x01\x00\x00\x00"                   // degree
        "\x01\x00\x00\x00"                   // grouping
        "\x01\x00\x00\x00\x00\x00\x00\x00",  // input length
        36);
    EXPECT_EQ(ss.str(), want);
    SessionParams back = read_params(ss);
    EXPECT_EQ(back.users, 3);
    EXPECT_EQ(back.min_responders, 2);
    EXPECT_EQ(back.max_colluders, 1);
    EXPECT_EQ(back.base_field->size(), 5u);
    EXPECT_EQ(back.input_len, 1);
}

TEST(DealerFile, RoundTrip) {
    SessionParams sp = SessionParams::make(4, 2, 1, gf(7), 1, 2);
    Rng rng(31);
    DealerOutput out = deal(sp, rng);
    std::stringstream ss;
    write_dealer_output(ss, out);
    DealerOutput back = read_dealer_output(ss);
    EXPECT_EQ(back.scheme->params.users, 4);
    EXPECT_FALSE(back.scheme->options.structured);
    for (std::size_t k = 0; k < out.users.size(); ++k) {
        EXPECT_EQ(back.users[k].self_mask, out.users[k].self_mask);
        EXPECT_EQ(back.users[k].shares, out.users[k].shares);
    }
}

TEST(DealerFile, RoundTripGroupedAndStructured) {
    SessionParams g = SessionParams::make(4, 2, 1, gf(2), 3, 6);
    Rng rng(8);
    DealerOutput gout = deal(g, rng);
    std::stringstream gs;
    write_dealer_output(gs, gout);
    DealerOutput gback = read_dealer_output(gs);
    for (std::size_t k = 0; k < gout.users.size(); ++k) {
        EXPECT_EQ(gback.users[k].self_mask, gout.users[k].self_mask);
        EXPECT_EQ(gback.users[k].shares, gout.users[k].shares);
    }

    SessionParams st = SessionParams::make(3, 2, 0, gf(5), 1, 2);
    DealerOutput sout = deal_structured_k3(st, rng);
    std::stringstream ssn;
    write_dealer_output(ssn, sout);
    DealerOutput sback = read_dealer_output(ssn);
    EXPECT_TRUE(sback.scheme->options.structured);
    EXPECT_EQ(sback.scheme->sharing[0], sout.scheme->sharing[0]);
}

TEST(DealerFile, DeterministicBytes) {
    SessionParams sp = SessionParams::make(3, 2, 1, gf(5));
    Rng a(42), b(42);
    std::stringstream sa, sb;
    write_dealer_output(sa, deal(sp, a));
    write_dealer_output(sb, deal(sp, b));
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().substr(0, 4), "SAGD");
}

TEST(DealerFile, RejectsCorruptHeaders) {
    SessionParams sp = SessionParams::make(3, 2, 1, gf(5));
    Rng rng(1);
    std::stringstream ss;
    write_dealer_output(ss, deal(sp, rng));
    std::string bytes = ss.str();

    std::stringstream bad_magic("SAGX" + bytes.substr(4));
    EXPECT_THROW(read_dealer_output(bad_magic), io_error);
    std::string vbytes = bytes;
    vbytes[4] = 9;  // version
    std::stringstream bad_version(vbytes);
    EXPECT_THROW(read_dealer_output(bad_version), io_error);
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_dealer_output(truncated), io_error);
    std::string tbytes = bytes;
    tbytes[6] = 7;  // scheme tag
    std::stringstream bad_tag(tbytes);
    EXPECT_THROW(read_dealer_output(bad_tag), io_error);
}

TEST(TranscriptFile, RoundTrip) {
    SessionParams sp = SessionParams::make(4, 2, 1, gf(7), 1, 2);
    Rng rng(17);
    DealerOutput dealt = deal(sp, rng);
    std::vector<InputVector> inputs;
    for (int k = 0; k < 4; ++k)
        inputs.push_back({rng.uniform_vec(*sp.base_field, 2)});
    SessionResult res = run_session(sp, inputs, dealt, {set_of({1, 3, 4}), set_of({1, 4})}, 77);

    std::stringstream ss;
    write_transcript(ss, sp, res.transcript);
    EXPECT_EQ(ss.str().substr(0, 4), "SAGT");
    SessionParams back_params;
    Transcript back = read_transcript(ss, &back_params);
    EXPECT_EQ(back.session_id, 77u);
    EXPECT_EQ(back.survivors, res.transcript.survivors);
    EXPECT_EQ(back.responders, res.transcript.responders);
    ASSERT_EQ(back.round1.size(), res.transcript.round1.size());
    for (std::size_t i = 0; i < back.round1.size(); ++i) {
        EXPECT_EQ(back.round1[i].sender, res.transcript.round1[i].sender);
        EXPECT_EQ(back.round1[i].payload, res.transcript.round1[i].payload);
    }
    ASSERT_EQ(back.round2.size(), res.transcript.round2.size());
    for (std::size_t i = 0; i < back.round2.size(); ++i) {
        EXPECT_EQ(back.round2[i].survivor_set, res.transcript.round2[i].survivor_set);
        EXPECT_EQ(back.round2[i].payload, res.transcript.round2[i].payload);
    }
    EXPECT_EQ(back_params.users, 4);
}

TEST(TranscriptFile, GoldenMessageBytes) {
    Field f(5);
    std::stringstream ss;
    Round1Message m{2, {4}};
    write_round1(ss, f, 9, m);
    const std::string want(
        "\x09\x00\x00\x00"  // session
        "\x01"              // round tag
        "\x02\x00\x00\x00"  // sender
        "\x00\x00\x00\x00"  // no announced set in round 1
        "\x04",             // payload
        14);
    EXPECT_EQ(ss.str(), want);
}

TEST(Inputs, ParseAndWrite) {
    SessionParams sp = SessionParams::make(3, 2, 1, gf(5), 1, 2);
    std::stringstream good("1 4\n\n0 0\n3 2\n");
    std::vector<InputVector> v = parse_inputs(good, sp);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0].w, (std::vector<felem>{1, 4}));
    EXPECT_EQ(v[2].w, (std::vector<felem>{3, 2}));

    std::stringstream out;
    write_inputs(out, v);
    std::vector<InputVector> again = parse_inputs(out, sp);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(again[k].w, v[k].w);
}

TEST(Inputs, ParseErrorsNameTheLine) {
    SessionParams sp = SessionParams::make(3, 2, 1, gf(5), 1, 2);
    std::stringstream bad_value("1 9\n0 0\n3 2\n");
    try {
        parse_inputs(bad_value, sp);
        FAIL() << "expected io_error";
    } catch (const io_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    }
    std::stringstream bad_count("1 4 2\n0 0\n3 2\n");
    EXPECT_THROW(parse_inputs(bad_count, sp), io_error);
    std::stringstream bad_token("1 x\n0 0\n3 2\n");
    EXPECT_THROW(parse_inputs(bad_token, sp), io_error);
    std::stringstream bad_lines("1 4\n0 0\n");
    EXPECT_THROW(parse_inputs(bad_lines, sp), io_error);
}

TEST(Reports, ExperimentFormat) {
    ExperimentPlan plan;
    plan.params = SessionParams::make(3, 2, 1, gf(5));
    ExperimentReport rep = run_experiment(plan);
    std::string text = format_experiment_report(rep, {"t0.bin", "t1.bin", "t2.bin", "t3.bin",
                                                      "t4.bin", "t5.bin", "t6.bin"});
    EXPECT_NE(text.find("# aggregation experiment report"), std::string::npos);
    EXPECT_NE(text.find("params K=3 U=2 T=1 p=5 m=1 B=1 L=1"), std::string::npos);
    EXPECT_NE(text.find("records 28"), std::string::npos);
    EXPECT_NE(text.find("decode=ok"), std::string::npos);
    EXPECT_EQ(text.find("decode=FAIL"), std::string::npos);
    EXPECT_NE(text.find("transcript=t6.bin"), std::string::npos);
}

TEST(Reports, SetHexAndParamsLine) {
    EXPECT_EQ(set_hex(set_of({1, 3, 4})), "0xd");
    SessionParams sp = SessionParams::make(4, 2, 1, gf(2), 3, 6);
    EXPECT_EQ(params_line(sp), "params K=4 U=2 T=1 p=2 m=1 B=3 L=6");
}
