#include "doctest.h"

#include "generators.hpp"

#include "skirmish/codec.hpp"
#include "skirmish/errors.hpp"
#include "skirmish/framing.hpp"

using namespace skirmish;
using skirmish::testing::Rng;

namespace {

Bytes bytes(std::initializer_list<int> v) {
  Bytes out;
  for (int b : v) out.push_back(static_cast<std::uint8_t>(b));
  return out;
}

std::size_t decode_error_offset(const Bytes& payload) {
  try {
    decode_message(payload);
  } catch (const DecodeError& e) {
    return e.offset();
  }
  FAIL("payload decoded unexpectedly");
  return 0;
}

UnitState sample_unit(UnitId id, bool enemy) {
  UnitState u;
  u.id = id;
  u.type = 2;
  u.position = {10, 20};
  u.hp = 60;
  u.gwtype = 1;
  u.awtype = 1;
  u.gwattack = 7;
  u.awattack = 7;
  u.gwrange = 160;
  u.awrange = 160;
  u.idle = false;
  u.target = 9;
  u.enemy = enemy;
  return u;
}

} // namespace

TEST_CASE("write_framed examples") {
  CHECK(write_framed(bytes({0x61, 0x62})) == bytes({0x02, 0, 0, 0, 0x61, 0x62}));
  CHECK(write_framed(Bytes{}) == bytes({0, 0, 0, 0}));
  const Bytes big(300, 0xAB);
  const Bytes framed = write_framed(big);
  REQUIRE(framed.size() == 304);
  CHECK(Bytes(framed.begin(), framed.begin() + 4) == bytes({0x2C, 0x01, 0, 0}));
  CHECK_THROWS_AS(write_framed(Bytes(kMaxFrameBytes + 1)), OversizeError);
  CHECK(write_framed(Bytes(kMaxFrameBytes)).size() == kMaxFrameBytes + 4);
}

TEST_CASE("read_framed examples") {
  SUBCASE("round trip and concatenation") {
    Bytes stream;
    append_framed(bytes({1, 2, 3}), stream);
    append_framed(Bytes{}, stream);
    append_framed(Bytes(300, 7), stream);
    SpanSource src(stream);
    CHECK(read_framed(src) == bytes({1, 2, 3}));
    CHECK(read_framed(src).empty());
    CHECK(read_framed(src) == Bytes(300, 7));
    CHECK_FALSE(try_read_framed(src).has_value());
    CHECK_THROWS_AS(read_framed(src), TruncatedError);
  }
  SUBCASE("declared five bytes, one present") {
    const Bytes data = bytes({0x05, 0, 0, 0, 0x01});
    SpanSource src(data);
    CHECK_THROWS_AS(read_framed(src), TruncatedError);
  }
  SUBCASE("partial length prefix") {
    const Bytes data = bytes({0x05, 0});
    SpanSource src(data);
    CHECK_THROWS_AS(try_read_framed(src), TruncatedError);
  }
  SUBCASE("oversize length") {
    const Bytes data = bytes({0xFF, 0xFF, 0xFF, 0xFF});
    SpanSource src(data);
    CHECK_THROWS_AS(read_framed(src), OversizeError);
  }
}

TEST_CASE("encode_message examples") {
  CHECK(encode_message(State{}) == bytes({0x03, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(encode_message(Commands{{Stop{7}}}) ==
        bytes({0x04, 0x01, 0x00, 0x00, 0x07, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(write_framed(encode_message(Commands{{Stop{7}}})).size() == 20);

  State one;
  one.frame.units_myself.emplace(3, sample_unit(3, false));
  const Bytes enc = encode_message(one);
  CHECK(enc.size() == 93);
  CHECK(state_payload_size(1) == 93);
  CHECK(state_payload_size(10) == 849);

  // id then the twenty fields, little-endian.
  CHECK(enc[7] == 3);
  CHECK(enc[11] == 2);  // type
  CHECK(enc[15] == 10); // x
  CHECK(enc[19] == 20); // y
  // target at field index 17
  const std::size_t target_at = 11 + 17 * 4;
  CHECK(enc[target_at] == 9);

  CHECK(encode_message(Commands{{Move{1, -2, 300}}}) ==
        bytes({0x04, 1, 0, 1, 1, 0, 0, 0, 0xFE, 0xFF, 0xFF, 0xFF, 0x2C, 0x01, 0, 0}));
  CHECK(encode_message(Commands{{Attack{2, 5}}}) ==
        bytes({0x04, 1, 0, 2, 2, 0, 0, 0, 5, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(encode_message(End{GameResult::Win, 260}) == bytes({0x05, 1, 4, 1, 0, 0}));
  CHECK(encode_message(Restart{}) == bytes({0x06}));
  CHECK(encode_message(Quit{}) == bytes({0x07}));
  CHECK(encode_message(Error{3, "no"}) == bytes({0x08, 3, 0, 2, 0, 'n', 'o'}));
  CHECK(encode_message(Hello{1, "ab", 0}) == bytes({0x01, 1, 0, 2, 0, 'a', 'b', 0}));
}

TEST_CASE("SETUP layout") {
  Setup s;
  s.player_id = 1;
  s.map_w = 512;
  s.map_h = 256;
  s.fog = true;
  s.frame_skip = 4;
  s.seed = 0x0102030405060708ULL;
  s.roster = Roster({UnitTypeSpec{3, "x", 10, 2, 1, 1, 256, 100, true, {5, 20, 9}, {}}});
  const Bytes expect = bytes({0x02, 1, 0, 2, 0, 0, 0, 1, 0, 0, 1, 4, 8, 7, 6, 5, 4, 3, 2, 1,
                              1,          // type count
                              3, 1, 0, 'x', // id, name
                              10, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 100,
                              0, 0, 0, 1, // flyer
                              5, 0, 0, 0, 20, 0, 0, 0, 9, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                              0, 0});
  CHECK(encode_message(s) == expect);
  CHECK(decode_message(expect) == Message{s});
}

TEST_CASE("encode rejects invariant violations") {
  Commands many;
  many.commands.assign(kMaxCommands + 1, Stop{1});
  CHECK_THROWS_AS(encode_message(many), EncodeError);
  many.commands.pop_back();
  CHECK(encode_message(many).size() == 3 + 13 * kMaxCommands);

  State bad_key;
  bad_key.frame.units_myself.emplace(1, sample_unit(2, false));
  CHECK_THROWS_AS(encode_message(bad_key), EncodeError);

  State both;
  both.frame.units_myself.emplace(1, sample_unit(1, false));
  both.frame.units_enemy.emplace(1, sample_unit(1, true));
  CHECK_THROWS_AS(encode_message(both), EncodeError);

  CHECK_THROWS_AS(encode_message(Hello{1, std::string(70000, 'a'), 0}), EncodeError);
}

TEST_CASE("decode errors name the offset") {
  CHECK(decode_error_offset(bytes({0xFF})) == 0);
  CHECK_THROWS_WITH_AS(decode_message(bytes({0xFF})), doctest::Contains("unknown message tag"),
                       DecodeError);
  CHECK_THROWS_AS(decode_message(Bytes{}), DecodeError);
  CHECK_THROWS_AS(decode_message(bytes({0x09})), DecodeError);

  SUBCASE("count says two, bytes hold one") {
    State one;
    one.frame.units_myself.emplace(3, sample_unit(3, false));
    Bytes enc = encode_message(one);
    enc[5] = 2; // myself count
    CHECK_THROWS_AS(decode_message(enc), DecodeError);
  }
  SUBCASE("trailing byte") {
    Bytes enc = encode_message(End{});
    enc.push_back(0);
    CHECK(decode_error_offset(enc) == 6);
  }
  SUBCASE("ids must ascend") {
    State two;
    two.frame.units_myself.emplace(3, sample_unit(3, false));
    two.frame.units_myself.emplace(4, sample_unit(4, false));
    Bytes enc = encode_message(two);
    enc[7 + 84] = 2; // second id becomes 2
    CHECK(decode_error_offset(enc) == 7 + 84);
    enc[7 + 84] = 3; // duplicate
    CHECK(decode_error_offset(enc) == 7 + 84);
  }
  SUBCASE("duplicate across groups") {
    State two;
    two.frame.units_myself.emplace(3, sample_unit(3, false));
    two.frame.units_enemy.emplace(4, sample_unit(4, true));
    Bytes enc = encode_message(two);
    enc[9 + 84] = 3;
    CHECK_THROWS_AS(decode_message(enc), DecodeError);
  }
  SUBCASE("idle must be boolean") {
    State one;
    one.frame.units_myself.emplace(3, sample_unit(3, false));
    Bytes enc = encode_message(one);
    enc[11 + 16 * 4] = 2;
    CHECK_THROWS_AS(decode_message(enc), DecodeError);
  }
  SUBCASE("command kind and padding") {
    CHECK_THROWS_AS(decode_message(bytes({0x04, 1, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})),
                    DecodeError);
    CHECK_THROWS_AS(decode_message(bytes({0x04, 1, 0, 0, 7, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0})),
                    DecodeError);
    CHECK_THROWS_AS(decode_message(bytes({0x04, 2, 0, 0, 7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0})),
                    DecodeError);
  }
  SUBCASE("end result range") {
    CHECK_THROWS_AS(decode_message(bytes({0x05, 3, 0, 0, 0, 0})), DecodeError);
  }
}

TEST_CASE("decode places units by group") {
  State s;
  s.frame.frame_number = 12;
  s.frame.units_myself.emplace(1, sample_unit(1, false));
  s.frame.units_enemy.emplace(0, sample_unit(0, true));
  s.frame.units_enemy.emplace(5, sample_unit(5, true));
  const auto decoded = std::get<State>(decode_message(encode_message(s)));
  CHECK(decoded == s);
  CHECK(decoded.frame.units_enemy.at(5).enemy);
  CHECK_FALSE(decoded.frame.units_myself.at(1).enemy);
}

TEST_CASE("round trip and canonical re-encoding over random messages") {
  Rng rng(20240611);
  for (int i = 0; i < 20000; ++i) {
    const Message m = skirmish::testing::any_message(rng);
    const Bytes enc = encode_message(m);
    const Message back = decode_message(enc);
    REQUIRE(back == m);
    REQUIRE(encode_message(back) == enc);
    REQUIRE(enc[0] == static_cast<std::uint8_t>(tag_of(m)));
  }
}

TEST_CASE("framed stream of random messages decodes in order") {
  Rng rng(5);
  std::vector<Message> msgs;
  Bytes stream;
  for (int i = 0; i < 300; ++i) {
    msgs.push_back(skirmish::testing::any_message(rng));
    append_framed(encode_message(msgs.back()), stream);
  }
  SpanSource src(stream);
  for (const auto& m : msgs) CHECK(decode_message(read_framed(src)) == m);
  CHECK_FALSE(try_read_framed(src).has_value());
}

TEST_CASE("decoder survives arbitrary and mutated input") {
  Rng rng(77);
  std::vector<Bytes> seeds;
  for (int i = 0; i < 64; ++i) seeds.push_back(encode_message(skirmish::testing::any_message(rng)));
  int decoded = 0;
  for (int i = 0; i < 50000; ++i) {
    Bytes input;
    if (i % 2 == 0) {
      input.resize(rng() % 128);
      for (auto& b : input) b = static_cast<std::uint8_t>(rng());
      if (!input.empty() && rng() % 2 == 0) input[0] = static_cast<std::uint8_t>(1 + rng() % 9);
    } else {
      input = seeds[rng() % seeds.size()];
      const int flips = 1 + static_cast<int>(rng() % 4);
      for (int f = 0; f < flips && !input.empty(); ++f) {
        input[rng() % input.size()] = static_cast<std::uint8_t>(rng());
      }
      if (rng() % 4 == 0) input.resize(rng() % (input.size() + 1));
    }
    try {
      const Message m = decode_message(input);
      CHECK(encode_message(m) == input);
      ++decoded;
    } catch (const DecodeError& e) {
      CHECK(e.offset() <= input.size());
    }
    SpanSource src(input);
    try {
      while (try_read_framed(src)) {
      }
    } catch (const TruncatedError&) {
    } catch (const OversizeError&) {
    }
    CHECK(src.position() <= input.size());
  }
  MESSAGE("valid decodes among fuzz inputs: " << decoded);
}
