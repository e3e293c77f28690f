#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "lnec/construct.hpp"
#include "lnec/sim.hpp"

using namespace lnec;
using namespace lnec::testing;

TEST_SUITE_BEGIN("sim");

namespace {

Code all_ones_parallel(int n, const Field& f) {
  auto net = parallel_net(n);
  Code code(net, f, 1);
  for (int e = 0; e < n; ++e) code.set_coef_msg(0, e, 1);
  return code;
}

}  // namespace

TEST_CASE("error-free encoding reproduces the coded symbols") {
  Code code = butterfly_standard_code();
  Simulator sim(code);
  Vec x{1, 0};
  Vec z(code.net().channel_count(), 0);
  ChannelOutputs out = sim.encode(x, z);
  CHECK(out.intended == out.actual);
  // butterfly XOR: e5 carries x1 + x2
  CHECK(out.actual[code.net().channel_index("e5")] == 1);
  CHECK(out.actual[code.net().channel_index("e9")] == 1);

  NodeCollection t1{{code.net().node_index("t1")}};
  Vec received = sim.observe(out, t1);
  REQUIRE(received.size() == 2);
}

TEST_CASE("single error propagates as the transfer column says") {
  Code code = butterfly_standard_code();
  Simulator sim(code);
  int e3 = code.net().channel_index("e3");
  Vec x{0, 0};
  Vec z(code.net().channel_count(), 0);
  z[e3] = 1;
  ChannelOutputs out = sim.encode(x, z);
  for (int e = 0; e < code.net().channel_count(); ++e)
    CHECK(out.actual[e] == sim.kernels().at(code.omega() + e3, e));
}

TEST_CASE("observe composes with encode as the decoding equation") {
  std::mt19937_64 rng(71);
  Field f = Field::make(3, 1);
  auto net = butterfly_net();
  for (int trial = 0; trial < 20; ++trial) {
    Code code = random_code(net, f, 2, rng());
    Simulator sim(code);
    Vec x{static_cast<uint16_t>(rng() % 3), static_cast<uint16_t>(rng() % 3)};
    Vec z(net->channel_count());
    for (auto& v : z) v = static_cast<uint16_t>(rng() % 3);
    ChannelOutputs out = sim.encode(x, z);
    for (const NodeCollection& T : enumerate_collections(*net, 2)) {
      Vec received = sim.observe(out, T);
      DecodingMatrix dm = decoding_matrix(code, sim.kernels(), T);
      // (X Z) * F_T column by column
      for (int c = 0; c < dm.m.cols(); ++c) {
        uint16_t acc = 0;
        for (int i = 0; i < 2; ++i)
          acc = f.add(acc, f.mul(x[i], dm.m.at(i, c)));
        for (int d = 0; d < net->channel_count(); ++d)
          if (z[d]) acc = f.add(acc, f.mul(z[d], dm.m.at(2 + d, c)));
        CHECK(acc == received[c]);
      }
    }
  }
}

TEST_CASE("decode with no errors recovers the message at radius zero") {
  Code code = butterfly_standard_code();
  Simulator sim(code);
  NodeCollection t1{{code.net().node_index("t1")}};
  for (uint16_t a : {0, 1})
    for (uint16_t b : {0, 1}) {
      Vec x{a, b};
      Vec z(code.net().channel_count(), 0);
      Vec received = sim.observe(sim.encode(x, z), t1);
      DecodeResult dr = sim.decode(t1, received, 0);
      REQUIRE(dr.status == DecodeResult::Status::unique);
      CHECK(dr.message == x);
      CHECK(dr.weight == 0);
    }
}

TEST_CASE("single-error correction on the distance-3 repetition code") {
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  for (uint16_t x0 : {0, 1}) {
    for (int e = 0; e < 3; ++e) {
      Vec x{x0};
      Vec z(3, 0);
      z[e] = 1;
      Vec received = sim.observe(sim.encode(x, z), t);
      DecodeResult dr = sim.decode(t, received, 1);
      REQUIRE(dr.status == DecodeResult::Status::unique);
      CHECK(dr.message == x);
      CHECK(dr.error == z);
      CHECK(dr.weight == 1);
    }
  }
}

TEST_CASE("two errors at radius one stay within the guarantee") {
  // outside the half-distance regime the decoder may fail or miscorrect,
  // but it must never violate the guarantee for weights within it
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  Vec x{1};
  Vec z{1, 1, 0};
  Vec received = sim.observe(sim.encode(x, z), t);
  DecodeResult dr = sim.decode(t, received, 1);
  // weight-2 flip of the all-ones word looks like weight-1 of the zero word
  CHECK(dr.status == DecodeResult::Status::unique);
  CHECK(dr.message != x);
}

TEST_CASE("decode reports ambiguity instead of guessing") {
  // two parallel channels, identity-ish code, distance 2: a single error
  // leaves two equally near messages
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(2, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  Vec received{1, 0};
  DecodeResult dr = sim.decode(t, received, 1);
  CHECK(dr.status == DecodeResult::Status::ambiguous);
  CHECK(dr.weight == 1);
}

TEST_CASE("decode demands full message rank") {
  Code zero(parallel_net(2), Field::make(2, 1), 1);
  Simulator sim(zero);
  NodeCollection t{{zero.net().node_index("t")}};
  Vec received{0, 0};
  CHECK_THROWS_AS(sim.decode(t, received, 0), std::invalid_argument);
}

TEST_CASE("no solution beyond the radius") {
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  Vec received{1, 1, 0};  // weight-1 error from all-ones
  DecodeResult dr = sim.decode(t, received, 0);
  CHECK(dr.status == DecodeResult::Status::no_solution);
}

TEST_CASE("capability sweep: exhaustive single-error success") {
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  SweepReport rep = sim.capability_sweep(t, 1);
  CHECK(rep.cases == 8);  // 2 messages x (1 + 3) error vectors
  CHECK(rep.correct == 8);
  CHECK_FALSE(rep.first_failure.has_value());

  SweepReport serial = sim.capability_sweep_serial(t, 1);
  CHECK(serial.cases == rep.cases);
  CHECK(serial.correct == rep.correct);
}

TEST_CASE("capability sweep finds failures beyond half distance") {
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  SweepReport rep = sim.capability_sweep(t, 2);
  CHECK(rep.cases == 2 * (1 + 3 + 3));
  CHECK(rep.correct < rep.cases);
  REQUIRE(rep.first_failure.has_value());
  SweepReport serial = sim.capability_sweep_serial(t, 2);
  CHECK(serial.correct == rep.correct);
  CHECK(serial.first_failure->message == rep.first_failure->message);
  CHECK(serial.first_failure->error == rep.first_failure->error);
}

TEST_CASE("sweep budget guard") {
  Code code = all_ones_parallel(3, Field::make(2, 1));
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  CHECK_THROWS_AS(sim.capability_sweep(t, 1, 4), BudgetExceeded);
}

TEST_CASE("half-distance sweep on a constructed MDS code") {
  auto net = parallel_net(5);
  FieldBounds fb = field_bounds(*net, 1);
  Field f = smallest_field_above(std::stoull(fb.multicast.to_string()));
  Code code = construct_multicast_mds(*net, 1, f);
  CodeReport rep = verdicts(code);
  REQUIRE(rep.multicast_mds);
  int d = rep.node_entries[0].dmin->value;
  REQUIRE(d == 5);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  SweepReport sw = sim.capability_sweep(t, (d - 1) / 2);
  CHECK(sw.correct == sw.cases);
}

TEST_CASE("undetected corruption implies weight at least dmin") {
  // for every nonzero Z with wt < d, the received word differs from the
  // error-free word of the same message
  Field f = Field::make(2, 1);
  Code code = all_ones_parallel(3, f);
  Simulator sim(code);
  NodeCollection t{{code.net().node_index("t")}};
  for (uint16_t x0 : {0, 1}) {
    Vec x{x0};
    Vec clean = sim.observe(sim.encode(x, Vec(3, 0)), t);
    for (uint32_t mask = 1; mask < 8; ++mask) {
      Vec z(3, 0);
      int wt = 0;
      for (int e = 0; e < 3; ++e)
        if (mask & (1u << e)) {
          z[e] = 1;
          ++wt;
        }
      Vec dirty = sim.observe(sim.encode(x, z), t);
      if (wt < 3) CHECK(dirty != clean);
    }
  }
}

TEST_SUITE_END();
