#pragma once

#include <memory>
#include <random>
#include <string>

#include "lnec/kernels.hpp"

namespace lnec::testing {

// n parallel channels s -> t, ids e1..en.
inline std::shared_ptr<Network> parallel_net(int n) {
  std::vector<Network::EdgeSpec> edges;
  for (int i = 1; i <= n; ++i)
    edges.push_back({"e" + std::to_string(i), "s", "t"});
  return std::make_shared<Network>(Network::build("s", {}, edges));
}

// s -> a -> t line.
inline std::shared_ptr<Network> line_net() {
  return std::make_shared<Network>(
      Network::build("s", {}, {{"e1", "s", "a"}, {"e2", "a", "t"}}));
}

// Three parallel channels s -> a feeding a single channel a -> t.
inline std::shared_ptr<Network> bottleneck_net() {
  return std::make_shared<Network>(Network::build(
      "s", {},
      {{"e1", "s", "a"}, {"e2", "s", "a"}, {"e3", "s", "a"}, {"e4", "a", "t"}}));
}

// Two disjoint s -> t routes through a and b.
inline std::shared_ptr<Network> diamond_net() {
  return std::make_shared<Network>(Network::build("s", {},
                                                  {{"e1", "s", "a"},
                                                   {"e2", "s", "b"},
                                                   {"e3", "a", "t"},
                                                   {"e4", "b", "t"}}));
}

// The 7-node, 9-channel butterfly with sinks t1 and t2.
inline std::shared_ptr<Network> butterfly_net() {
  return std::make_shared<Network>(Network::build("s", {},
                                                  {{"e1", "s", "u1"},
                                                   {"e2", "s", "u2"},
                                                   {"e3", "u1", "w"},
                                                   {"e4", "u2", "w"},
                                                   {"e5", "w", "x"},
                                                   {"e6", "u1", "t1"},
                                                   {"e7", "u2", "t2"},
                                                   {"e8", "x", "t1"},
                                                   {"e9", "x", "t2"}}));
}

// The classic rate-2 XOR assignment over GF(2) on the butterfly.
inline Code butterfly_standard_code() {
  auto net = butterfly_net();
  Code code(net, Field::make(2, 1), 2);
  auto E = [&](const char* id) { return net->channel_index(id); };
  code.set_coef_msg(0, E("e1"), 1);
  code.set_coef_msg(1, E("e2"), 1);
  code.set_coef(E("e1"), E("e3"), 1);
  code.set_coef(E("e2"), E("e4"), 1);
  code.set_coef(E("e3"), E("e5"), 1);
  code.set_coef(E("e4"), E("e5"), 1);
  code.set_coef(E("e1"), E("e6"), 1);
  code.set_coef(E("e2"), E("e7"), 1);
  code.set_coef(E("e5"), E("e8"), 1);
  code.set_coef(E("e5"), E("e9"), 1);
  return code;
}

// Seeded layered DAG: `widths` nodes per layer, every consecutive pair of
// layers connected densely enough that each node has at least one inbound
// channel. Edge ids f1, f2, ...
inline std::shared_ptr<Network> layered_net(const std::vector<int>& widths,
                                            double extra_p, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Network::EdgeSpec> edges;
  std::vector<std::vector<std::string>> layers;
  layers.push_back({"s"});
  for (size_t l = 0; l < widths.size(); ++l) {
    std::vector<std::string> layer;
    for (int i = 0; i < widths[l]; ++i)
      layer.push_back("n" + std::to_string(l + 1) + "_" + std::to_string(i + 1));
    layers.push_back(layer);
  }
  int eid = 0;
  auto add = [&](const std::string& a, const std::string& b) {
    edges.push_back({"f" + std::to_string(++eid), a, b});
  };
  for (size_t l = 0; l + 1 < layers.size(); ++l) {
    for (const auto& head : layers[l + 1]) {
      // one guaranteed inbound channel, then extras
      add(layers[l][rng() % layers[l].size()], head);
      for (const auto& tail : layers[l]) {
        if (std::uniform_real_distribution<double>(0, 1)(rng) < extra_p)
          add(tail, head);
      }
    }
  }
  return std::make_shared<Network>(Network::build("s", {}, edges));
}

// Uniform random coefficients over the given field; all adjacent pairs.
inline Code random_code(std::shared_ptr<const Network> net, const Field& f,
                        int omega, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Code code(std::move(net), f, omega);
  const Network& n = code.net();
  for (int e = 0; e < n.channel_count(); ++e) {
    if (n.channel(e).tail == n.source()) {
      for (int i = 0; i < omega; ++i)
        code.set_coef_msg(i, e, static_cast<uint16_t>(rng() % f.order()));
    } else {
      for (int d : n.in(n.channel(e).tail))
        code.set_coef(d, e, static_cast<uint16_t>(rng() % f.order()));
    }
  }
  return code;
}

// Smallest prime power strictly above `bound`, as a field.
inline Field smallest_field_above(uint64_t bound) {
  for (uint32_t q = 2;; ++q) {
    if (q <= bound) continue;
    uint32_t p = q;  // smallest prime factor
    for (uint32_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    uint32_t m = 0, x = q;
    while (x % p == 0) {
      x /= p;
      ++m;
    }
    if (x == 1) return Field::make(p, m);
  }
}

}  // namespace lnec::testing
