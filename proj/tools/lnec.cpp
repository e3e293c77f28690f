// Command-line front end: construct, verify, rank, distance, simulate,
// bounds. All randomness flows from --seed; identical invocations produce
// byte-identical files and output.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lnec/construct.hpp"
#include "lnec/sim.hpp"
#include "lnec/version.hpp"

namespace fs = std::filesystem;
using namespace lnec;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

Code load_code(const std::string& path) {
  fs::path base = fs::path(path).parent_path();
  return Code::parse(read_file(path), [&](const std::string& ref) {
    return read_file((base / ref).string());
  });
}

NodeCollection parse_collection(const Network& net, const std::string& spec) {
  NodeCollection T;
  for (const std::string& name : split(spec, ','))
    T.nodes.push_back(net.node_index(name));
  std::sort(T.nodes.begin(), T.nodes.end());
  T.nodes.erase(std::unique(T.nodes.begin(), T.nodes.end()), T.nodes.end());
  validate_collection(net, T);
  return T;
}

Pattern parse_pattern(const Network& net, const std::string& spec) {
  Pattern p;
  if (spec == "none" || spec.empty()) return p;
  for (const std::string& id : split(spec, ','))
    p.push_back(net.channel_index(id));
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

Vec parse_message(const Field& f, int omega, const std::string& spec) {
  Vec x;
  for (const std::string& tok : split(spec, ','))
    x.push_back(static_cast<uint16_t>(std::stoul(tok)));
  if (static_cast<int>(x.size()) != omega)
    throw std::invalid_argument("message must have " + std::to_string(omega) +
                                " symbols");
  for (uint16_t v : x)
    if (v >= f.order()) throw std::invalid_argument("message symbol out of field");
  return x;
}

Vec parse_error(const Code& code, const std::string& spec) {
  Vec z(code.net().channel_count(), 0);
  if (spec.empty() || spec == "none") return z;
  for (const std::string& tok : split(spec, ',')) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("error entries look like e3=2");
    int e = code.net().channel_index(tok.substr(0, eq));
    unsigned long v = std::stoul(tok.substr(eq + 1));
    if (v >= code.field().order())
      throw std::invalid_argument("error symbol out of field");
    z[e] = static_cast<uint16_t>(v);
  }
  return z;
}

void emit(const std::string& report_path, const std::string& text) {
  if (report_path.empty())
    std::cout << text;
  else
    write_file(report_path, text);
}

struct CommonOpts {
  uint64_t seed = 0;
  uint64_t candidate_budget = uint64_t{1} << 20;
  uint64_t pattern_budget = 2'000'000;
  uint64_t collections_cap = 65535;
  bool no_parallel = false;

  AnalysisOptions analysis() const {
    AnalysisOptions a;
    a.pattern_budget = pattern_budget;
    a.collections_cap = collections_cap;
    a.parallel = !no_parallel;
    return a;
  }
  ConstructOptions construct() const {
    ConstructOptions c;
    c.seed = seed;
    c.candidate_budget = candidate_budget;
    c.pattern_budget = pattern_budget;
    c.collections_cap = collections_cap;
    c.parallel = !no_parallel;
    return c;
  }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--candidate-budget", c.candidate_budget,
                  "kernel candidate sweep budget");
  cmd->add_option("--pattern-budget", c.pattern_budget,
                  "pattern enumeration budget");
  cmd->add_option("--collections-cap", c.collections_cap,
                  "maximum node collections examined");
  cmd->add_flag("--no-parallel", c.no_parallel, "force serial kernels");
}

int run_construct(const std::string& network_path, const std::string& field_str,
                  int omega, const std::string& method,
                  const std::string& target_str, int attempts,
                  const std::string& out_path, const std::string& report_path,
                  bool log, const CommonOpts& common) {
  Network net = Network::parse(read_file(network_path));
  Field field = Field::parse(field_str);
  ConstructOptions copt = common.construct();
  if (log) copt.log = &std::cerr;

  std::ostringstream header;
  header << "run: construct\n";
  header << "method: " << method;
  if (method == "random") header << " target=" << target_str;
  header << "\nseed: " << common.seed << "\n";

  std::optional<Code> code;
  std::string failure;
  int attempts_used = 0;
  std::map<std::string, int> failures;
  Target target = Target::multicast;
  if (target_str == "broadcast") target = Target::broadcast;
  if (target_str == "dispersion") target = Target::dispersion;

  try {
    if (method == "algorithm1") {
      if (target != Target::multicast)
        throw std::invalid_argument("algorithm1 constructs multicast codes");
      code = construct_multicast_mds(net, omega, field, copt);
      attempts_used = 1;
    } else if (method == "random") {
      RandomConstructResult res =
          construct_random(net, omega, field, target, attempts, common.seed, copt);
      attempts_used = res.attempts_used;
      failures = res.failures;
      if (res.code)
        code = std::move(res.code);
      else
        failure = "no attempt met the target";
    } else {
      throw std::invalid_argument("unknown method: " + method);
    }
  } catch (const ConstructError& e) {
    failure = e.what();
    std::ostringstream detail;
    detail << header.str() << "status: failed\nerror: " << e.what() << "\n";
    for (const auto& plan : e.blocked_plans)
      detail << "blocked: " << plan << "\n";
    FieldBounds fb = field_bounds(net, omega, common.analysis());
    detail << "bound-multicast: " << fb.multicast.to_string() << "\n";
    emit(report_path, detail.str());
    std::cerr << "construction failed: " << e.what() << "\n";
    return 1;
  }

  if (!code) {
    std::ostringstream detail;
    detail << header.str() << "status: failed\nerror: " << failure << "\n";
    detail << "attempts: " << attempts_used << "\n";
    for (const auto& [why, count] : failures)
      detail << "failure " << why << ": " << count << "\n";
    emit(report_path, detail.str());
    std::cerr << "construction failed: " << failure << "\n";
    return 1;
  }

  write_file(out_path, code->to_text());
  CodeReport rep = verdicts(*code, common.analysis());
  std::ostringstream full;
  full << header.str();
  full << "status: ok\n";
  full << "attempts: " << attempts_used << "\n";
  full << rep.to_text();
  emit(report_path, full.str());

  bool ok = (method == "algorithm1" || target == Target::multicast)
                ? rep.multicast_mds
                : (target == Target::broadcast ? rep.broadcast_mds
                                               : rep.dispersion_mds);
  return ok ? 0 : 1;
}

int run_verify(const std::string& code_path, const std::string& expect,
               const std::string& report_path, const CommonOpts& common) {
  Code code = load_code(code_path);
  CodeReport rep = verdicts(code, common.analysis());
  std::ostringstream out;
  out << "run: verify\n" << rep.to_text();
  emit(report_path, out.str());
  if (expect.empty()) return 0;
  bool ok = (expect == "multicast-mds" && rep.multicast_mds) ||
            (expect == "broadcast-mds" && rep.broadcast_mds) ||
            (expect == "dispersion-mds" && rep.dispersion_mds);
  return ok ? 0 : 1;
}

int run_rank(const std::string& network_path, const std::string& pattern_str,
             const std::string& at) {
  Network net = Network::parse(read_file(network_path));
  Pattern rho = parse_pattern(net, pattern_str);
  NodeCollection T = parse_collection(net, at);
  std::cout << rank_of_pattern(net, rho, T) << "\n";
  return 0;
}

int run_distance(const std::string& code_path, const std::string& at, int cap,
                 const CommonOpts& common) {
  Code code = load_code(code_path);
  Mat kernels = extended_kernels(code);
  NodeCollection T = parse_collection(code.net(), at);
  int effective_cap =
      cap > 0 ? cap : static_cast<int>(in_of(code.net(), T).size());
  DistanceResult d =
      min_distance(code, kernels, T, effective_cap, common.analysis());
  if (d.exact)
    std::cout << d.value << "\n";
  else
    std::cout << ">=" << d.value << "\n";
  return 0;
}

int run_simulate(const std::string& code_path, const std::string& at,
                 const std::string& message_str, const std::string& error_str,
                 int tau, bool trace, int sweep_tau, uint64_t budget,
                 const CommonOpts& common) {
  Code code = load_code(code_path);
  Simulator sim(code);
  NodeCollection T = parse_collection(code.net(), at);

  if (sweep_tau >= 0) {
    SweepReport rep = sim.capability_sweep(T, sweep_tau, budget,
                                           !common.no_parallel);
    std::cout << rep.correct << "/" << rep.cases << " correct\n";
    if (rep.first_failure) {
      std::cout << "first-failure message:";
      for (uint16_t v : rep.first_failure->message) std::cout << " " << v;
      std::cout << "\nfirst-failure error:";
      for (int e = 0; e < code.net().channel_count(); ++e)
        if (rep.first_failure->error[e])
          std::cout << " " << code.net().channel(e).id << "="
                    << rep.first_failure->error[e];
      std::cout << "\n";
    }
    return rep.first_failure ? 1 : 0;
  }

  Vec x = parse_message(code.field(), code.omega(), message_str);
  Vec z = parse_error(code, error_str);
  ChannelOutputs out = sim.encode(x, z);
  if (trace) {
    for (int e = 0; e < code.net().channel_count(); ++e)
      std::cout << code.net().channel(e).id << ": U=" << out.intended[e]
                << " Z=" << z[e] << " Ũ=" << out.actual[e] << "\n";
  }
  Vec received = sim.observe(out, T);
  std::cout << "received:";
  for (uint16_t v : received) std::cout << " " << v;
  std::cout << "\n";

  int wt = 0;
  for (uint16_t v : z)
    if (v) ++wt;
  int radius = tau >= 0 ? tau : wt;
  DecodeResult dr = sim.decode(T, received, radius);
  switch (dr.status) {
    case DecodeResult::Status::unique: {
      std::cout << "status: unique\nmessage:";
      for (uint16_t v : dr.message) std::cout << " " << v;
      std::cout << "\nerror:";
      bool any = false;
      for (int e = 0; e < code.net().channel_count(); ++e)
        if (dr.error[e]) {
          std::cout << " " << code.net().channel(e).id << "=" << dr.error[e];
          any = true;
        }
      if (!any) std::cout << " none";
      std::cout << "\nweight: " << dr.weight << "\n";
      return dr.message == x ? 0 : 1;
    }
    case DecodeResult::Status::ambiguous:
      std::cout << "status: ambiguous\nweight: " << dr.weight << "\n";
      return 1;
    case DecodeResult::Status::no_solution:
      std::cout << "status: no-solution\n";
      return 1;
  }
  return 1;
}

int run_bounds(const std::string& network_path, int omega,
               const CommonOpts& common) {
  Network net = Network::parse(read_file(network_path));
  FieldBounds fb = field_bounds(net, omega, common.analysis());
  std::cout << "multicast: " << fb.multicast.to_string() << "\n";
  std::cout << "broadcast: " << fb.broadcast.to_string() << "\n";
  std::cout << "dispersion: " << fb.dispersion.to_string() << "\n";
  std::cout << "corollary-multicast: " << fb.corollary_multicast.to_string()
            << "\n";
  std::cout << "corollary-broadcast: " << fb.corollary_broadcast.to_string()
            << "\n";
  std::cout << "complete: " << (fb.complete ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear network error correction code toolkit"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // construct
  auto* c = app.add_subcommand("construct", "build a code for a network");
  std::string c_net, c_field = "2^4", c_method = "algorithm1",
              c_target = "multicast", c_out, c_report;
  int c_omega = 1, c_attempts = 50;
  bool c_log = false;
  CommonOpts c_common;
  c->add_option("--network", c_net, "network file")->required();
  c->add_option("--field", c_field, "base field, e.g. 2^4 or 7");
  c->add_option("--omega", c_omega, "information rate")->required();
  c->add_option("--method", c_method, "algorithm1 | random");
  c->add_option("--target", c_target, "multicast | broadcast | dispersion");
  c->add_option("--attempts", c_attempts, "random attempts");
  c->add_option("--out", c_out, "code file to write")->required();
  c->add_option("--report", c_report, "report file (default: stdout)");
  c->add_flag("--log", c_log, "trace construction steps to stderr");
  add_common(c, c_common);

  // verify
  auto* v = app.add_subcommand("verify", "analyze a code file");
  std::string v_code, v_expect, v_report;
  CommonOpts v_common;
  v->add_option("--code", v_code, "code file")->required();
  v->add_option("--expect", v_expect,
                "multicast-mds | broadcast-mds | dispersion-mds");
  v->add_option("--report", v_report, "report file (default: stdout)");
  add_common(v, v_common);

  // rank
  auto* r = app.add_subcommand("rank", "rank of an error pattern");
  std::string r_net, r_pattern, r_at;
  r->add_option("--network", r_net, "network file")->required();
  r->add_option("--pattern", r_pattern, "channels, e.g. e1,e3 (or none)");
  r->add_option("--at", r_at, "receiver collection, e.g. t1,t2")->required();

  // distance
  auto* d = app.add_subcommand("distance", "minimum distance at a collection");
  std::string d_code, d_at;
  int d_cap = 0;
  CommonOpts d_common;
  d->add_option("--code", d_code, "code file")->required();
  d->add_option("--at", d_at, "receiver collection")->required();
  d->add_option("--cap", d_cap, "search cap (default |In(T)|)");
  add_common(d, d_common);

  // simulate
  auto* s = app.add_subcommand("simulate", "encode, corrupt, decode");
  std::string s_code, s_at, s_message, s_error;
  int s_tau = -1, s_sweep = -1;
  uint64_t s_budget = 1'000'000;
  bool s_trace = false;
  CommonOpts s_common;
  s->add_option("--code", s_code, "code file")->required();
  s->add_option("--at", s_at, "receiver collection")->required();
  s->add_option("--message", s_message, "message symbols, e.g. 1,0");
  s->add_option("--error", s_error, "error assignment, e.g. e3=2,e5=1");
  s->add_option("--tau", s_tau, "decoding radius (default: error weight)");
  s->add_option("--sweep", s_sweep, "exhaustive sweep up to this weight");
  s->add_option("--budget", s_budget, "sweep case budget");
  s->add_flag("--trace", s_trace, "per-channel transmission trace");
  add_common(s, s_common);

  // bounds
  auto* b = app.add_subcommand("bounds", "field-size thresholds");
  std::string b_net;
  int b_omega = 1;
  CommonOpts b_common;
  b->add_option("--network", b_net, "network file")->required();
  b->add_option("--omega", b_omega, "information rate")->required();
  add_common(b, b_common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c->parsed())
      return run_construct(c_net, c_field, c_omega, c_method, c_target,
                           c_attempts, c_out, c_report, c_log, c_common);
    if (v->parsed()) return run_verify(v_code, v_expect, v_report, v_common);
    if (r->parsed()) return run_rank(r_net, r_pattern, r_at);
    if (d->parsed()) return run_distance(d_code, d_at, d_cap, d_common);
    if (s->parsed())
      return run_simulate(s_code, s_at, s_message, s_error, s_tau, s_trace,
                          s_sweep, s_budget, s_common);
    if (b->parsed()) return run_bounds(b_net, b_omega, b_common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
