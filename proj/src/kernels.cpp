#include "lnec/kernels.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace lnec {

Code::Code(std::shared_ptr<const Network> net, Field field, int omega)
    : net_(std::move(net)), f_(std::move(field)), omega_(omega) {
  if (!net_) throw std::invalid_argument("code requires a network");
  if (omega_ < 1) throw std::invalid_argument("dimension must be >= 1");
  k_.resize(net_->channel_count());
  for (int e = 0; e < net_->channel_count(); ++e) {
    int tail = net_->channel(e).tail;
    size_t slots = tail == net_->source() ? static_cast<size_t>(omega_)
                                          : net_->in(tail).size();
    k_[e].assign(slots, 0);
  }
}

int Code::slot_of(int d, int e) const {
  int tail = net_->channel(e).tail;
  if (tail == net_->source())
    throw std::invalid_argument("channel leaves the source; use message slots");
  auto in = net_->in(tail);
  for (size_t i = 0; i < in.size(); ++i)
    if (in[i] == d) return static_cast<int>(i);
  throw std::invalid_argument("channels " + net_->channel(d).id + " -> " +
                              net_->channel(e).id + " are not adjacent");
}

uint16_t Code::coef_msg(int i, int e) const {
  if (i < 0 || i >= omega_) throw std::invalid_argument("message slot out of range");
  if (net_->channel(e).tail != net_->source())
    throw std::invalid_argument("message coefficients exist only on source channels");
  return k_[e][i];
}

void Code::set_coef_msg(int i, int e, uint16_t v) {
  if (v >= f_.order()) throw std::invalid_argument("coefficient out of field range");
  if (i < 0 || i >= omega_) throw std::invalid_argument("message slot out of range");
  if (net_->channel(e).tail != net_->source())
    throw std::invalid_argument("message coefficients exist only on source channels");
  k_[e][i] = v;
}

uint16_t Code::coef(int d, int e) const { return k_[e][slot_of(d, e)]; }

void Code::set_coef(int d, int e, uint16_t v) {
  if (v >= f_.order()) throw std::invalid_argument("coefficient out of field range");
  k_[e][slot_of(d, e)] = v;
}

bool Code::operator==(const Code& o) const {
  return f_ == o.f_ && omega_ == o.omega_ && k_ == o.k_ &&
         net_->to_text() == o.net_->to_text();
}

std::string Code::to_text() const {
  std::ostringstream os;
  os << "lnec-code v1\n";
  os << "field " << f_.name() << "\n";
  os << "dimension " << omega_ << "\n";
  os << "begin network\n" << net_->to_text() << "end network\n";
  for (int e = 0; e < net_->channel_count(); ++e) {
    const Channel& c = net_->channel(e);
    if (c.tail == net_->source()) {
      for (int i = 0; i < omega_; ++i)
        if (k_[e][i])
          os << "coef @m" << (i + 1) << " " << c.id << " " << k_[e][i] << "\n";
    } else {
      auto in = net_->in(c.tail);
      for (size_t i = 0; i < in.size(); ++i)
        if (k_[e][i])
          os << "coef " << net_->channel(in[i]).id << " " << c.id << " "
             << k_[e][i] << "\n";
    }
  }
  return os.str();
}

Code Code::parse(std::string_view text,
                 const std::function<std::string(const std::string&)>& loader) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }

  std::optional<Field> field;
  int omega = -1;
  std::optional<Network> net;
  struct CoefLine {
    std::string from, to;
    uint32_t value;
  };
  std::vector<CoefLine> coefs;

  size_t i = 0;
  auto strip = [](std::string s) {
    if (size_t h = s.find('#'); h != std::string::npos) s = s.substr(0, h);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
      s.pop_back();
    size_t b = s.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b);
  };

  while (i < lines.size()) {
    std::string line = strip(lines[i]);
    ++i;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string kw;
    is >> kw;
    if (kw == "lnec-code") {
      std::string v;
      is >> v;
      if (v != "v1") throw std::invalid_argument("unsupported code file version");
    } else if (kw == "field") {
      std::string name;
      is >> name;
      field = Field::parse(name);
    } else if (kw == "dimension") {
      if (!(is >> omega) || omega < 1)
        throw std::invalid_argument("bad dimension line");
    } else if (kw == "begin") {
      std::string what;
      is >> what;
      if (what != "network") throw std::invalid_argument("unknown begin block");
      std::string body;
      bool closed = false;
      while (i < lines.size()) {
        std::string inner = lines[i];
        ++i;
        if (strip(inner) == "end network") {
          closed = true;
          break;
        }
        body += inner;
        body += "\n";
      }
      if (!closed) throw std::invalid_argument("unterminated network block");
      net = Network::parse(body);
    } else if (kw == "network") {
      std::string path;
      is >> path;
      if (!loader)
        throw std::invalid_argument("code file references an external network");
      net = Network::parse(loader(path));
    } else if (kw == "coef") {
      CoefLine c;
      if (!(is >> c.from >> c.to >> c.value))
        throw std::invalid_argument("bad coef line: " + line);
      coefs.push_back(std::move(c));
    } else {
      throw std::invalid_argument("unknown directive in code file: " + kw);
    }
  }

  if (!field) throw std::invalid_argument("code file missing field line");
  if (omega < 1) throw std::invalid_argument("code file missing dimension line");
  if (!net) throw std::invalid_argument("code file missing network");

  Code code(std::make_shared<Network>(std::move(*net)), *field, omega);
  for (const auto& c : coefs) {
    if (c.value >= field->order())
      throw std::invalid_argument("coefficient out of field range");
    int e = code.net().channel_index(c.to);
    if (c.from.size() > 2 && c.from[0] == '@' && c.from[1] == 'm') {
      int slot = std::stoi(c.from.substr(2));
      if (slot < 1 || slot > omega)
        throw std::invalid_argument("message channel out of range: " + c.from);
      code.set_coef_msg(slot - 1, e, static_cast<uint16_t>(c.value));
    } else {
      code.set_coef(code.net().channel_index(c.from), e,
                    static_cast<uint16_t>(c.value));
    }
  }
  return code;
}

Mat extended_kernels(const Code& code) {
  const Network& net = code.net();
  const Field& f = code.field();
  int omega = code.omega();
  int dim = code.space_dim();
  Mat m(f, dim, net.channel_count());
  for (int e = 0; e < net.channel_count(); ++e) {
    const Channel& c = net.channel(e);
    auto row = code.coef_row(e);
    if (c.tail == net.source()) {
      for (int i = 0; i < omega; ++i)
        if (row[i]) m.set(i, e, row[i]);
    } else {
      auto in = net.in(c.tail);
      for (size_t j = 0; j < in.size(); ++j) {
        uint16_t kde = row[j];
        if (!kde) continue;
        int d = in[j];  // d precedes e in the ancestral order
        for (int r = 0; r < dim; ++r) {
          uint16_t v = m.at(r, d);
          if (v) m.set(r, e, f.add(m.at(r, e), f.mul(kde, v)));
        }
      }
    }
    m.set(omega + e, e, f.add(m.at(omega + e, e), 1));
  }
  return m;
}

TransferMatrices transfer_matrices(const Code& code) {
  const Network& net = code.net();
  const Field& f = code.field();
  int omega = code.omega();
  int n = net.channel_count();

  Mat btilde(f, omega + n, n);
  Mat k(f, n, n);
  for (int e = 0; e < n; ++e) {
    const Channel& c = net.channel(e);
    auto row = code.coef_row(e);
    if (c.tail == net.source()) {
      for (int i = 0; i < omega; ++i) btilde.set(i, e, row[i]);
    } else {
      auto in = net.in(c.tail);
      for (size_t j = 0; j < in.size(); ++j) k.set(in[j], e, row[j]);
    }
    btilde.set(omega + e, e, 1);
  }

  Mat i_minus_k = Mat::identity(f, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (k.at(r, c)) i_minus_k.set(r, c, f.sub(i_minus_k.at(r, c), k.at(r, c)));

  TransferMatrices tm{btilde, k, btilde.mul(i_minus_k.inverse())};
  return tm;
}

DecodingMatrix decoding_matrix(const Code& code, const Mat& kernels,
                               const NodeCollection& T) {
  validate_collection(code.net(), T);
  std::vector<int> cols = in_of(code.net(), T);
  if (cols.empty())
    throw std::invalid_argument("collection has no incoming channels");
  return DecodingMatrix{kernels.select_cols(cols), cols, code.omega()};
}

RhoParts pattern_restrict(std::span<const uint16_t> v,
                          std::span<const int> pattern, int omega) {
  RhoParts out;
  out.kept.assign(v.size(), 0);
  out.complement.assign(v.begin(), v.end());
  out.short_form.reserve(omega + pattern.size());
  for (int i = 0; i < omega; ++i) {
    out.short_form.push_back(v[i]);
    out.kept[i] = v[i];
    out.complement[i] = 0;
  }
  for (int e : pattern) {
    out.short_form.push_back(v[omega + e]);
    out.kept[omega + e] = v[omega + e];
    out.complement[omega + e] = 0;
  }
  return out;
}

RowSpace message_space(const Code& code, const Mat& kernels,
                       const NodeCollection& T) {
  DecodingMatrix dm = decoding_matrix(code, kernels, T);
  std::vector<Vec> rows;
  for (int i = 0; i < code.omega(); ++i) rows.push_back(dm.row_msg(i));
  return RowSpace::span(code.field(), dm.m.cols(), rows);
}

RowSpace error_space(const Code& code, const Mat& kernels,
                     const NodeCollection& T, std::span<const int> pattern) {
  DecodingMatrix dm = decoding_matrix(code, kernels, T);
  std::vector<Vec> rows;
  for (int e : pattern) rows.push_back(dm.row_channel(e));
  return RowSpace::span(code.field(), dm.m.cols(), rows);
}

}  // namespace lnec
