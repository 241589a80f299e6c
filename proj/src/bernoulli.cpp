#include "pbpois/bernoulli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pbpois/errors.hpp"
#include "pbpois/numeric.hpp"

namespace pbpois {

namespace {

Moments compute_moments(std::span<const double> sorted) {
  // sorted ascending, so the plain loops below already add small terms first
  CompensatedSum<double> s1, s2, s3, sv;
  for (double p : sorted) {
    s1.add(p);
    s2.add(p * p);
    s3.add(p * p * p);
    sv.add(p * (1.0 - p));
  }
  Moments m;
  m.lambda = s1.value();
  m.lambda2 = s2.value();
  m.lambda3 = s3.value();
  m.variance = sv.value();
  const double denom = std::max(1.0, m.variance);
  m.big_f = std::max(1.0, m.lambda) / denom;
  m.q = m.lambda / denom;
  m.q0 = 1.0 / denom;
  return m;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

BernoulliVector::BernoulliVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InputError("probability vector must contain at least one entry");
  for (std::size_t i = 0; i < p_.size(); ++i) {
    const double v = p_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      std::ostringstream os;
      os.precision(17);
      os << "probability #" << (i + 1) << " = " << v << " is outside [0, 1]";
      throw InputError(os.str());
    }
  }
  sorted_ = p_;
  std::sort(sorted_.begin(), sorted_.end());
  for (double v : sorted_) {
    if (v == 0.0) {
      ++zeros_;
    } else if (v == 1.0) {
      ++ones_;
    } else if (!groups_.empty() && groups_.back().p == v) {
      ++groups_.back().count;
    } else {
      groups_.push_back({v, 1});
    }
  }
  moments_ = compute_moments(sorted_);
}

BernoulliVector BernoulliVector::concat(const BernoulliVector& a, const BernoulliVector& b) {
  std::vector<double> joined(a.p_);
  joined.insert(joined.end(), b.p_.begin(), b.p_.end());
  return BernoulliVector(std::move(joined));
}

Moments moments(const BernoulliVector& p) { return p.moments(); }

BernoulliVector parse_probability_text(std::string_view text, const std::string& source_name) {
  std::vector<double> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw InputError(source_name, line_no, "not a decimal number: '" + std::string(line) + "'");
    }
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InputError(source_name, line_no,
                       "probability " + std::string(line) + " is outside [0, 1]");
    }
    values.push_back(v);
  }
  if (values.empty()) throw InputError(source_name + ": no probabilities found");
  return BernoulliVector(std::move(values));
}

BernoulliVector read_probability_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open probability file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_probability_text(buf.str(), path.string());
}

}  // namespace pbpois
