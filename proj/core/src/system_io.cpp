#include "invmeas/system_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace invmeas {

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, int n) : text_(text), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return p;
  }

 private:
  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      skip_ws();
      if (match('+')) {
        p = p + term();
      } else if (match('-')) {
        p = p - term();
      } else {
        return p;
      }
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    for (;;) {
      skip_ws();
      if (match('*')) {
        p = p * factor();
      } else {
        return p;
      }
    }
  }

  Polynomial factor() {
    Polynomial base = this->base();
    skip_ws();
    if (match('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (start == pos_) fail("expected integer exponent after '^'");
      int k = 0;
      std::from_chars(text_.data() + start, text_.data() + pos_, k);
      return poly_pow(base, k);
    }
    return base;
  }

  Polynomial base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      skip_ws();
      if (!match(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == 'x') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      if (start == pos_) fail("expected variable index after 'x'");
      int idx = 0;
      std::from_chars(text_.data() + start, text_.data() + pos_, idx);
      if (idx < 1 || idx > n_) fail("variable index out of range");
      return Polynomial::variable(n_, idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') &&
               (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
        ++pos_;
      }
      double value = 0.0;
      const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
      if (res.ec != std::errc()) fail("malformed number");
      return Polynomial::constant(n_, value);
    }
    fail("unexpected character");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    std::ostringstream os;
    os << "polynomial parse error at position " << pos_ << ": " << why << " in \""
       << text_ << "\"";
    throw std::invalid_argument(os.str());
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

Box box_from_json(const nlohmann::json& j, int n) {
  Box b;
  const auto lo = j.at("lo").get<std::vector<double>>();
  const auto hi = j.at("hi").get<std::vector<double>>();
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n) {
    throw std::invalid_argument("system file: box dimension mismatch");
  }
  b.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), n);
  b.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), n);
  return b;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int n) {
  return PolyParser(text, n).parse();
}

BenchmarkSpec parse_system_json(const std::string& text, const std::string& name) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int n = j.at("dimension").get<int>();
  const std::string kind = j.at("time_kind").get<std::string>();
  if (kind != "discrete" && kind != "continuous") {
    throw std::invalid_argument("system file: time_kind must be discrete or continuous");
  }

  BenchmarkSpec spec;
  spec.name = name;
  spec.original_box = box_from_json(j.at("box"), n);

  const bool auto_scale = j.value("scaling", std::string("auto")) == "auto";
  Box unit;
  unit.lo = Eigen::VectorXd::Constant(n, -1.0);
  unit.hi = Eigen::VectorXd::Constant(n, 1.0);
  spec.scaling = auto_scale ? ScalingMap::box_to_box(spec.original_box, unit)
                            : ScalingMap::identity(n);
  const Box scaled_box = auto_scale ? unit : spec.original_box;

  DynamicalSystem sys;
  sys.time_kind = kind == "discrete" ? TimeKind::Discrete : TimeKind::Continuous;
  sys.global_box = scaled_box;
  if (j.contains("observed")) {
    sys.observed_axes = j.at("observed").get<std::vector<int>>();
  }

  const Eigen::MatrixXd Ainv = spec.scaling.scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd binv = -spec.scaling.offset.cwiseQuotient(spec.scaling.scale);

  for (const auto& jc : j.at("cells")) {
    const Box cell_box =
        jc.contains("box") ? box_from_json(jc.at("box"), n) : spec.original_box;
    Box scaled_cell;
    scaled_cell.lo = spec.scaling.apply(cell_box.lo);
    scaled_cell.hi = spec.scaling.apply(cell_box.hi);
    SemialgebraicSet set = SemialgebraicSet::from_box(scaled_cell);
    for (const auto& s : jc.value("inequalities", std::vector<std::string>{})) {
      set.inequalities.push_back(
          poly_affine_substitute(parse_polynomial(s, n), Ainv, binv));
    }
    for (const auto& s : jc.value("equalities", std::vector<std::string>{})) {
      set.equalities.push_back(
          poly_affine_substitute(parse_polynomial(s, n), Ainv, binv));
    }
    const auto map_strs = jc.at("map").get<std::vector<std::string>>();
    if (static_cast<int>(map_strs.size()) != n) {
      throw std::invalid_argument("system file: map must have n components");
    }
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
      Polynomial fi =
          poly_affine_substitute(parse_polynomial(map_strs[i], n), Ainv, binv) *
          spec.scaling.scale[i];
      if (sys.time_kind == TimeKind::Discrete) {
        fi = fi + Polynomial::constant(n, spec.scaling.offset[i]);
      }
      comps.push_back(std::move(fi));
    }
    sys.cells.push_back(Cell{std::move(set), PolynomialMap(std::move(comps))});
  }
  if (sys.cells.empty()) throw std::invalid_argument("system file: no cells");
  spec.system = std::move(sys);

  // Simulation uses the declared polynomial dynamics in original coordinates.
  std::vector<PolynomialMap> original_maps;
  std::vector<SemialgebraicSet> original_sets;
  for (const auto& jc : j.at("cells")) {
    std::vector<Polynomial> comps;
    for (const auto& s : jc.at("map").get<std::vector<std::string>>()) {
      comps.push_back(parse_polynomial(s, n));
    }
    original_maps.emplace_back(std::move(comps));
    const Box cell_box =
        jc.contains("box") ? box_from_json(jc.at("box"), n) : spec.original_box;
    SemialgebraicSet oset = SemialgebraicSet::from_box(cell_box);
    for (const auto& s : jc.value("inequalities", std::vector<std::string>{})) {
      oset.inequalities.push_back(parse_polynomial(s, n));
    }
    original_sets.push_back(std::move(oset));
  }
  spec.true_dynamics = [maps = std::move(original_maps),
                        sets = std::move(original_sets)](const Eigen::VectorXd& x) {
    for (std::size_t i = 0; i < maps.size(); ++i) {
      if (sets[i].contains(x, 1e-9)) return maps[i].eval(x);
    }
    return maps[0].eval(x);
  };
  spec.sim = {0.5 * (spec.original_box.lo + spec.original_box.hi),
              0.05 * (spec.original_box.hi - spec.original_box.lo).minCoeff(),
              20, 100, 100, 20.0, 1e-3, 10};
  return spec;
}

BenchmarkSpec load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open system file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str(), path);
}

BenchmarkSpec resolve_system(const std::string& name_or_path) {
  for (const auto& name : benchmark_names()) {
    if (name == name_or_path) return make_benchmark(name);
  }
  if (name_or_path.ends_with(".json")) return load_system_file(name_or_path);
  throw std::invalid_argument("unknown system name: " + name_or_path +
                              " (expected a builtin name or a .json definition file)");
}

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_float(row[i]);
    }
    out << "\n";
  }
}

void write_moment_csv(const std::string& path, const MomentVector& y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "multi-index,value\n";
  const auto basis = monomial_basis(y.dimension(), y.max_degree());
  for (const auto& beta : basis) {
    for (std::size_t i = 0; i < beta.size(); ++i) out << (i ? " " : "") << beta[i];
    out << "," << format_float(y[beta]) << "\n";
  }
}

void write_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (cloud.points.empty()) return;
  const int n = static_cast<int>(cloud.points[0].size());
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << (i + 1);
  out << "\n";
  for (const auto& p : cloud.points) {
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << format_float(p[i]);
    out << "\n";
  }
}

PointCloud read_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open cloud file: " + path);
  PointCloud cloud;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::vector<double> vals;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::string tok =
          line.substr(start, comma == std::string::npos ? comma : comma - start);
      vals.push_back(std::stod(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    cloud.points.push_back(
        Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size())));
  }
  return cloud;
}

}  // namespace invmeas
