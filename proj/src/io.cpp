#include "statnet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace statnet::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw FormatError("line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
  return x;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, ptr);
}

nlohmann::json network_to_json(const LayeredNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : net.layers()) {
    const Matrix& w = l.weights();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    }
    nlohmann::json lj;
    lj["rows"] = w.rows();
    lj["cols"] = w.cols();
    lj["activation"] = l.activation();
    lj["gain"] = l.gain();
    lj["linear_units"] = l.linear_units();
    lj["shared_group"] = l.shared_group() ? nlohmann::json(*l.shared_group()) : nlohmann::json(nullptr);
    lj["weights"] = flat;
    layers.push_back(std::move(lj));
  }
  return nlohmann::json{{"readout", net.readout_width()}, {"layers", layers}};
}

LayeredNetwork network_from_json(const nlohmann::json& j) {
  try {
    std::vector<Layer> layers;
    for (const auto& lj : j.at("layers")) {
      const auto rows = lj.at("rows").get<Eigen::Index>();
      const auto cols = lj.at("cols").get<Eigen::Index>();
      const auto flat = lj.at("weights").get<std::vector<double>>();
      if (rows <= 0 || cols <= 0 || static_cast<Eigen::Index>(flat.size()) != rows * cols) {
        throw FormatError("network JSON: weight array does not match rows x cols");
      }
      Matrix w(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
      }
      std::optional<int> group;
      if (lj.contains("shared_group") && !lj.at("shared_group").is_null()) group = lj.at("shared_group").get<int>();
      layers.emplace_back(std::move(w), lj.at("activation").get<std::string>(), lj.value("gain", 1.0),
                          lj.value("linear_units", std::size_t{0}), group);
    }
    return LayeredNetwork(std::move(layers), j.value("readout", std::size_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("network JSON: ") + e.what());
  }
}

PatternSet read_patterns(std::istream& in) {
  PatternSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    Vector s(static_cast<Eigen::Index>(line.size()));
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (c == '+' || c == '1') {
        s(static_cast<Eigen::Index>(i)) = 1.0;
      } else if (c == '-' || c == '0') {
        s(static_cast<Eigen::Index>(i)) = -1.0;
      } else {
        throw FormatError("pattern line " + std::to_string(lineno) + ": unexpected character '" +
                          std::string(1, c) + "'");
      }
    }
    if (!set.patterns.empty() && set.patterns.front().size() != line.size()) {
      throw FormatError("pattern line " + std::to_string(lineno) + ": length differs from the first pattern");
    }
    set.patterns.emplace_back(std::move(s));
  }
  if (set.patterns.empty()) throw FormatError("pattern file contains no patterns");
  return set;
}

PatternSet load_patterns(const std::string& path) {
  auto in = open(path);
  return read_patterns(in);
}

TrainingBatch read_training_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("training CSV is empty");
  const auto header = split(trim(line), ',');
  std::size_t inputs = 0;
  std::size_t targets = 0;
  for (const auto& h : header) {
    if (!h.empty() && h.front() == 'x' && targets == 0) {
      ++inputs;
    } else if (!h.empty() && h.front() == 'y') {
      ++targets;
    } else {
      throw FormatError("training CSV header: column '" + h + "' must start with x (inputs, first) or y");
    }
  }
  if (inputs == 0 || targets == 0) throw FormatError("training CSV header needs x and y columns");

  TrainingBatch batch;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw FormatError("training CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " columns");
    }
    Vector x(static_cast<Eigen::Index>(inputs));
    Vector y(static_cast<Eigen::Index>(targets));
    for (std::size_t c = 0; c < inputs; ++c) x(static_cast<Eigen::Index>(c)) = parse_number(fields[c], lineno);
    for (std::size_t c = 0; c < targets; ++c) {
      y(static_cast<Eigen::Index>(c)) = parse_number(fields[inputs + c], lineno);
    }
    batch.inputs.push_back(std::move(x));
    batch.targets.push_back(std::move(y));
  }
  if (batch.inputs.empty()) throw FormatError("training CSV has no data rows");
  return batch;
}

TrainingBatch load_training_csv(const std::string& path) {
  auto in = open(path);
  return read_training_csv(in);
}

TspInstance read_cities_csv(std::istream& in) {
  std::vector<std::pair<double, double>> coords;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw FormatError("city CSV line " + std::to_string(lineno) + ": expected x,y");
    if (coords.empty() && lineno == 1 && fields[0] == "x" && fields[1] == "y") continue;
    coords.emplace_back(parse_number(fields[0], lineno), parse_number(fields[1], lineno));
  }
  if (coords.empty()) throw FormatError("city CSV has no rows");
  return TspInstance(std::move(coords));
}

TspInstance load_cities_csv(const std::string& path) {
  auto in = open(path);
  return read_cities_csv(in);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : static_cast<std::size_t>(traj.states.front().v.size());
  out << "time,energy";
  for (std::size_t i = 0; i < n; ++i) out << ",v_" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << format_double(traj.times[k]) << ',' << format_double(traj.energies[k]);
    for (Eigen::Index i = 0; i < traj.states[k].v.size(); ++i) out << ',' << format_double(traj.states[k].v(i));
    out << '\n';
  }
}

}  // namespace statnet::io
