#include "tli/record_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tli {

namespace {

constexpr const char* kMagic = "#tli-record v1";

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("record_io: malformed record (" + what + ")");
}

}  // namespace

void write_record(std::ostream& out, const MeasurementRecord& rec) {
  out << kMagic << '\n';
  out << "#scheme " << scheme_name(rec.scheme) << '\n';
  out << "#epsilon " << fmt(rec.epsilon) << '\n';
  if (rec.true_g)
    out << "#true_g " << fmt(rec.true_g->real()) << ' ' << fmt(rec.true_g->imag())
        << '\n';
  out << "#seed " << rec.master_seed << ' ' << rec.stream_index << '\n';
  out << "#shots " << rec.size() << '\n';
  switch (rec.scheme) {
    case Scheme::direct:
    case Scheme::entangled:
      out << "#columns delta outcome\n";
      for (std::size_t i = 0; i < rec.outcome.size(); ++i)
        out << fmt(rec.delta[i]) << ' ' << rec.outcome[i] << '\n';
      break;
    case Scheme::heterodyne:
      out << "#columns re_mu im_mu re_nu im_nu\n";
      for (std::size_t i = 0; i < rec.mu.size(); ++i)
        out << fmt(rec.mu[i].real()) << ' ' << fmt(rec.mu[i].imag()) << ' '
            << fmt(rec.nu[i].real()) << ' ' << fmt(rec.nu[i].imag()) << '\n';
      break;
    case Scheme::homodyne:
      out << "#columns delta x y\n";
      for (std::size_t i = 0; i < rec.x.size(); ++i)
        out << fmt(rec.delta[i]) << ' ' << fmt(rec.x[i]) << ' ' << fmt(rec.y[i])
            << '\n';
      break;
  }
}

void write_record_file(const std::string& path, const MeasurementRecord& rec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("record_io: cannot open " + path);
  write_record(out, rec);
}

MeasurementRecord read_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) malformed("missing magic line");

  MeasurementRecord rec;
  std::size_t shots = 0;
  bool have_scheme = false;

  while (in.peek() == '#') {
    std::getline(in, line);
    std::istringstream ss(line.substr(1));
    std::string key;
    ss >> key;
    if (key == "scheme") {
      std::string name;
      ss >> name;
      rec.scheme = scheme_from_name(name);
      have_scheme = true;
    } else if (key == "epsilon") {
      ss >> rec.epsilon;
    } else if (key == "true_g") {
      double re = 0.0, im = 0.0;
      ss >> re >> im;
      rec.true_g = Complex(re, im);
    } else if (key == "seed") {
      ss >> rec.master_seed >> rec.stream_index;
    } else if (key == "shots") {
      ss >> shots;
    } else if (key == "columns") {
      // informational; layout is fixed per scheme
    } else {
      malformed("unknown header key " + key);
    }
    if (ss.fail()) malformed("bad header line: " + line);
  }
  if (!have_scheme) malformed("missing scheme header");

  for (std::size_t i = 0; i < shots; ++i) {
    if (!std::getline(in, line)) malformed("truncated outcome list");
    std::istringstream ss(line);
    switch (rec.scheme) {
      case Scheme::direct:
      case Scheme::entangled: {
        double delta = 0.0;
        int outcome = 0;
        ss >> delta >> outcome;
        if (ss.fail()) malformed("bad outcome line: " + line);
        rec.delta.push_back(delta);
        rec.outcome.push_back(outcome);
        break;
      }
      case Scheme::heterodyne: {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        ss >> a >> b >> c >> d;
        if (ss.fail()) malformed("bad outcome line: " + line);
        rec.mu.emplace_back(a, b);
        rec.nu.emplace_back(c, d);
        break;
      }
      case Scheme::homodyne: {
        double delta = 0.0, x = 0.0, y = 0.0;
        ss >> delta >> x >> y;
        if (ss.fail()) malformed("bad outcome line: " + line);
        rec.delta.push_back(delta);
        rec.x.push_back(x);
        rec.y.push_back(y);
        break;
      }
    }
  }
  return rec;
}

MeasurementRecord read_record_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("record_io: cannot open " + path);
  return read_record(in);
}

}  // namespace tli
