#include "hypnat/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hypnat {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
  std::filesystem::path path;
};

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->out.open(path);
  impl_->path = path;
  if (!impl_->out)
    throw Error(ErrorCode::TaskError, "cannot write " + path.string());
  impl_->columns = header.size();
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << (i ? "," : "") << header[i];
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->columns)
    throw Error(ErrorCode::TaskError, "column count mismatch in " + impl_->path.string());
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << (i ? "," : "") << cells[i];
  impl_->out << "\n";
}

void CsvWriter::row_numbers(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

void write_counting_csv(const std::filesystem::path& path, const GroupBall& ball,
                        double grid_step) {
  CsvWriter csv(path, {"R", "N", "logN"});
  for (double r = grid_step; r <= ball.r_max() + 1e-12; r += grid_step) {
    const double rc = std::min(r, ball.r_max());
    const auto n = counting_function(ball, rc);
    csv.row({format_double(rc), std::to_string(n),
             format_double(n ? std::log(static_cast<double>(n)) : 0.0)});
  }
}

void write_ball_csv(const std::filesystem::path& path, const GroupBall& ball) {
  std::vector<std::string> header{"word", "radius"};
  for (int i = 1; i <= ball.dim(); ++i) header.push_back("b" + std::to_string(i));
  CsvWriter csv(path, header);
  for (const auto& e : ball.elements()) {
    std::vector<std::string> cells{e.word.empty() ? "e" : e.word,
                                   format_double(e.radius)};
    const Vec b = to_ball(e.orbit);
    for (int i = 0; i < ball.dim(); ++i) cells.push_back(format_double(b[i]));
    csv.row(cells);
  }
}

void write_measure_csv(const std::filesystem::path& path, const AtomicMeasure& mu) {
  std::vector<std::string> header;
  for (int i = 1; i <= mu.dim(); ++i) header.push_back("b" + std::to_string(i));
  header.push_back("weight");
  header.push_back("boundary");
  CsvWriter csv(path, header);
  for (const auto& a : mu.atoms()) {
    std::vector<std::string> cells;
    const Vec b = location_ball_coords(a.location);
    for (int i = 0; i < mu.dim(); ++i) cells.push_back(format_double(b[i]));
    cells.push_back(format_double(a.weight));
    cells.push_back(location_is_boundary(a.location) ? "1" : "0");
    csv.row(cells);
  }
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               std::size_t min_cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;  // header
      continue;
    }
    if (cells.size() < min_cols)
      throw Error(ErrorCode::ParseError, "short row in " + path.string());
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

AtomicMeasure read_measure_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, 3);
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty measure " + path.string());
  const int dim = static_cast<int>(rows[0].size()) - 2;
  std::vector<Atom> atoms;
  for (const auto& r : rows) {
    Vec b(dim);
    for (int i = 0; i < dim; ++i) b[i] = std::stod(r[i]);
    const double w = std::stod(r[dim]);
    const bool boundary = std::stod(r[dim + 1]) != 0.0;
    if (boundary)
      atoms.push_back({AtomLocation{IdealPoint::from_ball(b)}, w});
    else
      atoms.push_back({AtomLocation{HPoint::from_ball(b)}, w});
  }
  return AtomicMeasure(dim, std::move(atoms));
}

void write_profile_csv(const std::filesystem::path& path,
                       const VisualKernelProfile& profile) {
  CsvWriter csv(path, {"r", "m"});
  for (Eigen::Index i = 0; i < profile.grid().size(); ++i)
    csv.row_numbers({profile.grid()[i], profile.values()[i]});
}

VisualKernelProfile read_profile_csv(const std::filesystem::path& path, int dim_n) {
  const auto rows = read_csv(path, 2);
  Eigen::VectorXd grid(rows.size()), values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    grid[static_cast<Eigen::Index>(i)] = std::stod(rows[i][0]);
    values[static_cast<Eigen::Index>(i)] = std::stod(rows[i][1]);
  }
  return VisualKernelProfile(dim_n, std::move(grid), std::move(values));
}

void write_trace_csv(const std::filesystem::path& path, const CTEval& eval) {
  const int dim = static_cast<int>(eval.trace.empty() ? 0 : eval.trace[0].second.size());
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= dim; ++i) header.push_back("F" + std::to_string(i));
  header.push_back("chordal_increment");
  CsvWriter csv(path, header);
  for (std::size_t i = 0; i < eval.trace.size(); ++i) {
    std::vector<double> cells{eval.trace[i].first};
    for (int j = 0; j < dim; ++j) cells.push_back(eval.trace[i].second[j]);
    cells.push_back(i == 0 ? 0.0 : eval.increments[i - 1]);
    csv.row_numbers(cells);
  }
}

std::vector<std::pair<HPoint, double>> read_sampler_csv(
    const std::filesystem::path& path, int dim) {
  const auto rows = read_csv(path, static_cast<std::size_t>(dim) + 1);
  std::vector<std::pair<HPoint, double>> out;
  for (const auto& r : rows) {
    Vec b(dim);
    for (int i = 0; i < dim; ++i) b[i] = std::stod(r[i]);
    out.emplace_back(HPoint::from_ball(b), std::stod(r[dim]));
  }
  return out;
}

VisualKernelProfile cached_profile(int dim_n, int samples) {
  const char* dir = std::getenv("PSNAT_CACHE");
  if (!dir || !*dir) return build_profile(dim_n, samples);
  std::filesystem::path cache(dir);
  std::error_code ec;
  std::filesystem::create_directories(cache, ec);
  const auto file = cache / ("profile_n" + std::to_string(dim_n) + "_s" +
                             std::to_string(samples) + ".csv");
  if (std::filesystem::exists(file)) {
    try {
      return read_profile_csv(file, dim_n);
    } catch (const Error&) {
      // fall through and rebuild a corrupt cache entry
    }
  }
  VisualKernelProfile profile = build_profile(dim_n, samples);
  write_profile_csv(file, profile);
  return profile;
}

}  // namespace hypnat
