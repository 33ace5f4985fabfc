#include "hypnat/scenario.hpp"

#include <fstream>
#include <sstream>

namespace hypnat {

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

struct Section {
  std::string name;
  int line;
  std::vector<Line> lines;
};

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              name + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<Section> split_sections(const std::string& text, const std::string& name) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(name, number, "unterminated section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), number, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(name, number, "expected `key = value`");
    if (sections.empty()) parse_fail(name, number, "key outside any [section]");
    sections.back().lines.push_back(
        {number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }
  return sections;
}

std::vector<double> parse_numbers(const std::string& value, const std::string& name,
                                  int line) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      parse_fail(name, line, "not a number: `" + tok + "`");
    }
  }
  return out;
}

Isometry parse_generator_matrix(const std::string& kind, const std::vector<double>& v,
                                int dim, const std::string& name, int line,
                                const std::string& label) {
  try {
    if (kind == "sl2r") {
      if (v.size() != 4) parse_fail(name, line, "sl2r generator needs 4 entries");
      Eigen::Matrix2d m;
      m << v[0], v[1], v[2], v[3];
      return lift_sl2(m);
    }
    if (kind == "sl2c") {
      if (v.size() != 8)
        parse_fail(name, line, "sl2c generator needs 8 entries (re im x 4)");
      Eigen::Matrix2cd m;
      m << std::complex<double>(v[0], v[1]), std::complex<double>(v[2], v[3]),
          std::complex<double>(v[4], v[5]), std::complex<double>(v[6], v[7]);
      return lift_sl2(m);
    }
    if (kind == "lorentz") {
      const int n = dim + 1;
      if (static_cast<int>(v.size()) != n * n)
        parse_fail(name, line, "lorentz generator needs (dim+1)^2 entries");
      Mat m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
      return Isometry(m);
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError,
                name + ":" + std::to_string(line) + ": generator " + label + ": " +
                    e.what());
  }
  parse_fail(name, line, "unknown matrix kind `" + kind + "`");
}

int lifted_dim(const std::string& kind, int declared) {
  if (kind == "sl2r") return 2;
  if (kind == "sl2c") return 3;
  return declared;
}

}  // namespace

std::string TaskSpec::get(const std::string& key, const std::string& fallback) const {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double TaskSpec::get_num(const std::string& key, double fallback) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  return std::stod(it->second);
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  Scenario sc;
  sc.name = name;
  const std::vector<Section> sections = split_sections(text, name);

  // Group first: the representation refers to its labels.
  std::string rep_kind = "lorentz";
  int rep_dim = 3;
  const Section* rep_section = nullptr;
  const Section* family_section = nullptr;

  for (const auto& sec : sections) {
    if (sec.name == "group") {
      std::string kind = "lorentz";
      int dim = 2;
      for (const auto& l : sec.lines) {
        if (l.key == "kind") kind = l.value;
        if (l.key == "dim") dim = static_cast<int>(std::stod(l.value));
      }
      dim = lifted_dim(kind, dim);
      std::vector<std::pair<std::string, Isometry>> gens;
      for (const auto& l : sec.lines) {
        if (l.key.rfind("generator ", 0) != 0) continue;
        const std::string label = trim(l.key.substr(10));
        if (label.empty()) parse_fail(name, l.number, "generator needs a label");
        gens.emplace_back(label,
                          parse_generator_matrix(kind, parse_numbers(l.value, name, l.number),
                                                 dim, name, l.number, label));
      }
      if (gens.empty()) parse_fail(name, sec.line, "[group] has no generators");
      try {
        sc.group = std::make_shared<GroupSpec>(dim, std::move(gens));
      } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError,
                    name + ":" + std::to_string(sec.line) + ": " + e.what());
      }
    } else if (sec.name == "representation") {
      rep_section = &sec;
    } else if (sec.name == "family") {
      family_section = &sec;
    } else if (sec.name == "params") {
      for (const auto& l : sec.lines) {
        auto nums = [&] { return parse_numbers(l.value, name, l.number); };
        if (l.key == "R_max") sc.params.r_max = nums()[0];
        else if (l.key == "cap") sc.params.cap = static_cast<std::size_t>(nums()[0]);
        else if (l.key == "slack") sc.params.slack = nums()[0];
        else if (l.key == "dedup_tol") sc.params.dedup_tol = nums()[0];
        else if (l.key == "epsilon") sc.params.epsilon = nums()[0];
        else if (l.key == "s") sc.params.s = nums()[0];
        else if (l.key == "seed") sc.params.seed = static_cast<std::uint64_t>(nums()[0]);
        else if (l.key == "profile_samples") sc.params.profile_samples = static_cast<int>(nums()[0]);
        else if (l.key == "threads") sc.params.threads = static_cast<int>(nums()[0]);
        else if (l.key == "grid_step") sc.params.grid_step = nums()[0];
        else if (l.key == "window") {
          const auto v = nums();
          if (v.size() != 2) parse_fail(name, l.number, "window needs two numbers");
          sc.params.window = {v[0], v[1]};
        } else {
          parse_fail(name, l.number, "unknown [params] key `" + l.key + "`");
        }
      }
    } else if (sec.name.rfind("task.", 0) == 0) {
      TaskSpec task;
      task.type = sec.name.substr(5);
      task.index = static_cast<int>(sc.tasks.size());
      task.line = sec.line;
      for (const auto& l : sec.lines) {
        task.kv[l.key] = l.value;
        task.repeated.emplace_back(l.key, l.value);
      }
      sc.tasks.push_back(std::move(task));
    } else {
      parse_fail(name, sec.line, "unknown section [" + sec.name + "]");
    }
  }

  if (rep_section) {
    if (!sc.group)
      parse_fail(name, rep_section->line, "[representation] needs a [group]");
    std::map<std::string, Isometry> images;
    HPoint d0 = HPoint::origin(3);
    bool d0_set = false;
    std::vector<SigmaTarget> sigma;
    for (const auto& l : rep_section->lines) {
      if (l.key == "kind") rep_kind = l.value;
      if (l.key == "dim") rep_dim = static_cast<int>(std::stod(l.value));
    }
    rep_dim = lifted_dim(rep_kind, rep_dim);
    for (const auto& l : rep_section->lines) {
      if (l.key == "kind" || l.key == "dim") continue;
      if (l.key.rfind("image ", 0) == 0) {
        const std::string label = trim(l.key.substr(6));
        images.emplace(label,
                       parse_generator_matrix(rep_kind, parse_numbers(l.value, name, l.number),
                                              rep_dim, name, l.number, label));
      } else if (l.key == "D0") {
        const auto v = parse_numbers(l.value, name, l.number);
        if (static_cast<int>(v.size()) != rep_dim)
          parse_fail(name, l.number, "D0 needs dim ball coordinates");
        d0 = HPoint::from_ball(Eigen::Map<const Vec>(v.data(), v.size()));
        d0_set = true;
      } else if (l.key == "sigma_atom") {
        const auto v = parse_numbers(l.value, name, l.number);
        const int k = sc.group->dim();
        if (static_cast<int>(v.size()) != k + 1 + rep_dim)
          parse_fail(name, l.number,
                     "sigma_atom needs k source coords, a weight, n target coords");
        SigmaTarget t{
            HPoint::from_ball(Eigen::Map<const Vec>(v.data(), k)),
            HPoint::from_ball(Eigen::Map<const Vec>(v.data() + k + 1, rep_dim)),
            v[k]};
        sigma.push_back(std::move(t));
      } else {
        parse_fail(name, l.number, "unknown [representation] key `" + l.key + "`");
      }
    }
    if (!d0_set) d0 = HPoint::origin(rep_dim);
    try {
      sc.representation = Representation(sc.group, std::move(images), std::move(d0),
                                         std::move(sigma));
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError,
                  name + ":" + std::to_string(rep_section->line) + ": " + e.what());
    }
  }

  if (family_section) {
    FamilySpec fam;
    for (const auto& l : family_section->lines) {
      if (l.key == "kind") {
        fam.kind = l.value;
      } else if (l.key == "axis") {
        const auto v = parse_numbers(l.value, name, l.number);
        fam.axis = Vec::Zero(static_cast<Eigen::Index>(v.size()) + 1);
        for (std::size_t i = 0; i < v.size(); ++i)
          fam.axis[static_cast<Eigen::Index>(i) + 1] = v[i];
      } else if (l.key == "lengths") {
        fam.lengths = parse_numbers(l.value, name, l.number);
      } else if (l.key == "taus") {
        fam.taus = parse_numbers(l.value, name, l.number);
      } else if (l.key.rfind("image ", 0) == 0) {
        fam.other_images[trim(l.key.substr(6))] = l.value;
      } else {
        parse_fail(name, l.number, "unknown [family] key `" + l.key + "`");
      }
    }
    if (fam.kind != "conjugation" && fam.kind != "interpolation")
      parse_fail(name, family_section->line, "family kind must be conjugation|interpolation");
    sc.family = std::move(fam);
  }

  if (!sc.group)
    throw Error(ErrorCode::ParseError, name + ": missing [group] section");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::ParseError, "cannot open scenario file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

}  // namespace hypnat
