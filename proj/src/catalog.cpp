#include "monocert/catalog.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "monocert/expr.hpp"

namespace monocert {

namespace {

double sat(double u) { return u * u / (u * u + 1.0); }

std::vector<DelaySignal> default_delays(double r, std::size_t m) {
  std::vector<DelaySignal> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (r == 0.0) {
      out.push_back(DelaySignal::constant(0.0, 0.0));
    } else {
      out.push_back(DelaySignal::sinusoidal(0.5 * r, 0.5 * r,
                                            1.0 + 0.41421356 * j,
                                            0.7 * static_cast<double>(j), r));
    }
  }
  return out;
}

SystemDescriptor build_example15(double r) {
  Field f = [](std::span<const double> x, std::span<double> out) {
    out[0] = -x[0];
    out[1] = -2.0 * sat(x[1]);
  };
  // Row 1 reads the first delayed sample, row 2 the second.
  Coupling g = [](std::span<const double>, std::span<const Vec> z,
                  std::span<double> out) {
    out[0] = sat(z[0][1]);
    out[1] = z[1][0];
  };
  return SystemDescriptor::make("example15", 2, r, std::move(f), std::move(g),
                                default_delays(r, 2), Vec{0.0, 0.0});
}

SystemDescriptor build_linear(double r) {
  // A Metzler, B >= 0, A + B Hurwitz (eigenvalues -0.5, -2.5).
  Field f = [](std::span<const double> x, std::span<double> out) {
    out[0] = -2.0 * x[0] + 0.5 * x[1];
    out[1] = 0.5 * x[0] - 2.0 * x[1];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec> z,
                  std::span<double> out) {
    out[0] = 0.5 * (z[0][0] + z[0][1]);
    out[1] = 0.5 * (z[0][0] + z[0][1]);
  };
  return SystemDescriptor::make("linear", 2, r, std::move(f), std::move(g),
                                default_delays(r, 1), Vec{0.0, 0.0});
}

SystemDescriptor build_scalar_shifted(double r) {
  Field f = [](std::span<const double> x, std::span<double> out) {
    out[0] = 1.0 - 2.0 * x[0];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec> z,
                  std::span<double> out) { out[0] = z[0][0]; };
  return SystemDescriptor::make("scalar_shifted", 1, r, std::move(f),
                                std::move(g), default_delays(r, 1), Vec{1.0});
}

SystemDescriptor build_nonmonotone_fixture(double /*r*/) {
  Field f = [](std::span<const double> x, std::span<double> out) {
    out[0] = -x[0] - x[1];
    out[1] = -x[1];
  };
  Coupling g = [](std::span<const double>, std::span<const Vec>,
                  std::span<double> out) {
    out[0] = 0.0;
    out[1] = 0.0;
  };
  return SystemDescriptor::make("nonmonotone_fixture", 2, 0.0, std::move(f),
                                std::move(g), {}, Vec{0.0, 0.0});
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.push_back({"example15",
                 "two-component saturating system, equilibrium at the origin",
                 false, /*monotone_everywhere=*/false, 0.5, example15_y0(2.0),
                 30000.0, 1e-4, build_example15});
    v.push_back({"linear",
                 "positive linear system, A Metzler, B >= 0, A+B Hurwitz",
                 false, true, 1.0, Vec{1.0, 1.0}, 100.0, 1e-6, build_linear});
    v.push_back({"scalar_shifted",
                 "scalar dx = 1 - 2x + x(t-d), equilibrium at 1", false, true,
                 1.0, Vec{1.8}, 60.0, 1e-6, build_scalar_shifted});
    v.push_back({"nonmonotone_fixture",
                 "planted quasimonotonicity counterexample (validator test)",
                 true, false, 0.0, Vec{1.0, 1.0}, 20.0, 1e-6,
                 build_nonmonotone_fixture});
    return v;
  }();
  return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const CatalogEntry& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Vec example15_y0(double kappa) {
  if (!(kappa >= 1.0)) throw ConfigError("example15 kappa must be >= 1");
  const double k2 = kappa * kappa;
  return Vec{(3.0 * k2 - 1.0) / (k2 + 1.0), kappa};
}

namespace {

using nlohmann::json;

DelaySignal delay_from_json(const json& j, double r) {
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    return DelaySignal::constant(j.value("value", r), r);
  }
  if (kind == "sinusoidal") {
    return DelaySignal::sinusoidal(j.value("offset", 0.5 * r),
                                   j.value("amplitude", 0.5 * r),
                                   j.value("omega", 1.0),
                                   j.value("phase", 0.0), r);
  }
  if (kind == "piecewise-constant-random") {
    return DelaySignal::piecewise_random(j.value("seed", std::uint64_t{0}),
                                         j.value("period", std::max(0.1, r)),
                                         r);
  }
  throw ConfigError("unknown delay kind: " + kind);
}

SystemDescriptor system_from_json(const json& j, const std::string& name,
                                  double r_override) {
  if (!j.contains("dimension") || !j.contains("r") || !j.contains("f")) {
    throw ConfigError("system file needs keys dimension, r, f");
  }
  const auto n = j.at("dimension").get<std::size_t>();
  if (n == 0) throw ConfigError("dimension must be >= 1");
  double r = j.at("r").get<double>();
  if (r_override >= 0.0) r = r_override;

  auto parse_rows = [&](const char* key) {
    std::vector<Expr> rows;
    if (!j.contains(key)) return rows;
    for (const auto& item : j.at(key)) {
      rows.push_back(Expr::parse(item.get<std::string>()));
    }
    if (rows.size() != n) {
      throw ConfigError(std::string(key) + " must have one expression per row");
    }
    return rows;
  };

  auto f_rows = std::make_shared<std::vector<Expr>>(parse_rows("f"));
  auto g_rows = std::make_shared<std::vector<Expr>>(parse_rows("g"));

  std::vector<DelaySignal> delays;
  if (j.contains("delays")) {
    for (const auto& d : j.at("delays")) delays.push_back(delay_from_json(d, r));
  }
  const std::size_t m = delays.size();

  for (const Expr& e : *f_rows) {
    if (e.max_x_index() > n) throw ConfigError("f references x beyond dimension");
    if (e.max_z_index() > 0) throw ConfigError("f must not reference delayed z");
  }
  for (const Expr& e : *g_rows) {
    if (e.max_x_index() > n) throw ConfigError("g references x beyond dimension");
    if (e.max_z_index() > n) throw ConfigError("g references z beyond dimension");
    if (e.max_z_index() > 0 && m == 0) {
      throw ConfigError("g references delayed z but no delays are declared");
    }
  }

  Vec equilibrium(n, 0.0);
  if (j.contains("equilibrium")) {
    equilibrium = j.at("equilibrium").get<Vec>();
    if (equilibrium.size() != n) throw ConfigError("equilibrium dimension");
  }

  Field f = [f_rows, n](std::span<const double> x, std::span<double> out) {
    const std::span<const double> no_z;
    for (std::size_t i = 0; i < n; ++i) out[i] = (*f_rows)[i].eval(x, no_z);
  };
  Coupling g;
  if (g_rows->empty()) {
    g = [n](std::span<const double>, std::span<const Vec>,
            std::span<double> out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    };
  } else {
    // zk in row i reads the sample from delay signal min(i, m-1).
    g = [g_rows, n](std::span<const double> head, std::span<const Vec> samples,
                    std::span<double> out) {
      for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> z;
        if (!samples.empty()) {
          z = samples[std::min(i, samples.size() - 1)];
        }
        out[i] = (*g_rows)[i].eval(head, z);
      }
    };
  }

  return SystemDescriptor::make(j.value("name", name), n, r, std::move(f),
                                std::move(g), std::move(delays),
                                std::move(equilibrium));
}

}  // namespace

SystemDescriptor load_system_file(const std::string& path, double r_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open system file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
  // Harness configs embed the system under a "system" key.
  const json& body = j.contains("system") && j.at("system").is_object()
                         ? j.at("system")
                         : j;
  try {
    return system_from_json(body, path, r_override);
  } catch (const json::exception& e) {
    throw ConfigError("bad system file " + path + ": " + e.what());
  }
}

SystemDescriptor resolve_system(const std::string& name_or_path,
                                double r_override) {
  if (const CatalogEntry* e = find_catalog_entry(name_or_path)) {
    return e->build(r_override >= 0.0 ? r_override : e->default_r);
  }
  return load_system_file(name_or_path, r_override);
}

}  // namespace monocert
