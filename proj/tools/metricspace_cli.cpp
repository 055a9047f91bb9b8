#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metricspace/metricspace.hpp"

namespace {

using nlohmann::json;

struct Options {
  double tol = 1e-9;
  std::uint64_t max_nodes = metricspace::GhLimits{}.max_nodes;
  double timeout = metricspace::GhLimits{}.max_seconds;
  bool json_out = false;
  std::string out_path;
};

// Defaults may come from a JSON config file named by METRICSPACE_CONFIG;
// command-line flags override whatever the file sets.
void load_config(Options& opt) {
  const char* path = std::getenv("METRICSPACE_CONFIG");
  if (path == nullptr || *path == '\0') return;
  json doc;
  try {
    doc = json::parse(metricspace::read_text_file(path));
  } catch (const json::parse_error& err) {
    throw metricspace::InputError(std::string("invalid config JSON: ") + err.what());
  }
  if (!doc.is_object()) throw metricspace::InputError("config must be a JSON object");
  if (doc.contains("tolerance")) opt.tol = doc["tolerance"].get<double>();
  if (doc.contains("max_nodes")) opt.max_nodes = doc["max_nodes"].get<std::uint64_t>();
  if (doc.contains("timeout")) opt.timeout = doc["timeout"].get<double>();
  if (doc.contains("json")) opt.json_out = doc["json"].get<bool>();
  if (doc.contains("output")) opt.out_path = doc["output"].get<std::string>();
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty())
    std::cout << text;
  else
    metricspace::write_text_file(opt.out_path, text);
}

void emit_space(const Options& opt, const metricspace::FiniteMetricSpace& space) {
  if (!opt.out_path.empty() && metricspace::has_csv_extension(opt.out_path))
    metricspace::write_text_file(opt.out_path, metricspace::space_to_csv(space));
  else
    emit(opt, metricspace::space_to_json(space).dump(2) + "\n");
}

json report_to_json(const metricspace::ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    json entry{{"kind", metricspace::violation_kind_name(v.kind)},
               {"i", v.i},
               {"j", v.j},
               {"magnitude", v.magnitude}};
    if (v.k != metricspace::npos) entry["k"] = v.k;
    violations.push_back(std::move(entry));
  }
  return json{{"ok", report.ok}, {"violations", std::move(violations)}};
}

std::string report_to_text(const metricspace::ValidationReport& report, std::size_t points) {
  if (report.ok) return "ok (" + std::to_string(points) + " points)\n";
  std::string out = "invalid: " + std::to_string(report.violations.size()) + " violation(s)\n";
  for (const auto& v : report.violations) {
    out += "  ";
    out += metricspace::violation_kind_name(v.kind);
    out += " (" + std::to_string(v.i) + "," + std::to_string(v.j) + ")";
    if (v.k != metricspace::npos) out += " via " + std::to_string(v.k);
    out += ": " + metricspace::format_double(v.magnitude) + "\n";
  }
  return out;
}

std::string render_report(const Options& opt, const metricspace::ValidationReport& report,
                          std::size_t points) {
  return opt.json_out ? report_to_json(report).dump(2) + "\n" : report_to_text(report, points);
}

// Reads a space and insists it is a metric; on failure the violation
// report becomes the output and the command exits with code 1.
metricspace::FiniteMetricSpace load_checked(const Options& opt, const std::string& path) {
  metricspace::FiniteMetricSpace space = metricspace::read_space(path);
  const auto report = metricspace::validate_metric(space, opt.tol);
  if (!report.ok) {
    emit(opt, render_report(opt, report, space.size()));
    throw metricspace::InputError(path + " is not a valid metric space");
  }
  return space;
}

std::size_t resolve_point(const metricspace::FiniteMetricSpace& space, const std::string& key) {
  const std::size_t idx = space.index_of(key);
  if (idx != metricspace::npos) return idx;
  try {
    const std::size_t numeric = std::stoul(key);
    if (numeric < space.size()) return numeric;
  } catch (const std::exception&) {
  }
  throw metricspace::InputError("unknown point: " + key);
}

std::string matrix_text(const metricspace::FiniteMetricSpace& space) {
  std::string out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.label(i);
    for (std::size_t j = 0; j < space.size(); ++j)
      out += " " + metricspace::format_double(space.distance(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  try {
    load_config(opt);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }

  CLI::App app{"finite metric space toolkit"};
  app.require_subcommand(1);

  auto common = [&opt](CLI::App* sub) {
    sub->add_flag("--json", opt.json_out, "machine-readable JSON output");
    sub->add_option("-o,--output", opt.out_path, "write output to this file instead of stdout");
    sub->add_option("--tol", opt.tol, "metric validation tolerance");
  };

  std::string file_a, file_b;

  CLI::App* cmd_validate = app.add_subcommand("validate", "check the metric axioms of a space");
  cmd_validate->add_option("file", file_a, "space file (JSON or CSV)")->required();
  common(cmd_validate);

  CLI::App* cmd_ultra = app.add_subcommand("ultra", "subdominant ultrametric of a space");
  cmd_ultra->add_option("file", file_a)->required();
  common(cmd_ultra);

  CLI::App* cmd_bottleneck =
      app.add_subcommand("bottleneck", "largest minimum-spanning-tree edge of a space");
  cmd_bottleneck->add_option("file", file_a)->required();
  common(cmd_bottleneck);

  double eps = 0.0;
  bool want_components = false;
  std::vector<std::string> witness_points;
  CLI::App* cmd_chain = app.add_subcommand("chain", "chain connectivity at a scale");
  cmd_chain->add_option("file", file_a)->required();
  cmd_chain->add_option("--eps", eps, "chain step scale")->required();
  cmd_chain->add_flag("--components", want_components, "emit the component partition");
  cmd_chain->add_option("--witness", witness_points, "emit a chain between two points")
      ->expected(2);
  common(cmd_chain);

  bool gh_exact_mode = false, gh_bounds_mode = false;
  CLI::App* cmd_gh = app.add_subcommand("gh", "Gromov-Hausdorff distance between two spaces");
  cmd_gh->add_option("fileX", file_a)->required();
  cmd_gh->add_option("fileY", file_b)->required();
  cmd_gh->add_flag("--exact", gh_exact_mode, "exact search (default)");
  cmd_gh->add_flag("--bounds", gh_bounds_mode, "certified bounds only, no exact search");
  cmd_gh->add_option("--max-nodes", opt.max_nodes, "search node budget");
  cmd_gh->add_option("--timeout", opt.timeout, "search time budget in seconds");
  common(cmd_gh);

  std::string metric_kind;
  CLI::App* cmd_product = app.add_subcommand("product", "product of two spaces");
  cmd_product->add_option("fileX", file_a)->required();
  cmd_product->add_option("fileY", file_b)->required();
  cmd_product->add_option("--metric", metric_kind, "product metric: l1 or linf")
      ->required()
      ->check(CLI::IsMember({"l1", "linf"}));
  common(cmd_product);

  double dt_t = 0.0, dt_step = 0.0;
  std::optional<double> dt_check;
  CLI::App* cmd_dt = app.add_subcommand("dt", "sampled segment construction over a space");
  cmd_dt->add_option("file", file_a)->required();
  cmd_dt->add_option("--t", dt_t, "segment threshold")->required();
  cmd_dt->add_option("--step", dt_step, "sample spacing")->required();
  cmd_dt->add_option("--check-connect", dt_check,
                     "also check chain connectivity of the sample built at this threshold");
  common(cmd_dt);

  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a space");
  cmd_gen->require_subcommand(1);
  std::size_t gen_n = 0, gen_count = 0, gen_dim = 0;
  std::uint64_t gen_seed = 0;
  double gen_radius = 0.0, gen_ratio = 0.0, gen_length = 0.0, gen_step = 0.0;

  CLI::App* gen_polygon = cmd_gen->add_subcommand("polygon", "regular polygon vertices");
  gen_polygon->add_option("--n", gen_n)->required();
  gen_polygon->add_option("--radius", gen_radius)->required();
  common(gen_polygon);

  CLI::App* gen_geomprog = cmd_gen->add_subcommand("geomprog", "geometric progression line");
  gen_geomprog->add_option("--p", gen_ratio)->required();
  gen_geomprog->add_option("--count", gen_count)->required();
  common(gen_geomprog);

  CLI::App* gen_grid = cmd_gen->add_subcommand("grid", "evenly spaced segment");
  gen_grid->add_option("--length", gen_length)->required();
  gen_grid->add_option("--step", gen_step)->required();
  common(gen_grid);

  CLI::App* gen_random = cmd_gen->add_subcommand("random", "random points in the unit cube");
  gen_random->add_option("--n", gen_n)->required();
  gen_random->add_option("--dim", gen_dim)->required();
  gen_random->add_option("--seed", gen_seed)->required();
  common(gen_random);

  CLI::App* gen_ultra = cmd_gen->add_subcommand("ultra-random", "random ultrametric space");
  gen_ultra->add_option("--n", gen_n)->required();
  gen_ultra->add_option("--seed", gen_seed)->required();
  common(gen_ultra);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    if (err.get_exit_code() == 0) return app.exit(err);
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(cmd_validate)) {
      const metricspace::FiniteMetricSpace space = metricspace::read_space(file_a);
      const auto report = metricspace::validate_metric(space, opt.tol);
      emit(opt, render_report(opt, report, space.size()));
      return report.ok ? 0 : 1;
    }

    if (app.got_subcommand(cmd_ultra)) {
      const auto space = load_checked(opt, file_a);
      const metricspace::UltrametricSpace ultra = metricspace::subdominant(space);
      if (opt.json_out || !opt.out_path.empty()) {
        emit(opt, metricspace::ultrametric_to_json(ultra, space).dump(2) + "\n");
      } else {
        emit(opt, matrix_text(ultra.space));
      }
      return 0;
    }

    if (app.got_subcommand(cmd_bottleneck)) {
      const auto space = load_checked(opt, file_a);
      const double value = metricspace::bottleneck(space);
      if (opt.json_out)
        emit(opt, json{{"bottleneck", value}}.dump(2) + "\n");
      else
        emit(opt, metricspace::format_double(value) + "\n");
      return 0;
    }

    if (app.got_subcommand(cmd_chain)) {
      const auto space = load_checked(opt, file_a);
      if (!witness_points.empty()) {
        const std::size_t from = resolve_point(space, witness_points[0]);
        const std::size_t to = resolve_point(space, witness_points[1]);
        const auto witness = metricspace::chain_witness(space, from, to, eps);
        if (opt.json_out) {
          json doc{{"scale", eps}, {"found", witness.has_value()}};
          if (witness) {
            json indices = json::array();
            for (std::size_t idx : witness->indices) indices.push_back(space.label(idx));
            doc["chain"] = std::move(indices);
            doc["max_step"] = witness->max_step;
          }
          emit(opt, doc.dump(2) + "\n");
        } else if (witness) {
          std::string line;
          for (std::size_t idx : witness->indices) {
            if (!line.empty()) line += " -> ";
            line += space.label(idx);
          }
          emit(opt, line + " (max step " + metricspace::format_double(witness->max_step) +
                        ")\n");
        } else {
          emit(opt, "no chain at scale " + metricspace::format_double(eps) + "\n");
        }
        return 0;
      }
      const metricspace::ChainPartition partition = metricspace::components_at_scale(space, eps);
      if (want_components) {
        if (opt.json_out) {
          emit(opt, metricspace::partition_to_json(partition, space).dump(2) + "\n");
        } else {
          std::string out;
          for (const auto& component : partition.components) {
            std::string line;
            for (std::size_t idx : component) {
              if (!line.empty()) line += " ";
              line += space.label(idx);
            }
            out += "{ " + line + " }\n";
          }
          emit(opt, out);
        }
        return 0;
      }
      const bool connected = partition.components.size() == 1;
      if (opt.json_out)
        emit(opt, json{{"scale", eps}, {"connected", connected}}.dump(2) + "\n");
      else
        emit(opt, std::string(connected ? "connected" : "disconnected") + " at scale " +
                      metricspace::format_double(eps) + "\n");
      return 0;
    }

    if (app.got_subcommand(cmd_gh)) {
      if (gh_exact_mode && gh_bounds_mode)
        throw metricspace::InputError("choose one of --exact and --bounds");
      const auto left = load_checked(opt, file_a);
      const auto right = load_checked(opt, file_b);
      const metricspace::GhLimits limits{opt.max_nodes, opt.timeout};
      metricspace::GhResult result;
      if (gh_bounds_mode) {
        auto bounds = metricspace::gh_lower_bounds(left, right, limits);
        for (const auto& [name, value] : bounds)
          result.lower = std::max(result.lower, value);
        result.upper = metricspace::gh_upper_bound_trivial(left, right);
        result.provenance = std::move(bounds);
        result.provenance.push_back({"trivial_upper", result.upper});
        result.exact = false;
      } else {
        result = metricspace::gh_exact(left, right, limits);
      }
      if (opt.json_out) {
        emit(opt, metricspace::gh_result_to_json(result, left, right).dump(2) + "\n");
      } else if (result.exact) {
        emit(opt, "d_GH = " + metricspace::format_double(result.upper) + " (exact, " +
                      std::to_string(result.nodes_explored) + " nodes)\n");
      } else {
        emit(opt, "d_GH in [" + metricspace::format_double(result.lower) + ", " +
                      metricspace::format_double(result.upper) + "]" +
                      (result.timed_out ? " (search budget exhausted)" : "") + "\n");
      }
      return 0;
    }

    if (app.got_subcommand(cmd_product)) {
      const auto left = load_checked(opt, file_a);
      const auto right = load_checked(opt, file_b);
      const metricspace::FiniteMetricSpace product =
          metric_kind == "l1" ? metricspace::product_l1(left, right)
                              : metricspace::product_linf(left, right);
      emit_space(opt, product);
      return 0;
    }

    if (app.got_subcommand(cmd_dt)) {
      const auto space = load_checked(opt, file_a);
      const metricspace::SampledDt dt = metricspace::sample_dt(space, dt_t, dt_step);
      json doc = metricspace::sampled_dt_to_json(dt);
      if (dt_check)
        doc["connected"] = metricspace::dt_connectivity_check(space, *dt_check, dt_step);
      emit(opt, doc.dump(2) + "\n");
      return 0;
    }

    if (app.got_subcommand(cmd_gen)) {
      metricspace::FiniteMetricSpace space = metricspace::one_point();
      if (cmd_gen->got_subcommand(gen_polygon))
        space = metricspace::polygon_vertices(gen_n, gen_radius);
      else if (cmd_gen->got_subcommand(gen_geomprog))
        space = metricspace::geometric_progression(gen_ratio, gen_count);
      else if (cmd_gen->got_subcommand(gen_grid))
        space = metricspace::grid_segment(gen_length, gen_step);
      else if (cmd_gen->got_subcommand(gen_random))
        space = metricspace::random_euclidean(gen_n, gen_dim, gen_seed);
      else
        space = metricspace::random_ultrametric(gen_n, gen_seed);
      emit_space(opt, space);
      return 0;
    }
  } catch (const metricspace::ResourceError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
