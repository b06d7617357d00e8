// zicount command line interface: fit / compare / idr / simulate.
//
// Talks to the library exclusively through the public C API so it doubles as
// a reference client for language bindings.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zicount/zicount.h"

using nlohmann::json;

namespace {

struct CliError {
  zic_status status;
  std::string message;
};

[[noreturn]] void fail(zic_status status, const std::string& message) {
  throw CliError{status, message};
}

void check(zic_status status) {
  if (status != ZIC_OK) fail(status, zic_last_error());
}

std::string fmt4(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

// ---------------------------------------------------------------------------
// common option bundles

struct DataOptions {
  std::string path;
  std::string response;
  std::vector<std::string> count_formula;
  std::vector<std::string> zero_formula;
  bool no_intercept = false;
};

struct FitOptions {
  zic_fit_options options{};
  FitOptions() { zic_fit_options_init(&options); }
};

struct OutputOptions {
  std::string format = "text";
  std::string out_path;
};

void add_data_options(CLI::App* cmd, DataOptions& data) {
  cmd->add_option("--data", data.path, "input CSV file")->required();
  cmd->add_option("--response", data.response, "response column (nonnegative integers)")
      ->required();
  cmd->add_option("--count-formula", data.count_formula,
                  "count-part covariate columns (comma separated; '1' = intercept only)")
      ->delimiter(',')
      ->required();
  cmd->add_option("--zero-formula", data.zero_formula,
                  "zero-part covariate columns (omit for models without zero inflation)")
      ->delimiter(',');
  cmd->add_flag("--no-intercept", data.no_intercept,
                "do not prepend intercept columns");
}

void add_fit_options(CLI::App* cmd, FitOptions& fit) {
  cmd->add_option("--max-iterations", fit.options.max_iterations);
  cmd->add_option("--gradient-tolerance", fit.options.gradient_tolerance);
  cmd->add_option("--step-tolerance", fit.options.step_tolerance);
  cmd->add_option("--restart-attempts", fit.options.restart_attempts);
}

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "text, csv, or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  cmd->add_option("--out", out.out_path, "output path (default: stdout)");
}

void write_output(const OutputOptions& opts, const std::string& content) {
  if (opts.out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(opts.out_path);
  if (!file) fail(ZIC_ERR_IO, "cannot write '" + opts.out_path + "'");
  file << content;
}

// ---------------------------------------------------------------------------
// handles

struct DatasetHandle {
  zic_dataset* ptr = nullptr;
  ~DatasetHandle() { zic_dataset_free(ptr); }
};

struct FitHandle {
  zic_fit* ptr = nullptr;
  FitHandle() = default;
  FitHandle(FitHandle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  FitHandle& operator=(FitHandle&& other) noexcept {
    std::swap(ptr, other.ptr);
    return *this;
  }
  FitHandle(const FitHandle&) = delete;
  ~FitHandle() { zic_fit_free(ptr); }
};

void load_dataset(const DataOptions& data, DatasetHandle& handle) {
  std::vector<const char*> count_cols, zero_cols;
  for (const auto& c : data.count_formula) count_cols.push_back(c.c_str());
  for (const auto& c : data.zero_formula) zero_cols.push_back(c.c_str());
  check(zic_dataset_from_csv(data.path.c_str(), data.response.c_str(),
                             count_cols.data(), count_cols.size(),
                             zero_cols.empty() ? nullptr : zero_cols.data(),
                             zero_cols.size(), data.no_intercept ? 0 : 1,
                             &handle.ptr));
}

std::vector<zic_model> parse_models(const std::vector<std::string>& names) {
  std::vector<zic_model> models;
  for (const auto& name : names) {
    zic_model model;
    check(zic_model_parse(name.c_str(), &model));
    models.push_back(model);
  }
  return models;
}

bool all_clean(const std::vector<FitHandle>& fits) {
  for (const auto& f : fits) {
    if (!zic_fit_converged(f.ptr) || zic_fit_condition_warning(f.ptr)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// fit rendering

json fit_to_json(const zic_fit* fit) {
  json params = json::array();
  const size_t n = zic_fit_num_params(fit);
  for (size_t j = 0; j < n; ++j) {
    params.push_back({{"name", zic_fit_param_name(fit, j)},
                      {"estimate", json_number(zic_fit_estimate(fit, j))},
                      {"std_error", json_number(zic_fit_std_error(fit, j))},
                      {"z", json_number(zic_fit_z_stat(fit, j))},
                      {"significant_at_05",
                       zic_fit_significant_at_05(fit, j) != 0}});
  }
  return {{"model", zic_model_name(zic_fit_model_kind(fit))},
          {"parameters", params},
          {"loglik", zic_fit_loglik(fit)},
          {"minus2ll", zic_fit_minus2ll(fit)},
          {"aic", zic_fit_aic(fit)},
          {"converged", zic_fit_converged(fit) != 0},
          {"iterations", zic_fit_iterations(fit)},
          {"condition_warning", zic_fit_condition_warning(fit) != 0}};
}

std::string estimate_cell(const zic_fit* fit, size_t j) {
  std::string cell = fmt4(zic_fit_estimate(fit, j)) + "(" +
                     fmt4(zic_fit_std_error(fit, j)) + ")";
  if (zic_fit_significant_at_05(fit, j)) cell += "*";
  return cell;
}

void render_fit_text(std::ostringstream& out, const zic_fit* fit) {
  out << "Model: " << zic_model_name(zic_fit_model_kind(fit)) << "  ("
      << (zic_fit_converged(fit) ? "converged" : "NOT converged") << ", "
      << zic_fit_iterations(fit) << " iterations";
  if (zic_fit_condition_warning(fit)) out << ", condition warning";
  out << ")\n";
  out << "  Effect                      Estimate(s.e)\n";

  const size_t n = zic_fit_num_params(fit);
  auto row = [&](const std::string& label, const std::string& value) {
    out << "  " << label;
    for (size_t pad = label.size(); pad < 28; ++pad) out << ' ';
    out << value << "\n";
  };

  // count part first (paper table order), then zero part, then k
  bool header_done = false;
  for (size_t j = 0; j < n; ++j) {
    const std::string name = zic_fit_param_name(fit, j);
    if (name.rfind("count:", 0) != 0) continue;
    if (!header_done) {
      out << "  -- Count Part --\n";
      header_done = true;
    }
    row(name.substr(6), estimate_cell(fit, j));
  }
  header_done = false;
  for (size_t j = 0; j < n; ++j) {
    const std::string name = zic_fit_param_name(fit, j);
    if (name.rfind("zero:", 0) != 0) continue;
    if (!header_done) {
      out << "  -- Zero-Inflated Part --\n";
      header_done = true;
    }
    row(name.substr(5), estimate_cell(fit, j));
  }
  for (size_t j = 0; j < n; ++j) {
    if (std::string(zic_fit_param_name(fit, j)) == "k") {
      row("k (overdispersion)", estimate_cell(fit, j));
    }
  }
  row("-2Log-likelihood", fmt4(zic_fit_minus2ll(fit)));
  row("AIC", fmt4(zic_fit_aic(fit)));
}

void render_fit_csv(std::ostringstream& out, const zic_fit* fit) {
  const size_t n = zic_fit_num_params(fit);
  char buf[64];
  for (size_t j = 0; j < n; ++j) {
    out << zic_model_name(zic_fit_model_kind(fit)) << ','
        << zic_fit_param_name(fit, j) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_estimate(fit, j));
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_std_error(fit, j));
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_z_stat(fit, j));
    out << buf << ',' << (zic_fit_significant_at_05(fit, j) ? 1 : 0) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_minus2ll(fit));
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_aic(fit));
    out << buf << ',' << (zic_fit_converged(fit) ? 1 : 0) << '\n';
  }
}

int run_fit(const DataOptions& data, const std::vector<std::string>& model_names,
            const FitOptions& fit_opts, const OutputOptions& out_opts) {
  DatasetHandle dataset;
  load_dataset(data, dataset);
  const auto models = parse_models(model_names);
  if (models.empty()) fail(ZIC_ERR_INVALID_ARGUMENT, "no model given");

  std::vector<FitHandle> fits(models.size());
  for (size_t i = 0; i < models.size(); ++i) {
    check(zic_fit_model(dataset.ptr, models[i], &fit_opts.options, &fits[i].ptr));
  }

  std::ostringstream out;
  if (out_opts.format == "text") {
    for (const auto& f : fits) {
      render_fit_text(out, f.ptr);
      out << "\n";
    }
  } else if (out_opts.format == "csv") {
    out << "model,parameter,estimate,std_error,z_stat,significant_at_05,"
           "minus2ll,aic,converged\n";
    for (const auto& f : fits) render_fit_csv(out, f.ptr);
  } else {
    json doc = json::array();
    for (const auto& f : fits) doc.push_back(fit_to_json(f.ptr));
    out << doc.dump(2) << "\n";
  }
  write_output(out_opts, out.str());
  return all_clean(fits) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// compare

int run_compare(const DataOptions& data,
                const std::vector<std::string>& model_names,
                const FitOptions& fit_opts, const OutputOptions& out_opts) {
  DatasetHandle dataset;
  load_dataset(data, dataset);
  const auto models = parse_models(model_names);
  if (models.size() < 2) {
    fail(ZIC_ERR_INVALID_ARGUMENT, "compare needs at least two models");
  }

  std::vector<FitHandle> fits(models.size());
  std::vector<const zic_fit*> raw;
  for (size_t i = 0; i < models.size(); ++i) {
    check(zic_fit_model(dataset.ptr, models[i], &fit_opts.options, &fits[i].ptr));
    raw.push_back(fits[i].ptr);
  }
  std::vector<size_t> ranking(fits.size());
  check(zic_compare(raw.data(), raw.size(), ranking.data()));

  std::ostringstream out;
  if (out_opts.format == "text") {
    out << "Rank  Model    Params  -2LL          AIC\n";
    for (size_t r = 0; r < ranking.size(); ++r) {
      const zic_fit* f = raw[ranking[r]];
      char line[160];
      std::snprintf(line, sizeof(line), "%-6zu%-9s%-8zu%-14s%s\n", r + 1,
                    zic_model_name(zic_fit_model_kind(f)), zic_fit_num_params(f),
                    fmt4(zic_fit_minus2ll(f)).c_str(), fmt4(zic_fit_aic(f)).c_str());
      out << line;
    }
  } else if (out_opts.format == "csv") {
    out << "rank,model,n_params,minus2ll,aic\n";
    char buf[64];
    for (size_t r = 0; r < ranking.size(); ++r) {
      const zic_fit* f = raw[ranking[r]];
      out << r + 1 << ',' << zic_model_name(zic_fit_model_kind(f)) << ','
          << zic_fit_num_params(f) << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_minus2ll(f));
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", zic_fit_aic(f));
      out << buf << '\n';
    }
  } else {
    json doc = json::array();
    for (size_t r = 0; r < ranking.size(); ++r) {
      const zic_fit* f = raw[ranking[r]];
      doc.push_back({{"rank", r + 1},
                     {"model", zic_model_name(zic_fit_model_kind(f))},
                     {"n_params", zic_fit_num_params(f)},
                     {"minus2ll", zic_fit_minus2ll(f)},
                     {"aic", zic_fit_aic(f)}});
    }
    out << doc.dump(2) << "\n";
  }
  write_output(out_opts, out.str());
  return all_clean(fits) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// idr

int run_idr(const DataOptions& data, const std::string& model_name,
            const std::string& covariate, const FitOptions& fit_opts,
            const OutputOptions& out_opts) {
  DatasetHandle dataset;
  load_dataset(data, dataset);
  zic_model model;
  check(zic_model_parse(model_name.c_str(), &model));

  std::vector<FitHandle> fits(1);
  check(zic_fit_model(dataset.ptr, model, &fit_opts.options, &fits[0].ptr));

  zic_idr* idr = nullptr;
  check(zic_idr_compute(fits[0].ptr, dataset.ptr, covariate.c_str(), &idr));
  std::unique_ptr<zic_idr, decltype(&zic_idr_free)> idr_guard(idr, &zic_idr_free);

  std::ostringstream out;
  const bool constant = zic_idr_constant(idr) != 0;
  if (constant) {
    double low = 0, high = 0;
    check(zic_idr_ci(idr, &low, &high));
    if (out_opts.format == "text") {
      out << "IDR for " << covariate << " (" << zic_model_name(model)
          << "): " << fmt4(zic_idr_value(idr)) << "  95% CI [" << fmt4(low)
          << ", " << fmt4(high) << "]\n";
    } else if (out_opts.format == "csv") {
      char buf[200];
      out << "covariate,model,constant,idr,ci_low,ci_high\n";
      std::snprintf(buf, sizeof(buf), "%s,%s,1,%.17g,%.17g,%.17g\n",
                    covariate.c_str(), zic_model_name(model), zic_idr_value(idr),
                    low, high);
      out << buf;
    } else {
      json doc = {{"covariate", covariate},
                  {"model", zic_model_name(model)},
                  {"constant", true},
                  {"idr", zic_idr_value(idr)},
                  {"ci_95", {low, high}}};
      out << doc.dump(2) << "\n";
    }
  } else {
    const size_t n = zic_idr_num_profiles(idr);
    std::vector<double> values(n);
    std::vector<double> linpreds(n);
    for (size_t i = 0; i < n; ++i) {
      check(zic_idr_profile(idr, i, &linpreds[i], &values[i]));
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1
                              ? sorted[n / 2]
                              : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (out_opts.format == "text") {
      out << "IDR for " << covariate << " (" << zic_model_name(model)
          << "): varies with the zero-part profile\n";
      out << "  min     " << fmt4(sorted.front()) << "\n";
      out << "  median  " << fmt4(median) << "\n";
      out << "  max     " << fmt4(sorted.back()) << "\n";
      out << "(point values over " << n
          << " observed covariate profiles; no CI for profile-dependent IDRs)\n";
    } else if (out_opts.format == "csv") {
      out << "covariate,model,constant,zero_linpred,idr\n";
      char buf[200];
      for (size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%s,0,%.17g,%.17g\n",
                      covariate.c_str(), zic_model_name(model), linpreds[i],
                      values[i]);
        out << buf;
      }
    } else {
      json profiles = json::array();
      for (size_t i = 0; i < n; ++i) {
        profiles.push_back({{"zero_linpred", linpreds[i]}, {"idr", values[i]}});
      }
      json doc = {{"covariate", covariate},
                  {"model", zic_model_name(model)},
                  {"constant", false},
                  {"min", sorted.front()},
                  {"median", median},
                  {"max", sorted.back()},
                  {"profiles", profiles}};
      out << doc.dump(2) << "\n";
    }
  }
  write_output(out_opts, out.str());
  return all_clean(fits) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// simulate

struct SimOptions {
  std::string config_path;
  std::string generator = "mzip";
  std::vector<double> true_alpha;
  std::vector<double> true_beta;
  double true_k = 0.0;
  bool has_k = false;
  std::vector<int> sample_sizes;
  int replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> fit_kinds;
  int threads = 1;
};

// Flat key = value config, first line "zicount-config v1". Lists are comma
// separated.
void parse_sim_config(const std::string& path, SimOptions& sim) {
  std::ifstream in(path);
  if (!in) fail(ZIC_ERR_IO, "cannot open config '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("zicount-config v1", 0) != 0) {
    fail(ZIC_ERR_PARSE,
         "config must start with the schema line 'zicount-config v1'");
  }
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  auto split_list = [&](const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
  };
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(ZIC_ERR_PARSE, "config line " + std::to_string(line_no) +
                              ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "generator") {
        sim.generator = value;
      } else if (key == "true_alpha" || key == "true_beta") {
        std::vector<double> values;
        for (const auto& item : split_list(value)) values.push_back(std::stod(item));
        (key == "true_alpha" ? sim.true_alpha : sim.true_beta) = values;
      } else if (key == "true_k") {
        sim.true_k = std::stod(value);
        sim.has_k = true;
      } else if (key == "sample_sizes") {
        sim.sample_sizes.clear();
        for (const auto& item : split_list(value)) {
          sim.sample_sizes.push_back(std::stoi(item));
        }
      } else if (key == "replicates") {
        sim.replicates = std::stoi(value);
      } else if (key == "seed") {
        sim.seed = std::stoull(value);
      } else if (key == "fit_kinds") {
        sim.fit_kinds = split_list(value);
      } else if (key == "threads") {
        sim.threads = std::stoi(value);
      } else {
        fail(ZIC_ERR_PARSE, "config line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      fail(ZIC_ERR_PARSE, "config line " + std::to_string(line_no) +
                              ": cannot parse value '" + value + "'");
    }
  }
}

int run_simulate(const SimOptions& sim, const FitOptions& fit_opts,
                 const OutputOptions& out_opts) {
  zic_model generator;
  check(zic_model_parse(sim.generator.c_str(), &generator));
  const auto fit_models = parse_models(sim.fit_kinds);

  zic_sim_design design;
  zic_sim_design_init(&design);
  design.generator = generator;
  design.true_alpha = sim.true_alpha.data();
  design.n_alpha = sim.true_alpha.size();
  design.true_beta = sim.true_beta.data();
  design.n_beta = sim.true_beta.size();
  design.true_k = sim.true_k;
  design.sample_sizes = sim.sample_sizes.data();
  design.n_sample_sizes = sim.sample_sizes.size();
  design.replicates = sim.replicates;
  design.seed = sim.seed;
  design.fit_kinds = fit_models.data();
  design.n_fit_kinds = fit_models.size();
  design.threads = sim.threads;
  design.fit_options = fit_opts.options;

  zic_summary* summary = nullptr;
  check(zic_simulate(&design, &summary));
  std::unique_ptr<zic_summary, decltype(&zic_summary_free)> guard(
      summary, &zic_summary_free);

  const size_t n_cells = zic_summary_num_cells(summary);
  std::vector<zic_summary_cell> cells(n_cells);
  for (size_t i = 0; i < n_cells; ++i) {
    check(zic_summary_cell_at(summary, i, &cells[i]));
  }

  std::ostringstream out;
  if (out_opts.format == "csv") {
    // tidy layout: one row per kind x n x parameter x measure
    out << "generator,fit_kind,n,k_true,parameter,measure,value,"
           "replicates_converged\n";
    char buf[64];
    const std::pair<const char*, double zic_summary_cell::*> measures[] = {
        {"mean_estimate", &zic_summary_cell::mean_estimate},
        {"mean_model_se", &zic_summary_cell::mean_model_se},
        {"empirical_se", &zic_summary_cell::empirical_se},
        {"bias", &zic_summary_cell::bias},
        {"relative_bias", &zic_summary_cell::relative_bias},
        {"mse", &zic_summary_cell::mse},
    };
    for (const auto& cell : cells) {
      for (const auto& [measure, member] : measures) {
        out << zic_model_name(generator) << ',' << zic_model_name(cell.fit_kind)
            << ',' << cell.sample_size << ',';
        if (sim.has_k) {
          std::snprintf(buf, sizeof(buf), "%.17g", sim.true_k);
          out << buf;
        }
        out << ',' << cell.parameter << ',' << measure << ',';
        const double v = cell.*member;
        if (!std::isnan(v)) {
          std::snprintf(buf, sizeof(buf), "%.17g", v);
          out << buf;
        }
        out << ',' << cell.replicates_converged << '\n';
      }
    }
  } else if (out_opts.format == "json") {
    json doc;
    doc["generator"] = zic_model_name(generator);
    doc["seed"] = sim.seed;
    doc["replicates"] = sim.replicates;
    if (sim.has_k) doc["k_true"] = sim.true_k;
    json cell_array = json::array();
    for (const auto& cell : cells) {
      cell_array.push_back({{"fit_kind", zic_model_name(cell.fit_kind)},
                            {"n", cell.sample_size},
                            {"parameter", cell.parameter},
                            {"true_value", json_number(cell.true_value)},
                            {"mean_estimate", json_number(cell.mean_estimate)},
                            {"mean_model_se", json_number(cell.mean_model_se)},
                            {"empirical_se", json_number(cell.empirical_se)},
                            {"bias", json_number(cell.bias)},
                            {"relative_bias", json_number(cell.relative_bias)},
                            {"mse", json_number(cell.mse)},
                            {"replicates_converged", cell.replicates_converged},
                            {"replicates_failed", cell.replicates_failed}});
    }
    doc["cells"] = std::move(cell_array);
    out << doc.dump(2) << "\n";
  } else {
    out << "Generator: " << zic_model_name(generator);
    if (sim.has_k) out << "  k=" << fmt4(sim.true_k);
    out << "  seed=" << sim.seed << "  replicates=" << sim.replicates << "\n\n";

    // one block per (fit kind, n) in cell order
    size_t i = 0;
    while (i < n_cells) {
      const zic_model kind = cells[i].fit_kind;
      const int n = cells[i].sample_size;
      size_t j = i;
      while (j < n_cells && cells[j].fit_kind == kind &&
             cells[j].sample_size == n) {
        ++j;
      }
      out << "== Fit: " << zic_model_name(kind) << "  n=" << n
          << "  (converged " << cells[i].replicates_converged << "/"
          << cells[i].replicates_converged + cells[i].replicates_failed
          << ") ==\n";
      auto row = [&](const char* label, auto getter) {
        out << "  " << label;
        for (size_t pad = std::string(label).size(); pad < 14; ++pad) out << ' ';
        for (size_t c = i; c < j; ++c) {
          const std::string v = getter(cells[c]);
          out << ' ';
          for (size_t pad = v.size(); pad < 10; ++pad) out << ' ';
          out << v;
        }
        out << "\n";
      };
      row("Parameter", [](const zic_summary_cell& c) { return std::string(c.parameter); });
      row("True", [](const zic_summary_cell& c) { return fmt4(c.true_value); });
      row("Estimate", [](const zic_summary_cell& c) { return fmt4(c.mean_estimate); });
      row("Std. error", [](const zic_summary_cell& c) { return fmt4(c.mean_model_se); });
      row("SB std. err.", [](const zic_summary_cell& c) { return fmt4(c.empirical_se); });
      row("Bias", [](const zic_summary_cell& c) { return fmt4(c.bias); });
      row("Rel. bias", [](const zic_summary_cell& c) { return fmt4(c.relative_bias); });
      row("MSE", [](const zic_summary_cell& c) { return fmt4(c.mse); });
      out << "\n";
      i = j;
    }
  }
  write_output(out_opts, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zicount: count regression with zero inflation and overdispersion"};
  app.require_subcommand(1);

  DataOptions data;
  FitOptions fit_opts;
  OutputOptions out_opts;
  std::vector<std::string> models;
  std::string covariate;
  SimOptions sim;

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit models to a CSV dataset");
  add_data_options(fit_cmd, data);
  fit_cmd->add_option("--model", models, "model(s): poisson, nb, zip, zinb, mzip, mzinb")
      ->delimiter(',')
      ->required();
  add_fit_options(fit_cmd, fit_opts);
  add_output_options(fit_cmd, out_opts);

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "fit several models and rank them by AIC");
  add_data_options(compare_cmd, data);
  compare_cmd->add_option("--model", models, "models to compare (two or more)")
      ->delimiter(',')
      ->required();
  add_fit_options(compare_cmd, fit_opts);
  add_output_options(compare_cmd, out_opts);

  CLI::App* idr_cmd = app.add_subcommand(
      "idr", "incidence density ratio for a count-part covariate");
  add_data_options(idr_cmd, data);
  idr_cmd->add_option("--model", models, "model to fit")->delimiter(',')->required();
  idr_cmd->add_option("--covariate", covariate, "count-part covariate name")
      ->required();
  add_fit_options(idr_cmd, fit_opts);
  add_output_options(idr_cmd, out_opts);

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "run a Monte Carlo simulation study");
  sim_cmd->add_option("--config", sim.config_path,
                      "config file (flat key = value; see README)");
  auto* gen_opt = sim_cmd->add_option("--generator", sim.generator, "mzip or mzinb");
  auto* alpha_opt =
      sim_cmd->add_option("--true-alpha", sim.true_alpha)->delimiter(',');
  auto* beta_opt = sim_cmd->add_option("--true-beta", sim.true_beta)->delimiter(',');
  auto* k_opt = sim_cmd->add_option("--true-k", sim.true_k);
  auto* sizes_opt =
      sim_cmd->add_option("--sample-sizes", sim.sample_sizes)->delimiter(',');
  auto* reps_opt = sim_cmd->add_option("--replicates", sim.replicates);
  auto* seed_opt = sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  auto* kinds_opt =
      sim_cmd->add_option("--fit-kinds", sim.fit_kinds)->delimiter(',');
  auto* threads_opt = sim_cmd->add_option("--threads", sim.threads);
  add_fit_options(sim_cmd, fit_opts);
  add_output_options(sim_cmd, out_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) return run_fit(data, models, fit_opts, out_opts);
    if (compare_cmd->parsed()) return run_compare(data, models, fit_opts, out_opts);
    if (idr_cmd->parsed()) {
      if (models.size() != 1) {
        fail(ZIC_ERR_INVALID_ARGUMENT, "idr takes exactly one --model");
      }
      return run_idr(data, models[0], covariate, fit_opts, out_opts);
    }
    if (sim_cmd->parsed()) {
      SimOptions merged = sim;
      if (!sim.config_path.empty()) {
        SimOptions from_file;
        parse_sim_config(sim.config_path, from_file);
        merged = from_file;
        // command-line flags override the config file
        if (gen_opt->count()) merged.generator = sim.generator;
        if (alpha_opt->count()) merged.true_alpha = sim.true_alpha;
        if (beta_opt->count()) merged.true_beta = sim.true_beta;
        if (k_opt->count()) {
          merged.true_k = sim.true_k;
          merged.has_k = true;
        }
        if (sizes_opt->count()) merged.sample_sizes = sim.sample_sizes;
        if (reps_opt->count()) merged.replicates = sim.replicates;
        if (seed_opt->count()) merged.seed = sim.seed;
        if (kinds_opt->count()) merged.fit_kinds = sim.fit_kinds;
        if (threads_opt->count()) merged.threads = sim.threads;
      } else {
        merged.has_k = k_opt->count() > 0;
      }
      return run_simulate(merged, fit_opts, out_opts);
    }
  } catch (const CliError& e) {
    std::cerr << "zicount: error: " << zic_status_name(e.status) << ": "
              << e.message << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "zicount: error: internal: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
