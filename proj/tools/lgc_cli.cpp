// Command-line front end: fit, gen, bench.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgc/lgc.hpp"
#include "lgc/testkit/blobs.hpp"
#include "lgc/testkit/scenarios.hpp"

namespace
{

enum Exit : int
{
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNoClusters = 3,
};

struct FitArgs
{
  std::string input;
  double ds = 0.0;
  std::size_t l = 0;
  double eps = 0.01;
  std::optional<double> lp;
  std::optional<double> lpct;
  std::optional<double> ls;
  std::string density_form = "standard";
  std::size_t threads = 0;
  std::string model_out;
  std::string labels_out;
  std::string report_out;
};

struct GenArgs
{
  std::uint64_t seed = 0;
  std::size_t k = 2;
  std::string clusters;
  std::string out;
  std::string truth_out;
};

struct BenchArgs
{
  std::vector<std::size_t> sizes{25'000, 50'000, 100'000, 200'000};
  std::size_t k = 2;
  std::size_t clusters = 5;
  double ds = 5.0;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t repeats = 3;
  std::string out;
};

std::string sibling(const std::string& input, const std::string& suffix)
{
  std::filesystem::path p(input);
  p.replace_extension();
  return p.string() + suffix;
}

int run_fit(const FitArgs& args)
{
  const lgc::PointSet points = lgc::read_points(args.input);

  lgc::ClusterConfig config;
  config.d_s = args.ds;
  config.min_count = args.l;
  config.epsilon_centroid = args.eps;
  config.epsilon_sigma = args.eps;
  config.density_form = lgc::parse_density_form(args.density_form);
  config.filters = {args.lp, args.lpct, args.ls};
  config.thread_count = args.threads;

  const auto result = lgc::run(points, config);

  const std::string model_out =
      args.model_out.empty() ? sibling(args.input, ".model.json") : args.model_out;
  const std::string labels_out =
      args.labels_out.empty() ? sibling(args.input, ".labels.csv") : args.labels_out;
  lgc::save_model(model_out, lgc::make_artifact(result, config));
  lgc::write_labels(labels_out, result.labeling);
  if (!args.report_out.empty())
  {
    std::ofstream(args.report_out) << lgc::report_to_json(result.report).dump(2) << '\n';
  }

  const auto& r = result.report;
  std::cout << "points " << points.size() << ", dim " << points.dim() << '\n'
            << "seeds " << r.seeds << ", after prune " << r.seeds_after_prune
            << ", clusters " << r.clusters << '\n'
            << "dropped " << result.labeling.dropped_count() << '\n'
            << std::fixed << std::setprecision(1) << "time " << r.total_ms() << " ms\n"
            << "model " << model_out << "\nlabels " << labels_out << '\n';
  return kOk;
}

// "COUNT:M0,M1,...[:STD]" entries separated by ';'.
std::vector<lgc::testkit::BlobSpec> parse_clusters(const std::string& text, std::size_t k)
{
  std::vector<lgc::testkit::BlobSpec> specs;
  std::stringstream all(text);
  std::string entry;
  while (std::getline(all, entry, ';'))
  {
    if (entry.empty())
    {
      continue;
    }
    std::vector<std::string> parts;
    std::stringstream es(entry);
    std::string part;
    while (std::getline(es, part, ':'))
    {
      parts.push_back(part);
    }
    if (parts.size() < 2 || parts.size() > 3)
    {
      throw lgc::ConfigError("bad cluster spec '" + entry + "', want COUNT:MEAN[:STD]");
    }
    std::vector<double> mean;
    std::stringstream ms(parts[1]);
    while (std::getline(ms, part, ','))
    {
      mean.push_back(std::stod(part));
    }
    if (mean.size() != k)
    {
      throw lgc::ConfigError("cluster mean '" + parts[1] + "' does not have " +
                             std::to_string(k) + " values");
    }
    const double std_dev = parts.size() == 3 ? std::stod(parts[2]) : 1.0;
    if (!(std_dev > 0.0))
    {
      throw lgc::ConfigError("cluster std must be positive");
    }
    specs.push_back(lgc::testkit::BlobSpec::isotropic(
        std::move(mean), std_dev, std::stoul(parts[0])));
  }
  if (specs.empty())
  {
    throw lgc::ConfigError("no clusters given");
  }
  return specs;
}

int run_gen(const GenArgs& args)
{
  std::vector<lgc::testkit::BlobSpec> specs;
  try
  {
    specs = parse_clusters(args.clusters, args.k);
  }
  catch (const std::logic_error& e)  // stod / stoul
  {
    throw lgc::ConfigError("bad cluster spec: " + std::string(e.what()));
  }
  const auto blobs = lgc::testkit::gen_blobs(args.seed, specs);
  std::ostringstream buf;
  lgc::write_points_csv(buf, blobs.points);
  lgc::detail::write_file(args.out, buf.str());
  if (!args.truth_out.empty())
  {
    std::ostringstream truth;
    truth << "point_id,cluster_id\n";
    for (std::size_t i = 0; i < blobs.labels.size(); ++i)
    {
      truth << i << ',' << blobs.labels[i] << '\n';
    }
    lgc::detail::write_file(args.truth_out, truth.str());
  }
  return kOk;
}

int run_bench(const BenchArgs& args)
{
  static const char* kSteps[] = {"index", "seed", "converge", "fit", "assign", "filter"};
  std::ostringstream out;
  out << "n,index_ms,seed_ms,converge_ms,fit_ms,assign_ms,filter_ms,total_ms,clusters\n"
      << std::fixed << std::setprecision(3);
  for (const std::size_t n : args.sizes)
  {
    const auto blobs = lgc::testkit::gen_blobs(
        args.seed, lgc::testkit::zigzag_specs(args.k, args.clusters, n));
    lgc::ClusterConfig config;
    config.d_s = args.ds;
    config.thread_count = args.threads;
    std::vector<lgc::RunReport> runs;
    for (std::size_t r = 0; r < std::max<std::size_t>(args.repeats, 1); ++r)
    {
      runs.push_back(lgc::run(blobs.points, config).report);
    }
    std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) {
      return a.total_ms() < b.total_ms();
    });
    const auto& median = runs[runs.size() / 2];
    out << n;
    for (const char* step : kSteps)
    {
      out << ',' << median.step_ms(step);
    }
    out << ',' << median.total_ms() << ',' << median.clusters << '\n';
  }
  if (args.out.empty())
  {
    std::cout << out.str();
  }
  else
  {
    lgc::detail::write_file(args.out, out.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Local-Gaussian clustering"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Cluster a point file");
  fit_cmd->add_option("--input", fit.input, "CSV or JSON point file")->required();
  fit_cmd->add_option("--ds", fit.ds, "Separation distance d_s")->required();
  fit_cmd->add_option("--l", fit.l, "Minimum local count for a seed");
  fit_cmd->add_option("--eps", fit.eps, "Convergence threshold for both loops");
  fit_cmd->add_option("--lp", fit.lp, "Drop points with winning density below this");
  fit_cmd->add_option("--lpct", fit.lpct, "Drop this fraction of each cluster");
  fit_cmd->add_option("--ls", fit.ls, "Drop points with separation ratio below this");
  fit_cmd->add_option("--density-form", fit.density_form, "standard | paper_literal")
      ->check(CLI::IsMember({"standard", "paper_literal"}));
  fit_cmd->add_option("--threads", fit.threads, "Worker threads, 0 = auto");
  fit_cmd->add_option("--model-out", fit.model_out, "Model JSON path");
  fit_cmd->add_option("--labels-out", fit.labels_out, "Labels CSV path");
  fit_cmd->add_option("--report-out", fit.report_out, "Run report JSON path");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate Gaussian blobs");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--k", gen.k, "Dimension")->required();
  gen_cmd->add_option("--clusters", gen.clusters,
                      "COUNT:M0,M1,...[:STD] entries separated by ';'")
      ->required();
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();
  gen_cmd->add_option("--truth-out", gen.truth_out, "Ground-truth labels CSV");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Timing per step against N");
  bench_cmd->add_option("--sizes", bench.sizes, "Point counts")->delimiter(',');
  bench_cmd->add_option("--k", bench.k, "Dimension");
  bench_cmd->add_option("--clusters", bench.clusters, "Number of blobs");
  bench_cmd->add_option("--ds", bench.ds, "Separation distance d_s");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--repeats", bench.repeats, "Runs per size (median kept)");
  bench_cmd->add_option("--out", bench.out, "Output CSV, stdout if omitted");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try
  {
    if (*fit_cmd)
    {
      return run_fit(fit);
    }
    if (*gen_cmd)
    {
      return run_gen(gen);
    }
    return run_bench(bench);
  }
  catch (const lgc::NoClustersError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kNoClusters;
  }
  catch (const lgc::ConfigError& e)
  {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }
  catch (const lgc::Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
}
