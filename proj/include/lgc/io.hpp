#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "lgc/assignment.hpp"
#include "lgc/gaussian.hpp"
#include "lgc/pipeline.hpp"
#include "lgc/types.hpp"

namespace lgc
{

enum class PointFormat
{
  automatic,  // by file extension: .json is JSON, anything else CSV
  csv,
  json,
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
  {
    s.remove_suffix(1);
  }
  return s;
}

inline bool parse_number(std::string_view s, double& out)
{
  s = trim(s);
  if (!s.empty() && s.front() == '+')
  {
    s.remove_prefix(1);
  }
  if (s.empty())
  {
    return false;
  }
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size();
}

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;)
  {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos)
    {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IngestionError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush())
  {
    throw Error("cannot write " + path.string());
  }
}

}  // namespace detail

/// One point per line, comma separated. A first line that does not parse as
/// numbers is taken as a header. Blank lines are ignored. Error rows are
/// 1-based file line numbers.
inline PointSet parse_csv(std::string_view text)
{
  std::vector<double> coords;
  std::size_t k = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::size_t start = 0;
  while (start <= text.size())
  {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    const std::string_view line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty())
    {
      continue;
    }

    const auto cells = detail::split(line, ',');
    std::vector<double> row(cells.size());
    std::size_t bad = cells.size();
    for (std::size_t c = 0; c < cells.size(); ++c)
    {
      if (!detail::parse_number(cells[c], row[c]))
      {
        bad = c;
        break;
      }
    }
    if (first)
    {
      first = false;
      if (bad < cells.size())
      {
        continue;  // header
      }
    }
    if (bad < cells.size())
    {
      throw IngestionError("non-numeric cell at row " + std::to_string(line_no) +
                               ", column " + std::to_string(bad + 1),
                           line_no);
    }
    if (k == 0)
    {
      k = row.size();
    }
    else if (row.size() != k)
    {
      throw IngestionError("ragged row " + std::to_string(line_no), line_no);
    }
    for (const double v : row)
    {
      if (!std::isfinite(v))
      {
        throw IngestionError("non-finite coordinate in row " + std::to_string(line_no),
                             line_no);
      }
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (coords.empty())
  {
    throw IngestionError("empty file: no data rows");
  }
  return PointSet(std::move(coords), k);
}

/// A JSON array of equally sized numeric arrays.
inline PointSet parse_json(std::string_view text)
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw IngestionError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
  {
    throw IngestionError("empty file: expected a non-empty array of points");
  }
  std::vector<double> coords;
  std::size_t k = 0;
  for (std::size_t r = 0; r < doc.size(); ++r)
  {
    const auto& row = doc[r];
    if (!row.is_array())
    {
      throw IngestionError("row " + std::to_string(r + 1) + " is not an array", r + 1);
    }
    if (k == 0)
    {
      k = row.size();
    }
    if (row.size() != k || k == 0)
    {
      throw IngestionError("ragged row " + std::to_string(r + 1), r + 1);
    }
    for (std::size_t c = 0; c < row.size(); ++c)
    {
      if (!row[c].is_number())
      {
        throw IngestionError("non-numeric cell at row " + std::to_string(r + 1) +
                                 ", column " + std::to_string(c + 1),
                             r + 1);
      }
      coords.push_back(row[c].get<double>());
    }
  }
  return PointSet(std::move(coords), k);
}

inline PointSet read_points(const std::filesystem::path& path,
                            PointFormat format = PointFormat::automatic)
{
  if (format == PointFormat::automatic)
  {
    format = path.extension() == ".json" ? PointFormat::json : PointFormat::csv;
  }
  const std::string text = detail::read_file(path);
  return format == PointFormat::json ? parse_json(text) : parse_csv(text);
}

/// CSV with one point per line, 17 significant digits, no header.
inline void write_points_csv(std::ostream& out, const PointSet& points)
{
  out << std::setprecision(17);
  for (PointId i = 0; i < points.size(); ++i)
  {
    const auto p = points[i];
    for (std::size_t a = 0; a < p.size(); ++a)
    {
      out << (a ? "," : "") << p[a];
    }
    out << '\n';
  }
}

/// "point_id,cluster_id,p_value"; dropped points get cluster -1. The p-value
/// is the winning density.
inline void write_labels(std::ostream& out, const Labeling& labeling)
{
  out << "point_id,cluster_id,p_value\n" << std::setprecision(17);
  for (PointId i = 0; i < labeling.size(); ++i)
  {
    out << i << ',' << labeling.label(i) << ',' << labeling.winning_density(i) << '\n';
  }
}

inline void write_labels(const std::filesystem::path& path, const Labeling& labeling)
{
  std::ostringstream buf;
  write_labels(buf, labeling);
  detail::write_file(path, buf.str());
}

/// Serialized fit: everything needed to rebuild the models and re-assign.
struct ModelArtifact
{
  static constexpr int kSchemaVersion = 1;

  struct Cluster
  {
    std::size_t id = 0;
    std::vector<double> mu;
    std::vector<double> sigma;  // row-major K x K
    std::size_t count = 0;
    std::size_t mu_iterations = 0;
    std::size_t sigma_iterations = 0;
    bool mu_converged = false;
    bool sigma_converged = false;
  };

  int schema_version = kSchemaVersion;
  std::size_t k = 0;
  DensityForm density_form = DensityForm::standard;
  double ridge = 1e-8;
  std::vector<Cluster> clusters;
  nlohmann::json config;  // echo of the run parameters
  nlohmann::json summary; // seed and drop counts

  std::vector<GaussianModel> models() const
  {
    std::vector<GaussianModel> out;
    for (const auto& c : clusters)
    {
      const auto kk = Eigen::Index(k);
      const Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(c.mu.data(), kk);
      const Eigen::MatrixXd sigma =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>(c.sigma.data(), kk, kk);
      out.push_back(make_model(mu, sigma, ridge));
    }
    return out;
  }
};

inline nlohmann::json config_to_json(const ClusterConfig& config)
{
  nlohmann::json j{
      {"d_s", config.d_s},
      {"min_count", config.min_count},
      {"epsilon_centroid", config.epsilon_centroid},
      {"epsilon_sigma", config.epsilon_sigma},
      {"max_iter_centroid", config.max_iter_centroid},
      {"max_iter_sigma", config.max_iter_sigma},
      {"ridge", config.ridge},
      {"density_form", to_string(config.density_form)},
  };
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j["l_p"] = opt(config.filters.l_p);
  j["l_pct"] = opt(config.filters.l_pct);
  j["l_s"] = opt(config.filters.l_s);
  return j;
}

inline ModelArtifact make_artifact(const ClusterResult& result, const ClusterConfig& config)
{
  ModelArtifact art;
  art.k = result.models.empty() ? 0 : result.models.front().dim();
  art.density_form = config.density_form;
  art.ridge = config.ridge;
  for (std::size_t c = 0; c < result.models.size(); ++c)
  {
    const auto& m = result.models[c];
    const auto& s = result.report.per_cluster[c];
    ModelArtifact::Cluster cl;
    cl.id = c;
    cl.mu.assign(m.mu.data(), m.mu.data() + m.mu.size());
    for (Eigen::Index r = 0; r < m.sigma.rows(); ++r)
    {
      for (Eigen::Index q = 0; q < m.sigma.cols(); ++q)
      {
        cl.sigma.push_back(m.sigma(r, q));
      }
    }
    cl.count = s.count;
    cl.mu_iterations = s.mu_iterations;
    cl.sigma_iterations = s.sigma_iterations;
    cl.mu_converged = s.mu_converged;
    cl.sigma_converged = s.sigma_converged;
    art.clusters.push_back(std::move(cl));
  }
  art.config = config_to_json(config);
  const auto& r = result.report;
  art.summary = {{"seeds", r.seeds},
                 {"seeds_after_prune", r.seeds_after_prune},
                 {"clusters", r.clusters},
                 {"dropped_p", r.dropped_p},
                 {"dropped_pct", r.dropped_pct},
                 {"dropped_s", r.dropped_s}};
  return art;
}

inline nlohmann::json to_json(const ModelArtifact& art)
{
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : art.clusters)
  {
    clusters.push_back({{"id", c.id},
                        {"mu", c.mu},
                        {"sigma", c.sigma},
                        {"count", c.count},
                        {"mu_iterations", c.mu_iterations},
                        {"sigma_iterations", c.sigma_iterations},
                        {"mu_converged", c.mu_converged},
                        {"sigma_converged", c.sigma_converged}});
  }
  return {{"schema_version", art.schema_version},
          {"k", art.k},
          {"density_form", to_string(art.density_form)},
          {"ridge", art.ridge},
          {"clusters", clusters},
          {"config", art.config},
          {"summary", art.summary}};
}

inline ModelArtifact artifact_from_json(const nlohmann::json& j)
{
  try
  {
    ModelArtifact art;
    art.schema_version = j.at("schema_version").get<int>();
    if (art.schema_version != ModelArtifact::kSchemaVersion)
    {
      throw IngestionError("unsupported model schema version " +
                           std::to_string(art.schema_version));
    }
    art.k = j.at("k").get<std::size_t>();
    art.density_form = parse_density_form(j.at("density_form").get<std::string>());
    art.ridge = j.at("ridge").get<double>();
    for (const auto& c : j.at("clusters"))
    {
      ModelArtifact::Cluster cl;
      cl.id = c.at("id").get<std::size_t>();
      cl.mu = c.at("mu").get<std::vector<double>>();
      cl.sigma = c.at("sigma").get<std::vector<double>>();
      cl.count = c.at("count").get<std::size_t>();
      cl.mu_iterations = c.at("mu_iterations").get<std::size_t>();
      cl.sigma_iterations = c.at("sigma_iterations").get<std::size_t>();
      cl.mu_converged = c.at("mu_converged").get<bool>();
      cl.sigma_converged = c.at("sigma_converged").get<bool>();
      if (cl.mu.size() != art.k || cl.sigma.size() != art.k * art.k)
      {
        throw IngestionError("cluster " + std::to_string(cl.id) +
                             " does not match dimension " + std::to_string(art.k));
      }
      art.clusters.push_back(std::move(cl));
    }
    art.config = j.value("config", nlohmann::json::object());
    art.summary = j.value("summary", nlohmann::json::object());
    return art;
  }
  catch (const nlohmann::json::exception& e)
  {
    throw IngestionError(std::string("malformed model artifact: ") + e.what());
  }
}

inline void save_model(const std::filesystem::path& path, const ModelArtifact& art)
{
  detail::write_file(path, to_json(art).dump(2) + "\n");
}

inline ModelArtifact load_model(const std::filesystem::path& path)
{
  const std::string text = detail::read_file(path);
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw IngestionError(std::string("invalid JSON: ") + e.what());
  }
  return artifact_from_json(j);
}

inline nlohmann::json report_to_json(const RunReport& r)
{
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& t : r.timings)
  {
    timings.push_back({{"step", t.step}, {"ms", t.ms}});
  }
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : r.per_cluster)
  {
    clusters.push_back({{"count", c.count},
                        {"mu_iterations", c.mu_iterations},
                        {"sigma_iterations", c.sigma_iterations},
                        {"mu_converged", c.mu_converged},
                        {"sigma_converged", c.sigma_converged}});
  }
  return {{"timings", timings},
          {"total_ms", r.total_ms()},
          {"seeds", r.seeds},
          {"seeds_after_prune", r.seeds_after_prune},
          {"clusters", r.clusters},
          {"per_cluster", clusters},
          {"dropped_p", r.dropped_p},
          {"dropped_pct", r.dropped_pct},
          {"dropped_s", r.dropped_s}};
}

}  // namespace lgc
