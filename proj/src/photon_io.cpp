#include <charconv>
#include <stdexcept>

#include "airy/io.hpp"

namespace airy::io {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string photons_to_csv(const PhotonBatch &batch) {
  std::string out = "x,y\n";
  out.reserve(out.size() + batch.points.size() * 48);
  char buf[64];
  for (const Vec2 &p : batch.points) {
    char *end = std::to_chars(buf, buf + 32, p.x, std::chars_format::general, 17).ptr;
    *end++ = ',';
    end = std::to_chars(end, buf + sizeof buf - 1, p.y, std::chars_format::general, 17).ptr;
    *end++ = '\n';
    out.append(buf, end);
  }
  return out;
}

std::vector<Vec2> photons_from_csv(std::string_view text) {
  std::vector<Vec2> points;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto parse = [&](const char *first, const char *last, double &v) {
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      throw std::runtime_error("photons csv: bad number on line " + std::to_string(line_no));
    }
  };
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "x,y") throw std::runtime_error("photons csv: expected header x,y");
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) throw std::runtime_error("photons csv: missing comma on line " + std::to_string(line_no));
    Vec2 p;
    parse(line.data(), line.data() + comma, p.x);
    parse(line.data() + comma + 1, line.data() + line.size(), p.y);
    points.push_back(p);
  }
  return points;
}

nlohmann::json photon_sidecar(const PhotonBatch &batch) {
  return {{"sigma", batch.sigma},
          {"n", batch.points.size()},
          {"seed", batch.seed},
          {"granularity", batch.granularity},
          {"poisson", batch.poisson},
          {"requested", batch.requested}};
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv_path) {
  auto p = csv_path;
  p += ".json";
  return p;
}

void save_photons(const std::filesystem::path &path, const PhotonBatch &batch) {
  write_file_atomic(path, photons_to_csv(batch));
  write_file_atomic(sidecar_path(path), dump_json(photon_sidecar(batch)));
}

PhotonBatch load_photons(const std::filesystem::path &path) {
  PhotonBatch batch;
  batch.points = photons_from_csv(read_file(path));
  batch.requested = batch.points.size();
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const auto j = nlohmann::json::parse(read_file(side));
    batch.sigma = j.value("sigma", 0.0);
    batch.seed = j.value("seed", std::uint64_t{0});
    batch.granularity = j.value("granularity", 0.0);
    batch.poisson = j.value("poisson", false);
    batch.requested = j.value("requested", batch.requested);
  }
  return batch;
}

nlohmann::json model_to_json(const SuperpositionModel &model, std::string_view label) {
  nlohmann::json centers = nlohmann::json::array();
  for (Vec2 c : model.centers()) centers.push_back({c.x, c.y});
  nlohmann::json j = {{"sigma", model.sigma().value()}, {"weights", model.weights()}, {"centers", centers}};
  if (!label.empty()) j["label"] = label;
  return j;
}

SuperpositionModel model_from_json(const nlohmann::json &j) {
  const double sigma = j.at("sigma").get<double>();
  auto weights = j.at("weights").get<std::vector<double>>();
  std::vector<Vec2> centers;
  for (const auto &c : j.at("centers")) {
    if (!c.is_array() || c.size() != 2) throw std::invalid_argument("model centers must be [x, y] pairs");
    centers.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return SuperpositionModel(std::move(weights), std::move(centers), SpreadParameter(sigma));
}

std::string dump_json(const nlohmann::json &j) { return j.dump(2) + "\n"; }

}  // namespace airy::io
