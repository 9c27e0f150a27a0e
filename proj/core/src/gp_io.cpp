#include <json.hpp>

#include "gp_json.hpp"
#include "mobons/gp.hpp"

namespace mobons {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json gp_to_json(const PosteriorGP& gp) {
  nlohmann::json j;
  const auto& k = gp.kernel();
  j["kernel"] = {{"family", to_string(k.family)},
                 {"lengthscales", to_std(k.lengthscales)},
                 {"signal_variance", k.signal_variance},
                 {"jitter", k.jitter}};
  j["mean"] = gp.constant_mean();
  const auto& s = gp.standardization();
  j["standardization"] = {{"input_lower", to_std(s.input_lower)},
                          {"input_scale", to_std(s.input_scale)},
                          {"output_mean", s.output_mean},
                          {"output_scale", s.output_scale}};
  auto box = nlohmann::json::array();
  for (const auto& b : gp.input_box()) box.push_back({b.lower, b.upper});
  j["input_box"] = box;
  j["dataset"] = {{"input_dim", gp.dataset().input_dim()},
                  {"inputs", gp.dataset().inputs()},
                  {"outputs", gp.dataset().outputs()}};
  return j;
}

PosteriorGP gp_from_json(const nlohmann::json& j) {
  KernelSpec k;
  k.family = kernel_family_from_string(j.at("kernel").at("family").get<std::string>());
  k.lengthscales = to_eigen(j.at("kernel").at("lengthscales").get<std::vector<double>>());
  k.signal_variance = j.at("kernel").at("signal_variance").get<double>();
  k.jitter = j.at("kernel").at("jitter").get<double>();

  Standardization s;
  const auto& js = j.at("standardization");
  s.input_lower = to_eigen(js.at("input_lower").get<std::vector<double>>());
  s.input_scale = to_eigen(js.at("input_scale").get<std::vector<double>>());
  s.output_mean = js.at("output_mean").get<double>();
  s.output_scale = js.at("output_scale").get<double>();

  std::vector<Interval> box;
  for (const auto& b : j.at("input_box")) box.push_back({b.at(0).get<double>(), b.at(1).get<double>()});

  NodeDataset data(j.at("dataset").at("input_dim").get<std::size_t>());
  const auto inputs = j.at("dataset").at("inputs").get<std::vector<std::vector<double>>>();
  const auto outputs = j.at("dataset").at("outputs").get<std::vector<double>>();
  if (inputs.size() != outputs.size()) throw std::invalid_argument("checkpoint dataset is inconsistent");
  for (std::size_t i = 0; i < inputs.size(); ++i) data.add(inputs[i], outputs[i]);

  return PosteriorGP(std::move(data), std::move(box), std::move(s), std::move(k), j.at("mean").get<double>());
}

std::string serialize_gp(const PosteriorGP& gp) { return gp_to_json(gp).dump(); }

PosteriorGP deserialize_gp(const std::string& text) { return gp_from_json(nlohmann::json::parse(text)); }

}  // namespace mobons
