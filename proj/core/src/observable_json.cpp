#include <json.hpp>

#include "bclab/errors.hpp"
#include "bclab/observable.hpp"

namespace bclab {

namespace {

using nlohmann::json;

json component_to_json(const Observable::Component& c) {
  json j;
  j["coeff"] = c.coeff;
  if (const auto* p = std::get_if<Observable::PolynomialPart>(&c.part)) {
    j["type"] = "polynomial";
    j["params"]["coeffs"] = p->coeffs;
    if (p->clamp) j["params"]["clamp"] = {p->clamp->lo, p->clamp->hi};
  } else if (const auto* bp = std::get_if<Observable::BumpPart>(&c.part)) {
    j["type"] = "plateau-bump";
    j["params"]["rho"] = bp->rho;
    j["params"]["center"] = bp->center;
    j["params"]["radius"] = bp->radius;
  } else if (const auto* gp = std::get_if<Observable::GbmPart>(&c.part)) {
    j["type"] = "gbm-instance";
    j["params"]["N"] = gp->inst.N;
    j["params"]["theta1"] = gp->inst.theta1;
    j["params"]["theta2"] = gp->inst.theta2;
    j["params"]["rho"] = gp->inst.rho;
    j["params"]["seed"] = gp->inst.seed;
    json signs = json::array();
    for (auto s : gp->inst.signs) signs.push_back(static_cast<int>(s));
    j["signs"] = std::move(signs);
  } else if (const auto* lp = std::get_if<Observable::LayerPart>(&c.part)) {
    j["type"] = "dimension-drop-layer";
    j["params"]["ramp"] = lp->ramp;
    j["params"]["index"] = lp->index;
    j["params"]["level"] = lp->level;
    json ivs = json::array();
    for (const auto& iv : lp->intervals) ivs.push_back({iv.lo, iv.hi});
    j["params"]["intervals"] = std::move(ivs);
  } else {
    const auto& wp = std::get<Observable::WeierstrassPart>(c.part);
    j["type"] = "weierstrass-partial-sum";
    j["params"]["a"] = wp.a;
    j["params"]["b"] = wp.b;
    j["params"]["terms"] = wp.terms;
  }
  return j;
}

Observable::Component component_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  const double coeff = j.value("coeff", 1.0);
  const json& params = j.at("params");
  Observable src;
  if (type == "polynomial") {
    std::optional<Interval> clamp;
    if (params.contains("clamp")) {
      auto cl = params.at("clamp");
      clamp = Interval{cl.at(0).get<double>(), cl.at(1).get<double>()};
    }
    src = Observable::polynomial(params.at("coeffs").get<std::vector<double>>(), clamp);
  } else if (type == "plateau-bump") {
    src = Observable::bump(params.at("rho").get<double>(), params.value("center", 1.0),
                           params.value("radius", 1.0));
  } else if (type == "gbm-instance") {
    std::vector<std::int8_t> signs;
    for (const auto& s : j.at("signs")) signs.push_back(static_cast<std::int8_t>(s.get<int>()));
    src = Observable::gbm(make_gbm_from_signs(
        params.at("N").get<int>(), params.at("theta1").get<double>(),
        params.at("theta2").get<double>(), params.at("rho").get<double>(), std::move(signs),
        params.value("seed", std::uint64_t{0})));
  } else if (type == "dimension-drop-layer") {
    std::vector<Interval> ivs;
    for (const auto& iv : params.at("intervals"))
      ivs.push_back(Interval{iv.at(0).get<double>(), iv.at(1).get<double>()});
    src = Observable::layer(std::move(ivs), params.at("ramp").get<double>(),
                            params.value("index", 0), params.value("level", 0));
  } else if (type == "weierstrass-partial-sum") {
    src = weierstrass(params.at("a").get<double>(), params.at("b").get<double>(),
                      params.at("terms").get<int>());
  } else {
    throw argument_error("unknown observable component type: " + type);
  }
  Observable::Component c = src.components().front();
  c.coeff = coeff;
  return c;
}

}  // namespace

std::string observable_to_json(const Observable& phi) {
  json j;
  j["components"] = json::array();
  for (const auto& c : phi.components()) j["components"].push_back(component_to_json(c));
  return j.dump();
}

Observable observable_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  std::vector<Observable::Component> cs;
  for (const auto& cj : j.at("components")) cs.push_back(component_from_json(cj));
  return Observable(std::move(cs));
}

}  // namespace bclab
