#include "polling/model_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "polling/errors.hpp"

namespace polling {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(path + ": unknown key '" + key + "'");
  }
}

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + ": missing key '" + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key + ": expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "/" + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw SchemaError(path + "/" + key + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
}

}  // namespace

Distribution distribution_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"family", "params"}, path);
  const json& fam = member(j, "family", path);
  if (!fam.is_string()) throw SchemaError(path + "/family: expected a string");
  const std::string ppath = path + "/params";
  const json& p = member(j, "params", path);
  require_object(p, ppath);

  try {
    switch (family_from_string(fam.get<std::string>())) {
      case Family::deterministic:
        reject_unknown(p, {"value"}, ppath);
        return Distribution::deterministic(number(p, "value", ppath));
      case Family::exponential:
        reject_unknown(p, {"mean"}, ppath);
        return Distribution::exponential(number(p, "mean", ppath));
      case Family::erlang: {
        reject_unknown(p, {"phases", "mean"}, ppath);
        const json& k = member(p, "phases", ppath);
        if (!k.is_number_integer()) throw SchemaError(ppath + "/phases: expected an integer");
        return Distribution::erlang(k.get<int>(), number(p, "mean", ppath));
      }
      case Family::hyperexponential:
        reject_unknown(p, {"probs", "rates"}, ppath);
        return Distribution::hyperexponential(numbers(p, "probs", ppath), numbers(p, "rates", ppath));
      case Family::uniform:
        reject_unknown(p, {"low", "high"}, ppath);
        return Distribution::uniform(number(p, "low", ppath), number(p, "high", ppath));
    }
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    if (msg.rfind("unknown distribution family", 0) == 0) throw SchemaError(path + "/family: " + msg);
    throw;
  } catch (const NonpositiveParameter& e) {
    throw SchemaError(ppath + ": " + e.what());
  }
  throw SchemaError(path + ": unreachable");
}

json to_json(const Distribution& d) {
  json p;
  const auto& v = d.params();
  switch (d.family()) {
    case Family::deterministic: p = {{"value", v[0]}}; break;
    case Family::exponential: p = {{"mean", v[0]}}; break;
    case Family::erlang: p = {{"phases", static_cast<int>(v[0])}, {"mean", v[1]}}; break;
    case Family::hyperexponential: p = {{"probs", d.weights()}, {"rates", v}}; break;
    case Family::uniform: p = {{"low", v[0]}, {"high", v[1]}}; break;
  }
  return {{"family", std::string(to_string(d.family()))}, {"params", p}};
}

PollingModel model_from_json(const json& j) {
  require_object(j, "");
  reject_unknown(j, {"queues", "switchovers"}, "");
  const json& queues = member(j, "queues", "");
  const json& switchovers = member(j, "switchovers", "");
  if (!queues.is_array() || queues.empty()) throw SchemaError("/queues: expected a non-empty array");
  if (!switchovers.is_array()) throw SchemaError("/switchovers: expected an array");

  PollingModel m;
  for (std::size_t i = 0; i < queues.size(); ++i) {
    const std::string path = "/queues/" + std::to_string(i);
    const json& q = queues[i];
    require_object(q, path);
    reject_unknown(q, {"lambda_high", "lambda_low", "service_high", "service_low", "discipline"}, path);
    QueueSpec spec;
    spec.lambda_high = number(q, "lambda_high", path);
    spec.lambda_low = number(q, "lambda_low", path);
    const json& disc = member(q, "discipline", path);
    if (!disc.is_string()) throw SchemaError(path + "/discipline: expected a string");
    try {
      spec.discipline = discipline_from_string(disc.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(path + "/discipline: " + e.what());
    }
    if (q.contains("service_high")) {
      spec.service_high = distribution_from_json(q["service_high"], path + "/service_high");
    } else if (spec.lambda_high > 0.0) {
      throw SchemaError(path + ": missing key 'service_high'");
    }
    if (q.contains("service_low")) {
      spec.service_low = distribution_from_json(q["service_low"], path + "/service_low");
    } else if (spec.lambda_low > 0.0) {
      throw SchemaError(path + ": missing key 'service_low'");
    }
    m.queues.push_back(std::move(spec));
  }
  for (std::size_t i = 0; i < switchovers.size(); ++i)
    m.switchovers.push_back(distribution_from_json(switchovers[i], "/switchovers/" + std::to_string(i)));
  if (m.switchovers.size() != m.queues.size())
    throw SchemaError("/switchovers: expected one entry per queue");
  return m;
}

json to_json(const PollingModel& m) {
  json queues = json::array();
  for (const QueueSpec& q : m.queues) {
    json jq = {{"lambda_high", q.lambda_high}, {"lambda_low", q.lambda_low},
               {"discipline", std::string(to_string(q.discipline))}};
    if (q.lambda_high > 0.0) jq["service_high"] = to_json(q.service_high);
    if (q.lambda_low > 0.0) jq["service_low"] = to_json(q.service_low);
    queues.push_back(std::move(jq));
  }
  json sw = json::array();
  for (const Distribution& s : m.switchovers) sw.push_back(to_json(s));
  return {{"queues", queues}, {"switchovers", sw}};
}

PollingModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return model_from_json(j);
}

PollingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace polling
