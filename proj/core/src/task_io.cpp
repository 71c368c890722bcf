#include <fstream>
#include <sstream>

#include <json.hpp>

#include "safesched/errors.hpp"
#include "safesched/task_model.hpp"

namespace safesched {

using nlohmann::json;

namespace {

Tick parse_tick_key(const std::string& key) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("distribution key '" + key + "' is not a natural number");
  return static_cast<Tick>(std::stoul(key));
}

Rational parse_probability(const json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_number_float()) return parse_rational(value.dump());
  throw ParseError("probability must be a string or number");
}

FiniteDistribution distribution_from(const json& obj, const std::string& what) {
  if (!obj.is_object() || obj.empty()) throw ParseError(what + " must be a non-empty object");
  std::map<Tick, Rational> mass;
  for (const auto& [key, value] : obj.items()) mass[parse_tick_key(key)] = parse_probability(value);
  try {
    return FiniteDistribution(mass);
  } catch (const InvalidDistribution& e) {
    throw ParseError(what + ": " + e.what());
  }
}

json distribution_json(const FiniteDistribution& d) {
  json obj = json::object();
  for (const auto& [value, p] : d.entries()) obj[std::to_string(value)] = to_decimal_string(p);
  return obj;
}

}  // namespace

FiniteDistribution parse_distribution(const std::string& json_text) {
  try {
    return distribution_from(json::parse(json_text), "distribution");
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string distribution_to_json(const FiniteDistribution& d) { return distribution_json(d).dump(); }

TaskSystem parse_task_system(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("task system JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tasks") || !doc["tasks"].is_array())
    throw ParseError("task system must be an object with a \"tasks\" array");
  std::vector<Task> tasks;
  std::size_t index = 0;
  for (const auto& t : doc["tasks"]) {
    ++index;
    const std::string who = "task " + std::to_string(index);
    try {
      Task task{distribution_from(t.at("computation"), who + " computation"),
                t.at("deadline").get<Tick>(), distribution_from(t.at("arrival"), who + " arrival")};
      const std::string kind = t.at("kind").get<std::string>();
      if (kind == "hard")
        task.kind = TaskKind::Hard;
      else if (kind == "soft")
        task.kind = TaskKind::Soft;
      else
        throw ParseError(who + ": kind must be \"hard\" or \"soft\"");
      if (t.contains("cost")) task.miss_cost = parse_probability(t["cost"]);
      tasks.push_back(std::move(task));
    } catch (const json::exception& e) {
      throw ParseError(who + ": " + e.what());
    }
  }
  return TaskSystem(std::move(tasks));
}

TaskSystem load_task_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open task system file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_task_system(buffer.str());
}

std::string task_system_to_json(const TaskSystem& sys, int indent) {
  json tasks = json::array();
  for (const Task& t : sys.tasks()) {
    json obj;
    obj["kind"] = t.is_hard() ? "hard" : "soft";
    if (t.is_soft()) obj["cost"] = to_decimal_string(t.miss_cost);
    obj["computation"] = distribution_json(t.computation);
    obj["deadline"] = t.deadline;
    obj["arrival"] = distribution_json(t.arrival);
    tasks.push_back(std::move(obj));
  }
  json doc;
  doc["tasks"] = std::move(tasks);
  return doc.dump(indent);
}

void save_task_system(const TaskSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write task system file '" + path + "'");
  out << task_system_to_json(sys) << '\n';
}

}  // namespace safesched
