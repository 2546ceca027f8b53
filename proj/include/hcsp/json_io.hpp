#pragma once

#include <json.hpp>

#include "hcsp/parser.hpp"
#include "hcsp/pretty.hpp"
#include "hcsp/trace.hpp"

namespace hcsp {

using Json = nlohmann::json;

inline Json state_to_json(const State& s) {
  Json j = Json::object();
  for (auto& [k, v] : s) j[k] = v;
  return j;
}

inline State state_from_json(const Json& j) {
  State s;
  for (auto& [k, v] : j.items()) s[k] = v.get<double>();
  return s;
}

inline Json traj_to_json(const TrajPtr& t) {
  Json j;
  switch (t->kind) {
    case Trajectory::Kind::Const:
      j["kind"] = "const";
      j["state"] = state_to_json(t->init);
      break;
    case Trajectory::Kind::OdeSol: {
      j["kind"] = "ode";
      Json f = Json::object();
      for (auto& [x, e] : t->field) f[x] = pretty(e);
      j["field"] = f;
      j["init"] = state_to_json(t->init);
      break;
    }
    case Trajectory::Kind::Shift:
      j["kind"] = "shift";
      j["base"] = traj_to_json(t->base);
      j["offset"] = t->shift;
      break;
    case Trajectory::Kind::Merge:
      j["kind"] = "merge";
      j["left"] = traj_to_json(t->base);
      j["right"] = traj_to_json(t->other);
      break;
    case Trajectory::Kind::Glued:
      j["kind"] = "glued";
      j["first"] = traj_to_json(t->base);
      j["split"] = t->shift;
      j["second"] = traj_to_json(t->other);
      break;
  }
  return j;
}

inline TrajPtr traj_from_json(const Json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "const") return traj_const(state_from_json(j.at("state")));
  if (k == "ode") {
    OdeField f;
    for (auto& [x, e] : j.at("field").items()) f.emplace_back(x, parse_expr(e.get<std::string>()));
    return traj_ode(std::move(f), state_from_json(j.at("init")));
  }
  if (k == "shift") return traj_shift(traj_from_json(j.at("base")), j.at("offset").get<double>());
  if (k == "merge") return traj_merge(traj_from_json(j.at("left")), traj_from_json(j.at("right")));
  if (k == "glued")
    return traj_glued(traj_from_json(j.at("first")), j.at("split").get<double>(),
                      traj_from_json(j.at("second")));
  throw std::runtime_error("unknown trajectory kind: " + k);
}

inline Json event_to_json(const Event& e) {
  Json j;
  if (e.kind == Event::Kind::Comm) {
    j["kind"] = "comm";
    j["dir"] = dir_str(e.dir) == "." ? "." : dir_str(e.dir);
    j["ch"] = e.ch;
    j["value"] = e.value;
  } else {
    j["kind"] = "wait";
    if (std::isinf(e.dur)) j["duration"] = "inf";
    else j["duration"] = e.dur;
    Json rdy = Json::array();
    for (auto& cd : e.rdy) rdy.push_back(cd.ch + static_cast<char>(cd.dir));
    j["rdy"] = rdy;
    j["traj"] = traj_to_json(e.traj);
  }
  return j;
}

inline Event event_from_json(const Json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "comm") {
    std::string d = j.at("dir").get<std::string>();
    Dir dir = d == "?" ? Dir::In : d == "!" ? Dir::Out : Dir::Sync;
    return comm_event(j.at("ch").get<std::string>(), dir, j.at("value").get<double>());
  }
  if (k != "wait") throw std::runtime_error("unknown event kind: " + k);
  double dur = j.at("duration").is_string() ? kInf : j.at("duration").get<double>();
  RdySet rdy;
  for (auto& s : j.at("rdy")) {
    std::string cd = s.get<std::string>();
    char dc = cd.back();
    rdy.insert({cd.substr(0, cd.size() - 1), dc == '?' ? Dir::In : Dir::Out});
  }
  return wait_event(dur, traj_from_json(j.at("traj")), std::move(rdy));
}

inline Json trace_to_json(const Trace& t) {
  Json j;
  Json evs = Json::array();
  for (auto& e : t.events) evs.push_back(event_to_json(e));
  j["events"] = evs;
  j["delta"] = t.delta;
  return j;
}

inline Trace trace_from_json(const Json& j) {
  Trace t;
  for (auto& e : j.at("events")) t.events.push_back(event_from_json(e));
  t.delta = j.value("delta", false);
  return t;
}

}  // namespace hcsp
