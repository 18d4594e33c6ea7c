/*
 * Copyright (c) 2026, the campa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

// campa - cost analysis of message-passing protocols given as cost-annotated
// global session types. One analysis per invocation:
//
//   campa check FILE            well-formedness + deadlock-freedom
//   campa project FILE --role R endpoint projection
//   campa cost FILE             per-role cost equations (bounded unrolling)
//   campa latency FILE          average cost per iteration
//   campa simulate FILE         traces / deadlock search / LTS equivalence
//   campa optimize F1 --against F2   asynchronous-optimization relation
//   campa deploy-cost FILE      cost under a hardware spec and pinning
//   campa fit SAMPLES           cost-curve fitting from profiled samples
//
// Exit codes: 0 success, 1 analysis failure, 2 budget exceeded, 3 usage.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "campa/campa.hpp"

namespace {

using campa::Json;

struct CommonOpts {
  std::string unroll;
  std::string bind_path;
  std::string format = "text";
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  std::size_t state_cap = 1000000;
  std::size_t n_max = 8;
  bool zero_label_cost = false;

  campa::CostOptions cost_options() const { return campa::CostOptions{zero_label_cost}; }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_unroll = true) {
  if (with_unroll)
    cmd->add_option("--unroll", o.unroll, "iterations per recursion binder, e.g. 2 or 2,1");
  cmd->add_option("--bind", o.bind_path, "bindings file (sizes, variables, cost models)");
  cmd->add_option("--format", o.format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--seed", o.seed, "seed for sampled bindings");
  cmd->add_option("--samples", o.samples, "number of sampled bindings");
  cmd->add_option("--state-cap", o.state_cap, "state-space exploration budget");
  cmd->add_option("--n-max", o.n_max, "latency stabilization bound");
  cmd->add_flag("--zero-label-cost", o.zero_label_cost,
                "labels ride along with data: charge no send/recv cost for them");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw campa::Error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::size_t> parse_unroll(const std::string& text, const campa::GlobalType& g) {
  std::size_t binders = campa::binder_count(g);
  if (text.empty()) return std::vector<std::size_t>(binders, 1);
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) ks.push_back(static_cast<std::size_t>(std::stoul(item)));
  return ks;
}

std::optional<campa::Binding> maybe_bindings(const CommonOpts& o) {
  if (o.bind_path.empty()) return std::nullopt;
  return campa::load_bindings(Json::parse(slurp(o.bind_path)));
}

Json provenance(const CommonOpts& o) {
  Json j;
  j["seed"] = o.seed;
  j["budgets"] = {{"state_cap", o.state_cap}, {"samples", o.samples}, {"n_max", o.n_max}};
  return j;
}

Json document(const std::string& command, const Json& inputs, const Json& results,
              const Json& warnings, const CommonOpts& o) {
  Json doc;
  doc["schema"] = "campa/1";
  doc["command"] = command;
  doc["inputs"] = inputs;
  doc["results"] = results;
  doc["warnings"] = warnings;
  doc["provenance"] = provenance(o);
  return doc;
}

void emit(const Json& doc, const CommonOpts& o, const std::string& text) {
  if (o.format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text;
}

std::string render_env_text(const campa::CostEnv& env, const campa::RoleTable& roles,
                            const campa::Binding* b) {
  std::ostringstream os;
  for (const auto& [id, nf] : env.entries()) {
    os << "  " << roles.name(campa::Role{id}) << " -> "
       << campa::detail::print_cost(campa::denormalize(campa::canonical(nf)));
    if (b) {
      campa::Rat v = campa::evaluate(nf, *b);
      os << "  =  " << v.str() << " (" << v.to_double() << ")";
    }
    os << "\n";
  }
  return os.str();
}

int run_check(const std::string& path, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  Json results;
  Json warnings = Json::array();
  std::ostringstream text;

  bool split = campa::contains_split(p.body);
  campa::WfReport wf = split ? campa::well_formed_ext(p.body) : campa::well_formed(p.body);
  results["well_formed"] = wf.ok;
  if (!wf.ok) {
    Json fails = Json::array();
    for (const auto& f : wf.failures) {
      Json entry;
      entry["role"] = p.roles.name(f.role);
      entry["error"] = f.error;
      entry["path"] = f.path;
      fails.push_back(entry);
    }
    results["failures"] = fails;
    text << path << ": not well-formed\n";
    for (const auto& f : wf.failures)
      text << "  " << p.roles.name(f.role) << ": " << f.error << "\n";
    emit(document("check", {{"file", path}}, results, warnings, o), o, text.str());
    return 1;
  }

  auto ks = parse_unroll(o.unroll, p.body);
  campa::ExploreLimits limits{o.state_cap};
  auto dl = campa::deadlock_free(p.body, ks, limits);
  results["deadlock_free"] = dl.ok;
  results["states_explored"] = dl.states_explored;
  if (dl.orphaned_messages) {
    results["orphaned_messages"] = true;
    warnings.push_back("terminal configurations leave messages in flight (truncated unrolling)");
  }
  std::string kstr;
  for (std::size_t i = 0; i < ks.size(); ++i) kstr += (i ? "," : "") + std::to_string(ks[i]);
  text << path << ": well-formed; " << (dl.ok ? "deadlock-free" : "DEADLOCK");
  if (!ks.empty()) text << " (k=" << kstr << ")";
  text << "\n";
  emit(document("check", {{"file", path}}, results, warnings, o), o, text.str());
  return dl.ok ? 0 : 1;
}

int run_project(const std::string& path, const std::string& role_name, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  auto role = p.roles.find(role_name);
  if (!role) throw campa::Error("unknown role: " + role_name);
  bool split = campa::contains_split(p.body);
  campa::ProjectResult res =
      split ? campa::project_ext(p.body, *role) : campa::project(p.body, *role);
  Json results;
  if (!res) {
    results["projectable"] = false;
    results["error"] = res.error;
    results["path"] = res.path;
    std::ostringstream text;
    text << path << ": " << res.error << "\n  at branch path: ";
    for (const auto& l : res.path) text << l << " ";
    text << "\n";
    emit(document("project", {{"file", path}, {"role", role_name}}, results, Json::array(), o), o,
         text.str());
    return 1;
  }
  std::string rendered = campa::print_local(*res.local, p.roles);
  results["projectable"] = true;
  results["local_type"] = rendered;
  emit(document("project", {{"file", path}, {"role", role_name}}, results, Json::array(), o), o,
       rendered + "\n");
  return 0;
}

int run_cost(const std::string& path, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  auto ks = parse_unroll(o.unroll, p.body);
  bool split = campa::contains_split(p.body);
  campa::CostEnv env = split ? campa::global_cost_ext(p.body, ks, o.cost_options())
                             : campa::global_cost(p.body, ks, o.cost_options());
  auto binding = maybe_bindings(o);
  Json results;
  results["equations"] = campa::env_to_json(env, p.roles, binding ? &*binding : nullptr);
  std::ostringstream text;
  text << "cost equations (" << p.name << "):\n"
       << render_env_text(env, p.roles, binding ? &*binding : nullptr);
  emit(document("cost", {{"file", path}, {"unroll", o.unroll}}, results, Json::array(), o), o,
       text.str());
  return 0;
}

int run_latency(const std::string& path, const std::string& relative, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  auto binding = maybe_bindings(o);
  Json results;
  Json warnings = Json::array();
  std::ostringstream text;

  auto parts = campa::split_nested(p.body);
  if (parts.size() > 1) {
    warnings.push_back("nested recursion split into " + std::to_string(parts.size()) +
                       " sub-protocols; inner iteration counts stay symbolic (k1, k2, ...)");
    results["parameters"] = Json::array();
    for (const auto& part : parts)
      if (!part.param.empty()) results["parameters"].push_back(part.param);
  }
  const campa::GlobalType& target = parts.back().type;

  campa::LatencyResult lat;
  if (relative.empty()) {
    lat = campa::latency(target, o.n_max, o.cost_options());
  } else {
    auto role = p.roles.find(relative);
    if (!role) throw campa::Error("unknown role: " + relative);
    lat = campa::latency_rel(target, *role, o.n_max, o.cost_options());
  }
  results["stabilized_at"] = lat.stabilized_at;
  results["numeric"] = lat.numeric;
  if (lat.upper_bound) {
    results["upper_bound"] = true;
    warnings.push_back("per-iteration growth differs across regions; reporting the least "
                       "per-term upper bound of the difference equation");
  }
  if (lat.numeric) {
    Json eqs = Json::array();
    for (const auto& [id, e] : lat.sub_exprs) {
      Json entry;
      entry["role"] = p.roles.name(campa::Role{id});
      entry["expr"] = campa::expr_to_json(e);
      if (binding) {
        campa::Rat v = campa::evaluate(e, *binding);
        entry["rational"] = v.str();
        entry["decimal"] = v.to_double();
      }
      eqs.push_back(entry);
    }
    results["equations"] = eqs;
    warnings.push_back("latency stabilized numerically; symbolic difference kept exact "
                       "subtraction");
    text << "latency (numerically stabilized at n=" << lat.stabilized_at << ")\n";
  } else {
    results["equations"] = campa::env_to_json(lat.env, p.roles, binding ? &*binding : nullptr);
    text << "latency (stabilized at n=" << lat.stabilized_at << ")"
         << (lat.upper_bound ? " [least upper bound]" : "") << ":\n"
         << render_env_text(lat.env, p.roles, binding ? &*binding : nullptr);
  }
  emit(document("latency", {{"file", path}, {"relative", relative}}, results, warnings, o), o,
       text.str());
  return 0;
}

int run_simulate(const std::string& path, bool traces, bool deadlock, bool equiv,
                 std::size_t max_depth, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  auto ks = parse_unroll(o.unroll, p.body);
  campa::ExploreLimits limits{o.state_cap};
  Json results;
  Json warnings = Json::array();
  std::ostringstream text;
  int code = 0;

  if (traces) {
    auto all = campa::enumerate_traces(p.body, ks, limits);
    results["trace_count"] = all.size();
    Json jt = Json::array();
    for (const auto& tr : all) {
      Json one = Json::array();
      for (const auto& a : tr) one.push_back(a.str(&p.roles));
      jt.push_back(one);
    }
    results["traces"] = jt;
    for (const auto& tr : all) {
      for (const auto& a : tr) text << a.str(&p.roles) << "\n";
      text << "--\n";
    }
  }
  if (deadlock) {
    auto dl = campa::deadlock_free(p.body, ks, limits);
    results["deadlock_free"] = dl.ok;
    if (dl.orphaned_messages) results["orphaned_messages"] = true;
    if (!dl.ok) {
      code = 1;
      text << "deadlock found\n";
      if (dl.counterexample) {
        Json stuck = Json::array();
        for (const auto& [rid, local] : dl.counterexample->locals)
          stuck.push_back(p.roles.name(campa::Role{rid}) + ": " +
                          campa::print_local(local, p.roles));
        results["counterexample"] = stuck;
        for (const auto& s : stuck) text << "  " << s.get<std::string>() << "\n";
      }
    } else {
      text << "deadlock-free (" << dl.states_explored << " states)\n";
    }
  }
  if (equiv) {
    auto eq = campa::trace_equiv(p.body, ks, max_depth, limits);
    results["trace_equivalent"] = eq.ok;
    results["depth"] = max_depth;
    if (!eq.ok) {
      code = 1;
      results["mismatch"] = eq.mismatch;
      text << "global and configuration semantics diverge: " << eq.mismatch << "\n";
    } else {
      text << "trace-equivalent to depth " << max_depth << " (" << eq.states_explored
           << " joint states)\n";
    }
  }
  emit(document("simulate", {{"file", path}, {"unroll", o.unroll}, {"max_depth", max_depth}},
                results, warnings, o),
       o, text.str());
  return code;
}

int run_optimize(const std::string& path, const std::string& against, bool check_deadlock,
                 bool check_cost, bool zero_send, const CommonOpts& o) {
  campa::Protocol p1 = campa::parse_protocol(slurp(path));
  campa::Protocol p2 = campa::parse_protocol(slurp(against));
  Json results;
  Json warnings = Json::array();
  std::ostringstream text;

  bool related = campa::optim_leq(p1.body, p2.body);
  results["related"] = related;
  text << path << (related ? " <= " : " is not related to ") << against << "\n";
  int code = related ? 0 : 1;

  if (!related && (check_deadlock || check_cost))
    warnings.push_back("protocols are unrelated; falling back to safety by exploration");

  if (check_deadlock) {
    auto ks = parse_unroll(o.unroll, p1.body);
    auto dl = campa::explore_deadlock(
        campa::initial_configuration(campa::unroll(p1.body, ks)), campa::ExploreLimits{o.state_cap});
    results["deadlock_free"] = dl.ok;
    results["deadlock_checked_by"] = related ? "optimization relation + exploration"
                                             : "exploration only";
    if (dl.orphaned_messages) results["orphaned_messages"] = true;
    text << "  deadlock: " << (dl.ok ? "free" : "FOUND") << (related ? "" : " (by exploration, not by the relation)")
         << "\n";
    if (!dl.ok && related) code = 2;
    if (!dl.ok && !related) code = 1;
  }
  if (check_cost) {
    auto ks1 = parse_unroll(o.unroll, p1.body);
    auto ks2 = parse_unroll(o.unroll, p2.body);
    campa::CostEnv c1 = campa::global_cost_ext(p1.body, ks1);
    campa::CostEnv c2 = campa::global_cost_ext(p2.body, ks2);
    std::set<campa::Atom> atoms;
    campa::collect_atoms(c1, atoms);
    campa::collect_atoms(c2, atoms);
    auto bindings = campa::sample_bindings(atoms, o.samples, o.seed, 1000, zero_send);
    auto le = campa::env_leq(c1, c2, bindings);
    results["cost_leq"] = le.ok;
    results["cost_leq_proved"] = le.proved;
    results["zero_send"] = zero_send;
    text << "  cost: " << (le.ok ? "optimized <= original" : "NOT lower") << " ("
         << (le.proved ? "proved" : "sampled") << (zero_send ? ", send costs zeroed" : "") << ")\n";
    if (!le.ok && related) code = 2;
  }
  emit(document("optimize", {{"file", path}, {"against", against}}, results, warnings, o), o,
       text.str());
  return code;
}

int run_deploy_cost(const std::string& path, const std::string& arch_path, const CommonOpts& o) {
  campa::Protocol p = campa::parse_protocol(slurp(path));
  auto ks = parse_unroll(o.unroll, p.body);
  if (o.bind_path.empty()) throw campa::Error("deploy-cost needs --bind");
  campa::Binding b = campa::load_bindings(Json::parse(slurp(o.bind_path)));
  auto [hw, m] = campa::load_architecture(Json::parse(slurp(arch_path)), p.roles);
  auto cost = campa::resource_cost(p.body, ks, hw, m, b);
  Json results = Json::array();
  std::ostringstream text;
  text << "resource-bounded completion times (" << p.name << "):\n";
  for (const auto& [id, t] : cost) {
    Json entry;
    entry["role"] = p.roles.name(campa::Role{id});
    entry["rational"] = t.str();
    entry["decimal"] = t.to_double();
    results.push_back(entry);
    text << "  " << p.roles.name(campa::Role{id}) << " -> " << t.str() << " (" << t.to_double()
         << ")\n";
  }
  emit(document("deploy-cost", {{"file", path}, {"arch", arch_path}}, {{"times", results}},
                Json::array(), o),
       o, text.str());
  return 0;
}

int run_fit(const std::string& samples_path, const std::string& at, const CommonOpts& o) {
  Json j = Json::parse(slurp(samples_path));
  std::vector<std::pair<campa::Rat, campa::Rat>> samples;
  for (const auto& row : j) samples.emplace_back(campa::rat_from_json(row.at(0)),
                                                 campa::rat_from_json(row.at(1)));
  auto curve = campa::fit_cost_curve(std::move(samples));
  Json results = Json::array();
  Json warnings = Json::array();
  std::ostringstream text;
  std::stringstream ss(at);
  std::string item;
  while (std::getline(ss, item, ',')) {
    campa::Rat x = campa::Rat::from_string(item);
    bool clamped = false;
    campa::Rat y = curve(x, &clamped);
    if (clamped) warnings.push_back("negative spline value clamped to 0 at " + x.str());
    Json entry;
    entry["at"] = x.str();
    entry["value"] = y.str();
    entry["decimal"] = y.to_double();
    results.push_back(entry);
    text << "  f(" << x.str() << ") = " << y.str() << " (" << y.to_double() << ")\n";
  }
  emit(document("fit", {{"samples", samples_path}, {"at", at}}, {{"values", results}}, warnings,
                o),
       o, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"campa: cost analysis of message-passing protocols"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string file, role, relative, against, arch, at_values;
  bool flag_traces = false, flag_deadlock = false, flag_equiv = false;
  bool flag_check_deadlock = false, flag_check_cost = false, flag_zero_send = false;
  std::size_t max_depth = 14;

  auto* c_check = app.add_subcommand("check", "well-formedness and deadlock-freedom");
  c_check->add_option("file", file)->required();
  add_common(c_check, opts);

  auto* c_project = app.add_subcommand("project", "endpoint projection onto a role");
  c_project->add_option("file", file)->required();
  c_project->add_option("--role", role, "participant to project onto")->required();
  add_common(c_project, opts, false);

  auto* c_cost = app.add_subcommand("cost", "per-role cost equations");
  c_cost->add_option("file", file)->required();
  add_common(c_cost, opts);

  auto* c_latency = app.add_subcommand("latency", "average cost per iteration");
  c_latency->add_option("file", file)->required();
  c_latency->add_option("--relative", relative, "divide by this role's interactions");
  add_common(c_latency, opts, false);

  auto* c_sim = app.add_subcommand("simulate", "explore the operational semantics");
  c_sim->add_option("file", file)->required();
  c_sim->add_flag("--traces", flag_traces, "enumerate all complete traces");
  c_sim->add_flag("--deadlock", flag_deadlock, "search for deadlocks");
  c_sim->add_flag("--equiv", flag_equiv, "compare global vs configuration semantics");
  c_sim->add_option("--max-depth", max_depth, "depth bound for --equiv");
  add_common(c_sim, opts);

  auto* c_opt = app.add_subcommand("optimize", "asynchronous message optimization");
  c_opt->add_option("file", file)->required();
  c_opt->add_option("--against", against, "reference protocol")->required();
  c_opt->add_flag("--check-deadlock", flag_check_deadlock, "verify deadlock-freedom");
  c_opt->add_flag("--check-cost", flag_check_cost, "verify the cost inequality");
  c_opt->add_flag("--zero-send", flag_zero_send, "zero all send costs in sampled bindings");
  add_common(c_opt, opts);

  auto* c_deploy = app.add_subcommand("deploy-cost", "cost under a hardware description");
  c_deploy->add_option("file", file)->required();
  c_deploy->add_option("--arch", arch, "architecture file")->required();
  add_common(c_deploy, opts);

  auto* c_fit = app.add_subcommand("fit", "fit a cost curve to profiled samples");
  c_fit->add_option("file", file, "JSON array of [size, time] samples")->required();
  c_fit->add_option("--at", at_values, "comma-separated query sizes")->required();
  add_common(c_fit, opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_check->parsed()) return run_check(file, opts);
    if (c_project->parsed()) return run_project(file, role, opts);
    if (c_cost->parsed()) return run_cost(file, opts);
    if (c_latency->parsed()) return run_latency(file, relative, opts);
    if (c_sim->parsed()) {
      if (!flag_traces && !flag_deadlock && !flag_equiv) flag_deadlock = true;
      return run_simulate(file, flag_traces, flag_deadlock, flag_equiv, max_depth, opts);
    }
    if (c_opt->parsed())
      return run_optimize(file, against, flag_check_deadlock, flag_check_cost, flag_zero_send,
                          opts);
    if (c_deploy->parsed()) return run_deploy_cost(file, arch, opts);
    if (c_fit->parsed()) return run_fit(file, at_values, opts);
  } catch (const campa::BudgetExceeded& e) {
    std::cerr << "campa: " << e.what() << "\n";
    return 2;
  } catch (const campa::ParseError& e) {
    std::cerr << "campa: " << file << ":" << e.what() << "\n";
    return 1;
  } catch (const campa::Error& e) {
    std::cerr << "campa: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "campa: " << e.what() << "\n";
    return 1;
  }
  return 3;
}
