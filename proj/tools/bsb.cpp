// Command-line front end: plan | pool | circuit | bv | optics | compare.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsb/bsb.hpp"

namespace {

struct SecretSource {
  std::string bits;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
};

void add_secret_options(CLI::App* cmd, SecretSource& src, bool allow_random) {
  auto* secret = cmd->add_option("--secret", src.bits, "Secret bit string, most significant first");
  if (!allow_random) {
    secret->required();
    return;
  }
  auto* n = cmd->add_option("--n", src.n, "Secret length (with --d and --seed)");
  auto* d = cmd->add_option("--d", src.d, "Number of defects in the random secret");
  auto* seed = cmd->add_option("--seed", src.seed, "Seed for the random secret")->default_val(0);
  secret->excludes(n)->excludes(d);
  n->needs(d);
  d->needs(n);
  (void)seed;
}

bsb::SecretString resolve_secret(const SecretSource& src) {
  if (!src.bits.empty()) return bsb::SecretString::parse(src.bits);
  if (src.n == 0) throw bsb::DomainError("provide --secret or --n/--d/--seed");
  return bsb::seeded_random_secret(src.n, src.d, src.seed);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text << "\n";
}

std::optional<std::size_t> opt(std::size_t v) { return v ? std::optional<std::size_t>(v) : std::nullopt; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary spring balance: group testing, popcount circuits and Bernstein-Vazirani"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output")->configurable(false);

  int status = 0;

  // plan
  std::size_t plan_n = 0, plan_d = 0, stages = 0;
  std::vector<std::size_t> pool_sizes;
  auto* plan = app.add_subcommand("plan", "Closed-form pooling plan and worst-case analytics");
  plan->add_option("--n", plan_n, "Population size")->required();
  plan->add_option("--d", plan_d, "Assumed number of defects")->required();
  plan->add_option("--stages", stages, "Stage count S (default: optimal S0)");
  plan->add_option("--pool-size", pool_sizes, "Pool sizes k_1,...,k_{S-1}")->delimiter(',');
  plan->add_flag("--json", json);
  plan->callback([&] {
    auto j = bsb::cmd_plan(plan_n, plan_d, opt(stages), pool_sizes);
    std::cout << (json ? j.dump(2) + "\n" : bsb::render_plan(j));
  });

  // pool
  SecretSource pool_src;
  std::string accounting = "strict";
  auto* pool = app.add_subcommand("pool", "Run Li's S-stage procedure against a counting oracle");
  add_secret_options(pool, pool_src, true);
  pool->add_option("--stages", stages, "Stage count S (default: optimal S0)");
  pool->add_option("--pool-size", pool_sizes, "Pool sizes k_1,...,k_{S-1}")->delimiter(',');
  pool->add_option("--accounting", accounting, "strict | deduced")->check(CLI::IsMember({"strict", "deduced"}));
  pool->add_flag("--json", json);
  pool->callback([&] {
    auto secret = resolve_secret(pool_src);
    std::optional<std::size_t> d_assumed;
    if (pool_src.bits.empty()) d_assumed = std::max<std::size_t>(1, pool_src.d);
    auto o = bsb::cmd_pool(secret, opt(stages), pool_sizes, bsb::parse_accounting(accounting), d_assumed);
    if (json) {
      auto j = bsb::run_to_json(o.plan, o.run, o.accounting);
      j["secret"] = secret.str();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "secret: " << secret << "\n" << bsb::render_pool(o);
    }
    if (!o.correct) status = 1;
  });

  // circuit
  auto* circuit = app.add_subcommand("circuit", "Gate-level spring-balance circuit");
  circuit->require_subcommand(1);
  std::size_t circuit_n = 0;
  std::string export_path;
  auto* build = circuit->add_subcommand("build", "Build the AND + adder-tree netlist");
  build->add_option("--n", circuit_n, "Number of input pairs")->required();
  build->add_option("--export", export_path, "Write the netlist JSON to this path");
  build->add_flag("--json", json);
  build->callback([&] {
    auto net = bsb::build_bsb_circuit(circuit_n);
    auto counts = bsb::component_counts(net);
    if (!export_path.empty()) write_file(export_path, bsb::export_netlist(net));
    if (json) {
      std::cout << bsb::Json{{"schema_version", bsb::kSchemaVersion},
                             {"n", circuit_n},
                             {"and_gates", counts.and_gates},
                             {"full_adders", counts.full_adders},
                             {"half_adders", counts.half_adders},
                             {"output_width", net.output_bus().size()}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "N = " << circuit_n << ": " << counts.and_gates << " AND, " << counts.full_adders
                << " full adders, " << counts.half_adders << " half adders, " << net.output_bus().size()
                << "-bit output\n";
    }
  });

  std::string run_secret, run_query, netlist_path;
  auto* crun = circuit->add_subcommand("run", "Evaluate the circuit on one query");
  crun->add_option("--secret", run_secret, "Secret bit string")->required();
  crun->add_option("--query", run_query, "Query bit string")->required();
  crun->add_option("--netlist", netlist_path, "Load a previously exported netlist instead of building one");
  crun->add_flag("--json", json);
  crun->callback([&] {
    auto s = bsb::SecretString::parse(run_secret);
    auto x = bsb::QueryString::parse(run_query);
    std::optional<bsb::Netlist> net;
    if (netlist_path.empty()) {
      net = bsb::build_bsb_circuit(s.size());
    } else {
      std::ifstream in(netlist_path);
      if (!in) throw std::runtime_error("cannot open " + netlist_path);
      net = bsb::import_netlist(bsb::Json::parse(in));
    }
    auto value = bsb::simulate(*net, s, x);
    const bool ok = value == bsb::spring_balance(s, x);
    if (json) {
      std::cout << bsb::Json{{"schema_version", bsb::kSchemaVersion},
                             {"secret", s.str()},
                             {"query", x.str()},
                             {"f", value},
                             {"bus", bsb::format_bus(value, net->output_bus().size())}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "f(" << x << ") = " << value << " (bus " << bsb::format_bus(value, net->output_bus().size())
                << ")\n";
    }
    if (!ok) status = 1;
  });

  // bv
  auto* bv = app.add_subcommand("bv", "Bernstein-Vazirani on the state-vector simulator");
  bv->require_subcommand(1);
  std::string bv_secret, oracle = "z", dump_state;
  auto* bvrun = bv->add_subcommand("run", "Recover the secret with one oracle call");
  bvrun->add_option("--secret", bv_secret, "Secret bit string")->required();
  bvrun->add_option("--oracle", oracle, "z | cnot")->check(CLI::IsMember({"z", "cnot"}));
  bvrun->add_option("--dump-state", dump_state, "Write final amplitudes as JSON");
  bvrun->add_flag("--json", json);
  bvrun->callback([&] {
    auto s = bsb::SecretString::parse(bv_secret);
    auto construction = bsb::parse_oracle_construction(oracle);
    auto r = bsb::run_bv(s, construction);
    if (!dump_state.empty()) write_file(dump_state, bsb::state_to_json(r.final_state).dump(2));
    auto j = bsb::bv_to_json(s, construction, r);
    if (json) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "recovered: " << r.recovered << "\noracle calls: " << r.oracle_calls
                << "\nfidelity: " << r.probability << "\n";
    }
    if (!j["success"].get<bool>()) status = 1;
  });

  // optics
  auto* optics = app.add_subcommand("optics", "Polarizer-only Bernstein-Vazirani (Jones calculus)");
  optics->require_subcommand(1);
  std::string optics_secret, dump_beams;
  auto* orun = optics->add_subcommand("run", "Propagate light through the plates and read the beams");
  orun->add_option("--secret", optics_secret, "Secret bit string")->required();
  orun->add_option("--dump-beams", dump_beams, "Write per-beam elements and outputs as JSON");
  orun->add_flag("--json", json);
  orun->callback([&] {
    auto s = bsb::SecretString::parse(optics_secret);
    auto o = bsb::cmd_optics(s);
    auto dump = bsb::beams_to_json(o.pipeline, o.outputs);
    if (!dump_beams.empty()) write_file(dump_beams, dump.dump(2));
    if (json) {
      dump["secret"] = s.str();
      dump["recovered"] = o.recovered.str();
      std::cout << dump.dump(2) << "\n";
    } else {
      for (std::size_t b = o.pipeline.size(); b-- > 0;) {
        std::cout << "beam " << b + 1 << ": LP(0) H " << (s.at(b + 1) ? "Z" : "I") << " H -> "
                  << (o.recovered.at(b + 1) ? "vertical   |1>" : "horizontal |0>") << "\n";
      }
      std::cout << "recovered: " << o.recovered << "\n";
    }
    if (o.recovered != s) status = 1;
  });

  // compare
  SecretSource cmp_src;
  auto* compare = app.add_subcommand("compare", "Individual vs Li vs Bernstein-Vazirani on one secret");
  add_secret_options(compare, cmp_src, true);
  compare->add_option("--stages", stages, "Stage count S (default: optimal S0)");
  compare->add_option("--pool-size", pool_sizes, "Pool sizes k_1,...,k_{S-1}")->delimiter(',');
  compare->add_flag("--json", json);
  compare->callback([&] {
    auto secret = resolve_secret(cmp_src);
    auto r = bsb::cmd_compare(secret, opt(stages), pool_sizes);
    if (json) {
      auto j = bsb::comparison_to_json(r);
      j["secret"] = secret.str();
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "secret: " << secret << "\n" << bsb::render_comparison(r);
    }
    if (!r.bv_recovered || r.queries_bv != 1 || r.queries_individual != r.n) status = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
