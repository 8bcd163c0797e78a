#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unil/engine/engine.hpp"
#include "unil/io/reports.hpp"
#include "unil/rings/named.hpp"

using namespace unil;

namespace {

const char* kRingGrammar =
    "Ring names: Z, Z[1/N], F2, F4, ... optionally followed by [zeta_m] and group brackets [G];\n"
    "  \"Z[zeta_8] o_c C2\", \"Z[zeta_8] o_-c C2\", \"Z[zeta_8] o_c [i]\" for the twisted extensions.\n"
    "Group expressions: C_n, D_n (order n), Q_n, SD_n, S_n, A_n, V_4, \"C_3 x Q_8\", cyclic(n), dihedral(e),\n"
    "  semidihedral(e), quaternionic(e), direct(G,H), semidirect(N,P,inv|trivial|pow(k)).";

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  require(bool(in), ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

FiniteGroup load_group(const std::string& expr, const std::string& file) {
  FiniteGroup g = file.empty() ? parse_group(expr) : group_from_json(parse_json_text(read_text(file)));
  require(g.order() <= max_group_order(), ErrorCode::OrderTooLarge,
          "group order " + std::to_string(g.order()) + " exceeds UNIL_MAX_ORDER");
  return g;
}

InvolutiveRing load_ring(const std::string& name, const std::string& file) {
  require(!name.empty() || !file.empty(), ErrorCode::InvalidArgument, "give --ring or --ring-file");
  return file.empty() ? parse_ring(name) : ring_from_json(parse_json_text(read_text(file)));
}

std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      require(used == item.size(), ErrorCode::ParseError, "bad element index '" + item + "'");
      out.push_back(v);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad element index '" + item + "'");
    }
  }
  return out;
}

Subgroup subgroup_from(const FiniteGroup& g, const std::string& gens) {
  std::vector<int> idx = parse_indices(gens);
  for (int x : idx)
    require(x >= 0 && std::size_t(x) < g.order(), ErrorCode::InvalidArgument, "element index out of range");
  return g.closure(idx);
}

// ---------------------------------------------------------------- text rendering of JSON

void render(const Json& j, std::ostream& out, const std::string& indent) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_structured() && !(it->is_array() && !it->empty() && !(*it)[0].is_structured())) {
        out << indent << it.key() << ":\n";
        render(*it, out, indent + "  ");
      } else {
        out << indent << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (j[i].is_structured()) {
        out << indent << "- [" << i << "]\n";
        render(j[i], out, indent + "  ");
      } else {
        out << indent << "- " << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump()) << "\n";
      }
    }
  } else {
    out << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void render_certificate(const Json& j, std::ostream& out) {
  Certificate c = Certificate::from_json(j);
  out << "input: " << c.input.str() << "  (n = " << c.n << ")\n";
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const auto& s = c.steps[i];
    out << "  " << i + 1 << ". " << s.rule;
    if (s.status != "applied") out << " [" << s.status << ": " << s.evidence.value("failed", Json::array()).dump() << "]";
    out << "  " << s.before.str() << "  =>  " << s.after.str() << "\n";
  }
  out << "final: " << c.final_term.str() << "\n";
  out << "outcome: " << c.outcome << "\n";
}

struct Output {
  std::string format = "json";
  void emit(const Json& j, bool certificate = false) const {
    if (format == "text") {
      if (certificate) render_certificate(j, std::cout);
      else render(j, std::cout, "");
    } else {
      std::cout << j.dump() << "\n";
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations around UNil and Nil-L groups of finite groups.\n" + std::string(kRingGrammar)};
  app.require_subcommand(1);
  app.fallthrough();
  Output output;
  app.add_option("--format", output.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string group_expr, group_file, ring_name, ring_file, k_gens, h_gens, cert_file, coeff_ring = "Z[1/2]", matrix_text,
                                                                               base_name = "Z", field_name = "F2";
  long long degree = 0, n_dim = 0, m_dim = 0;
  int j_index = 0;
  std::uint64_t big_n = 3;

  auto add_group = [&](CLI::App* sub) {
    sub->add_option("--group", group_expr, "group expression");
    sub->add_option("--group-file", group_file, "group JSON file ({order, table, names})");
  };

  auto* reduce_cmd = app.add_subcommand("reduce", "derivation certificate for NL_n(Z[G])");
  add_group(reduce_cmd);
  reduce_cmd->add_option("--n", degree, "degree n");

  auto* tate_cmd = app.add_subcommand("tate", "Tate cohomology H^j(C_2; A)");
  tate_cmd->add_option("--ring", ring_name, "named ring");
  tate_cmd->add_option("--ring-file", ring_file, "ring JSON file");
  tate_cmd->add_option("--j", j_index, "degree j");

  auto* mv_cmd = app.add_subcommand("mv-check", "exactness of the Mayer-Vietoris hexagon of base[G] at K");
  add_group(mv_cmd);
  mv_cmd->add_option("--k", k_gens, "generators of K as element indices (default: center of order 2)");
  mv_cmd->add_option("--base", base_name, "Z or Z[1/N]");

  auto* crt_cmd = app.add_subcommand("split-cyclotomic", "CRT splitting of Z[1/N][C_N]");
  crt_cmd->add_option("--N", big_n, "odd N")->required();

  auto* cls_cmd = app.add_subcommand("classify-2group", "special 2-group classification");
  add_group(cls_cmd);

  auto* sqrt_cmd = app.add_subcommand("sqrt-nilpotent", "V with V^2 = (1 + rho)^-1 for nilpotent rho");
  sqrt_cmd->add_option("--ring", coeff_ring, "Z[1/2] or Fp");
  sqrt_cmd->add_option("--matrix", matrix_text, "matrix as JSON, entries integers or \"p/q\"")->required();

  auto* rad_cmd = app.add_subcommand("radical", "nilpotency index of the augmentation ideal of F_q[P]");
  add_group(rad_cmd);
  rad_cmd->add_option("--field", field_name, "F2, F4, ...");

  auto* dc_cmd = app.add_subcommand("double-cosets", "K\\G/H with stabilizers");
  dc_cmd->set_help_flag("--help", "Print this help message and exit");
  add_group(dc_cmd);
  dc_cmd->add_option("--k", k_gens, "generators of K (element indices)");
  dc_cmd->add_option("--h", h_gens, "generators of H (element indices)");

  auto* split_cmd = app.add_subcommand("split-obstruction", "splitting decision for dimensions n, m");
  split_cmd->add_option("--n", n_dim, "n")->required();
  split_cmd->add_option("--m", m_dim, "m")->required();

  auto* replay_cmd = app.add_subcommand("replay", "re-verify a certificate");
  replay_cmd->add_option("--cert", cert_file, "certificate JSON file, - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*reduce_cmd) {
      RuleContext ctx;
      output.emit(reduce(load_group(group_expr, group_file), degree, ctx).to_json(), true);
    } else if (*tate_cmd) {
      output.emit(group_value_to_json(tate_cohomology(load_ring(ring_name, ring_file), j_index).value));
    } else if (*mv_cmd) {
      FiniteGroup g = load_group(group_expr, group_file);
      Subgroup k = k_gens.empty() ? g.center() : subgroup_from(g, k_gens);
      require(!k_gens.empty() || k.order() == 2, ErrorCode::InvalidArgument, "center is not of order 2; pass --k");
      CartesianSquare sq = pullback_square(BasePID::parse(base_name), g, k);
      output.emit(mv_report_to_json(verify_mv_exactness(sq)));
    } else if (*crt_cmd) {
      output.emit(crt_to_json(crt_split_cyclic(BasePID::localized(big_n), big_n)));
    } else if (*cls_cmd) {
      output.emit(special_class_to_json(classify_special_2group(load_group(group_expr, group_file))));
    } else if (*sqrt_cmd) {
      CoefficientRing r = CoefficientRing::parse(coeff_ring);
      CMat rho = cmat_from_json(parse_json_text(matrix_text), r);
      require(rho.is_square(), ErrorCode::InvalidArgument, "matrix must be square");
      output.emit(sqrt_report_to_json(nilpotent_sqrt(r, rho)));
    } else if (*rad_cmd) {
      output.emit(radical_to_json(radical_nilpotency(BasePID::parse(field_name), load_group(group_expr, group_file))));
    } else if (*dc_cmd) {
      FiniteGroup g = load_group(group_expr, group_file);
      Subgroup k = subgroup_from(g, k_gens), h = subgroup_from(g, h_gens);
      output.emit(double_cosets_to_json(g, h, double_coset_decomposition(g, k, h)));
    } else if (*split_cmd) {
      output.emit(splitting_decision(n_dim, m_dim).to_json());
    } else if (*replay_cmd) {
      Certificate c = Certificate::from_json(parse_json_text(read_text(cert_file)));
      RuleContext ctx;
      output.emit(replay(c, ctx).to_json());
    }
  } catch (const Error& e) {
    Json err = {{"error", error_code_name(e.code())}, {"message", e.what()}};
    std::cout << err.dump() << "\n";
    return e.code() == ErrorCode::ParseError ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cout << Json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
