#include "strucrep/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "strucrep/error.hpp"
#include "strucrep/io.hpp"

namespace strucrep {

namespace {

std::uint64_t parse_seed_text(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(std::string(what) + " must be a non-negative integer, got '" + s + "'");
  errno = 0;
  const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw UsageError(std::string(what) + " out of range");
  return v;
}

/// --seed beats STRUCREP_SEED beats 0.
std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
  if (flag) return parse_seed_text(*flag, "--seed");
  if (const char* env = std::getenv("STRUCREP_SEED"); env && *env) return parse_seed_text(env, "STRUCREP_SEED");
  return 0;
}

Json members_json(const StructuralTensorSet& s) {
  Json members = Json::array();
  for (const auto& m : s.members)
    members.push_back({{"label", m.label},
                       {"kind", m.kind == MemberKind::symmetric ? "symmetric" : "skew"},
                       {"tensor", to_json(m.tensor)}});
  Json actions = Json::array();
  for (const auto& a : s.generator_actions) {
    Json image = Json::array();
    for (int t : a.action.target) image.push_back(s.members[static_cast<std::size_t>(t)].label);
    actions.push_back({{"generator", a.generator}, {"image", image}, {"sign", a.action.sign}});
  }
  return {{"members", members}, {"actions", actions}};
}

Json stabilizer_json(Group g, const StructuralTensorSet& s) {
  const auto ref = stabilizer_reference(g);
  if (!ref) return nullptr;
  const auto& elems = point_group(*ref).elements;
  const std::size_t count = stabilizer_within(s, elems).size();
  return {{"reference", std::string(group_name(*ref))},
          {"count", count},
          {"exceeds_group", count > point_group(g).order()}};
}

Json constraints_json(Group g, Form form) {
  const auto& t = constraint_table(g, form);
  const int base = group_basis(g, form).first_index;
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json sigma = Json::array();
    for (int k : r.sigma) sigma.push_back(k + base);
    rows.push_back({{"generator", r.generator}, {"member_perm", r.member_perm}, {"sigma", sigma}});
  }
  return {{"constraint_free", t.constraint_free}, {"rows", rows}};
}

Json group_show_json(Group g, Form form) {
  const auto& pg = point_group(g);
  const auto& set = structural_set(g, form);
  const auto& b = group_basis(g, form);
  Json gens = Json::array();
  for (const auto& n : pg.generators) gens.push_back({{"label", n.label}, {"matrix", to_json(n.matrix)}});
  Json j{{"name", std::string(group_name(g))},
         {"form", std::string(form_name(form))},
         {"continuous", pg.is_continuous},
         {"order", pg.is_continuous ? Json(nullptr) : Json(pg.order())},
         {"formulation", std::string(formulation_name(b.formulation))},
         {"generators", gens},
         {"structural_set", members_json(set)},
         {"basis",
          {{"first_index", b.first_index},
           {"invariants", b.invariant_labels},
           {"generators", b.generator_labels}}},
         {"constraints", constraints_json(g, form)},
         {"stabilizer", stabilizer_json(g, set)}};
  return j;
}

Vec3 parse_vec3(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ',')) {
    char* end = nullptr;
    const double x = std::strtod(part.c_str(), &end);
    if (part.empty() || end != part.c_str() + part.size()) throw UsageError("bad seed vector '" + text + "'");
    v.push_back(x);
  }
  if (v.size() != 3) throw UsageError("seed vector needs three comma-separated numbers: '" + text + "'");
  return {v[0], v[1], v[2]};
}

CoefficientModel load_model(const std::string& path, std::istream& in, Group expected) {
  CoefficientModel m = model_from_json(parse_json(read_text(path, in), path));
  if (m.group != expected)
    throw ValidationError("model is for " + std::string(group_name(m.group)) + ", not " +
                          std::string(group_name(expected)));
  return m;
}

SampleSet load_samples(const std::string& path, std::istream& in) {
  if (path == "-") return read_samples(in, "stdin");
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open '" + path + "'");
  return read_samples(f, path);
}

void emit(const std::string& payload, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << payload;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural-tensor representations for the centrosymmetric point groups", "strucrep"};
  app.require_subcommand(1);

  std::string group_arg, form_arg = "standard", c_path, model_path, input_path = "-", holdout_path, output_path;
  std::string kind_arg;
  std::optional<std::string> seed_arg;
  std::size_t trials = 200, count = 100;
  double tol = 1e-9, noise = 0.0, ridge = 0.0;
  int degree = 1;
  bool eps_k = false;
  std::vector<std::string> seed_vecs;

  auto* groups = app.add_subcommand("groups", "Group catalog");
  groups->require_subcommand(1);
  auto* groups_list = groups->add_subcommand("list", "All 14 groups");
  auto* groups_show = groups->add_subcommand("show", "Generators, structural set, basis and constraints");
  groups_show->add_option("name", group_arg, "Group name")->required();
  groups_show->add_option("--form", form_arg, "Basis variant (standard, p2)");

  auto* strct = app.add_subcommand("struct", "Structural tensor set, canonical or built from seed vectors");
  strct->add_option("name", group_arg, "Group name")->required();
  strct->add_option("--seed-vec", seed_vecs, "Seed vector x,y,z (repeatable)");
  strct->add_flag("--eps-k", eps_k, "Add the skew tensor eps k to the seeds");
  strct->add_option("--form", form_arg, "Basis variant (standard, p2)");

  auto* inv = app.add_subcommand("invariants", "Invariant vector at C");
  inv->add_option("name", group_arg, "Group name")->required();
  inv->add_option("--c", c_path, "JSON file with C as a 3x3 array ('-' for stdin)")->required();
  inv->add_option("--form", form_arg, "Basis variant (standard, p2)");

  auto* ev = app.add_subcommand("eval", "Evaluate a coefficient model at C");
  ev->add_option("name", group_arg, "Group name")->required();
  ev->add_option("--model", model_path, "Model JSON")->required();
  ev->add_option("--c", c_path, "JSON file with C as a 3x3 array ('-' for stdin)")->required();

  auto* ver = app.add_subcommand("verify", "Run the property-test suite");
  ver->add_option("name", group_arg, "Group name")->required();
  ver->add_option("--model", model_path, "Model JSON (default: the built-in library)");
  ver->add_option("--trials", trials, "Random C samples per check")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed_arg, "Seed (default: $STRUCREP_SEED or 0)");
  ver->add_option("--tol", tol, "Tolerance for equivariance and invariance")->check(CLI::PositiveNumber);
  ver->add_option("--form", form_arg, "Basis variant (standard, p2)");

  auto* fit = app.add_subcommand("fit", "Least-squares fit of a symmetrized model to CSV samples");
  fit->add_option("name", group_arg, "Group name")->required();
  fit->add_option("--input", input_path, "CSV samples ('-' for stdin)");
  fit->add_option("--kind", kind_arg, "Expected sample kind (tensor, scalar)");
  fit->add_option("--degree", degree, "Polynomial degree in the invariants");
  fit->add_option("--ridge", ridge, "Ridge parameter");
  fit->add_option("--form", form_arg, "Basis variant (standard, p2)");
  fit->add_option("--holdout", holdout_path, "Holdout CSV for a residual report");
  fit->add_option("--seed", seed_arg, "Seed for the holdout re-audit");
  fit->add_option("-o,--output", output_path, "Output path (default stdout)");

  auto* syn = app.add_subcommand("synth", "Synthetic CSV samples from a model");
  syn->add_option("name", group_arg, "Group name")->required();
  syn->add_option("--model", model_path, "Model JSON (default: built-in degree-1 library model)");
  syn->add_option("-n", count, "Number of records")->check(CLI::PositiveNumber);
  syn->add_option("--seed", seed_arg, "Seed (default: $STRUCREP_SEED or 0)");
  syn->add_option("--kind", kind_arg, "Sample kind (tensor, scalar)");
  syn->add_option("--noise", noise, "Gaussian noise standard deviation");
  syn->add_option("--form", form_arg, "Basis variant (standard, p2)");
  syn->add_option("-o,--output", output_path, "Output path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (groups_list->parsed()) {
      Json arr = Json::array();
      for (Group g : kAllGroups) {
        const auto& pg = point_group(g);
        arr.push_back({{"name", std::string(group_name(g))},
                       {"continuous", pg.is_continuous},
                       {"order", pg.is_continuous ? Json(nullptr) : Json(pg.order())},
                       {"formulation", std::string(formulation_name(formulation_of(g)))}});
      }
      out << dump(arr);
      return kExitOk;
    }

    const Group g = parse_group(group_arg);
    const Form form = parse_form(form_arg);
    if (form == Form::p2 && g != Group::D_2h) throw UsageError("the p2 form exists only for D_2h");

    if (groups_show->parsed()) {
      out << dump(group_show_json(g, form));
      return kExitOk;
    }

    if (strct->parsed()) {
      Json j{{"group", std::string(group_name(g))}, {"form", std::string(form_name(form))}};
      if (seed_vecs.empty() && !eps_k) {
        const auto& s = structural_set(g, form);
        j["source"] = "canonical";
        j.update(members_json(s));
        j["stabilizer"] = stabilizer_json(g, s);
      } else {
        if (is_continuous(g)) throw UsageError("seed construction needs a discrete group");
        std::vector<Vec3> seeds;
        for (const auto& s : seed_vecs) seeds.push_back(parse_vec3(s));
        StructuralTensorSet s;
        try {
          s = build_set_from_seed(g, seeds, eps_k);
        } catch (const std::runtime_error& e) {
          throw ValidationError(e.what());
        }
        j["source"] = "seed";
        j.update(members_json(s));
        j["stabilizer"] = stabilizer_json(g, s);
      }
      out << dump(j);
      return kExitOk;
    }

    if (inv->parsed()) {
      const SymTensor2 C = sym_tensor_from_json(parse_json(read_text(c_path, in), c_path));
      const auto v = invariant_basis(g, C, form);
      out << dump({{"group", std::string(group_name(g))}, {"labels", v.labels}, {"values", v.values}});
      return kExitOk;
    }

    if (ev->parsed()) {
      const CoefficientModel m = load_model(model_path, in, g);
      const SymTensor2 C = sym_tensor_from_json(parse_json(read_text(c_path, in), c_path));
      const auto& b = group_basis(g, m.form);
      const auto members = structural_set(g, m.form).matrices();
      Json j{{"group", std::string(group_name(g))},
             {"invariant_labels", b.invariant_labels},
             {"invariants", invariants_with(b, C.to_mat(), members)}};
      if (!m.coefficients.empty()) {
        j["coefficients"] = eval_coefficients(m, C);
        j["T"] = to_json(eval_tensor(m, C));
      }
      if (m.psi) j["psi"] = eval_scalar(m, C);
      out << dump(j);
      return kExitOk;
    }

    if (ver->parsed()) {
      SuiteOptions opt;
      opt.trials = trials;
      opt.tol = tol;
      opt.seed = resolve_seed(seed_arg);
      std::vector<NamedModel> models;
      Form suite_form = form;
      if (!model_path.empty()) {
        CoefficientModel m = load_model(model_path, in, g);
        suite_form = m.form;
        models.push_back({model_path == "-" ? "stdin" : model_path, std::move(m)});
      } else {
        const auto lib = model_library(g, form);
        for (std::size_t k = 0; k < lib.size(); ++k) models.push_back({"library_d" + std::to_string(k), lib[k]});
      }
      const auto reports = run_suite(g, suite_form, models, opt);
      Json arr = Json::array();
      bool ok = true;
      for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        ok = ok && r.pass;
      }
      out << dump(arr);
      if (!ok) err << "strucrep: verification failed for " << group_name(g) << "\n";
      return ok ? kExitOk : kExitVerifyFailed;
    }

    if (fit->parsed()) {
      const SampleSet samples = load_samples(input_path, in);
      if (!kind_arg.empty() && parse_kind(kind_arg) != samples.kind)
        throw ValidationError("input holds " + std::string(kind_name(samples.kind)) + " samples, not " + kind_arg);
      FitOptions fo;
      fo.form = form;
      fo.degree = degree;
      fo.ridge = ridge;
      const FitResult r = fit_linear(g, samples, fo);
      std::optional<ResidualReport> hold;
      if (!holdout_path.empty()) hold = residual_report(r, load_samples(holdout_path, in), resolve_seed(seed_arg));
      if (r.min_norm)
        err << "strucrep: rank-deficient design (rank " << r.rank << " of " << r.unknowns
            << "); minimum-norm solution returned\n";
      emit(dump(fit_to_json(r, hold)), output_path, out);
      return kExitOk;
    }

    if (syn->parsed()) {
      CoefficientModel m = model_path.empty() ? model_library(g, form).at(1) : load_model(model_path, in, g);
      SampleKind kind = SampleKind::tensor;
      if (!kind_arg.empty()) {
        kind = parse_kind(kind_arg);
      } else if (m.coefficients.empty()) {
        kind = SampleKind::scalar;
      }
      if (kind == SampleKind::tensor && m.coefficients.empty()) throw ValidationError("model has no tensor part");
      if (kind == SampleKind::scalar && !m.psi) throw ValidationError("model has no scalar part");
      const SampleSet s = synthesize(m, count, resolve_seed(seed_arg), kind, noise);
      std::ostringstream csv;
      write_samples(csv, s);
      emit(csv.str(), output_path, out);
      return kExitOk;
    }
    throw UsageError("no subcommand");
  } catch (const UsageError& e) {
    err << "strucrep: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "strucrep: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotStabilizedError& e) {
    err << "strucrep: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "strucrep: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "strucrep: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace strucrep
