#include "tropic/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifdef TROPIC_HAVE_OPENMP
#include <omp.h>
#endif

#include "cli/commands.hpp"
#include "tropic/bounds.hpp"
#include "tropic/minkowski.hpp"

namespace tropic::cli {

using network::BiasMode;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json layer_json(const network::LayerSpec& layer) {
  return json::parse(network::serialize_network(network::single_layer(layer)));
}

namespace {

struct Options {
  std::size_t jobs = 0;
  bool table = false;
  std::uint64_t max_signatures = arrangement::Budget{}.max_signatures;
  std::size_t max_poset = 20'000;

  std::size_t inputs = 0;
  std::vector<std::size_t> ranks;
  std::vector<std::size_t> widths;
  std::size_t rank = 0;
  std::size_t units = 0;
  bool no_bias = false;
  std::optional<std::size_t> fold;
  std::uint64_t seed = 0;
  std::int64_t grid_bound = network::SampleOptions{}.bound;
  std::size_t max_points = 4;
  std::size_t trials = 50;

  std::string network_file;
  std::vector<std::string> point_files;
  std::string output;
  std::string method = "all";
  bool require_simple = false;
  bool faces = false;
};

BiasMode mode_of(const Options& o) { return o.no_bias ? BiasMode::no_bias : BiasMode::with_bias; }

arrangement::Budget budget_of(const Options& o) {
  auto b = arrangement::Budget::from_env();
  b.max_signatures = o.max_signatures;
  return b;
}

json one_based(const std::vector<std::size_t>& idx) {
  json arr = json::array();
  for (std::size_t i : idx) arr.push_back(i + 1);
  return arr;
}

network::NetworkSpec load_network(const Options& o) { return network::parse_network(read_file(o.network_file)); }

network::LayerSpec load_layer(const Options& o, const char* what) {
  const auto net = load_network(o);
  if (net.layers.size() != 1) {
    throw PreconditionError(std::string(what) + " needs a single-layer network (got " +
                            std::to_string(net.layers.size()) + " layers)");
  }
  return net.layers.front();
}

// Writes the network to -o when given, otherwise inlines it.
void emit_network(Report& rep, const Options& o, const network::NetworkSpec& net) {
  const std::string text = network::serialize_network(net);
  if (o.output.empty()) {
    rep.results["network"] = json::parse(text);
  } else {
    write_file(o.output, text);
    rep.results["file"] = o.output;
  }
}

Report cmd_bounds_shallow(const Options& o) {
  Report rep;
  rep.results["inputs"] = o.inputs;
  rep.results["ranks"] = o.ranks;
  rep.results["bias"] = !o.no_bias;
  rep.results["regions_max"] = jsonutil::encode(bounds::shallow_formula(o.inputs, o.ranks, mode_of(o)));
  rep.results["trivial"] = jsonutil::encode(bounds::trivial_bound(o.ranks));
  return rep;
}

Report cmd_bounds_deep(const Options& o) {
  Report rep;
  rep.results["inputs"] = o.inputs;
  rep.results["widths"] = o.widths;
  rep.results["rank"] = o.rank;
  rep.results["bias"] = !o.no_bias;
  rep.results["upper"] = jsonutil::encode(bounds::deep_upper(o.inputs, o.widths, o.rank, mode_of(o)));
  try {
    const auto low = bounds::deep_lower(o.inputs, o.widths, o.rank, mode_of(o), o.fold);
    rep.results["lower"] = jsonutil::encode(low.value);
    rep.results["fold"] = low.n;
    rep.certificates["lower_admissible"] = true;
  } catch (const PreconditionError& e) {
    rep.results["lower"] = nullptr;
    rep.results["fold"] = nullptr;
    rep.certificates["lower_admissible"] = false;
    rep.certificates["lower_note"] = e.what();
  }
  return rep;
}

Report cmd_bounds_prior(const Options& o) {
  Report rep;
  const auto p = bounds::prior_bounds(o.inputs, o.units, o.rank);
  rep.results["inputs"] = o.inputs;
  rep.results["units"] = o.units;
  rep.results["rank"] = o.rank;
  rep.results["prior_lower"] = jsonutil::encode(p.lower);
  rep.results["prior_upper"] = jsonutil::encode(p.upper);
  const std::vector<std::size_t> ranks(o.units, o.rank);
  rep.results["regions_max"] = jsonutil::encode(bounds::shallow_formula(o.inputs, ranks, BiasMode::with_bias));
  return rep;
}

Report cmd_regions_count(const Options& o) {
  const auto& m = o.method;
  if (m != "pattern" && m != "poset" && m != "dual" && m != "all") {
    throw InputError("--method must be pattern, poset, dual or all");
  }
  const auto budget = budget_of(o);
  const auto net = load_network(o);
  Report rep;
  rep.certificates["budget_hit"] = false;

  if (net.layers.size() != 1) {
    if (m == "poset" || m == "dual") throw PreconditionError("the " + m + " method needs a single-layer network");
    if (o.require_simple) throw PreconditionError("--require-simple applies to single-layer networks");
    rep.results["layers"] = net.layers.size();
    rep.results["pattern"] = arrangement::count_regions_deep(net, budget);
    return rep;
  }

  const auto& layer = net.layers.front();
  const auto arr = arrangement::build_atoms(layer);
  const auto cert = arrangement::is_simple(arr);
  rep.certificates["simple"] = cert.simple;
  rep.certificates["central"] = arr.central;
  if (o.require_simple && !cert.simple) {
    std::ostringstream msg;
    msg << "arrangement is not simple; violating atoms:";
    for (std::size_t a : cert.violating_atoms) {
      msg << " (unit " << arr.atoms[a].unit + 1 << ", " << arr.atoms[a].a + 1 << "|" << arr.atoms[a].b + 1 << ")";
    }
    throw PreconditionError(msg.str());
  }
  rep.results["atoms"] = arr.atoms.size();

  std::vector<std::uint64_t> counts;
  if (m == "pattern" || m == "all") {
    if (o.faces) {
      const auto cells = arrangement::enumerate_cells(layer, budget);
      std::vector<std::uint64_t> by_dim(layer.input_dim + 1, 0);
      std::uint64_t bounded = 0;
      for (const auto& c : cells) {
        ++by_dim[static_cast<std::size_t>(c.dim)];
        if (c.dim == static_cast<int>(layer.input_dim) && c.bounded) ++bounded;
      }
      rep.results["pattern"] = {{"regions", by_dim.back()}, {"bounded_regions", bounded}, {"faces", by_dim}};
      counts.push_back(by_dim.back());
    } else {
      const auto c = arrangement::count_regions_bruteforce(layer, budget);
      rep.results["pattern"] = {{"regions", c.regions}, {"bounded_regions", c.bounded_regions}};
      counts.push_back(c.regions);
    }
  }
  if (m == "poset" || m == "all") {
    const auto poset = arrangement::build_poset(arr, o.max_poset);
    const auto regions = arrangement::count_regions_poset(poset);
    json entry = {{"regions", regions}, {"elements", poset.elements.size()}};
    if (o.faces) {
      json faces = json::array();
      for (int s = 0; s < static_cast<int>(layer.input_dim); ++s) faces.push_back(arrangement::count_faces_poset(poset, s));
      faces.push_back(regions);
      entry["faces"] = faces;
    }
    rep.results["poset"] = entry;
    counts.push_back(static_cast<std::uint64_t>(regions));
  }
  if (m == "dual" || m == "all") {
    const auto v = minkowski::dual_region_count(layer);
    rep.results["dual"] = {{"regions", v}};
    counts.push_back(v);
  }
  if (m == "all") {
    const bool same = std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) == counts.end();
    rep.results["consistent"] = same;
    if (o.faces) rep.results["faces_consistent"] = rep.results["pattern"]["faces"] == rep.results["poset"]["faces"];
  }
  return rep;
}

Report cmd_regions_cells(const Options& o) {
  const auto layer = load_layer(o, "cell listing");
  const auto cells = arrangement::enumerate_cells(layer, budget_of(o));
  Report rep;
  json list = json::array();
  for (const auto& c : cells) {
    json sig = json::array();
    for (const auto& s : c.signature) sig.push_back(one_based(s));
    list.push_back({{"signature", sig}, {"dim", c.dim}, {"bounded", c.bounded}, {"witness", jsonutil::encode(c.witness)}});
  }
  rep.results["cells"] = list;
  rep.results["count"] = cells.size();
  return rep;
}

Report cmd_construct(const Options& o, const std::string& which) {
  Report rep;
  rep.seed = o.seed;
  if (which == "deep-lower") {
    const auto d = network::construct_deep_lower(o.inputs, o.widths, o.rank, o.seed);
    emit_network(rep, o, d.network);
    rep.results["folded_dim"] = d.folded_dim;
    rep.results["regions_lower"] =
        jsonutil::encode(bounds::deep_lower(o.inputs, o.widths, o.rank, BiasMode::with_bias, d.folded_dim).value);
    return rep;
  }
  const bool nobias = which == "shallow-max-nobias";
  const auto layer = nobias ? network::construct_shallow_optimal_nobias(o.inputs, o.ranks, o.seed)
                            : network::construct_shallow_optimal(o.inputs, o.ranks, o.seed);
  emit_network(rep, o, network::single_layer(layer));
  rep.results["regions_expected"] =
      jsonutil::encode(bounds::shallow_formula(o.inputs, o.ranks, nobias ? BiasMode::no_bias : BiasMode::with_bias));
  rep.certificates["simple"] = true;
  return rep;
}

Report cmd_sample(const Options& o) {
  Report rep;
  rep.seed = o.seed;
  network::SampleOptions opts;
  opts.bound = o.grid_bound;
  const auto layer = network::sample_generic(o.inputs, o.ranks, mode_of(o), o.seed, opts);
  emit_network(rep, o, network::single_layer(layer));
  rep.certificates["simple"] = true;
  return rep;
}

Report cmd_poset_dump(const Options& o) {
  const auto layer = load_layer(o, "poset dump");
  const auto arr = arrangement::build_atoms(layer);
  const auto poset = arrangement::build_poset(arr, o.max_poset);
  Report rep;
  json atoms = json::array();
  for (std::size_t i = 0; i < arr.atoms.size(); ++i) {
    const auto& a = arr.atoms[i];
    atoms.push_back({{"id", i + 1}, {"unit", a.unit + 1}, {"pair", {a.a + 1, a.b + 1}}});
  }
  json elements = json::array();
  for (const auto& e : poset.elements) {
    elements.push_back({{"id", e.id + 1},
                        {"dim", e.dim},
                        {"psi", e.psi},
                        {"mu", poset.mu(e.id)},
                        {"atoms", one_based(e.atoms)},
                        {"support", e.support ? one_based(*e.support) : json(nullptr)}});
  }
  json covers = json::array();
  for (const auto& [x, y] : poset.covers) covers.push_back({x + 1, y + 1});
  rep.results["atoms"] = atoms;
  rep.results["elements"] = elements;
  rep.results["covers"] = covers;
  rep.results["regions"] = arrangement::count_regions_poset(poset);
  rep.certificates["central"] = arr.central;
  return rep;
}

json classification_json(const minkowski::LabeledPointSet& set, const minkowski::VertexClassification& c) {
  json flags = json::array();
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const auto& f = c.flags[i];
    flags.push_back({{"point", jsonutil::encode(set.points[i])},
                     {"vertex", f.vertex},
                     {"upper", f.upper},
                     {"strict_lower", f.strict_lower}});
  }
  return {{"points", set.points.size()}, {"vertices", c.vertices},       {"upper", c.upper},
          {"strict_lower", c.strict_lower}, {"horizontal_only", c.horizontal_only}, {"flags", flags}};
}

std::vector<minkowski::LabeledPointSet> load_point_sets(const Options& o) {
  std::vector<minkowski::LabeledPointSet> sets;
  if (!o.network_file.empty()) sets = minkowski::lift_layer(load_layer(o, "lifting"));
  for (const auto& f : o.point_files) sets.push_back(minkowski::parse_point_set(read_file(f)));
  if (sets.empty()) throw InputError("give --points or --network");
  return sets;
}

Report cmd_minkowski(const Options& o, const std::string& which) {
  Report rep;
  if (which == "classify") {
    if (o.point_files.size() != 1) throw InputError("classify takes exactly one --points file");
    const auto set = minkowski::parse_point_set(read_file(o.point_files.front()));
    rep.results = classification_json(set, minkowski::classify_vertices(set));
  } else if (which == "sum") {
    const auto sum = minkowski::minkowski_sum(load_point_sets(o));
    const std::string text = minkowski::serialize_point_set(sum);
    rep.results["count"] = sum.points.size();
    if (o.output.empty()) {
      rep.results["sum"] = json::parse(text);
    } else {
      write_file(o.output, text);
      rep.results["file"] = o.output;
    }
  } else if (which == "lift") {
    json sets = json::array();
    for (const auto& s : minkowski::lift_layer(load_layer(o, "lifting"))) {
      sets.push_back(json::parse(minkowski::serialize_point_set(s)));
    }
    rep.results["point_sets"] = sets;
  } else {
    rep.seed = o.seed;
    const auto fam = minkowski::sample_general_family(o.inputs, o.units, o.max_points, o.seed);
    json sets = json::array();
    for (const auto& s : fam.sets) sets.push_back(json::parse(minkowski::serialize_point_set(s)));
    rep.results["point_sets"] = sets;
    rep.certificates["general_orientation"] = true;
    rep.certificates["resamples"] = fam.resamples;
  }
  return rep;
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object() && j.empty()) {
    rows.emplace_back(prefix, "-");
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i + 1) + "]", rows);
  } else {
    rows.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void render_table(const json& report, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
}

void add_shape_options(CLI::App* sub, Options& o, bool ranks_required) {
  sub->add_option("--inputs", o.inputs, "input dimension n")->required()->check(CLI::PositiveNumber);
  auto* r = sub->add_option("--ranks", o.ranks, "comma-separated unit ranks")->delimiter(',');
  if (ranks_required) r->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Options o;
  std::function<Report()> action;

  CLI::App app{"Exact linear-region counting for maxout layers and networks", "tropic"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--jobs", o.jobs, "worker threads for cell enumeration and vertex LPs (0: runtime default)");
  app.add_flag("--table", o.table, "print a flat key/value table instead of JSON");
  app.add_option("--max-signatures", o.max_signatures, "signature budget for brute-force enumeration")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-poset", o.max_poset, "element budget for intersection posets")->check(CLI::PositiveNumber);

  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form region bounds")->require_subcommand(1);
  {
    auto* s = bounds_cmd->add_subcommand("shallow", "maximum regions of one layer");
    add_shape_options(s, o, true);
    s->add_flag("--no-bias", o.no_bias, "bias-free units");
    s->callback([&] { action = [&] { return cmd_bounds_shallow(o); }; });

    auto* d = bounds_cmd->add_subcommand("deep", "upper and lower bounds for deep networks");
    d->add_option("--inputs", o.inputs, "input dimension n0")->required()->check(CLI::PositiveNumber);
    d->add_option("--widths", o.widths, "comma-separated layer widths")->required()->delimiter(',');
    d->add_option("--rank", o.rank, "uniform unit rank")->required()->check(CLI::PositiveNumber);
    d->add_flag("--no-bias", o.no_bias, "bias-free units");
    d->add_option("--fold", o.fold, "fold dimension for the lower bound");
    d->callback([&] { action = [&] { return cmd_bounds_deep(o); }; });

    auto* p = bounds_cmd->add_subcommand("prior", "earlier bounds next to the exact maximum");
    p->add_option("--inputs", o.inputs, "input dimension n")->required()->check(CLI::PositiveNumber);
    p->add_option("--units", o.units, "number of units m")->required()->check(CLI::PositiveNumber);
    p->add_option("--rank", o.rank, "uniform unit rank")->required()->check(CLI::PositiveNumber);
    p->callback([&] { action = [&] { return cmd_bounds_prior(o); }; });
  }

  auto* regions_cmd = app.add_subcommand("regions", "count or list regions of a network")->require_subcommand(1);
  {
    auto* c = regions_cmd->add_subcommand("count", "count regions by one or more methods");
    c->add_option("--network", o.network_file, "network JSON file")->required();
    c->add_option("--method", o.method, "pattern, poset, dual or all");
    c->add_flag("--require-simple", o.require_simple, "fail unless the arrangement is simple");
    c->add_flag("--faces", o.faces, "also count faces of every dimension");
    c->callback([&] { action = [&] { return cmd_regions_count(o); }; });

    auto* l = regions_cmd->add_subcommand("cells", "list every nonempty activation cell");
    l->add_option("--network", o.network_file, "network JSON file")->required();
    l->callback([&] { action = [&] { return cmd_regions_cells(o); }; });
  }

  auto* construct_cmd = app.add_subcommand("construct", "emit certified constructions")->require_subcommand(1);
  for (const std::string which : {"shallow-max", "shallow-max-nobias"}) {
    auto* s = construct_cmd->add_subcommand(which, which == "shallow-max" ? "layer attaining the maximum"
                                                                          : "bias-free layer attaining the maximum");
    add_shape_options(s, o, true);
    s->add_option("--seed", o.seed, "random seed")->required();
    s->add_option("-o,--output", o.output, "write the network here");
    s->callback([&, which] { action = [&, which] { return cmd_construct(o, which); }; });
  }
  {
    auto* d = construct_cmd->add_subcommand("deep-lower", "folding network for the deep lower bound");
    d->add_option("--inputs", o.inputs, "input dimension n0")->required()->check(CLI::PositiveNumber);
    d->add_option("--widths", o.widths, "comma-separated layer widths")->required()->delimiter(',');
    d->add_option("--rank", o.rank, "uniform unit rank")->required()->check(CLI::PositiveNumber);
    d->add_option("--seed", o.seed, "random seed")->required();
    d->add_option("-o,--output", o.output, "write the network here");
    d->callback([&] { action = [&] { return cmd_construct(o, "deep-lower"); }; });
  }

  {
    auto* s = app.add_subcommand("sample", "seeded generic layer");
    add_shape_options(s, o, true);
    s->add_flag("--no-bias", o.no_bias, "bias-free units");
    s->add_option("--seed", o.seed, "random seed")->required();
    s->add_option("--bound", o.grid_bound, "integer coefficients in [-bound, bound]")->check(CLI::PositiveNumber);
    s->add_option("-o,--output", o.output, "write the network here");
    s->callback([&] { action = [&] { return cmd_sample(o); }; });
  }

  auto* poset_cmd = app.add_subcommand("poset", "intersection poset")->require_subcommand(1);
  {
    auto* d = poset_cmd->add_subcommand("dump", "elements, Moebius values and cover relations");
    d->add_option("--network", o.network_file, "single-layer network JSON file")->required();
    d->callback([&] { action = [&] { return cmd_poset_dump(o); }; });
  }

  auto* mink_cmd = app.add_subcommand("minkowski", "lifted polytopes and their sums")->require_subcommand(1);
  {
    auto* c = mink_cmd->add_subcommand("classify", "upper, strict-lower and non-vertex points");
    c->add_option("--points", o.point_files, "point-set JSON file")->required();
    c->callback([&] { action = [&] { return cmd_minkowski(o, "classify"); }; });

    auto* s = mink_cmd->add_subcommand("sum", "Minkowski sum of point sets or of a lifted layer");
    s->add_option("--points", o.point_files, "point-set JSON files");
    s->add_option("--network", o.network_file, "single-layer network to lift first");
    s->add_option("-o,--output", o.output, "write the sum here");
    s->callback([&] { action = [&] { return cmd_minkowski(o, "sum"); }; });

    auto* l = mink_cmd->add_subcommand("lift", "coefficient point sets of each unit");
    l->add_option("--network", o.network_file, "single-layer network JSON file")->required();
    l->callback([&] { action = [&] { return cmd_minkowski(o, "lift"); }; });

    auto* g = mink_cmd->add_subcommand("sample", "seeded point-set family in general orientation");
    g->add_option("--inputs", o.inputs, "n (points live in dimension n+1)")->required()->check(CLI::PositiveNumber);
    g->add_option("--units", o.units, "number of point sets")->required()->check(CLI::PositiveNumber);
    g->add_option("--max-points", o.max_points, "points per set")->check(CLI::Range(2, 64));
    g->add_option("--seed", o.seed, "random seed")->required();
    g->callback([&] { action = [&] { return cmd_minkowski(o, "sample"); }; });
  }

  auto* verify_cmd = app.add_subcommand("verify", "randomized identity checks")->require_subcommand(1);
  {
    auto* v = verify_cmd->add_subcommand("identities", "every identity suite on seeded instances");
    v->add_option("--trials", o.trials, "instances per suite")->check(CLI::PositiveNumber);
    v->add_option("--seed", o.seed, "random seed")->required();
    v->callback([&] { action = [&] { return verify_identities(o.trials, o.seed, budget_of(o)); }; });
  }

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

#ifdef TROPIC_HAVE_OPENMP
  if (o.jobs > 0) omp_set_num_threads(static_cast<int>(o.jobs));
#endif

  Report rep;
  try {
    rep = action();
  } catch (const BudgetExceeded& e) {
    err << "tropic: " << e.what() << " (raise " << e.flag() << ")\n";
    return exit_budget;
  } catch (const PreconditionError& e) {
    err << "tropic: " << e.what() << '\n';
    return exit_precondition;
  } catch (const InputError& e) {
    err << "tropic: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "tropic: internal error: " << e.what() << '\n';
    return exit_internal;
  }

  std::string command = "tropic";
  for (const auto& a : args) command += " " + a;
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  json report = {{"command", command},
                 {"seed", rep.seed ? json(*rep.seed) : json(nullptr)},
                 {"results", rep.results},
                 {"certificates", rep.certificates},
                 {"timing", {{"wall_ms", std::llround(elapsed)}}}};
  if (o.table) {
    render_table(report, out);
  } else {
    out << report.dump(2) << '\n';
  }
  if (rep.exit_code == exit_identity) err << "tropic: identity violated; counterexamples are in the report\n";
  return rep.exit_code;
}

}  // namespace tropic::cli
