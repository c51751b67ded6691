#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "lhg/awsym.hpp"
#include "lhg/catalog.hpp"
#include "lhg/verify.hpp"

using namespace lhg;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  sub->add_option("--out", c.out, "write here instead of stdout");
}

void emit(const Common& c, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + c.out);
  f << body;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string cell_name(int n, int k) { return "(" + std::to_string(n) + "," + std::to_string(k) + ")"; }

int threads_from_env() {
  const char* v = std::getenv("LHG_THREADS");
  if (!v || !*v) return 1;
  int n = std::atoi(v);
  if (n < 1) throw UsageError("LHG_THREADS must be a positive integer");
  return n;
}

// results come back in input order whatever the thread count
std::vector<CheckReport> run_parallel(const std::vector<std::function<CheckReport()>>& jobs) {
  std::vector<CheckReport> out(jobs.size());
  int workers = std::min<int>(threads_from_env(), int(jobs.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) out[i] = jobs[i]();
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < jobs.size();) try {
          out[i] = jobs[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string csv_quote(const std::string& s) {
  std::string r = "\"";
  for (char ch : s) r += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return r + "\"";
}

std::string reports_body(const std::vector<CheckReport>& reps, const std::string& format) {
  if (format == "json") return dump(reports_json(reps));
  std::ostringstream os;
  if (format == "csv") {
    os << "check,pass,counterexamples\n";
    for (const auto& r : reps) {
      std::string joined;
      for (const auto& c : r.counterexamples) joined += (joined.empty() ? "" : "; ") + c;
      os << csv_quote(r.check) << "," << (r.pass ? "true" : "false") << "," << csv_quote(joined) << "\n";
    }
    return os.str();
  }
  for (const auto& r : reps) {
    os << (r.pass ? "PASS " : "FAIL ") << r.check << "\n";
    for (const auto& c : r.counterexamples) os << "  " << c << "\n";
  }
  return os.str();
}

bool all_pass(const std::vector<CheckReport>& reps) {
  for (const auto& r : reps)
    if (!r.pass) return false;
  return true;
}

std::optional<TruncSpec> trunc_for(const WeightSystem& w, std::optional<int> D) {
  if (D) return TruncSpec{*D};
  if (w.infinite()) return TruncSpec{4};
  return std::nullopt;
}

// ---- verbs ----

int cmd_families(const Common& c) {
  auto m = families_manifest();
  if (c.format == "json") {
    emit(c, dump(m));
    return 0;
  }
  std::ostringstream os;
  if (c.format == "csv") os << "family,parameters,basis,system,target,height\n";
  for (const auto& f : m) {
    std::string params;
    for (const auto& p : f["parameters"]) params += p.get<std::string>();
    for (const auto& s : f["systems"]) {
      std::string h = s["height"].is_string() ? s["height"].get<std::string>() : std::to_string(s["height"].get<int>());
      if (c.format == "csv")
        os << f["name"].get<std::string>() << "," << params << "," << csv_quote(f["basis"]) << ","
           << s["label"].get<std::string>() << "," << s["target"].get<std::string>() << "," << h << "\n";
      else
        os << f["name"].get<std::string>() << "/" << s["label"].get<std::string>() << "  height " << h << "  -> "
           << s["target"].get<std::string>() << "\n";
    }
  }
  emit(c, os.str());
  return 0;
}

struct MomentsArgs {
  std::string family, system, target;
  std::optional<int> n, k, max_n, trunc;
  bool closed = false;
};

int cmd_moments(const Common& c, const MomentsArgs& a) {
  if (a.n.has_value() != a.k.has_value()) throw UsageError("--n and --k go together");
  if (a.n && a.max_n) throw UsageError("give either --n/--k or --max-n");
  if (!a.closed && a.system.empty()) throw UsageError("--system is required unless --closed is given");
  std::optional<TruncSpec> D;
  std::string source;
  TriangularArray arr;
  int N = a.n ? *a.n : a.max_n.value_or(5);
  if (N < 0 || (a.k && (*a.k < 0 || *a.k > N))) throw UsageError("need 0 <= k <= n");
  if (a.closed) {
    Target t = a.target.empty() ? (a.system.empty() ? Target::sigma : system_entry(a.family, a.system).target)
                                : parse_target(a.target);
    if (a.trunc) D = TruncSpec{*a.trunc};
    arr = closed_array(a.family, t, N);
    if (D) arr = series_array(arr, *D);
    source = "closed:" + target_name(t);
  } else {
    auto w = weight_system(a.family, a.system);
    D = trunc_for(w, a.trunc);
    arr = h_array(w, N, D);
    source = "paths:" + a.system;
  }
  nlohmann::json meta = {{"family", a.family}, {"source", source}};
  if (D) meta["trunc"] = D->D;
  if (a.n) {
    Frac v = arr.at(*a.n, *a.k);
    if (c.format == "text") {
      emit(c, v.str() + "\n");
    } else if (c.format == "csv") {
      emit(c, "n,k,polynomial\n" + std::to_string(*a.n) + "," + std::to_string(*a.k) + "," + csv_quote(v.str()) + "\n");
    } else {
      meta["n"] = *a.n;
      meta["k"] = *a.k;
      meta["num"] = v.num().to_json();
      meta["den"] = v.den().to_json();
      meta["text"] = v.str();
      emit(c, dump(meta));
    }
    return 0;
  }
  if (c.format == "csv") {
    emit(c, arr.to_csv());
  } else if (c.format == "text") {
    std::ostringstream os;
    for (int n = 0; n <= N; ++n)
      for (int k = 0; k <= n; ++k) os << "(" << n << "," << k << ") " << arr.at(n, k).str() << "\n";
    emit(c, os.str());
  } else {
    meta["array"] = arr.to_json();
    emit(c, dump(meta));
  }
  return 0;
}

int cmd_grid(const Common& c, const std::string& fam, const std::string& sys, int rows, int cols) {
  auto w = weight_system(fam, sys);
  if (w.height) rows = std::min(rows, *w.height);
  if (c.format == "json") {
    emit(c, dump(grid_json(w, rows, cols)));
  } else if (c.format == "text") {
    emit(c, grid_text(w, rows, cols));
  } else {
    std::ostringstream os;
    os << "t,i,j,weight\n";
    for (int t = 0; t < rows; ++t)
      for (int i = 0; i < cols; ++i)
        for (int j = 0; j <= i; ++j) os << t << "," << i << "," << j << "," << csv_quote(w(t, i, j).str()) << "\n";
    emit(c, os.str());
  }
  return 0;
}

struct VerifyArgs {
  bool all = false;
  std::string family;
  std::optional<int> criterion, max_n, trunc;
  std::string timings;
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
  int picked = int(a.all) + int(!a.family.empty()) + int(a.criterion.has_value());
  if (picked != 1) throw UsageError("give exactly one of --all, --family, --criterion");
  std::vector<std::function<CheckReport()>> jobs;
  if (!a.family.empty()) {
    family(a.family);
    int nf = a.max_n.value_or(6), ni = a.max_n.value_or(5);
    TruncSpec D{a.trunc.value_or(4)};
    std::string fam = a.family;
    jobs.push_back([=] { return verify_family(fam, nf, ni, D); });
  } else if (a.criterion) {
    int id = *a.criterion;
    if (id < 1 || id > int(acceptance_criteria().size())) throw UsageError("criteria run from 1 to 10");
    jobs.push_back([id] { return run_criterion(id); });
  } else {
    for (const auto& cr : acceptance_criteria()) {
      int id = cr.id;
      jobs.push_back([id] { return run_criterion(id); });
    }
  }
  auto reps = run_parallel(jobs);
  emit(c, reports_body(reps, c.format));
  if (!a.timings.empty()) {
    // wall-clock numbers live outside the main output so that stays reproducible
    nlohmann::json t = nlohmann::json::array();
    for (const auto& r : reps) t.push_back({{"check", r.check}, {"seconds", r.seconds}});
    std::ofstream f(a.timings);
    if (!f) throw UsageError("cannot write " + a.timings);
    f << t.dump(2) << "\n";
  }
  return all_pass(reps) ? 0 : 1;
}

int cmd_duality(const Common& c, const std::string& fam, const std::string& sys, std::optional<int> max_n,
                std::optional<int> trunc) {
  std::vector<std::string> labels;
  if (sys.empty())
    for (const auto& s : family(fam).systems) labels.push_back(s.label);
  else
    labels.push_back(sys);
  std::vector<std::function<CheckReport()>> jobs;
  for (const auto& l : labels) {
    auto w = weight_system(fam, l);
    auto D = trunc_for(w, trunc);
    int N = max_n.value_or(w.infinite() ? 5 : 6);
    jobs.push_back([w, N, D] { return check_duality(w, N, D); });
  }
  auto reps = run_parallel(jobs);
  emit(c, reports_body(reps, c.format));
  return all_pass(reps) ? 0 : 1;
}

int cmd_extract(const Common& c, const std::string& fam, const std::string& sys, int max_i, const std::string& from) {
  auto w = weight_system(fam, sys);
  const auto& entry = system_entry(fam, sys);
  const auto& f = family(fam);
  bool closed_ok = std::find(f.closed.begin(), f.closed.end(), entry.target) != f.closed.end();
  bool use_closed = from == "closed" || (from == "auto" && closed_ok);
  if (use_closed && !closed_ok) throw UsageError(fam + " has no closed form for " + target_name(entry.target));
  if (!use_closed && w.infinite()) throw UsageError("path sums of an infinite system are only series; use --from closed");
  auto arr = use_closed ? closed_array(fam, entry.target, max_i + 1) : h_array(w, max_i + 1);
  auto table = extract_height1(arr);

  CheckReport rep;
  rep.check = "extract:" + w.name;
  rep.range = {{"max_i", max_i}, {"source", use_closed ? "closed" : "paths"}};
  bool comparable = w.height == 1;
  nlohmann::json cells = nlohmann::json::array();
  std::ostringstream text, csv;
  csv << "i,j,weight\n";
  for (int i = 0; i <= max_i; ++i)
    for (int j = 0; j <= i; ++j) {
      const Frac& x = table[i][j];
      cells.push_back({{"i", i}, {"j", j}, {"weight", x.str()}});
      text << "w(0;" << i << "," << j << ") = " << x.str() << "\n";
      csv << i << "," << j << "," << csv_quote(x.str()) << "\n";
      if (comparable && !(x == w(0, i, j)))
        rep.fail("w(0;" + std::to_string(i) + "," + std::to_string(j) + ") differs from the catalog weight");
    }
  if (!comparable) rep.range["note"] = "system has height > 1; extracted table is the unique height-1 system";
  if (c.format == "json") {
    auto j = rep.to_json();
    j["weights"] = cells;
    emit(c, dump(j));
  } else if (c.format == "csv") {
    emit(c, csv.str());
  } else {
    emit(c, text.str() + reports_body({rep}, "text"));
  }
  return rep.pass ? 0 : 1;
}

struct GuessArgs {
  std::string family, order, compare;
  int steps = 10, cols = 4;
};

int cmd_guess(const Common& c, GuessArgs a) {
  static const std::map<std::string, std::pair<std::string, std::string>> defaults{
      {"q-bessel", {"q<a", "infinite"}},
      {"little-qjacobi", {"q<a<b", "infinite"}},
      {"big-qjacobi", {"q<c<a<b", "full"}},
      {"askey-wilson", {"q<d<c<a<b", "full"}}};
  auto it = defaults.find(a.family);
  if (a.order.empty()) {
    if (it == defaults.end()) throw UsageError("no default order for " + a.family + "; pass --order");
    a.order = it->second.first;
  }
  if (a.compare.empty() && it != defaults.end()) a.compare = it->second.second;
  if (a.compare == "none") a.compare.clear();
  std::string fam = a.family;
  family(fam);
  auto table = guess_infinite([fam](int n) { return closed_sigma(fam, n, n - 1); }, MonomialOrder::parse(a.order),
                              a.steps, a.cols);
  CheckReport rep;
  rep.check = "guess:" + fam + " " + a.order;
  rep.range = {{"steps", a.steps}, {"columns", a.cols}};
  if (!a.compare.empty()) {
    auto w = weight_system(fam, a.compare);
    rep.range["compare"] = w.name;
    for (int i = 0; i < a.cols; ++i) {
      if (table[i].size() != size_t(a.steps)) rep.fail("column " + std::to_string(i) + " incomplete");
      for (size_t s = 0; s < table[i].size(); ++s)
        if (!(Frac(table[i][s]) == w(int(s) / (i + 1), i, int(s) % (i + 1))))
          rep.fail("column " + std::to_string(i) + " step " + std::to_string(s));
    }
  }
  nlohmann::json cols = nlohmann::json::array();
  std::ostringstream text, csv;
  csv << "i,step,weight\n";
  for (int i = 0; i < a.cols; ++i) {
    nlohmann::json col = nlohmann::json::array();
    for (size_t s = 0; s < table[i].size(); ++s) {
      col.push_back(table[i][s].str());
      text << "column " << i << " step " << s << ": " << table[i][s].str() << "\n";
      csv << i << "," << s << "," << csv_quote(table[i][s].str()) << "\n";
    }
    cols.push_back(col);
  }
  if (c.format == "json") {
    auto j = rep.to_json();
    j["columns"] = cols;
    emit(c, dump(j));
  } else if (c.format == "csv") {
    emit(c, csv.str());
  } else {
    emit(c, text.str() + reports_body({rep}, "text"));
  }
  return rep.pass ? 0 : 1;
}

Perm4 parse_perm(const std::string& s) {
  if (s.size() != 4) throw UsageError("--perm takes four digits, e.g. 0213");
  Perm4 p{};
  std::array<bool, 4> seen{};
  for (int i = 0; i < 4; ++i) {
    int v = s[i] - '0';
    if (v < 0 || v > 3 || seen[v]) throw UsageError("--perm must be a permutation of 0123");
    seen[v] = true;
    p[i] = v;
  }
  return p;
}

int cmd_symmetry(const Common& c, std::optional<int> n, std::optional<int> k, int max_n, int trunc,
                 const std::string& perm) {
  if (n.has_value() != k.has_value()) throw UsageError("--n and --k go together");
  std::vector<Perm4> perms = perm == "all" ? all_perms4() : std::vector<Perm4>{parse_perm(perm)};
  std::vector<std::pair<int, int>> cells;
  if (n) {
    if (*k < 0 || *k > *n) throw UsageError("need 0 <= k <= n");
    cells.push_back({*n, *k});
  } else {
    for (int nn = 0; nn <= max_n; ++nn)
      for (int kk = std::max(0, nn - 3); kk <= nn; ++kk) cells.push_back({nn, kk});
  }
  std::vector<std::function<CheckReport()>> jobs;
  for (const auto& tau : perms)
    for (auto [nn, kk] : cells) {
      TruncSpec D{trunc};
      jobs.push_back([=] {
        auto r = symmetry_check(nn, kk, D, tau);
        r.check += " " + perm_str(tau) + " " + cell_name(nn, kk);
        return r;
      });
    }
  auto reps = run_parallel(jobs);
  emit(c, reports_body(reps, c.format));
  return all_pass(reps) ? 0 : 1;
}

int cmd_tp(const Common& c, int max_n, int minor_size, int trunc) {
  auto rep = total_positivity_check(max_n, minor_size, {trunc});
  emit(c, reports_body({rep}, c.format));
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moments and weight systems on lecture hall graphs"};
  app.require_subcommand(1);

  Common c_fam, c_mom, c_grid, c_ver, c_dual, c_ext, c_guess, c_sym, c_tp;

  auto* fam = app.add_subcommand("families", "list catalog families and weight systems");
  add_common(fam, c_fam);

  MomentsArgs ma;
  auto* mom = app.add_subcommand("moments", "path sums or closed forms of a mixed-moment array");
  mom->add_option("--family", ma.family)->required();
  mom->add_option("--system", ma.system, "weight system label");
  mom->add_option("--n", ma.n);
  mom->add_option("--k", ma.k);
  mom->add_option("--max-n", ma.max_n, "whole array up to this n (default 5)");
  mom->add_option("--trunc", ma.trunc, "parameter degree kept (default 4 for infinite systems)");
  mom->add_flag("--closed", ma.closed, "use the closed form instead of path sums");
  mom->add_option("--target", ma.target, "closed-form target, e.g. sigma or nu-factorial");
  add_common(mom, c_mom);

  std::string g_fam, g_sys;
  int g_rows = 6, g_cols = 4;
  auto* grid = app.add_subcommand("grid", "dump a weight grid");
  grid->add_option("--family", g_fam)->required();
  grid->add_option("--system", g_sys)->required();
  grid->add_option("--rows", g_rows)->capture_default_str()->check(CLI::NonNegativeNumber);
  grid->add_option("--cols", g_cols)->capture_default_str()->check(CLI::NonNegativeNumber);
  add_common(grid, c_grid);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_flag("--all", va.all, "the full acceptance suite");
  ver->add_option("--family", va.family, "closed forms, duality and definitions for one family");
  ver->add_option("--criterion", va.criterion, "one acceptance criterion (1-10)");
  ver->add_option("--max-n", va.max_n, "default 6 for finite and 5 for infinite systems");
  ver->add_option("--trunc", va.trunc, "default 4");
  ver->add_option("--timings", va.timings, "write per-check seconds to this file");
  add_common(ver, c_ver);

  std::string d_fam, d_sys;
  std::optional<int> d_max, d_trunc;
  auto* dual = app.add_subcommand("duality", "Kronecker sums of h and e");
  dual->add_option("--family", d_fam)->required();
  dual->add_option("--system", d_sys, "default: every system of the family");
  dual->add_option("--max-n", d_max);
  dual->add_option("--trunc", d_trunc);
  add_common(dual, c_dual);

  std::string e_fam, e_sys, e_from = "auto";
  int e_max = 4;
  auto* ext = app.add_subcommand("extract", "recover the height-1 weights from a moment array");
  ext->add_option("--family", e_fam)->required();
  ext->add_option("--system", e_sys)->required();
  ext->add_option("--max-i", e_max)->capture_default_str()->check(CLI::NonNegativeNumber);
  ext->add_option("--from", e_from, "closed, paths or auto")
      ->check(CLI::IsMember({"closed", "paths", "auto"}))
      ->capture_default_str();
  add_common(ext, c_ext);

  GuessArgs ga;
  auto* guess = app.add_subcommand("guess", "guess an infinite weight system from sigma_{n,n-1}");
  guess->add_option("--family", ga.family)->required();
  guess->add_option("--order", ga.order, "monomial order, least significant first, e.g. q<c<a<b");
  guess->add_option("--steps", ga.steps)->capture_default_str()->check(CLI::PositiveNumber);
  guess->add_option("--cols", ga.cols)->capture_default_str()->check(CLI::PositiveNumber);
  guess->add_option("--compare", ga.compare, "catalog system to compare with, or none");
  add_common(guess, c_guess);

  std::optional<int> s_n, s_k;
  int s_max = 4, s_trunc = 5;
  std::string s_perm = "all";
  auto* sym = app.add_subcommand("symmetry", "S4 symmetry of the rescaled Hermite-relative moments");
  sym->add_option("--n", s_n);
  sym->add_option("--k", s_k);
  sym->add_option("--max-n", s_max, "all n <= max-n with n - k <= 3")->capture_default_str();
  sym->add_option("--trunc", s_trunc)->capture_default_str();
  sym->add_option("--perm", s_perm, "images of 0123, e.g. 0213, or all")->capture_default_str();
  add_common(sym, c_sym);

  int t_max = 4, t_size = 2, t_trunc = 4;
  auto* tp = app.add_subcommand("tp-check", "nonnegativity of minors of the rescaled moments");
  tp->add_option("--max-n", t_max)->capture_default_str();
  tp->add_option("--minor-size", t_size)->capture_default_str()->check(CLI::PositiveNumber);
  tp->add_option("--trunc", t_trunc)->capture_default_str();
  add_common(tp, c_tp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fam) return cmd_families(c_fam);
    if (*mom) return cmd_moments(c_mom, ma);
    if (*grid) return cmd_grid(c_grid, g_fam, g_sys, g_rows, g_cols);
    if (*ver) return cmd_verify(c_ver, va);
    if (*dual) return cmd_duality(c_dual, d_fam, d_sys, d_max, d_trunc);
    if (*ext) return cmd_extract(c_ext, e_fam, e_sys, e_max, e_from);
    if (*guess) return cmd_guess(c_guess, ga);
    if (*sym) return cmd_symmetry(c_sym, s_n, s_k, s_max, s_trunc, s_perm);
    if (*tp) return cmd_tp(c_tp, t_max, t_size, t_trunc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CatalogError& e) {
    // unknown names are usage errors; anything else the catalog raises is a failed computation
    std::cerr << "error: " << e.what() << "\n";
    bool usage = dynamic_cast<const UnknownFamily*>(&e) || dynamic_cast<const UnknownLabel*>(&e) ||
                 std::string(e.what()).rfind("unknown target", 0) == 0;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
