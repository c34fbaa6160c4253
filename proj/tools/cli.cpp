#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "grapes/binpoly.hpp"
#include "grapes/configs.hpp"
#include "grapes/errors.hpp"
#include "grapes/exactla.hpp"
#include "grapes/graph.hpp"
#include "grapes/hilbert.hpp"
#include "grapes/swiatkowski.hpp"

namespace grapes::cli {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ResourceLimit:
    case ErrorCode::CapExceeded: return kResourceLimit;
    case ErrorCode::NonIntegerRoot:
    case ErrorCode::InconsistentDegrees:
    case ErrorCode::RoundTripMismatch: return kInverseFailed;
    default: return kInputError;
  }
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t t = 0; t < n; ++t) f(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t t; (t = next++) < n;) {
        try {
          f(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Syntax, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The files named on the command line followed by the sorted .grape files of --corpus.
std::vector<std::string> input_files(const std::vector<std::string>& files, const std::string& corpus) {
  std::vector<std::string> out = files;
  if (!corpus.empty()) {
    if (!fs::is_directory(corpus)) throw Error(ErrorCode::Syntax, "not a directory: " + corpus);
    std::vector<std::string> found;
    for (const auto& entry : fs::directory_iterator(corpus))
      if (entry.is_regular_file() && entry.path().extension() == ".grape") found.push_back(entry.path().string());
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  if (out.empty()) throw Error(ErrorCode::Syntax, "no input files");
  return out;
}

std::size_t top_degree(const HilbertTable& t) {
  return std::max(t.essential, t.polys.empty() ? std::size_t{0} : t.polys.size() - 1);
}

void print_table(const HilbertTable& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.polys.size(); ++i) out << 'P' << i << " = " << to_text(t.polys[i]) << '\n';
  for (const auto& [cell, d] : t.residual) out << "residual (" << cell.first << ',' << cell.second << ") " << d << '\n';
}

// --- hilbert ---

struct HilbertOpts {
  bool json = false;
};

int cmd_hilbert(const std::string& path, const HilbertOpts& o, std::ostream& out) {
  GrapeGraph g = load_grape(path);
  HilbertTable t = hilbert_table(g);
  if (o.json)
    out << to_json(t).dump(2) << '\n';
  else
    print_table(t, out);
  return kOk;
}

// --- betti ---

struct BettiOpts {
  long kmax = 5;
  int imax = -1;
  std::string field = "q";
  std::string dump_dir;
  bool unsafe_any = false;
  unsigned threads = 0;
  std::size_t slice_cap = kDefaultSliceCap;
};

// Multigraph reader for the unsafe path: the stem need not be a tree and
// `edge V V` is a loop.
PreparedGraph load_any_graph(const std::string& path, std::size_t& essential) {
  std::map<long long, VertexId> ids;
  auto intern = [&](long long label) { return ids.emplace(label, ids.size()).first->second; };
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::istringstream in(read_file(path));
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    long long a = 0, b = 0;
    if (!(ls >> a >> b) || a < 0) throw Error(ErrorCode::Syntax, "line " + std::to_string(no) + ": bad fields");
    if (kw == "edge") {
      if (b < 0) throw Error(ErrorCode::Syntax, "line " + std::to_string(no) + ": bad vertex");
      VertexId u = intern(a);
      edges.emplace_back(u, intern(b));
    } else if (kw == "loops") {
      VertexId v = intern(a);
      for (long long t = 0; t < b; ++t) edges.emplace_back(v, v);
    } else if (kw != "root") {
      throw Error(ErrorCode::Syntax, "line " + std::to_string(no) + ": unknown keyword '" + kw + "'");
    }
  }
  std::vector<int> deg(ids.size(), 0);
  for (auto [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  essential = static_cast<std::size_t>(std::count_if(deg.begin(), deg.end(), [](int d) { return d >= 3; }));
  return prepare_edges(ids.size(), edges);
}

int cmd_betti(const std::string& path, const BettiOpts& o, std::ostream& out) {
  const FieldSpec f = FieldSpec::parse(o.field);
  PreparedGraph pg;
  std::size_t top = 0;
  if (o.unsafe_any) {
    pg = load_any_graph(path, top);
  } else {
    GrapeGraph g = load_grape(path);
    top = top_degree(hilbert_table(g));
    pg = prepare(g);
  }
  const int imax = o.imax >= 0 ? o.imax : static_cast<int>(top) + 1;
  std::vector<std::vector<std::size_t>> cols(static_cast<std::size_t>(o.kmax) + 1);
  parallel_for(cols.size(), o.threads, [&](std::size_t k) { cols[k] = betti_column(pg, imax, static_cast<long>(k), f, o.slice_cap); });
  out << "i\\k";
  for (long k = 0; k <= o.kmax; ++k) out << '\t' << k;
  out << '\n';
  for (int i = 0; i <= imax; ++i) {
    out << i;
    for (long k = 0; k <= o.kmax; ++k) out << '\t' << cols[k][i];
    out << '\n';
  }
  if (!o.dump_dir.empty()) {
    fs::create_directories(o.dump_dir);
    for (int i = 1; i <= imax + 1; ++i)
      for (long k = 0; k <= o.kmax; ++k) {
        std::ofstream mf(fs::path(o.dump_dir) / ("d_" + std::to_string(i) + "_" + std::to_string(k) + ".mtx"));
        boundary_matrix(pg, i, k, o.slice_cap).write_matrix_market(mf);
      }
  }
  return kOk;
}

// --- verify ---

struct VerifyOpts {
  long kmax = 5;
  int imax = -1;
  long basis_kmax = -1;
  std::string field = "q";
  unsigned threads = 0;
  std::uint64_t cap = 20'000;
  std::size_t slice_cap = kDefaultSliceCap;
};

struct Tally {
  std::size_t pass = 0, total = 0;
  void add(bool ok) {
    ++total;
    pass += ok;
  }
  bool ok() const { return pass == total; }
};

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_verify(const std::string& path, const VerifyOpts& o, std::ostream& out) {
  const FieldSpec f = FieldSpec::parse(o.field);
  GrapeGraph g = load_grape(path);
  const HilbertTable t = hilbert_table(g);
  const PreparedGraph pg = prepare(g);
  const std::size_t top = top_degree(t);
  const int imax = o.imax >= 0 ? o.imax : static_cast<int>(top) + 1;
  const long bkmax = o.basis_kmax >= 0 ? o.basis_kmax : o.kmax;

  std::vector<std::vector<std::size_t>> cols(static_cast<std::size_t>(o.kmax) + 1);
  parallel_for(cols.size(), o.threads, [&](std::size_t k) { cols[k] = betti_column(pg, imax, static_cast<long>(k), f, o.slice_cap); });

  Tally oracle, vanish, basis, recur;
  for (int i = 0; i <= imax; ++i)
    for (long k = 0; k <= o.kmax; ++k) {
      const std::size_t b = cols[k][i];
      const mpz_class want = t.value(i, k);
      const bool ok = want == b;
      if (static_cast<std::size_t>(i) <= top) {
        oracle.add(ok);
        out << "oracle i=" << i << " k=" << k << " betti=" << b << " formula=" << want << ' ' << verdict(ok) << '\n';
      } else {
        vanish.add(ok);
        out << "vanish i=" << i << " k=" << k << " betti=" << b << ' ' << verdict(ok) << '\n';
      }
    }

  std::vector<std::pair<int, long>> cells;
  for (int i = 0; i <= std::min<int>(imax, static_cast<int>(top)); ++i)
    for (long k = 0; k <= bkmax; ++k) cells.emplace_back(i, k);
  std::vector<BasisCheck> checks(cells.size());
  parallel_for(cells.size(), o.threads, [&](std::size_t c) {
    checks[c] = basis_rank_check(g, cells[c].first, cells[c].second, f, o.cap, o.slice_cap);
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& r = checks[c];
    basis.add(r.equal);
    out << "basis i=" << cells[c].first << " k=" << cells[c].second << " count=" << r.count
        << " rank=" << r.rank_in_homology << " betti=" << r.betti << ' ' << verdict(r.equal)
        << (r.residual_cell ? " residual" : "") << '\n';
  }

  if (classify(g).kind == GraphKind::General)
    for (std::size_t e = 0; e < g.stem_edges().size(); ++e)
      for (std::size_t i = 0; i <= top; ++i)
        for (long k = 0; k <= o.kmax; ++k) {
          const bool ok = betti_recurrence_check(g, e, i, k);
          recur.add(ok);
          if (!ok) out << "recurrence edge=" << e << " i=" << i << " k=" << k << " FAIL\n";
        }

  out << "summary oracle " << oracle.pass << '/' << oracle.total << " vanish " << vanish.pass << '/' << vanish.total
      << " basis " << basis.pass << '/' << basis.total << " recurrence " << recur.pass << '/' << recur.total << '\n';
  const bool all = oracle.ok() && vanish.ok() && basis.ok() && recur.ok();
  out << verdict(all) << '\n';
  return all ? kOk : kVerifyFailed;
}

// --- enumerate ---

struct EnumOpts {
  int i = 0;
  long k = -1;
  int j = -1;
  std::string elem;
  std::string type = "both";
  bool count_only = false;
  std::uint64_t cap = 100'000;
};

TypeFilter parse_type(const std::string& s) {
  if (s == "1") return TypeFilter::One;
  if (s == "2") return TypeFilter::Two;
  if (s == "both") return TypeFilter::Both;
  throw Error(ErrorCode::Syntax, "--type must be 1, 2 or both");
}

int cmd_enumerate_elem(const EnumOpts& o, std::ostream& out) {
  int ell = 0, m = 0;
  char comma = 0;
  std::istringstream ss(o.elem);
  if (!(ss >> ell >> comma >> m) || comma != ',' || !ss.eof()) throw Error(ErrorCode::Syntax, "--elem expects L,M");
  check_shape(ell, m);
  const TypeFilter tf = parse_type(o.type);
  if (o.j >= 0) {
    auto xs = enum_she_elem(ell, m, o.j, tf);
    if (o.count_only)
      out << xs.size() << '\n';
    else
      for (const auto& x : xs) out << render(x) << '\n';
  } else {
    if (o.count_only) {
      mpz_class n = 0;
      if (tf != TypeFilter::Two) n += he_count_closed(ell, m, o.k, 1);
      if (tf != TypeFilter::One) n += he_count_closed(ell, m, o.k, 2);
      out << n << '\n';
      return kOk;
    }
    auto xs = enum_he_elem(ell, m, o.k, tf);
    if (xs.size() > o.cap) throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(o.cap) + " configurations");
    for (const auto& x : xs) out << render(x) << '\n';
  }
  return kOk;
}

int cmd_enumerate(const std::string& path, const EnumOpts& o, std::ostream& out) {
  GrapeGraph g = load_grape(path);
  const Classification c = classify(g);
  const bool standard = o.j >= 0;
  if (c.kind == GraphKind::General) {
    if (standard) {
      if (o.count_only) {
        out << count_she_grape(g, o.i, o.j) << '\n';
        return kOk;
      }
      for (const auto& x : enum_she_grape(g, o.i, o.j)) out << render(x, g) << '\n';
    } else {
      if (o.count_only) {
        out << count_he_grape(g, o.i, o.k) << '\n';
        return kOk;
      }
      for (const auto& x : enum_he_grape(g, o.i, o.k, o.cap)) out << render(x, g) << '\n';
    }
    return kOk;
  }
  // Interval, circle and bouquets: the empty configuration, plus the appendix
  // configurations at the single vertex in degree 1.
  std::vector<std::string> lines;
  if (o.i == 0 && (!standard || o.j == 0)) lines.push_back(standard ? "W={} j={}" : "W={} j={} c=()");
  if (o.i == 1 && c.kind != GraphKind::Interval) {
    const std::string prefix = "W={" + std::to_string(g.labels().at(0)) + "} ";
    if (standard)
      for (const auto& x : enum_she_elem(c.loops, 0, o.j)) lines.push_back(prefix + render(x));
    else
      for (const auto& x : enum_he_elem(c.loops, 0, o.k)) lines.push_back(prefix + render(x));
  }
  if (lines.size() > o.cap) throw Error(ErrorCode::CapExceeded, "more than " + std::to_string(o.cap) + " configurations");
  if (o.count_only)
    out << lines.size() << '\n';
  else
    for (const auto& l : lines) out << l << '\n';
  return kOk;
}

// --- recover ---

struct RecoverOpts {
  bool allow_bouquet = false;
};

int cmd_recover(const std::string& path, const RecoverOpts& o, std::ostream& out) {
  std::vector<BinPoly> polys;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    polys.push_back(parse_binpoly(line));
  }
  out << render_local_data(recover_local_data(polys, o.allow_bouquet)) << '\n';
  return kOk;
}

// --- cycles ---

struct CyclesOpts {
  int i = 1;
  long k = 2;
  std::string field = "q";
  bool chains = false;
  std::uint64_t cap = 20'000;
};

int cmd_cycles(const std::string& path, const CyclesOpts& o, std::ostream& out) {
  const FieldSpec f = FieldSpec::parse(o.field);
  GrapeGraph g = load_grape(path);
  const PreparedGraph pg = prepare(g);
  std::vector<Chain> chains = he_cycles(g, pg, o.i, o.k, o.cap);
  std::vector<std::string> names;
  if (classify(g).kind == GraphKind::General) {
    for (const auto& x : enum_he_grape(g, o.i, o.k, o.cap)) names.push_back(render(x, g));
  } else if (o.i == 0) {
    names.push_back("W={} j={} c=()");
  } else {
    for (std::size_t t = 0; t < chains.size(); ++t) names.push_back("cycle " + std::to_string(t));
  }
  for (std::size_t t = 0; t < chains.size(); ++t) {
    out << names[t] << "  terms=" << chains[t].terms.size() << '\n';
    if (o.chains)
      for (const auto& [x, c] : chains[t].terms) out << "  " << (c > 0 ? "+" : "") << c << ' ' << render(pg, x) << '\n';
  }
  const BasisCheck r = basis_rank_check(g, o.i, o.k, f, o.cap);
  out << "count=" << r.count << " rank=" << r.rank_in_homology << " betti=" << r.betti
      << " equal=" << (r.equal ? "true" : "false") << (r.residual_cell ? " residual" : "") << '\n';
  return r.equal ? kOk : kVerifyFailed;
}

// --- series ---

struct SeriesOpts {
  long kmax = 5;
  int imax = -1;
  bool disjoint = false;
  bool bridge = false;
};

int cmd_series(const std::vector<std::string>& files, const SeriesOpts& o, std::ostream& out) {
  if (o.disjoint || o.bridge) {
    if (o.disjoint && o.bridge) throw Error(ErrorCode::Syntax, "--union and --bridge are exclusive");
    if (files.size() != 2) throw Error(ErrorCode::Syntax, "--union/--bridge need exactly two files");
    HilbertTable a = hilbert_table(load_grape(files[0])), b = hilbert_table(load_grape(files[1]));
    print_table(o.disjoint ? disjoint_union_table(a, b) : one_bridge_table(a, b), out);
    return kOk;
  }
  for (std::size_t n = 0; n < files.size(); ++n) {
    if (files.size() > 1) out << "== " << fs::path(files[n]).filename().string() << " ==\n";
    HilbertTable t = hilbert_table(load_grape(files[n]));
    const std::size_t imax = o.imax >= 0 ? static_cast<std::size_t>(o.imax) : top_degree(t);
    auto grid = poincare_truncation(t, imax, o.kmax);
    out << "i\\k";
    for (long k = 0; k <= o.kmax; ++k) out << '\t' << k;
    out << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out << i;
      for (const auto& v : grid[i]) out << '\t' << v;
      out << '\n';
    }
  }
  return kOk;
}

// Runs fn over every input file, framing each with a header when there are several.
template <class F>
int over_files(const std::vector<std::string>& files, std::ostream& out, std::ostream& err, F&& fn) {
  int worst = kOk;
  for (const auto& path : files) {
    if (files.size() > 1) out << "== " << fs::path(path).filename().string() << " ==\n";
    int code;
    try {
      code = fn(path);
    } catch (const Error& e) {
      err << path << ": " << e.what() << '\n';
      code = exit_code(e.code());
    }
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Betti numbers and Hilbert polynomials of configuration spaces of bunches of grapes", "grapes"};
  app.require_subcommand(1);
  std::vector<std::string> files;
  std::string corpus;
  auto with_inputs = [&](CLI::App* sub) {
    sub->add_option("files", files, "input graphs (.grape or .json)");
    sub->add_option("--corpus", corpus, "also run on every .grape file in this directory");
  };

  HilbertOpts ho;
  auto* hil = app.add_subcommand("hilbert", "print the Hilbert polynomials and residual");
  with_inputs(hil);
  hil->add_flag("--json", ho.json);

  BettiOpts bo;
  auto* bet = app.add_subcommand("betti", "Betti numbers from the chain complex");
  with_inputs(bet);
  bet->add_option("--kmax", bo.kmax)->check(CLI::NonNegativeNumber);
  bet->add_option("--imax", bo.imax)->check(CLI::NonNegativeNumber);
  bet->add_option("--field", bo.field, "q or p:<prime>");
  bet->add_option("--dump-matrix", bo.dump_dir, "write boundary matrices here");
  bet->add_flag("--unsafe-any-graph", bo.unsafe_any, "accept any multigraph (no formula exists)");
  bet->add_option("--threads", bo.threads);
  bet->add_option("--slice-cap", bo.slice_cap);

  VerifyOpts vo;
  auto* ver = app.add_subcommand("verify", "compare the chain complex with the formulas");
  with_inputs(ver);
  ver->add_option("--kmax", vo.kmax)->check(CLI::NonNegativeNumber);
  ver->add_option("--imax", vo.imax)->check(CLI::NonNegativeNumber);
  ver->add_option("--basis-kmax", vo.basis_kmax)->check(CLI::NonNegativeNumber);
  ver->add_option("--field", vo.field, "q or p:<prime>");
  ver->add_option("--threads", vo.threads);
  ver->add_option("--cap", vo.cap);
  ver->add_option("--slice-cap", vo.slice_cap);

  EnumOpts eo;
  auto* en = app.add_subcommand("enumerate", "list HE- or SHE-configurations");
  with_inputs(en);
  en->add_option("-i", eo.i)->check(CLI::NonNegativeNumber);
  auto* ko = en->add_option("-k", eo.k, "HE-configurations of size k")->check(CLI::NonNegativeNumber);
  auto* jo = en->add_option("-j", eo.j, "standard configurations of size j")->check(CLI::NonNegativeNumber);
  ko->excludes(jo);
  en->add_option("--elem", eo.elem, "elementary shape L,M instead of a graph");
  en->add_option("--type", eo.type, "1, 2 or both (elementary only)");
  en->add_flag("--count-only", eo.count_only);
  en->add_option("--cap", eo.cap);

  RecoverOpts ro;
  auto* rec = app.add_subcommand("recover", "recover local data from Hilbert polynomials");
  with_inputs(rec);
  rec->add_flag("--allow-bouquet", ro.allow_bouquet);

  CyclesOpts co;
  auto* cyc = app.add_subcommand("cycles", "HE cycle representatives and their rank certificate");
  with_inputs(cyc);
  cyc->add_option("-i", co.i)->check(CLI::NonNegativeNumber);
  cyc->add_option("-k", co.k)->check(CLI::NonNegativeNumber);
  cyc->add_option("--field", co.field);
  cyc->add_flag("--chains", co.chains, "print chain terms");
  cyc->add_option("--cap", co.cap);

  SeriesOpts so;
  auto* ser = app.add_subcommand("series", "truncated Hilbert-Poincare series");
  with_inputs(ser);
  ser->add_option("--kmax", so.kmax)->check(CLI::NonNegativeNumber);
  ser->add_option("--imax", so.imax)->check(CLI::NonNegativeNumber);
  ser->add_flag("--union", so.disjoint, "table of the disjoint union of two graphs");
  ser->add_flag("--bridge", so.bridge, "table of two graphs joined by a 1-bridge");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (en->parsed() && !eo.elem.empty()) {
      if (eo.k < 0 && eo.j < 0) throw Error(ErrorCode::Syntax, "enumerate needs -k or -j");
      return cmd_enumerate_elem(eo, out);
    }
    const std::vector<std::string> inputs = input_files(files, corpus);
    if (hil->parsed()) return over_files(inputs, out, err, [&](const std::string& p) { return cmd_hilbert(p, ho, out); });
    if (bet->parsed()) return over_files(inputs, out, err, [&](const std::string& p) { return cmd_betti(p, bo, out); });
    if (ver->parsed()) return over_files(inputs, out, err, [&](const std::string& p) { return cmd_verify(p, vo, out); });
    if (en->parsed()) {
      if (eo.k < 0 && eo.j < 0) throw Error(ErrorCode::Syntax, "enumerate needs -k or -j");
      return over_files(inputs, out, err, [&](const std::string& p) { return cmd_enumerate(p, eo, out); });
    }
    if (rec->parsed()) return over_files(inputs, out, err, [&](const std::string& p) { return cmd_recover(p, ro, out); });
    if (cyc->parsed()) return over_files(inputs, out, err, [&](const std::string& p) { return cmd_cycles(p, co, out); });
    if (ser->parsed()) {
      if (so.disjoint || so.bridge) return cmd_series(inputs, so, out);
      return over_files(inputs, out, err, [&](const std::string& p) { return cmd_series({p}, so, out); });
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::bad_alloc&) {
    err << "ResourceLimit: out of memory\n";
    return kResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace grapes::cli
