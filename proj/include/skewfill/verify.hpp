#pragma once

// Exhaustive verification of the pattern-avoidance results over bounded shape ranges.
//
// Each property runs per shape; shapes are sharded over `jobs` threads and partial
// results are merged in catalog order, so a report never depends on the shard count.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewfill/chain_bijection.hpp"
#include "skewfill/enumeration.hpp"
#include "skewfill/errors.hpp"
#include "skewfill/filling.hpp"
#include "skewfill/shape.hpp"
#include "skewfill/skew_structure.hpp"

namespace skewfill {

struct Failure {
  std::string shape;    // row-interval notation
  std::string clause;   // which check failed
  std::string witness;  // fillings or counts for replay
  friend bool operator==(const Failure&, const Failure&) = default;
};

struct VerificationReport {
  std::string property;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t instances = 0;
  std::vector<Failure> failures;
  std::vector<std::string> notes;
  std::optional<double> millis;  // wall time, not part of equality

  bool passed() const { return failures.empty(); }
  friend bool operator==(const VerificationReport& a, const VerificationReport& b) {
    return a.property == b.property && a.params == b.params && a.instances == b.instances &&
           a.failures == b.failures && a.notes == b.notes;
  }
};

inline const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names{"cor_sskew", "conjecture",  "thm_bp", "genskew",
                                              "lemma_gi",  "lem_ferrers", "rubey",  "ds_free_oracle"};
  return names;
}

struct VerifyParams {
  std::optional<int> max_cells;       // property default when unset
  int min_cells = 1;
  std::vector<int> ks;                // pattern sizes; property default when empty
  int max_entry = 2;                  // entry cap for integer scans
  std::optional<int> refine_cells;    // cor_sskew refinement range (default min(max_cells, 7))
  int frame_max = 2;                  // lem_ferrers: k, l <= frame_max
  std::optional<Shape> shape;         // restrict to one shape
  int jobs = 1;
  bool detail = false;
  bool all_perms = false;             // rubey: every moon-preserving column permutation
  bool binary = false;                // rubey: binary fillings instead of capped integer fillings
  bool budget_override = false;
};

// ---------------------------------------------------------------------------
// Budgets

struct Budget {
  int default_cells;
  int max_cells;
};

inline Budget property_budget(const std::string& prop) {
  if (prop == "genskew" || prop == "lemma_gi") return {7, 10};
  if (prop == "cor_sskew" || prop == "conjecture" || prop == "thm_bp") return {7, 9};
  if (prop == "lem_ferrers" || prop == "rubey") return {6, 8};
  if (prop == "ds_free_oracle") return {7, 10};
  throw DomainError("unknown property '" + prop + "'");
}

inline constexpr int kEntryCapBudget = 2;
inline constexpr int kRefineCellsBudget = 7;
inline constexpr int kFrameBudget = 2;

inline bool budget_override_from_env() {
  const char* v = std::getenv("SKEWFILL_BUDGET_OVERRIDE");
  return v && std::string(v) == "1";
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_report_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "property: " << r.property << '\n';
  os << "params:";
  for (const auto& [k, v] : r.params) os << ' ' << k << '=' << v;
  os << '\n';
  os << "instances: " << r.instances << '\n';
  os << "status: " << (r.passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  for (const auto& f : r.failures)
    os << "failure: shape=" << f.shape << " clause=" << f.clause << " witness=" << f.witness << '\n';
  if (r.millis) os << "millis: " << static_cast<long long>(*r.millis) << '\n';
  return os.str();
}

namespace detail {

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t t = 0; t < text.size(); ++t) {
    const char ch = text[t];
    if (quoted) {
      if (ch == '"') {
        if (t + 1 < text.size() && text[t + 1] == '"') {
          field.push_back('"');
          ++t;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    any = true;
    if (ch == '"') quoted = true;
    else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (any || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// CSV with columns record,key,value,extra. Failures are (shape, clause, witness).
inline std::string format_report_csv(const VerificationReport& r) {
  using detail::csv_quote;
  std::ostringstream os;
  os << "record,key,value,extra\n";
  os << "property,," << csv_quote(r.property) << ",\n";
  for (const auto& [k, v] : r.params) os << "param," << csv_quote(k) << ',' << csv_quote(v) << ",\n";
  os << "instances,," << r.instances << ",\n";
  os << "status,," << (r.passed() ? "pass" : "fail") << ",\n";
  for (const auto& n : r.notes) os << "note,," << csv_quote(n) << ",\n";
  for (const auto& f : r.failures)
    os << "failure," << csv_quote(f.shape) << ',' << csv_quote(f.clause) << ',' << csv_quote(f.witness) << '\n';
  if (r.millis) os << "millis,," << static_cast<long long>(*r.millis) << ",\n";
  return os.str();
}

inline VerificationReport parse_report_csv(const std::string& text) {
  const auto rows = detail::parse_csv(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{"record", "key", "value", "extra"})
    throw ParseError("missing report CSV header");
  VerificationReport r;
  std::optional<bool> status;
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const auto& row = rows[t];
    if (row.size() != 4) throw ParseError("report CSV rows need 4 fields");
    const auto& kind = row[0];
    if (kind == "property") r.property = row[2];
    else if (kind == "param") r.params.emplace_back(row[1], row[2]);
    else if (kind == "instances") r.instances = std::stoull(row[2]);
    else if (kind == "status") status = row[2] == "pass";
    else if (kind == "note") r.notes.push_back(row[2]);
    else if (kind == "failure") r.failures.push_back({row[1], row[2], row[3]});
    else if (kind == "millis") r.millis = std::stod(row[2]);
    else throw ParseError("unknown report CSV record '" + kind + "'");
  }
  if (status && *status != r.passed()) throw ParseError("status does not match the failure list");
  return r;
}

inline nlohmann::ordered_json report_to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["property"] = r.property;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["instances"] = r.instances;
  j["pass"] = r.passed();
  j["notes"] = r.notes;
  nlohmann::ordered_json fails = nlohmann::ordered_json::array();
  for (const auto& f : r.failures) fails.push_back({{"shape", f.shape}, {"clause", f.clause}, {"witness", f.witness}});
  j["failures"] = fails;
  if (r.millis) j["millis"] = static_cast<long long>(*r.millis);
  return j;
}

inline std::string format_report_json(const VerificationReport& r) { return report_to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Sharding

/// Runs fn(t) for t in [0, n) on `jobs` threads; results are returned in index order.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int jobs, Fn fn) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t t = 0; t < n; ++t) out[t] = fn(t);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t t = next++; t < n; t = next++) {
      try {
        out[t] = fn(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(jobs, static_cast<int>(n)); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct Partial {
  std::uint64_t instances = 0;
  std::vector<Failure> failures;
  std::vector<std::string> notes;
  std::map<std::string, std::uint64_t> counters;
};

namespace detail {

inline constexpr std::size_t kFailuresPerShape = 8;

inline void add_failure(Partial& p, const Shape& s, std::string clause, std::string witness) {
  if (p.failures.size() < kFailuresPerShape) p.failures.push_back({format_row_intervals(s), std::move(clause), std::move(witness)});
  ++p.counters["failures"];
}

inline std::string join_ints(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t t = 0; t < v.size(); ++t) s += (t ? "," : "") + std::to_string(v[t]);
  return s + ")";
}

inline std::string sums_string(const SumVector& sv) {
  return "r=" + join_ints(sv.row_sums) + " c=" + join_ints(sv.col_sums);
}

inline std::string ones_string(const Shape& s, std::uint64_t bits) {
  std::string out = "{";
  bool first = true;
  for (int t = 0; t < s.size(); ++t)
    if ((bits >> t) & 1U) {
      const Cell c = s.cells()[t];
      out += (first ? "" : ",") + std::string("(") + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
      first = false;
    }
  return out + "}";
}

inline std::string values_string(const std::vector<int>& v) {
  std::string s;
  for (std::size_t t = 0; t < v.size(); ++t) s += (t ? "," : "") + std::to_string(v[t]);
  return s;
}

/// A sum class is complete under an entry cap when every cell's natural bound
/// min(row sum, column sum) is within the cap, so the capped scan sees all of it.
inline bool cap_complete(const Shape& s, const SumVector& sv, int cap) {
  for (const auto& c : s.cells())
    if (std::min(sv.row_sums[c.row - 1], sv.col_sums[c.col - 1]) > cap) return false;
  return true;
}

/// Odometer over all fillings with entries <= cap in index order (c_1 fastest).
template <class Visitor>
void for_each_capped(const Shape& s, int cap, Visitor&& visit) {
  std::vector<int> v(s.size(), 0);
  while (true) {
    visit(static_cast<const std::vector<int>&>(v));
    std::size_t t = 0;
    while (t < v.size() && v[t] == cap) v[t++] = 0;
    if (t == v.size()) return;
    ++v[t];
  }
}

inline std::uint64_t support_of(const std::vector<int>& v) {
  std::uint64_t b = 0;
  for (std::size_t t = 0; t < v.size(); ++t)
    if (v[t]) b |= std::uint64_t{1} << t;
  return b;
}

inline SumVector sums_of(const Shape& s, const std::vector<int>& v) {
  SumVector sv{std::vector<int>(s.height(), 0), std::vector<int>(s.width(), 0)};
  for (std::size_t t = 0; t < v.size(); ++t) {
    sv.row_sums[s.cells()[t].row - 1] += v[t];
    sv.col_sums[s.cells()[t].col - 1] += v[t];
  }
  return sv;
}

inline std::vector<int> row_sums_of_bits(const Shape& s, std::uint64_t b) {
  std::vector<int> r(s.height(), 0);
  for (int t = 0; t < s.size(); ++t)
    if ((b >> t) & 1U) ++r[s.cells()[t].row - 1];
  return r;
}

inline std::vector<int> inverse_perm(const std::vector<int>& p) {
  std::vector<int> inv(p.size());
  for (std::size_t t = 0; t < p.size(); ++t) inv[p[t] - 1] = static_cast<int>(t) + 1;
  return inv;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-shape checks

/// Transversal counts of one shape for each k: (iota_k avoiders, delta_k avoiders).
inline std::map<int, std::pair<std::uint64_t, std::uint64_t>> transversal_counts(const Shape& s,
                                                                                const std::vector<int>& ks) {
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> out;
  std::vector<std::pair<PatternSet, PatternSet>> sets;
  for (int k : ks) {
    sets.emplace_back(PatternSet(s, {Pattern::iota(k)}), PatternSet(s, {Pattern::delta(k)}));
    out[k] = {0, 0};
  }
  if (s.height() != s.width()) return out;
  for_each_transversal(s, [&](const std::vector<int>& v) {
    const auto b = detail::support_of(v);
    for (std::size_t t = 0; t < ks.size(); ++t) {
      if (!sets[t].first.contains_any_binary(b)) ++out[ks[t]].first;
      if (!sets[t].second.contains_any_binary(b)) ++out[ks[t]].second;
    }
    return true;
  });
  return out;
}

inline Partial check_cor_sskew(const Shape& s, const std::vector<int>& ks, bool refine, int cap, bool verbose) {
  Partial p;
  const auto tr = transversal_counts(s, ks);
  for (const auto& [k, c] : tr) {
    ++p.instances;
    if (c.first != c.second)
      detail::add_failure(p, s, "plain:k=" + std::to_string(k),
                          "Tr(iota)=" + std::to_string(c.first) + " Tr(delta)=" + std::to_string(c.second));
  }
  if (!refine) return p;
  const auto perms = sum_permutations(s);
  const auto rho_inv = detail::inverse_perm(perms.rho), sigma_inv = detail::inverse_perm(perms.sigma);
  auto image = [&](const SumVector& sv) {
    return SumVector{permute_sums(sv.row_sums, perms.rho), permute_sums(sv.col_sums, perms.sigma)};
  };
  auto preimage = [&](const SumVector& sv) {
    return SumVector{permute_sums(sv.row_sums, rho_inv), permute_sums(sv.col_sums, sigma_inv)};
  };
  for (int k : ks) {
    const PatternSet dset(s, {Pattern::delta(k)}), iset(s, {Pattern::iota(k)});
    std::map<SumVector, std::uint64_t> dcount, icount;
    detail::for_each_capped(s, cap, [&](const std::vector<int>& v) {
      const auto b = detail::support_of(v);
      const bool d = !dset.contains_any(b, v), i = !iset.contains_any(b, v);
      if (!d && !i) return;
      const auto sv = detail::sums_of(s, v);
      if (d) ++dcount[sv];
      if (i) ++icount[sv];
    });
    std::uint64_t classes = 0;
    auto compare = [&](const SumVector& from, const SumVector& to) {
      if (!detail::cap_complete(s, from, cap) || !detail::cap_complete(s, to, cap)) return;
      ++classes;
      const auto a = dcount.count(from) ? dcount.at(from) : 0;
      const auto b = icount.count(to) ? icount.at(to) : 0;
      if (a != b)
        detail::add_failure(p, s, "refined:k=" + std::to_string(k),
                            "delta " + detail::sums_string(from) + " count=" + std::to_string(a) + " vs iota " +
                                detail::sums_string(to) + " count=" + std::to_string(b));
    };
    for (const auto& [sv, n] : dcount) compare(sv, image(sv));
    for (const auto& [sv, n] : icount)
      if (!dcount.count(preimage(sv))) compare(preimage(sv), sv);
    ++p.instances;
    p.counters["refined_classes"] += classes;
  }
  (void)verbose;
  return p;
}

inline Partial check_conjecture(const Shape& s, const std::vector<int>& ks, bool verbose) {
  Partial p;
  if (s.height() != s.width()) return p;
  for (const auto& [k, c] : transversal_counts(s, ks)) {
    ++p.instances;
    if (c.first < c.second)
      detail::add_failure(p, s, "Tr(iota_k) >= Tr(delta_k):k=" + std::to_string(k),
                          "Tr(iota)=" + std::to_string(c.first) + " Tr(delta)=" + std::to_string(c.second));
    else if (c.first > c.second) {
      ++p.counters["strict"];
      if (verbose)
        p.notes.push_back("strict: shape=" + format_row_intervals(s) + " k=" + std::to_string(k) +
                          " Tr(iota)=" + std::to_string(c.first) + " Tr(delta)=" + std::to_string(c.second));
    }
  }
  return p;
}

inline Partial check_thm_bp(const Shape& s, bool verbose) {
  Partial p;
  if (s.height() != s.width()) return p;
  const PatternSet dset(s, {Pattern::delta(2)}), lset(s, {Pattern::iota(2), Pattern::fd()});
  std::vector<std::uint64_t> davoid, lavoid;
  std::uint64_t total = 0;
  for_each_transversal(s, [&](const std::vector<int>& v) {
    const auto b = detail::support_of(v);
    ++total;
    if (!dset.contains_any_binary(b)) davoid.push_back(b);
    if (!lset.contains_any_binary(b)) lavoid.push_back(b);
    return true;
  });
  if (total == 0) return p;
  ++p.instances;
  auto list = [&](const std::vector<std::uint64_t>& v) {
    std::string out;
    for (auto b : v) out += (out.empty() ? "" : " ") + detail::ones_string(s, b);
    return out.empty() ? std::string("none") : out;
  };
  if (davoid.size() != 1) detail::add_failure(p, s, "unique delta2-avoiding transversal", list(davoid));
  if (lavoid.size() != 1) detail::add_failure(p, s, "unique {iota2,fd}-avoiding transversal", list(lavoid));
  if (verbose)
    p.notes.push_back("shape=" + format_row_intervals(s) + " transversals=" + std::to_string(total) +
                      " delta2-avoider=" + list(davoid) + " iota2/fd-avoider=" + list(lavoid));
  return p;
}

inline Partial check_genskew(const Shape& s, bool verbose) {
  Partial p;
  ++p.instances;
  const ChainBijection cb(s);
  const int n = cb.size();
  const std::uint64_t space = cb.space_size();
  std::map<std::vector<int>, std::int64_t> balance;  // row sums -> |G_1| - |G_N|
  std::uint64_t g1 = 0, gn = 0;
  std::vector<char> hit(space, 0);
  for (std::uint64_t b = 0; b < space; ++b) {
    const bool in1 = cb.in_G(b, 1), inN = cb.in_G(b, n);
    if (in1 || inN) {
      const auto rs = detail::row_sums_of_bits(s, b);
      if (in1) ++balance[rs], ++g1;
      if (inN) --balance[rs], ++gn;
    }
    if (!in1) continue;
    std::uint64_t img = 0;
    try {
      img = cb.full_forward(b, nullptr, true);
    } catch (const std::logic_error& e) {
      detail::add_failure(p, s, "forward postcondition", bit_string(b, n) + ": " + e.what());
      continue;
    }
    if (!cb.in_G(img, n)) detail::add_failure(p, s, "forward image avoids {iota2,fd}", bit_string(b, n) + "->" + bit_string(img, n));
    if (detail::row_sums_of_bits(s, img) != detail::row_sums_of_bits(s, b))
      detail::add_failure(p, s, "row sums preserved", bit_string(b, n) + "->" + bit_string(img, n));
    if (hit[img]++) detail::add_failure(p, s, "forward injective", bit_string(img, n));
    std::uint64_t back = 0;
    try {
      back = cb.full_backward(img, nullptr, true);
    } catch (const std::exception& e) {
      detail::add_failure(p, s, "backward postcondition", bit_string(img, n) + ": " + e.what());
      continue;
    }
    if (back != b) detail::add_failure(p, s, "backward inverts forward", bit_string(b, n) + "->" + bit_string(img, n) + "->" + bit_string(back, n));
  }
  for (const auto& [rs, d] : balance)
    if (d != 0) detail::add_failure(p, s, "row-sum refined count", "rows=" + detail::join_ints(rs) + " diff=" + std::to_string(d));
  std::uint64_t images = 0;
  for (char h : hit) images += h ? 1 : 0;
  if (images != gn) detail::add_failure(p, s, "forward surjective", "images=" + std::to_string(images) + " |G_N|=" + std::to_string(gn));
  p.counters["fillings"] += space;
  if (verbose)
    p.notes.push_back("shape=" + format_row_intervals(s) + " |G_1|=" + std::to_string(g1) + " |G_N|=" +
                      std::to_string(gn) + " scanned=" + std::to_string(space));
  return p;
}

inline Partial check_lemma_gi(const Shape& s, bool verbose) {
  Partial p;
  ++p.instances;
  const ChainBijection cb(s);
  const int n = cb.size();
  const std::uint64_t space = cb.space_size();
  const PatternSet dset(s, {Pattern::delta(2)}), lset(s, {Pattern::iota(2), Pattern::fd()});
  std::vector<std::uint64_t> sizes(n + 1, 0);
  for (std::uint64_t b = 0; b < space; ++b) {
    for (int i = 1; i <= n; ++i) sizes[i] += cb.in_G(b, i);
    if (cb.in_G(b, 1) != !dset.contains_any_binary(b)) detail::add_failure(p, s, "G_1 = delta2 avoiders", bit_string(b, n));
    if (cb.in_G(b, n) != !lset.contains_any_binary(b)) detail::add_failure(p, s, "G_N = {iota2,fd} avoiders", bit_string(b, n));
  }
  for (int i = 1; i < n; ++i)
    if (sizes[i] != sizes[i + 1])
      detail::add_failure(p, s, "|G_i| = |G_i+1|", "i=" + std::to_string(i) + " " + std::to_string(sizes[i]) + " vs " + std::to_string(sizes[i + 1]));
  for (int i = 1; i < n; ++i) {
    const bool row_break = cb.anatomy(i).row_break;
    std::vector<char> hit(space, 0);
    std::uint64_t lower_by_class[6] = {}, upper_by_class[6] = {};
    for (std::uint64_t b = 0; b < space; ++b) {
      if (cb.in_G(b, i + 1)) ++upper_by_class[cb.class_of(b, i, StepSide::upper)];
      if (!cb.in_G(b, i)) continue;
      if (row_break && !cb.in_G(b, i + 1)) detail::add_failure(p, s, "row break: G_i = G_i+1", "i=" + std::to_string(i) + " " + bit_string(b, n));
      const int lc = cb.class_of(b, i, StepSide::lower);
      ++lower_by_class[lc];
      const auto img = cb.forward(b, i);
      if (!cb.in_G(img, i + 1)) {
        detail::add_failure(p, s, "step image in G_i+1", "i=" + std::to_string(i) + " " + bit_string(b, n) + "->" + bit_string(img, n));
        continue;
      }
      if (hit[img]++) detail::add_failure(p, s, "step injective", "i=" + std::to_string(i) + " " + bit_string(img, n));
      if (cb.class_of(img, i, StepSide::upper) != lc)
        detail::add_failure(p, s, "class preserved", "i=" + std::to_string(i) + " " + bit_string(b, n) + "->" + bit_string(img, n));
      if (lc > 1)
        if (auto v = cb.check_postconditions(b, img, i, true))
          detail::add_failure(p, s, "forward postcondition", "i=" + std::to_string(i) + " " + bit_string(b, n) + ": " + *v);
      const auto back = cb.backward(img, i);
      if (back != b) detail::add_failure(p, s, "step inverse", "i=" + std::to_string(i) + " " + bit_string(b, n));
      if (lc > 1)
        if (auto v = cb.check_postconditions(img, back, i, false))
          detail::add_failure(p, s, "backward postcondition", "i=" + std::to_string(i) + " " + bit_string(img, n) + ": " + *v);
    }
    for (int c = 1; c <= 5; ++c)
      if (lower_by_class[c] != upper_by_class[c])
        detail::add_failure(p, s, "class sizes", "i=" + std::to_string(i) + " class=" + std::to_string(c));
  }
  if (verbose) {
    std::string sz;
    for (int i = 1; i <= n; ++i) sz += (i > 1 ? "," : "") + std::to_string(sizes[i]);
    p.notes.push_back("shape=" + format_row_intervals(s) + " |G_i|=" + sz);
  }
  return p;
}

/// Special column/row frame of a NW Ferrers shape.
struct GammaFrame {
  Shape F;
  int k = 0;
  int l = 0;
  Rect C(int i) const { return {1, i, 1, F.height()}; }
  Rect Cp(int i) const { return {k - i + 1, k, 1, F.height()}; }
  Rect R(int j) const { return {1, F.width(), F.height() - j + 1, F.height()}; }
  Rect Rp(int j) const { return {1, F.width(), F.height() - l + 1, F.height() - l + j}; }
  int c(int i) const { return i; }
  int cp(int i) const { return k + 1 - i; }
  int r(int j) const { return F.height() + 1 - j; }
  int rp(int j) const { return F.height() - l + j; }
};

/// Largest admissible k (full-height leftmost columns) and l (full-width top rows).
inline std::pair<int, int> frame_limits(const Shape& f) {
  int k = 0, l = 0;
  while (k < f.width() && f.col_count(k + 1) == f.height()) ++k;
  while (l < f.height() && f.row_count(f.height() - l) == f.width()) ++l;
  return {k, l};
}

inline std::vector<int> gamma_signature(const GammaFrame& g, const Filling& phi, bool se) {
  const Direction dir = se ? Direction::SE : Direction::NE;
  const auto sv = sum_vector(phi);
  std::vector<int> sig{longest_chain(phi, dir)};
  for (int i = 1; i <= g.k; ++i) sig.push_back(longest_chain(phi, dir, se ? g.C(i) : g.Cp(i)));
  for (int j = 1; j <= g.l; ++j) sig.push_back(longest_chain(phi, dir, se ? g.R(j) : g.Rp(j)));
  for (int i = 1; i <= g.k; ++i) sig.push_back(sv.col_sums[(se ? g.c(i) : g.cp(i)) - 1]);
  for (int j = 1; j <= g.l; ++j) sig.push_back(sv.row_sums[(se ? g.r(j) : g.rp(j)) - 1]);
  for (int c = g.k + 1; c <= g.F.width(); ++c) sig.push_back(sv.col_sums[c - 1]);
  for (int r = 1; r <= g.F.height() - g.l; ++r) sig.push_back(sv.row_sums[r - 1]);
  return sig;
}

inline Partial check_lem_ferrers(const Shape& f, int cap, int frame_max) {
  Partial p;
  const auto [kmax, lmax] = frame_limits(f);
  for (int k = 0; k <= std::min(kmax, frame_max); ++k)
    for (int l = 0; l <= std::min(lmax, frame_max); ++l) {
      ++p.instances;
      const GammaFrame g{f, k, l};
      std::map<std::vector<int>, std::int64_t> diff;
      std::uint64_t complete = 0;
      detail::for_each_capped(f, cap, [&](const std::vector<int>& v) {
        const Filling phi(f, v);
        if (!detail::cap_complete(f, sum_vector(phi), cap)) return;
        ++complete;
        ++diff[gamma_signature(g, phi, true)];
        --diff[gamma_signature(g, phi, false)];
      });
      p.counters["fillings"] += complete;
      for (const auto& [sig, d] : diff)
        if (d != 0) {
          detail::add_failure(p, f, "signature multiset:k=" + std::to_string(k) + ",l=" + std::to_string(l),
                              "signature=" + detail::join_ints(sig) + " diff=" + std::to_string(d));
          break;
        }
    }
  return p;
}

/// Key of a binary filling of a moon polyomino for the rubey check.
inline std::pair<LambdaSpec, SumVector> fne_key(const Filling& f, const std::vector<Rect>& rects) {
  return {lambda_of(f, rects), sum_vector(f)};
}

/// Class sizes |F^NE(m, Lambda, r, c)| over binary fillings, or over integer fillings
/// with entries <= cap restricted to sum classes complete under the cap.
inline std::map<std::pair<LambdaSpec, SumVector>, std::uint64_t> fne_classes(const Shape& m, bool binary, int cap) {
  const auto rects = maximal_rectangles(m);
  std::map<std::pair<LambdaSpec, SumVector>, std::uint64_t> out;
  if (binary) {
    const std::uint64_t space = std::uint64_t{1} << m.size();
    for (std::uint64_t b = 0; b < space; ++b) ++out[fne_key(Filling::from_bits(m, b), rects)];
    return out;
  }
  detail::for_each_capped(m, cap, [&](const std::vector<int>& v) {
    const Filling f(m, v);
    if (detail::cap_complete(m, sum_vector(f), cap)) ++out[fne_key(f, rects)];
  });
  return out;
}

inline Partial check_rubey(const Shape& m, bool all_perms, bool binary, int cap) {
  Partial p;
  const int w = m.width();
  std::vector<std::vector<int>> perms;
  if (all_perms) {
    std::vector<int> perm(w);
    std::iota(perm.begin(), perm.end(), 1);
    while (std::next_permutation(perm.begin(), perm.end())) perms.push_back(perm);
  } else {
    for (int c = 1; c < w; ++c) {
      std::vector<int> perm(w);
      std::iota(perm.begin(), perm.end(), 1);
      std::swap(perm[c - 1], perm[c]);
      perms.push_back(perm);
    }
  }
  const auto base = fne_classes(m, binary, cap);
  for (const auto& perm : perms) {
    const Shape pm = permute_columns(m, perm);
    if (!classify_shape(pm).moon) continue;
    ++p.instances;
    const auto other = fne_classes(pm, binary, cap);
    auto mapped = [&](const SumVector& sv) { return SumVector{sv.row_sums, permute_sums(sv.col_sums, perm)}; };
    auto comparable = [&](const SumVector& sv) {
      return binary || (detail::cap_complete(m, sv, cap) && detail::cap_complete(pm, mapped(sv), cap));
    };
    // every class of either side, keyed on m's side
    std::map<std::pair<LambdaSpec, SumVector>, std::pair<std::uint64_t, std::uint64_t>> both;
    for (const auto& [key, n] : base) both[key].first = n;
    const auto inv = detail::inverse_perm(perm);
    for (const auto& [key, n] : other) both[{key.first, SumVector{key.second.row_sums, permute_sums(key.second.col_sums, inv)}}].second = n;
    for (const auto& [key, n] : both) {
      if (!comparable(key.second)) continue;
      ++p.counters["classes"];
      if (n.first != n.second) {
        std::string lam;
        for (const auto& [wd, v] : key.first) lam += (lam.empty() ? "" : ",") + std::to_string(wd) + ":" + std::to_string(v);
        detail::add_failure(p, m, "class sizes under column permutation " + detail::join_ints(perm),
                            "Lambda={" + lam + "} " + detail::sums_string(key.second) + " count=" +
                                std::to_string(n.first) + " vs " + std::to_string(n.second));
        break;
      }
    }
  }
  return p;
}

inline Partial check_ds_free_oracle(const Shape& s) {
  Partial p;
  ++p.instances;
  const bool a = is_ds_free(s, DsFreeMethod::pattern), b = is_ds_free(s, DsFreeMethod::rectangle);
  if (a != b)
    detail::add_failure(p, s, "is_ds_free methods agree", std::string("pattern=") + (a ? "1" : "0") + " rectangle=" + (b ? "1" : "0"));
  if (a && is_connected(s)) {
    ++p.counters["decomposed"];
    try {
      const auto d = ferrers_decompose(s);
      if (!validate_decomposition(s, d)) detail::add_failure(p, s, "decomposition validates", "");
      for (const auto& blk : d.blocks) {
        if (blk.cells.empty()) continue;
        const auto props = classify_shape(Shape::from_cells(blk.cells));
        const bool ok = blk.kind == BlockKind::nw ? props.nw_ferrers : props.se_ferrers;
        if (!ok) detail::add_failure(p, s, "block is a Ferrers shape of its kind", "");
      }
    } catch (const std::exception& e) {
      detail::add_failure(p, s, "decomposition exists", e.what());
    }
  } else if (!a && is_connected(s)) {
    ++p.counters["rejected"];
    const auto d = run_ferrers_procedure(s);
    if (d && validate_decomposition(s, *d))
      detail::add_failure(p, s, "no decomposition when the dented shape occurs", "");
  }
  return p;
}

// ---------------------------------------------------------------------------
// Driver

namespace detail {

inline void require_budget(bool ok, const std::string& what) {
  if (!ok) throw BudgetError(what + " exceeds the default budget; pass --budget-override or set SKEWFILL_BUDGET_OVERRIDE=1");
}

inline std::vector<Shape> shapes_for(const VerifyParams& prm, int max_cells, bool connected, bool ds_free) {
  if (prm.shape) return {*prm.shape};
  std::vector<Shape> out;
  for (int n = std::max(1, prm.min_cells); n <= max_cells; ++n) {
    auto part = enum_skew_shapes(n, {connected, ds_free});
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace detail

inline VerificationReport verify(const std::string& property, const VerifyParams& prm) {
  const auto start = std::chrono::steady_clock::now();
  const Budget budget = property_budget(property);
  const bool override_ok = prm.budget_override || budget_override_from_env();
  const int max_cells = prm.max_cells.value_or(budget.default_cells);
  if (prm.shape) detail::require_budget(override_ok || prm.shape->size() <= budget.max_cells, "shape size");
  else detail::require_budget(override_ok || max_cells <= budget.max_cells, "max_cells=" + std::to_string(max_cells));
  if (prm.jobs < 1) throw DomainError("jobs must be at least 1");

  VerificationReport rep;
  rep.property = property;
  if (prm.shape) rep.params.emplace_back("shape", format_row_intervals(*prm.shape));
  else {
    rep.params.emplace_back("min_cells", std::to_string(prm.min_cells));
    rep.params.emplace_back("max_cells", std::to_string(max_cells));
  }

  std::vector<Shape> shapes;
  std::function<Partial(const Shape&)> check;
  std::vector<int> ks = prm.ks;

  auto ks_param = [&] {
    std::string s;
    for (int k : ks) s += (s.empty() ? "" : ",") + std::to_string(k);
    rep.params.emplace_back("k", s);
  };
  auto need_skew = [&] {
    if (prm.shape && !is_skew(*prm.shape)) throw DomainError("property '" + property + "' needs a skew shape");
  };

  if (property == "cor_sskew") {
    if (ks.empty()) ks = {2, 3};
    need_skew();
    if (prm.shape && (!is_connected(*prm.shape) || !is_ds_free(*prm.shape, DsFreeMethod::pattern)))
      throw DomainError("cor_sskew needs a connected dented-shape-free skew shape");
    const int refine = prm.refine_cells.value_or(std::min(max_cells, kRefineCellsBudget));
    detail::require_budget(override_ok || (refine <= kRefineCellsBudget && prm.max_entry <= kEntryCapBudget),
                           "refinement range");
    ks_param();
    rep.params.emplace_back("refine_cells", std::to_string(refine));
    rep.params.emplace_back("max_entry", std::to_string(prm.max_entry));
    shapes = detail::shapes_for(prm, max_cells, true, true);
    check = [&, refine](const Shape& s) { return check_cor_sskew(s, ks, s.size() <= refine, prm.max_entry, prm.detail); };
    rep.notes.push_back("refined check compares (r,c) with (rho r, sigma c) over sum classes complete under the entry cap");
  } else if (property == "conjecture") {
    if (ks.empty()) ks = {2, 3};
    need_skew();
    ks_param();
    shapes = detail::shapes_for(prm, max_cells, false, false);
    check = [&](const Shape& s) { return check_conjecture(s, ks, prm.detail); };
  } else if (property == "thm_bp") {
    need_skew();
    shapes = detail::shapes_for(prm, max_cells, false, false);
    check = [&](const Shape& s) { return check_thm_bp(s, prm.detail); };
  } else if (property == "genskew") {
    need_skew();
    shapes = detail::shapes_for(prm, max_cells, false, false);
    check = [&](const Shape& s) { return check_genskew(s, prm.detail); };
  } else if (property == "lemma_gi") {
    need_skew();
    shapes = detail::shapes_for(prm, max_cells, false, false);
    check = [&](const Shape& s) { return check_lemma_gi(s, prm.detail); };
  } else if (property == "lem_ferrers") {
    detail::require_budget(override_ok || (prm.max_entry <= kEntryCapBudget && prm.frame_max <= kFrameBudget),
                           "entry cap / frame size");
    rep.params.emplace_back("max_entry", std::to_string(prm.max_entry));
    rep.params.emplace_back("frame_max", std::to_string(prm.frame_max));
    if (prm.shape) {
      const auto props = classify_shape(*prm.shape);
      if (!props.nw_ferrers) throw DomainError("lem_ferrers needs a NW Ferrers shape");
      shapes = {*prm.shape};
    } else {
      for (int n = std::max(1, prm.min_cells); n <= max_cells; ++n) {
        auto part = enum_nw_ferrers(n);
        shapes.insert(shapes.end(), part.begin(), part.end());
      }
    }
    check = [&](const Shape& s) { return check_lem_ferrers(s, prm.max_entry, prm.frame_max); };
    rep.notes.push_back("statistic-multiset form: equal multisets are equivalent to a bijection with properties 1-5; "
                        "the bijection itself is not constructed");
    rep.notes.push_back("only sum classes complete under the entry cap are compared");
  } else if (property == "rubey") {
    detail::require_budget(override_ok || prm.max_entry <= kEntryCapBudget, "entry cap");
    rep.params.emplace_back("permutations", prm.all_perms ? "all" : "adjacent");
    rep.params.emplace_back("fillings", prm.binary ? "binary" : "integer");
    if (!prm.binary) rep.params.emplace_back("max_entry", std::to_string(prm.max_entry));
    if (prm.shape) {
      if (!classify_shape(*prm.shape).moon) throw DomainError("rubey needs a moon polyomino");
      shapes = {*prm.shape};
    } else {
      for (int n = std::max(1, prm.min_cells); n <= max_cells; ++n) {
        auto part = enum_moon_polyominoes(n);
        shapes.insert(shapes.end(), part.begin(), part.end());
      }
    }
    check = [&](const Shape& s) { return check_rubey(s, prm.all_perms, prm.binary, prm.max_entry); };
    rep.notes.push_back("cardinality form; the bijection itself is not constructed");
    if (!prm.binary) rep.notes.push_back("only sum classes complete under the entry cap on both shapes are compared");
  } else if (property == "ds_free_oracle") {
    need_skew();
    shapes = detail::shapes_for(prm, max_cells, false, false);
    check = [&](const Shape& s) { return check_ds_free_oracle(s); };
  } else {
    throw DomainError("unknown property '" + property + "'");
  }
  if (prm.detail) rep.params.emplace_back("detail", "1");

  auto parts = parallel_map<Partial>(shapes.size(), prm.jobs, [&](std::size_t t) { return check(shapes[t]); });
  std::map<std::string, std::uint64_t> counters;
  for (auto& part : parts) {
    rep.instances += part.instances;
    for (auto& f : part.failures) rep.failures.push_back(std::move(f));
    for (auto& n : part.notes) rep.notes.push_back(std::move(n));
    for (const auto& [k, v] : part.counters) counters[k] += v;
  }
  rep.notes.insert(rep.notes.begin(), "shapes=" + std::to_string(shapes.size()));
  for (const auto& [k, v] : counters) rep.notes.push_back(k + "=" + std::to_string(v));
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace skewfill
