// Acceptance run: one PASS/FAIL line per criterion A1..A10. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"

using namespace skewfill;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string summary(const VerificationReport& r) {
  std::ostringstream os;
  os << r.property << " instances=" << r.instances << " failures=" << r.failures.size();
  return os.str();
}

VerificationReport run(const std::string& prop, int max_cells, std::function<void(VerifyParams&)> tweak = {}) {
  VerifyParams p;
  p.max_cells = max_cells;
  if (tweak) tweak(p);
  return verify(prop, p);
}

Outcome a1() {
  const auto d = transversal_count(dented_shape(), Pattern::delta(2));
  const auto i = transversal_count(dented_shape(), Pattern::iota(2));
  return {d == 1 && i == 2, "Tr(ds,delta2)=" + std::to_string(d) + " Tr(ds,iota2)=" + std::to_string(i)};
}

Outcome a2() {
  const ChainBijection cb(dented_shape());
  std::ostringstream os;
  bool ok = true;
  os << "|G_i|=";
  for (int i = 1; i <= 7; ++i) {
    int n = 0;
    for (std::uint64_t b = 0; b < 128; ++b) n += cb.in_G(b, i);
    ok = ok && n == 72;
    os << n << (i < 7 ? "," : "");
  }
  std::set<std::uint64_t> images;
  for (std::uint64_t b = 0; b < 128; ++b) {
    if (!cb.in_G(b, 1)) continue;
    const auto img = cb.full_forward(b, nullptr, true);
    ok = ok && cb.in_G(img, 7) && cb.full_backward(img, nullptr, true) == b;
    ok = ok && sum_vector(Filling::from_bits(dented_shape(), img)).row_sums ==
                   sum_vector(Filling::from_bits(dented_shape(), b)).row_sums;
    images.insert(img);
  }
  ok = ok && images.size() == 72;
  os << " images=" << images.size();
  return {ok, os.str()};
}

Outcome from_report(const VerificationReport& r) { return {r.passed(), summary(r)}; }

Outcome a6() {
  const auto r = run("conjecture", 9, [](VerifyParams& p) { p.detail = true; });
  bool ds_listed = false;
  for (const auto& n : r.notes)
    ds_listed = ds_listed || n.rfind("strict: shape=" + format_row_intervals(dented_shape()) + " k=2", 0) == 0;
  std::string strict;
  for (const auto& n : r.notes)
    if (n.rfind("strict=", 0) == 0) strict = " " + n;
  return {r.passed() && ds_listed, summary(r) + strict + (ds_listed ? " ds listed as strict" : " ds NOT listed")};
}

Outcome a9() {
  const auto bin = run("rubey", 8, [](VerifyParams& p) { p.binary = true; });
  const auto integer = run("rubey", 8);
  std::string detail = summary(bin) + " (binary fillings)";
  if (!bin.failures.empty())
    detail += "; first: shape=" + bin.failures.front().shape + " " + bin.failures.front().witness;
  detail += "; integer fillings with entries <= 2: " + std::string(integer.passed() ? "pass" : "fail") + " (" +
            summary(integer) + ")";
  return {bin.passed(), detail};
}

Outcome a10() {
  const auto two = enum_skew_shapes(2);
  bool ok = two.size() == 3;
  for (int n = 1; n <= 6; ++n) {
    auto got = enum_skew_shapes(n);
    std::sort(got.begin(), got.end());
    const auto want = oracle::skew_catalog(n);
    ok = ok && got == std::vector<Shape>(want.begin(), want.end());
  }
  return {ok, "enum_skew_shapes(2)=" + std::to_string(two.size()) + ", catalog matches subset oracle for n<=6"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", a1},
      {"A2", a2},
      {"A3", [] { return from_report(run("genskew", 10)); }},
      {"A4", [] { return from_report(run("thm_bp", 9)); }},
      {"A5",
       [] {
         return from_report(run("cor_sskew", 9, [](VerifyParams& p) {
           p.ks = {2, 3};
           p.refine_cells = 7;
           p.max_entry = 2;
         }));
       }},
      {"A6", a6},
      {"A7", [] { return from_report(run("ds_free_oracle", 9)); }},
      {"A8",
       [] {
         return from_report(run("lem_ferrers", 8, [](VerifyParams& p) {
           p.frame_max = 2;
           p.max_entry = 2;
         }));
       }},
      {"A9", a9},
      {"A10", a10},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << " [" << ms << " ms]" << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
