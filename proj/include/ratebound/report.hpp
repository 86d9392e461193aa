#pragma once

// CSV and human-readable renderings of verification, rate and sweep reports.
// Decimals use 12 significant digits; exact rationals print as "num/den".
//
// Link CSV columns:
//   system,theorem,horizon,link,lhs_exact,lhs,rhs,slack,holds,asserted
// Rate CSV columns:
//   k,R_k,R_k_decimal,H_k,redundancy

#include <cstdio>
#include <sstream>
#include <string>

#include "ratebound/rate.hpp"
#include "ratebound/sweep.hpp"
#include "ratebound/verifier.hpp"

namespace ratebound {

inline std::string decimal(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline constexpr const char* kLinkCsvHeader = "system,theorem,horizon,link,lhs_exact,lhs,rhs,slack,holds,asserted\n";
inline constexpr const char* kRateCsvHeader = "k,R_k,R_k_decimal,H_k,redundancy\n";

inline void write_link_rows(std::ostream& out, const std::string& system, const VerificationReport& r) {
  for (const auto* group : {&r.links, &r.prefix_links, &r.rate_links})
    for (const auto& l : *group) {
      out << system << ',' << r.theorem << ',' << r.horizon << ',' << l.label << ',' << (l.lhs_exact ? l.lhs_exact->str() : "")
          << ',' << decimal(l.lhs) << ',' << decimal(l.rhs) << ',' << decimal(l.slack) << ',' << (l.holds ? "true" : "false")
          << ',' << (r.asserted() ? "true" : "false") << '\n';
    }
}

inline std::string verification_csv(const std::string& system, const VerificationReport& r) {
  std::ostringstream out;
  out << kLinkCsvHeader;
  write_link_rows(out, system, r);
  return out.str();
}

inline std::string rate_csv(const RateReport& rates) {
  std::ostringstream out;
  out << kRateCsvHeader;
  for (const auto& s : rates.steps)
    out << s.time << ',' << s.rate.str() << ',' << decimal(s.rate.to_double()) << ',' << decimal(s.entropy) << ','
        << decimal(s.redundancy()) << '\n';
  return out.str();
}

inline std::string hypothesis_summary(const HypothesisReport& h) {
  std::ostringstream out;
  out << "hypotheses: " << (h.all() ? "met" : "NOT met") << " (independence " << (h.independence ? "holds" : "fails")
      << ", markov " << (h.markov ? "holds" : "fails") << ")\n";
  for (const auto& c : h.conditions)
    out << "  " << c.label << ": " << (c.holds ? "holds" : "fails") << "  cmi=" << decimal(c.cmi) << '\n';
  return out.str();
}

inline std::string verification_summary(const std::string& system, const VerificationReport& r) {
  std::ostringstream out;
  out << system << ": " << r.theorem << " at horizon " << r.horizon << '\n' << hypothesis_summary(r.hypotheses);
  for (const auto* group : {&r.links, &r.prefix_links, &r.rate_links})
    for (const auto& l : *group) {
      out << "  " << l.label << ": lhs=" << (l.lhs_exact ? l.lhs_exact->str() + " (" + decimal(l.lhs) + ")" : decimal(l.lhs))
          << " rhs=" << decimal(l.rhs) << " slack=" << decimal(l.slack) << (l.holds ? "  ok" : "  VIOLATED") << '\n';
    }
  out << "verdict: ";
  if (!r.asserted()) out << (r.verdict() ? "all links hold (hypotheses not met, not asserted)" : "violation found (hypotheses not met, not asserted)");
  else out << (r.verdict() ? "PASS" : "FAIL");
  out << '\n';
  return out.str();
}

inline std::string sweep_csv(const SweepReport& s) {
  std::ostringstream out;
  out << kLinkCsvHeader;
  for (const auto& e : s.entries) {
    const std::string name = "seed:" + std::to_string(e.seed);
    if (e.report) write_link_rows(out, name, *e.report);
    else out << name << ",thm" << s.theorem << ",,error,,,,,false,\n";
  }
  return out.str();
}

inline std::string sweep_summary(const SweepReport& s) {
  std::ostringstream out;
  out << "sweep thm" << s.theorem << ": seeds " << s.first_seed << ".." << s.first_seed + s.count - 1 << '\n'
      << "  systems: " << s.count << ", hypotheses met: " << s.asserted << ", passed: " << s.passed << ", failed: " << s.failed
      << ", errors: " << s.errors << '\n'
      << "  violations without hypotheses (not asserted): " << s.unasserted_violations << '\n';
  for (const auto& [label, x] : s.extremes) out << "  min slack " << label << ": " << decimal(x.min_slack) << " (seed " << x.seed << ")\n";
  for (const auto& e : s.entries)
    if (!e.report) out << "  seed " << e.seed << " error: " << e.error << '\n';
  out << "verdict: " << (s.all_passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace ratebound
