#include <sstream>

#include "dya/anonymity.hpp"

namespace dya {

namespace {
const char* mark(bool ok) { return ok ? "PASS" : "FAIL"; }
}  // namespace

std::string format_report(const AnonymityReport& r) {
  std::ostringstream os;
  os << "anonymity-report " << r.protocol << '\n';
  os << "scope: certified at desk scale (finite test battery plus structural certificate; not a proof)\n";
  for (const SeedReport& s : r.seeds) {
    const IndistVerdict& t = s.tests;
    os << "\n[seed " << s.seed << "] voters=" << s.voters << '\n';
    os << "  run-valid      " << mark(s.run_valid && s.swapped_valid) << '\n';
    os << "  swp-state      " << mark(s.swp_X && s.swp_phi) << "  (X' = swp(X) " << mark(s.swp_X)
       << ", Phi' = swp(Phi) " << mark(s.swp_phi) << ")\n";
    os << "  safety-left    " << mark(s.safety_left) << '\n';
    os << "  safety-right   " << mark(s.safety_right) << '\n';
    os << "  tests          " << t.agreed << '/' << t.tests_run << '\n';
    os << "  inconclusive   " << t.inconclusive << '\n';
    if (t.closure_findings) os << "  closure-findings " << t.closure_findings << '\n';
    if (t.distinguisher) {
      os << "  distinguisher  " << t.distinguisher->describe() << '\n';
      os << "    left  " << (t.left_derives ? "derives   " : "underives ") << to_string(t.left_instance) << '\n';
      os << "    right " << (t.left_derives ? "underives " : "derives   ") << to_string(t.right_instance) << '\n';
    }
    if (!s.failure.empty()) os << "  failure        " << s.failure << '\n';
    os << "summary seed=" << s.seed << " voters=" << s.voters << " run-valid=" << (s.run_valid && s.swapped_valid)
       << " swp-x=" << s.swp_X << " swp-phi=" << s.swp_phi << " safety-left=" << s.safety_left
       << " safety-right=" << s.safety_right << " tests=" << t.agreed << '/' << t.tests_run
       << " inconclusive=" << t.inconclusive << " result=" << mark(s.pass()) << '\n';
  }
  std::size_t passed = 0;
  for (const SeedReport& s : r.seeds) passed += s.pass();
  // no timings here: identical invocations must give identical reports
  os << "\ntotal " << passed << '/' << r.seeds.size() << " seeds pass\n";
  return os.str();
}

}  // namespace dya
