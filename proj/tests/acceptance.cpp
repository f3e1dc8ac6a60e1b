// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all
// pass. Usage: acceptance <path-to-rainbow_lab> [archive-dir]
#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include "rainbow/verify_all.hpp"

namespace {

using namespace rainbow;

struct Captured {
  std::string out;
  int status = -1;
};

Captured run(const std::string& cmd) {
  Captured c;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen((cmd + " 2>/dev/null").c_str(), "r"), pclose);
  if (!pipe) return c;
  std::array<char, 4096> buf;
  for (std::size_t got; (got = fread(buf.data(), 1, buf.size(), pipe.get())) > 0;) c.out.append(buf.data(), got);
  c.status = pclose(pipe.release());
  return c;
}

void line(int id, const std::string& name, bool pass, const std::string& note) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  " << note << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <rainbow_lab> [archive-dir]\n";
    return 3;
  }
  const std::string lab = argv[1];
  verify::Settings s;
  s.seed = 42;
  s.budget = verify::Budget::Full;
  s.threads = resolve_threads(0);
  s.archive_dir = argc > 2 ? argv[2] : "acceptance-counterexamples";
  bool all = true;

  auto timed = [](auto f) {
    auto t0 = std::chrono::steady_clock::now();
    auto c = f();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair{c, secs};
  };
  auto report = [&](const verify::Criterion& c, bool extra, const std::string& note) {
    bool ok = c.pass && extra;
    all = all && ok;
    line(c.id, c.name, ok, note + " " + c.detail.dump());
  };

  {
    auto [c, secs] = timed([] { return verify::certificate_suite(); });
    report(c, secs < 300, "(" + std::to_string(secs) + " s)");
  }
  report(verify::avoid_k4_suite(s), true, "");
  report(verify::avoid_k6_suite(s), true, "");
  report(verify::tiled_suite(s), true, "");
  report(verify::avoid_k8_suite(s), true, "");
  report(verify::lemma_suite(s), true, "");
  report(verify::density_suite(), true, "");

  // Determinism through the CLI: same seed, different thread counts.
  std::string base = lab + " verify-all --seed 42 --archive " + s.archive_dir;
  auto a = run(base + " --threads 1");
  auto b = run(base + " --threads 3");
  auto c = run(base + " --threads 1");
  bool same = !a.out.empty() && a.out == b.out && a.out == c.out;
  all = all && same;
  line(8, "determinism", same,
       "three verify-all runs (threads 1, 3, 1), " + std::to_string(a.out.size()) + " bytes each, " +
           (same ? "byte-identical" : "outputs differ"));
  return all ? 0 : 1;
}
